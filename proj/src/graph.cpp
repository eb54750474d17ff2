#include "netarm/graph.hpp"

#include <cmath>
#include <queue>

namespace netarm::graph {

DirectedGraph DirectedGraph::ring(int n, double weight, double delay) {
  DirectedGraph g;
  g.weights = Eigen::MatrixXd::Zero(n, n);
  g.delays = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    g.weights(i, (i + 1) % n) = weight;
    g.delays(i, (i + 1) % n) = delay;
  }
  return g;
}

void check_valid(const DirectedGraph& g) {
  const int n = g.size();
  if (n < 1 || g.weights.cols() != n)
    throw ConfigError("graph: weights must be a square matrix with n >= 1");
  if (g.delays.rows() != n || g.delays.cols() != n)
    throw ConfigError("graph: delays must match the weights dimensions");
  for (int i = 0; i < n; ++i) {
    if (g.weights(i, i) != 0.0)
      throw ConfigError("graph: self-weight w_ii must be zero (vertex " +
                        std::to_string(i) + ")");
    for (int j = 0; j < n; ++j) {
      if (!(g.weights(i, j) >= 0.0))
        throw ConfigError("graph: weights must be nonnegative");
      if (!std::isfinite(g.weights(i, j)))
        throw ConfigError("graph: weights must be finite");
      if (!(g.delays(i, j) >= 0.0) || !std::isfinite(g.delays(i, j)))
        throw ConfigError("graph: delays must be finite and nonnegative");
    }
  }
}

Eigen::MatrixXd laplacian(const DirectedGraph& g) {
  const int n = g.size();
  Eigen::MatrixXd lap = -g.weights;
  for (int i = 0; i < n; ++i) {
    lap(i, i) = 0.0;
    // Repeated compensation forces the row sum to exactly zero in the
    // summation order Eigen uses, not merely to within rounding.
    for (int pass = 0; pass < 8; ++pass) {
      const double r = lap.row(i).sum();
      if (r == 0.0) break;
      lap(i, i) -= r;
    }
  }
  return lap;
}

std::vector<int> root_vertices(const DirectedGraph& g) {
  const int n = g.size();
  // influence[j] = vertices that hear j, directly or transitively
  // (information flows j -> i when w_ij > 0).
  std::vector<int> roots;
  for (int r = 0; r < n; ++r) {
    std::vector<char> seen(n, 0);
    std::queue<int> frontier;
    seen[r] = 1;
    frontier.push(r);
    int count = 1;
    while (!frontier.empty()) {
      const int j = frontier.front();
      frontier.pop();
      for (int i = 0; i < n; ++i) {
        if (!seen[i] && g.weights(i, j) > 0.0) {
          seen[i] = 1;
          ++count;
          frontier.push(i);
        }
      }
    }
    if (count == n) roots.push_back(r);
  }
  return roots;
}

bool has_spanning_tree(const DirectedGraph& g) {
  return !root_vertices(g).empty();
}

Eigen::VectorXd left_eigenvector_gamma(const DirectedGraph& g) {
  const int n = g.size();
  if (n == 1) return Eigen::VectorXd::Ones(1);

  const Eigen::MatrixXd lap_t = laplacian(g).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(lap_t, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv(0);
  const double tol = std::max(smax, 1.0) * 1e-9;
  if (sv(n - 2) <= tol)
    throw SimulationError(
        "left_eigenvector_gamma: Laplacian null space is not one-dimensional "
        "(graph has no directed spanning tree or is degenerate)");

  Eigen::VectorXd gamma = svd.matrixV().col(n - 1);
  const double sum = gamma.sum();
  if (std::abs(sum) < 1e-9)
    throw SimulationError(
        "left_eigenvector_gamma: null vector has near-zero sum");
  gamma /= sum;

  const double residual = (gamma.transpose() * laplacian(g)).cwiseAbs().maxCoeff();
  if (residual > 1e-10 || gamma.minCoeff() < -1e-12)
    throw SimulationError(
        "left_eigenvector_gamma: numerically degenerate null vector");
  return gamma;
}

double delay_scale(const DirectedGraph& g, const Eigen::VectorXd& gamma) {
  const int n = g.size();
  double acc = 0.0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      if (g.weights(k, l) > 0.0) acc += gamma(k) * g.weights(k, l) * g.delays(k, l);
  return 1.0 / (1.0 + acc);
}

Eigen::VectorXd predicted_consensus_value(const DirectedGraph& g,
                                          const Eigen::MatrixXd& x_o0) {
  const Eigen::VectorXd gamma = left_eigenvector_gamma(g);
  return delay_scale(g, gamma) * (x_o0.transpose() * gamma);
}

}  // namespace netarm::graph
