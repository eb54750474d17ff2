#pragma once

#include <Eigen/Dense>
#include <vector>

#include "netarm/types.hpp"

namespace netarm::graph {

/// Directed interaction topology with per-edge communication delays.
///
/// weights(i, j) > 0 means agent i receives information from agent j.
/// delays(i, j) is the corresponding channel delay in seconds and is only
/// meaningful where weights(i, j) > 0.
struct DirectedGraph {
  Eigen::MatrixXd weights;
  Eigen::MatrixXd delays;

  int size() const { return static_cast<int>(weights.rows()); }

  /// n-agent directed ring: agent i listens to agent (i+1) mod n.
  static DirectedGraph ring(int n, double weight, double delay);
};

/// Throws ConfigError if the adjacency/delay matrices violate the type
/// invariants (square, zero diagonal, nonnegative, finite).
void check_valid(const DirectedGraph& g);

/// Weighted graph Laplacian. Diagonal entries are adjusted so that every
/// row sums to exactly zero in floating point, not just algebraically.
Eigen::MatrixXd laplacian(const DirectedGraph& g);

/// Vertices whose information reaches every other vertex along directed
/// edges (information flows j -> i when weights(i, j) > 0). These are
/// exactly the vertices carrying positive weight in the left null vector
/// of the Laplacian.
std::vector<int> root_vertices(const DirectedGraph& g);

bool has_spanning_tree(const DirectedGraph& g);

/// Nonnegative left null vector of the Laplacian, normalized to sum one.
/// Throws SimulationError when the null space is not one-dimensional
/// (no spanning tree, or numerically degenerate input).
Eigen::VectorXd left_eigenvector_gamma(const DirectedGraph& g);

/// Scale factor 1 / (1 + sum_k sum_l gamma_k * w_kl * T_kl) applied to the
/// gamma-weighted average by the communication delays.
double delay_scale(const DirectedGraph& g, const Eigen::VectorXd& gamma);

/// Equilibrium the observed positions converge to when the consensus
/// integral gain is positive and no external input acts: the delay scale
/// times the gamma-weighted average of the initial observed positions.
/// x_o0 is n x m (one row per agent); the result has length m.
Eigen::VectorXd predicted_consensus_value(const DirectedGraph& g,
                                          const Eigen::MatrixXd& x_o0);

}  // namespace netarm::graph
