#include "netarm/robot.hpp"

#include <cmath>

namespace netarm::robot {

Vec2 forward_kinematics(const KinematicParams& p, const Vec2& q) {
  const double l1 = p.link_lengths(0), l2 = p.link_lengths(1);
  return {l1 * std::cos(q(0)) + l2 * std::cos(q(0) + q(1)),
          l1 * std::sin(q(0)) + l2 * std::sin(q(0) + q(1))};
}

Mat2 jacobian(const KinematicParams& p, const Vec2& q) {
  const double l1 = p.link_lengths(0), l2 = p.link_lengths(1);
  const double s1 = std::sin(q(0)), c1 = std::cos(q(0));
  const double s12 = std::sin(q(0) + q(1)), c12 = std::cos(q(0) + q(1));
  Mat2 j;
  j << -l1 * s1 - l2 * s12, -l2 * s12,  //
      l1 * c1 + l2 * c12, l2 * c12;
  return j;
}

Mat2 jacobian_rate(const KinematicParams& p, const Vec2& q, const Vec2& qdot,
                   const Vec2& length_rates) {
  const double l1 = p.link_lengths(0), l2 = p.link_lengths(1);
  const double ld1 = length_rates(0), ld2 = length_rates(1);
  const double s1 = std::sin(q(0)), c1 = std::cos(q(0));
  const double s12 = std::sin(q(0) + q(1)), c12 = std::cos(q(0) + q(1));
  const double qd1 = qdot(0), qd12 = qdot(0) + qdot(1);
  Mat2 jd;
  jd << -ld1 * s1 - l1 * c1 * qd1 - ld2 * s12 - l2 * c12 * qd12,
      -ld2 * s12 - l2 * c12 * qd12,  //
      ld1 * c1 - l1 * s1 * qd1 + ld2 * c12 - l2 * s12 * qd12,
      ld2 * c12 - l2 * s12 * qd12;
  return jd;
}

Mat2 kinematic_regressor(const Vec2& q, const Vec2& xi) {
  const double s1 = std::sin(q(0)), c1 = std::cos(q(0));
  const double s12 = std::sin(q(0) + q(1)), c12 = std::cos(q(0) + q(1));
  const double xi_sum = xi(0) + xi(1);
  Mat2 z;
  z << -s1 * xi(0), -s12 * xi_sum,  //
      c1 * xi(0), c12 * xi_sum;
  return z;
}

Mat2 inertia(const DynamicParams& p, const Vec2& q) {
  const double a1 = p.lumped(0), a2 = p.lumped(1), a3 = p.lumped(2);
  const double c2 = std::cos(q(1));
  Mat2 m;
  m << a1 + 2.0 * a2 * c2, a3 + a2 * c2,  //
      a3 + a2 * c2, a3;
  return m;
}

Mat2 coriolis(const DynamicParams& p, const Vec2& q, const Vec2& qdot) {
  const double a2 = p.lumped(1);
  const double s2 = std::sin(q(1));
  Mat2 c;
  c << -a2 * s2 * qdot(1), -a2 * s2 * (qdot(0) + qdot(1)),  //
      a2 * s2 * qdot(0), 0.0;
  return c;
}

Vec2 gravity(const DynamicParams&, const Vec2&) { return Vec2::Zero(); }

Mat23 dynamic_regressor(const Vec2& q, const Vec2& qdot, const Vec2& zeta,
                        const Vec2& zeta_dot) {
  const double s2 = std::sin(q(1)), c2 = std::cos(q(1));
  Mat23 y;
  y << zeta_dot(0),
      2.0 * c2 * zeta_dot(0) + c2 * zeta_dot(1) - s2 * qdot(1) * zeta(0) -
          s2 * (qdot(0) + qdot(1)) * zeta(1),
      zeta_dot(1),  //
      0.0, c2 * zeta_dot(0) + s2 * qdot(0) * zeta(0),
      zeta_dot(0) + zeta_dot(1);
  return y;
}

bool inertia_uniformly_positive_definite(const DynamicParams& p,
                                         int grid_points) {
  const double a1 = p.lumped(0), a2 = p.lumped(1), a3 = p.lumped(2);
  if (!(a3 > 0.0)) return false;
  for (int k = 0; k < grid_points; ++k) {
    const double c = -1.0 + 2.0 * k / (grid_points - 1);
    const double det = a3 * (a1 + 2.0 * a2 * c) - (a3 + a2 * c) * (a3 + a2 * c);
    if (!(det > 0.0)) return false;
  }
  return true;
}

}  // namespace netarm::robot
