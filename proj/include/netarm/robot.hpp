#pragma once

#include "netarm/types.hpp"

namespace netarm::robot {

/// Link lengths [l1, l2] of a planar two-link arm, meters.
struct KinematicParams {
  Vec2 link_lengths;
};

/// Lumped inertia parameters [a1, a2, a3] of the horizontal-plane
/// two-link dynamics, kg m^2.
struct DynamicParams {
  Vec3 lumped;
};

struct RobotParams {
  KinematicParams kin;
  DynamicParams dyn;
};

struct RobotState {
  Vec2 q;
  Vec2 qdot;
};

/// End-effector position in the plane.
Vec2 forward_kinematics(const KinematicParams& p, const Vec2& q);

/// Task-space Jacobian; det J = l1 * l2 * sin(q2).
Mat2 jacobian(const KinematicParams& p, const Vec2& q);

/// Time derivative of the Jacobian along (qdot, d/dt link_lengths).
/// The second argument matters when the lengths are adapted estimates.
Mat2 jacobian_rate(const KinematicParams& p, const Vec2& q, const Vec2& qdot,
                   const Vec2& length_rates);

/// Regressor Z with Z(q, xi) * lengths == J(q) * xi for any xi.
Mat2 kinematic_regressor(const Vec2& q, const Vec2& xi);

/// Inertia matrix, symmetric positive definite for admissible parameters.
Mat2 inertia(const DynamicParams& p, const Vec2& q);

/// Coriolis/centrifugal matrix chosen so that Mdot - 2C is skew-symmetric.
Mat2 coriolis(const DynamicParams& p, const Vec2& q, const Vec2& qdot);

/// Gravity torque; identically zero for motion in the horizontal plane.
Vec2 gravity(const DynamicParams& p, const Vec2& q);

/// Regressor Y with Y(q, qdot, zeta, zeta_dot) * lumped ==
/// M(q) * zeta_dot + C(q, qdot) * zeta + g(q) for any (zeta, zeta_dot).
Mat23 dynamic_regressor(const Vec2& q, const Vec2& qdot, const Vec2& zeta,
                        const Vec2& zeta_dot);

/// Checks uniform positive definiteness of the inertia matrix on a grid
/// of elbow angles covering cos(q2) in [-1, 1].
bool inertia_uniformly_positive_definite(const DynamicParams& p,
                                         int grid_points = 361);

}  // namespace netarm::robot
