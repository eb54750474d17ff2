#pragma once

#include <cstddef>
#include <deque>

#include "netarm/types.hpp"

namespace netarm::network {

/// Which one-sided limit of the delayed signal a query refers to when the
/// query time lands exactly on a stored breakpoint. Queries issued at the
/// right endpoint of an integration step use Left so each step sees one
/// smooth piece of the piecewise-smooth signal.
enum class Side { Left, Right };

/// Delayed observer data received from a neighbor. valid == false means the
/// query fell before the signal start; both payload vectors are then zero,
/// which is exactly the value the consensus terms must use during that phase.
struct NeighborSample {
  Vec2 x_o = Vec2::Zero();
  Vec2 xdot_o = Vec2::Zero();
  bool valid = false;
};

/// Constant-delay channel carrying (position, rate) samples of a neighbor's
/// task-space observer.
///
/// Each record also stores the observer curvature so off-grid queries can use
/// quintic Hermite interpolation; anything lower-order would leak O(dt^2)
/// error into the stage evaluations of a 4th-order integrator. Two records
/// may share a timestamp to represent the one-sided limits of a rate jump
/// (the first holds the left limit, the second the right limit).
class DelayChannel {
 public:
  explicit DelayChannel(double delay) : delay_(delay) {}

  double delay() const { return delay_; }
  std::size_t stored() const { return records_.size(); }

  /// Appends a sample. Timestamps must not decrease; a repeated timestamp is
  /// allowed once to form a left/right pair at a breakpoint.
  /// Throws NonMonotoneTime otherwise.
  void push(double t, const Vec2& x_o, const Vec2& xdot_o,
            const Vec2& xddot_o = Vec2::Zero());

  /// Value of the delayed signal at time t, i.e. the source signal at
  /// t - delay. Returns an invalid (zero) sample for query times before the
  /// first record; returns the stored record bit-exactly on timestamp hits;
  /// holds the last record for queries past it.
  NeighborSample sample(double t, Side side = Side::Right) const;

  /// Drops records no longer reachable by queries at source times >= t,
  /// always keeping a bracketing record at or before t.
  void drop_samples_before(double t);

 private:
  struct Record {
    double t;
    Vec2 x, v, a;
  };

  double delay_;
  std::deque<Record> records_;
};

}  // namespace netarm::network
