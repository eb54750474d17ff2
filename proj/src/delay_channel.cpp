#include "netarm/delay_channel.hpp"

#include <algorithm>
#include <string>

namespace netarm::network {

void DelayChannel::push(double t, const Vec2& x_o, const Vec2& xdot_o,
                        const Vec2& xddot_o) {
  if (!records_.empty()) {
    const double last = records_.back().t;
    if (t < last)
      throw NonMonotoneTime("delay channel: push at t = " + std::to_string(t) +
                            " after t = " + std::to_string(last));
    if (t == last && records_.size() >= 2 &&
        records_[records_.size() - 2].t == t)
      throw NonMonotoneTime("delay channel: more than two samples at t = " +
                            std::to_string(t));
  }
  records_.push_back({t, x_o, xdot_o, xddot_o});
}

namespace {

NeighborSample hermite(double tq, double t0, const Vec2& x0, const Vec2& v0,
                       const Vec2& a0, double t1, const Vec2& x1,
                       const Vec2& v1, const Vec2& a1) {
  const double h = t1 - t0;
  const double s = (tq - t0) / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double b0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
  const double b1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
  const double b2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
  const double b3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
  const double b4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
  const double b5 = 0.5 * (s3 - 2.0 * s4 + s5);
  const double d0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
  const double d1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
  const double d2 = 0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4);
  const double d3 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
  const double d4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
  const double d5 = 0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4);

  NeighborSample out;
  out.valid = true;
  out.x_o = b0 * x0 + b1 * (h * v0) + b2 * (h * h * a0) + b3 * x1 +
            b4 * (h * v1) + b5 * (h * h * a1);
  out.xdot_o = (d0 * x0 + d1 * (h * v0) + d2 * (h * h * a0) + d3 * x1 +
                d4 * (h * v1) + d5 * (h * h * a1)) /
               h;
  return out;
}

}  // namespace

NeighborSample DelayChannel::sample(double t, Side side) const {
  const double tq = t - delay_;
  if (records_.empty() || tq < records_.front().t) return {};
  if (tq == records_.front().t && side == Side::Left) return {};

  const Record& back = records_.back();
  if (tq > back.t) return {back.x, back.v, true};

  // First record with timestamp >= tq. Records at equal timestamps (a
  // left/right breakpoint pair) are adjacent.
  auto it = std::lower_bound(
      records_.begin(), records_.end(), tq,
      [](const Record& r, double value) { return r.t < value; });
  if (it->t == tq) {
    if (side == Side::Right) {
      auto next = it + 1;
      if (next != records_.end() && next->t == tq) it = next;
    }
    return {it->x, it->v, true};
  }
  const Record& hi = *it;
  const Record& lo = *(it - 1);
  return hermite(tq, lo.t, lo.x, lo.v, lo.a, hi.t, hi.x, hi.v, hi.a);
}

void DelayChannel::drop_samples_before(double t) {
  while (records_.size() >= 2 && records_[1].t < t) records_.pop_front();
}

}  // namespace netarm::network
