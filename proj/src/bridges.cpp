#include "tiltlab/bridges.hpp"

#include <cmath>
#include <limits>

namespace tiltlab {

BarrierSpec BarrierSpec::zero_floor() { return BarrierSpec{}; }

BarrierSpec BarrierSpec::parabola(double coef, double shift, Side side) {
  BarrierSpec s;
  s.kind = Kind::parabola;
  s.side = side;
  s.a = coef;
  s.b = shift;
  return s;
}

BarrierSpec BarrierSpec::line(double slope, double intercept, Side side) {
  BarrierSpec s;
  s.kind = Kind::line;
  s.side = side;
  s.a = slope;
  s.b = intercept;
  return s;
}

BarrierSpec BarrierSpec::from_path(const Path& p, Side side) {
  BarrierSpec s;
  s.kind = Kind::values;
  s.side = side;
  s.values = p.values;
  return s;
}

double BarrierSpec::value(const TimeGrid& g, std::size_t i) const {
  const double t = g.time(i);
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::parabola: return a * t * t + b;
    case Kind::line: return a * t + b;
    case Kind::values:
      if (values.size() != g.points()) throw InvalidArgument("barrier length does not match grid");
      return values[i];
  }
  return 0.0;
}

double BarrierSpec::effective(const TimeGrid& g, std::size_t i) const {
  double off = monitor_shift * std::sqrt(g.dt());
  return side == Side::above ? value(g, i) + off : value(g, i) - off;
}

namespace detail {

bool bridge_attempt(double dt, std::span<double> out, std::span<const double> lo,
                    std::span<const double> hi, RngStream& rng) {
  const std::size_t k = out.size() - 1;
  const double x = out[0];
  const double slope = (out[k] - x) / static_cast<double>(k);
  const bool has_lo = !lo.empty(), has_hi = !hi.empty();
  double dev = 0.0;
  for (std::size_t j = 1; j < k; ++j) {
    // remaining steps before this one: r = k - j + 1
    const double r = static_cast<double>(k - j + 1);
    const double keep = (r - 1.0) / r;
    dev = dev * keep + std::sqrt(dt * keep) * rng.normal();
    const double v = x + slope * static_cast<double>(j) + dev;
    if ((has_lo && !(v > lo[j])) || (has_hi && !(v < hi[j]))) return false;
    out[j] = v;
  }
  return true;
}

}  // namespace detail

Path sample_bridge(const TimeGrid& g, double x, double y, RngStream& rng) {
  std::vector<double> v(g.points());
  v.front() = x;
  v.back() = y;
  detail::bridge_attempt(g.dt(), v, {}, {}, rng);
  return Path(g, std::move(v));
}

Path refine_midpoint(const Path& p, RngStream& rng) {
  const std::size_t m = p.size();
  TimeGrid fine(p.grid.left(), p.grid.right(), 2 * m - 1);
  const double sd = std::sqrt(fine.dt() / 2.0);
  std::vector<double> v(2 * m - 1);
  for (std::size_t i = 0; i < m; ++i) v[2 * i] = p.values[i];
  for (std::size_t i = 0; i + 1 < m; ++i)
    v[2 * i + 1] = 0.5 * (p.values[i] + p.values[i + 1]) + sd * rng.normal();
  return Path(fine, std::move(v));
}

BridgeDraw sample_bridge_above(const TimeGrid& g, double x, double y, const BarrierSpec& barrier,
                               std::size_t max_attempts, RngStream& rng) {
  const std::size_t m = g.points();
  const bool above = barrier.side == Side::above;
  const double bl = barrier.value(g, 0), br = barrier.value(g, m - 1);
  if (above ? !(x > bl && y > br) : !(x < bl && y < br))
    throw InvalidArgument("bridge endpoints must lie strictly on the allowed side of the barrier");
  if (max_attempts == 0) throw InvalidArgument("max_attempts must be positive");
  std::vector<double> bound(m);
  for (std::size_t j = 0; j < m; ++j) bound[j] = barrier.effective(g, j);
  std::vector<double> v(m);
  v.front() = x;
  v.back() = y;
  for (std::size_t n = 1; n <= max_attempts; ++n) {
    bool ok = above ? detail::bridge_attempt(g.dt(), v, bound, {}, rng)
                    : detail::bridge_attempt(g.dt(), v, {}, bound, rng);
    if (ok) return BridgeDraw{Path(g, std::move(v)), n};
  }
  throw AttemptsExhausted("bridge rejection budget exhausted", max_attempts);
}

}  // namespace tiltlab
