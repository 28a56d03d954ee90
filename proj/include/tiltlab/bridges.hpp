#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tiltlab/core.hpp"
#include "tiltlab/rng.hpp"

namespace tiltlab {

// Discrete monitoring of a Brownian path misses excursions between grid points; shifting the
// barrier by this constant times sqrt(dt) (per unit variance) restores the continuum hitting law
// to leading order.
inline constexpr double kMonitorShift = 0.5825971579390106;

enum class Side { above, below };

struct BarrierSpec {
  enum class Kind { zero, parabola, line, values };

  static BarrierSpec zero_floor();
  // coef * t^2 + shift
  static BarrierSpec parabola(double coef, double shift, Side side = Side::above);
  static BarrierSpec line(double slope, double intercept, Side side = Side::above);
  static BarrierSpec from_path(const Path& p, Side side = Side::above);

  double value(const TimeGrid& g, std::size_t i) const;
  // value moved into the allowed region by the monitoring shift
  double effective(const TimeGrid& g, std::size_t i) const;

  Kind kind = Kind::zero;
  Side side = Side::above;
  double a = 0.0;
  double b = 0.0;
  std::vector<double> values;
  double monitor_shift = kMonitorShift;
};

struct BridgeDraw {
  Path path;
  std::size_t attempts;
};

Path sample_bridge(const TimeGrid& g, double x, double y, RngStream& rng);
Path refine_midpoint(const Path& p, RngStream& rng);
BridgeDraw sample_bridge_above(const TimeGrid& g, double x, double y, const BarrierSpec& barrier,
                               std::size_t max_attempts, RngStream& rng);

namespace detail {

// One attempt at a Brownian bridge over k = out.size()-1 steps of size dt from out[0] to out[k],
// built left to right; interior values must land strictly inside (lo[j], hi[j]).  Stops at the
// first violation and returns false.
bool bridge_attempt(double dt, std::span<double> out, std::span<const double> lo,
                    std::span<const double> hi, RngStream& rng);

}  // namespace detail
}  // namespace tiltlab
