#include "tiltlab/oneline.hpp"

#include <cmath>
#include <vector>

namespace tiltlab {

OneLineSpec::OneLineSpec(TimeGrid g, double a, double l, double r, BarrierSpec f)
    : grid(g), strength(a), left(l), right(r), floor(std::move(f)) {
  if (!(a >= 0) || !std::isfinite(a)) throw InvalidArgument("strength must be nonnegative");
  if (floor.side != Side::above) throw InvalidArgument("one-line floor must be a lower barrier");
  const double fl = floor.value(grid, 0), fr = floor.value(grid, grid.points() - 1);
  if (!(l > fl) || !(r > fr)) throw InvalidArgument("endpoints must lie strictly above the floor");
}

double zero_boundary_value(const TimeGrid& g) { return 1e-3 * std::sqrt(g.dt()); }

namespace {

std::vector<double> effective_floor(const OneLineSpec& s) {
  std::vector<double> lo(s.grid.points());
  for (std::size_t j = 0; j < lo.size(); ++j) lo[j] = s.floor.effective(s.grid, j);
  return lo;
}

}  // namespace

BridgeDraw sample_tilted_exact(const OneLineSpec& spec, RngStream& rng, std::size_t max_attempts) {
  if (max_attempts == 0) throw InvalidArgument("max_attempts must be positive");
  const TimeGrid& g = spec.grid;
  const std::size_t m = g.points();
  const std::vector<double> lo = effective_floor(spec);
  std::vector<double> fv(m);
  for (std::size_t j = 0; j < m; ++j) fv[j] = spec.floor.value(g, j);
  // smallest area any admissible path can have
  const double least = trapezoid_area(fv, g.dt());
  std::vector<double> v(m);
  v.front() = spec.left;
  v.back() = spec.right;
  for (std::size_t n = 1; n <= max_attempts; ++n) {
    if (!detail::bridge_attempt(g.dt(), v, lo, {}, rng)) continue;
    const double w = std::exp(-spec.strength * (trapezoid_area(v, g.dt()) - least));
    if (w >= 1.0 || rng.uniform() < w) return BridgeDraw{Path(g, std::move(v)), n};
  }
  throw AttemptsExhausted("tilted rejection budget exhausted", max_attempts);
}

BridgeDraw sample_pbr_dual(const OneLineSpec& spec, RngStream& rng, std::size_t max_attempts) {
  if (max_attempts == 0) throw InvalidArgument("max_attempts must be positive");
  const TimeGrid& g = spec.grid;
  const std::size_t m = g.points();
  const double half = spec.strength / 2;
  std::vector<double> p(m), lo = effective_floor(spec), y(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double t = g.time(j);
    p[j] = half * t * t;
    lo[j] = lo[j] - p[j];
  }
  y.front() = spec.left - p.front();
  y.back() = spec.right - p.back();
  for (std::size_t n = 1; n <= max_attempts; ++n) {
    if (!detail::bridge_attempt(g.dt(), y, lo, {}, rng)) continue;
    std::vector<double> x(m);
    x.front() = spec.left;
    x.back() = spec.right;
    for (std::size_t j = 1; j + 1 < m; ++j) x[j] = y[j] + p[j];
    return BridgeDraw{Path(g, std::move(x)), n};
  }
  throw AttemptsExhausted("dual rejection budget exhausted", max_attempts);
}

GibbsChain make_one_line_chain(const OneLineSpec& spec, const McmcConfig& cfg) {
  auto lo = effective_floor(spec);
  Ensemble start = GibbsChain::default_start(spec.grid, {spec.strength}, {spec.left},
                                             {spec.right}, lo, cfg.monitor_shift);
  return GibbsChain(std::move(start), {spec.strength}, std::move(lo), {}, cfg);
}

GibbsChain make_one_line_chain(const OneLineSpec& spec, const McmcConfig& cfg, const Path& start) {
  if (!(start.grid == spec.grid)) throw InvalidArgument("start path grid differs from spec grid");
  return GibbsChain(Ensemble(spec.grid, {start.values}), {spec.strength}, effective_floor(spec),
                    {}, cfg);
}

Path sample_tilted_mcmc(const OneLineSpec& spec, const McmcConfig& cfg, RngStream& rng) {
  GibbsChain chain = make_one_line_chain(spec, cfg);
  const std::size_t total = cfg.burn_in_for(spec.grid) + cfg.sweeps;
  for (std::size_t s = 0; s < total; ++s) chain.sweep(rng);
  return chain.state().path(0);
}

Path scale_path(const Path& p, double lambda) {
  if (!(lambda > 0)) throw InvalidArgument("scale factor must be positive");
  const double s = std::cbrt(lambda);
  TimeGrid g(p.grid.left() / (s * s), p.grid.right() / (s * s), p.grid.points());
  std::vector<double> v(p.values);
  for (double& x : v) x /= s;
  return Path(g, std::move(v));
}

TimeGrid fs_domain(const TimeGrid& window, std::size_t* offset) {
  const std::size_t mw = window.points();
  if (mw % 2 == 0) throw InvalidArgument("window must have an odd number of points");
  const double centre = 0.5 * (window.left() + window.right());
  const double half = 0.5 * (window.right() - window.left());
  if (offset) *offset = 3 * (mw - 1) / 2;
  return TimeGrid(centre - 4 * half, centre + 4 * half, 4 * (mw - 1) + 1);
}

Path sample_fs(double strength, const TimeGrid& window, const McmcConfig& cfg, RngStream& rng) {
  std::size_t off = 0;
  TimeGrid dom = fs_domain(window, &off);
  const double eps = zero_boundary_value(dom);
  Path full = sample_tilted_mcmc(OneLineSpec(dom, strength, eps, eps), cfg, rng);
  std::vector<double> v(full.values.begin() + off, full.values.begin() + off + window.points());
  return Path(window, std::move(v));
}

}  // namespace tiltlab
