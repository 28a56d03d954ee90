#pragma once

#include <cstddef>

#include "tiltlab/bridges.hpp"
#include "tiltlab/gibbs.hpp"

namespace tiltlab {

struct OneLineSpec {
  OneLineSpec(TimeGrid g, double strength, double left, double right,
              BarrierSpec floor = BarrierSpec::zero_floor());
  TimeGrid grid;
  double strength;
  double left;
  double right;
  BarrierSpec floor;
};

// Stand-in for a zero endpoint: the walls are strict, so zero boundary data sit this far above.
double zero_boundary_value(const TimeGrid& g);

// Rejection from the untilted conditioned bridge, accepted with probability exp(-a * excess area).
BridgeDraw sample_tilted_exact(const OneLineSpec& spec, RngStream& rng,
                               std::size_t max_attempts = 10000);
// Draw in parabola-shifted coordinates: a plain bridge above the floor minus (a/2) t^2,
// shifted back.  Exact at grid level.
BridgeDraw sample_pbr_dual(const OneLineSpec& spec, RngStream& rng,
                           std::size_t max_attempts = 10000);

GibbsChain make_one_line_chain(const OneLineSpec& spec, const McmcConfig& cfg);
GibbsChain make_one_line_chain(const OneLineSpec& spec, const McmcConfig& cfg, const Path& start);
// State after burn-in plus cfg.sweeps sweeps.
Path sample_tilted_mcmc(const OneLineSpec& spec, const McmcConfig& cfg, RngStream& rng);

// Y(t) = X(s^2 t) / s with s = lambda^{1/3}; maps strength a to a * lambda.
Path scale_path(const Path& p, double lambda);

// Draw of the stationary excursion on window, from a zero-boundary line on a domain four times
// as wide and centred on it.  window.points() must be odd.
Path sample_fs(double strength, const TimeGrid& window, const McmcConfig& cfg, RngStream& rng);
TimeGrid fs_domain(const TimeGrid& window, std::size_t* offset = nullptr);

}  // namespace tiltlab
