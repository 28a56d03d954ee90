#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tiltlab/bridges.hpp"
#include "tiltlab/core.hpp"
#include "tiltlab/rng.hpp"

namespace tiltlab {

struct McmcConfig {
  // sweeps after burn-in
  std::size_t sweeps = 200;
  // block length in grid points for the top line; lower lines scale with their time scale
  std::size_t block_points = 65;
  // negative: 10 sweeps per block-length of domain
  long burn_in = -1;
  std::size_t thinning = 1;
  std::size_t block_attempts = 8;
  bool multiscale = true;
  double monitor_shift = kMonitorShift;

  void validate() const;
  std::size_t burn_in_for(const TimeGrid& g) const;
};

// Law of one site given its neighbours: N(mean, sd^2) restricted to (lo, hi).
struct SiteLaw {
  double mean, sd, lo, hi;
};

// Block Gibbs sampler for ordered tilted lines on a fixed grid. Line i carries strength
// coefficients[i]; the bottom line stays above lower_wall, the top line below upper_wall (both
// already include the monitoring shift; empty vectors mean no wall).
class GibbsChain {
 public:
  GibbsChain(Ensemble initial, std::vector<double> coefficients, std::vector<double> lower_wall,
             std::vector<double> upper_wall, McmcConfig cfg);

  // Deterministic starting state between the given endpoints: each line follows its free mean
  // (chord minus the parabolic dip) lifted just above whatever sits below it.
  static Ensemble default_start(const TimeGrid& g, const std::vector<double>& coefficients,
                                const std::vector<double>& left, const std::vector<double>& right,
                                const std::vector<double>& lower_wall, double monitor_shift);

  void sweep(RngStream& rng);
  const Ensemble& state() const { return state_; }
  Ensemble& mutable_state() { return state_; }
  std::size_t sweeps_done() const { return sweeps_; }
  const McmcConfig& config() const { return cfg_; }

  SiteLaw site_law(std::size_t line, std::size_t j) const;
  double pair_offset() const { return pair_off_; }

  // exact conditional redraw of line i on [b0, b1] given everything else
  void update_block(std::size_t line, std::size_t b0, std::size_t b1, RngStream& rng);

 private:
  double lower_at(std::size_t line, std::size_t j) const;
  double upper_at(std::size_t line, std::size_t j) const;

  Ensemble state_;
  std::vector<double> coef_;
  std::vector<double> lower_wall_, upper_wall_;
  McmcConfig cfg_;
  std::vector<std::vector<double>> shift_;  // (coef/2) t^2 per line
  std::vector<std::size_t> base_len_;       // block length in intervals per line
  double pair_off_;
  std::size_t sweeps_ = 0;
  std::vector<double> ybuf_, lobuf_, hibuf_;
};

// Burn in, then run cfg.sweeps more sweeps handing every thinning-th state to on_draw.
template <class F>
void run_chain(GibbsChain& chain, RngStream& rng, F&& on_draw) {
  const auto& cfg = chain.config();
  const std::size_t burn = cfg.burn_in_for(chain.state().grid());
  for (std::size_t s = 0; s < burn; ++s) chain.sweep(rng);
  for (std::size_t s = 1; s <= cfg.sweeps; ++s) {
    chain.sweep(rng);
    if (s % cfg.thinning == 0) on_draw(chain.state());
  }
}

}  // namespace tiltlab
