#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "tiltlab/gibbs.hpp"

namespace tiltlab {

struct BoundaryScheme {
  enum class Kind { zero, flat, slopes, top_line, explicit_values };

  static BoundaryScheme zero();
  static BoundaryScheme flat(double height);
  // every line at (a/2)T^2 + L T on the left and (a/2)T^2 + R T on the right, clipped at zero
  static BoundaryScheme slopes(SlopePair s);
  // top line T^2 - 2 K T - T^b at both ends, all others at zero
  static BoundaryScheme top_line(double k, double b = 0.6);
  static BoundaryScheme explicit_values(std::vector<double> left, std::vector<double> right);

  Kind kind = Kind::zero;
  double height = 0.0;
  double k = 0.0;
  double b = 0.6;
  ExtendedReal left_slope = ExtendedReal::finite(-1.0);
  ExtendedReal right_slope = ExtendedReal::finite(-1.0);
  std::vector<double> left, right;
};

// Left and right endpoint values of n lines on [-T, T]; zeros are replaced by the strict-wall
// stand-in zero_eps.
std::pair<std::vector<double>, std::vector<double>> boundary_vectors(
    const BoundaryScheme& scheme, double T, std::size_t n, double strength = 2.0,
    double zero_eps = 0.0);

GibbsChain make_lambda_chain(const TimeGrid& g, const TiltParams& params,
                             const BoundaryScheme& scheme, const McmcConfig& cfg,
                             double wall = 0.0);
// State after burn-in plus cfg.sweeps sweeps.
Ensemble sample_lambda_le(const TimeGrid& g, const TiltParams& params,
                          const BoundaryScheme& scheme, const McmcConfig& cfg, RngStream& rng);

// Two chains driven by the same uniforms through a single-site heat bath.
struct CoupledPair {
  Ensemble upper;
  Ensemble lower;
  RngStream rng;
};

struct ChainSetup {
  TiltParams params;
  double wall = 0.0;
};

// One coupled sweep; the map from (neighbours, uniform) to the new value is monotone, so
// upper >= lower is preserved.  Inversions beyond rounding raise OrderingViolated.
void monotone_coupled_sweep(CoupledPair& pair, const ChainSetup& upper, const ChainSetup& lower,
                            const McmcConfig& cfg);
void monotone_coupled_sweep(CoupledPair& pair, const TiltParams& params, const McmcConfig& cfg);
bool dominates(const Ensemble& upper, const Ensemble& lower);

// Redraw the top n_top lines on [left, right] from their conditional law given everything else
// (cfg.sweeps block sweeps started from the current state).
Ensemble resample_stopping_domain(const Ensemble& ens, const TiltParams& params, std::size_t n_top,
                                  double left, double right, const McmcConfig& cfg,
                                  RngStream& rng, double wall = 0.0);

// Line-wise X(s^2 t)/s with s = lambda^{1/3}.
Ensemble scaling_transform(const Ensemble& ens, double lambda);

// Run n_chains jobs on up to `threads` workers; job c always gets stream c, so results do not
// depend on the thread count.
void for_each_chain(std::size_t n_chains, std::size_t threads,
                    const std::function<void(std::size_t)>& job);

}  // namespace tiltlab
