#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tiltlab/core.hpp"
#include "tiltlab/rng.hpp"

namespace tiltlab {

struct TestReport {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  // value <= threshold unless `upper` is false
  bool upper = true;
  bool pass = false;
  std::vector<std::size_t> sizes;
  std::uint64_t seed = 0;
  std::string note;
  std::string suite;
  // number of reports in the suite; the family-wise error of its statistical tests is at most
  // this many times the per-test significance
  std::size_t family = 1;

  static TestReport make(std::string name, double value, double threshold, bool upper = true);
  std::string to_json() const;
};

// ---- two-sample and one-sample Kolmogorov-Smirnov ----
double ks_statistic(std::vector<double> a, std::vector<double> b);
double ks_critical(double significance, std::size_t n, std::size_t m);
double kolmogorov_pvalue(double d, std::size_t n, std::size_t m);
TestReport ks_two_sample(std::span<const double> a, std::span<const double> b,
                         double significance = 1e-3);
TestReport ks_one_sample(std::span<const double> x, const std::function<double(double)>& cdf,
                         double significance = 1e-3);

// ---- slopes ----
struct SlopeEstimate {
  double t;
  double estimate;
  double stderr_;
};

class SlopeAccumulator {
 public:
  explicit SlopeAccumulator(double t);
  void add(const Ensemble& e);
  void add_value(double x_at_t);
  SlopeEstimate finish() const;
  std::size_t count() const { return n_; }

 private:
  double t_;
  std::size_t n_ = 0;
  double mean_ = 0.0, m2_ = 0.0;
};

SlopeEstimate slope_estimator(std::span<const Ensemble> draws, double t);

// ---- confinement ----
struct TailPoint {
  double t;
  double prob;
};

struct ConfinementStats {
  double mean_max;
  double mean_at_zero;
  std::vector<TailPoint> tail;
};

class ConfinementAccumulator {
 public:
  // line index k is 1-based as in the statement: the statistics concern line k+1
  ConfinementAccumulator(std::size_t k, double lambda, double wl, double wr,
                         std::vector<double> t_grid);
  void add(const Ensemble& e);
  ConfinementStats finish() const;
  const std::vector<double>& values_at_zero() const { return at_zero_; }

 private:
  std::size_t k_;
  double lambda_, wl_, wr_;
  std::vector<double> t_grid_;
  double sum_max_ = 0.0;
  std::vector<double> at_zero_;
};

ConfinementStats confinement_stats(std::span<const Ensemble> draws, std::size_t k, double wl,
                                   double wr, double lambda, std::vector<double> t_grid);

// ---- tails ----
struct TailFit {
  double exponent;
  double intercept;
  std::size_t points;
};

// Slope of log(-log S) against log x over the upper tail of the sample: the top `tail_fraction`
// of order statistics, minus the `drop_top` largest, trimmed to its central `keep` share.
TailFit fit_tail_exponent(std::vector<double> samples, double tail_fraction = 0.5,
                          double keep = 0.8, std::size_t drop_top = 5);
// Least-squares c in -log S(t) ~ c t^{3/2} (no intercept) over an evenly spaced t range.
double fit_tail_prefactor(std::vector<double> samples, double t_lo, double t_hi,
                          std::size_t points = 21);

// ---- Gaussian marginal ----
TestReport gaussian_marginal_check(std::span<const double> top_at_s, double s, double K, double T,
                                   double significance = 1e-3, double regime_const = 4.0);
TestReport gaussian_marginal_check(std::span<const Ensemble> draws, double s, double K, double T,
                                   double significance = 1e-3);

// ---- FS density comparison ----
// L1 distance between the histogram of x on `bins` equal bins of [0, hi] and the integrated
// stationary density (mass beyond hi counted as one more bin).
double fs_l1_distance(std::span<const double> x, double a = 2.0, double hi = 5.0,
                      std::size_t bins = 50);

// ---- Gibbs invariance ----
// Two independent streams of draws A and B, where each B draw has passed through the extra
// resampling step; KS on the recorded statistic.  `draw_pair(r, rng)` returns (a_r, b_r).
struct GibbsInvarianceSetup {
  std::size_t n_top = 1;
  std::size_t repetitions = 10000;
  double significance = 1e-3;
  std::uint64_t seed = 1;
  std::function<std::pair<double, double>(std::size_t, RngStream&)> draw_pair;
};
TestReport gibbs_invariance_test(const GibbsInvarianceSetup& setup);

// ---- parabola avoidance ----
struct AvoidanceRow {
  double h;
  double fail_prob;   // importance-sampling estimate
  double stderr_;
  std::size_t plain_failures;  // failures among the plain bridge draws
};

struct AvoidanceTable {
  std::vector<AvoidanceRow> rows;
  double exponent;  // slope of log(-log P_fail) against log h
  std::size_t draws;
  std::size_t grid_points;
};

// Failure = the 0-to-0 bridge on [0, T] touches h + t^2 somewhere.
AvoidanceTable avoidance_probability_check(const std::vector<double>& h_grid, double T,
                                           std::size_t draws, std::size_t grid_points,
                                           std::uint64_t seed, double monitor_shift = -1.0);

// Least-squares slope of y on x.
double ls_slope(std::span<const double> x, std::span<const double> y, double* intercept = nullptr);

}  // namespace tiltlab
