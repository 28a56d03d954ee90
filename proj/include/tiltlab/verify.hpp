#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tiltlab/diagnostics.hpp"

namespace tiltlab {

// Draw counts and resolutions for each check.
struct Budget {
  std::string tier;
  std::size_t pbr_draws, pbr_points;
  std::size_t fs_draws, fs_intervals, fs_tail_draws, fs_tail_intervals;
  std::size_t scaling_draws;
  std::size_t conf_draws, conf_points;
  std::size_t slope_draws, shift_draws, gauss_draws;
  std::size_t avoid_draws;
  std::size_t gibbs_reps;
  std::size_t coupling_sweeps;
  std::size_t threads = 1;

  static Budget smoke();
  static Budget full();
  static Budget named(const std::string& tier);
};

// ---- individual checks ----
TestReport pbr_cell(double a, double x, double T, std::size_t draws, std::size_t points,
                    std::uint64_t seed);
// one report per cell plus a summary whose value is the largest statistic/critical ratio
std::vector<TestReport> pbr_matrix(std::size_t draws, std::size_t points, std::uint64_t seed);

struct FsSamples {
  std::vector<double> at_zero, at_one, window_max;
};
FsSamples fs_samples(std::size_t draws, std::size_t intervals, double T, std::size_t thinning,
                     std::uint64_t seed, std::size_t threads);
TestReport fs_l1_report(const FsSamples& s);
TestReport fs_translation_report(const FsSamples& s);
TestReport fs_max_tail_report(const FsSamples& s);
TestReport fs_tail_prefactor_report(const FsSamples& s);

TestReport scaling_report(std::size_t draws, std::size_t points, std::uint64_t seed,
                          std::size_t threads);

struct ConfinementRun {
  std::vector<std::vector<double>> at_zero;  // per line
};
ConfinementRun confinement_samples(std::size_t draws, std::size_t points, std::uint64_t seed,
                                   std::size_t threads);
std::vector<TestReport> confinement_ratio_reports(const ConfinementRun& r);
TestReport lower_tail_report(const ConfinementRun& r);

std::vector<TestReport> slope_reports(std::size_t draws, std::uint64_t seed, std::size_t threads);
TestReport shift_covariance_report(std::size_t draws, std::uint64_t seed, std::size_t threads);
TestReport gaussian_marginal_report(std::size_t draws, std::uint64_t seed, std::size_t threads);

std::vector<TestReport> avoidance_reports(std::size_t draws, std::uint64_t seed);

TestReport gibbs_one_line_report(std::size_t reps, std::uint64_t seed, bool mutate);
TestReport gibbs_three_line_report(std::size_t reps, std::uint64_t seed, bool mutate);
std::vector<TestReport> coupling_reports(std::size_t sweeps, std::uint64_t seed);

std::vector<TestReport> geometry_reports(std::uint64_t seed);

// ---- suites ----
const std::vector<std::string>& suite_names();
std::vector<TestReport> run_suite(const std::string& suite, const Budget& b, std::uint64_t seed);
// one JSON object per line
std::string reports_jsonl(const std::vector<TestReport>& reports);

}  // namespace tiltlab
