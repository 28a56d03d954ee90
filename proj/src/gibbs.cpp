#include "tiltlab/gibbs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <span>
#include <string>

namespace tiltlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void McmcConfig::validate() const {
  std::string bad;
  if (sweeps == 0) bad += " sweeps must be positive;";
  if (block_points < 3) bad += " block_points must be at least 3;";
  if (thinning == 0) bad += " thinning must be positive;";
  if (block_attempts == 0) bad += " block_attempts must be positive;";
  if (!(monitor_shift >= 0)) bad += " monitor_shift must be nonnegative;";
  if (!bad.empty()) throw InvalidArgument("mcmc config:" + bad);
}

std::size_t McmcConfig::burn_in_for(const TimeGrid& g) const {
  if (burn_in >= 0) return static_cast<std::size_t>(burn_in);
  std::size_t blocks = (g.points() - 1 + block_points - 2) / (block_points - 1);
  return 10 * blocks;
}

GibbsChain::GibbsChain(Ensemble initial, std::vector<double> coefficients,
                       std::vector<double> lower_wall, std::vector<double> upper_wall,
                       McmcConfig cfg)
    : state_(std::move(initial)),
      coef_(std::move(coefficients)),
      lower_wall_(std::move(lower_wall)),
      upper_wall_(std::move(upper_wall)),
      cfg_(cfg) {
  cfg_.validate();
  const TimeGrid& g = state_.grid();
  const std::size_t m = g.points(), n = state_.lines();
  if (coef_.size() != n) throw InvalidArgument("one coefficient per line required");
  if (!lower_wall_.empty() && lower_wall_.size() != m) throw InvalidArgument("wall length");
  if (!upper_wall_.empty() && upper_wall_.size() != m) throw InvalidArgument("wall length");
  pair_off_ = cfg_.monitor_shift * std::sqrt(2.0 * g.dt());
  shift_.assign(n, std::vector<double>(m));
  base_len_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(coef_[i] >= 0)) throw InvalidArgument("coefficients must be nonnegative");
    const double half = coef_[i] / 2;
    for (std::size_t j = 0; j < m; ++j) {
      const double t = g.time(j);
      shift_[i][j] = half * t * t;
    }
    double scale = coef_[i] > 0 && coef_[0] > 0 ? std::pow(coef_[0] / coef_[i], 2.0 / 3.0) : 1.0;
    double len = std::round(static_cast<double>(cfg_.block_points - 1) * scale);
    base_len_[i] = static_cast<std::size_t>(std::max(2.0, len));
  }
  ybuf_.resize(m);
  lobuf_.resize(m);
  hibuf_.resize(m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j + 1 < m; ++j) {
      double x = state_.at(i, j);
      if (!(x > lower_at(i, j) && x < upper_at(i, j)))
        throw OrderingViolated("initial state violates the constraints");
    }
}

Ensemble GibbsChain::default_start(const TimeGrid& g, const std::vector<double>& coefficients,
                                   const std::vector<double>& left,
                                   const std::vector<double>& right,
                                   const std::vector<double>& lower_wall, double monitor_shift) {
  const std::size_t n = coefficients.size(), m = g.points();
  if (left.size() != n || right.size() != n) throw InvalidArgument("endpoint vectors length");
  const double off = monitor_shift * std::sqrt(2.0 * g.dt());
  const double margin = std::sqrt(g.dt());
  std::vector<std::vector<double>> lines(n, std::vector<double>(m));
  for (std::size_t ii = n; ii-- > 0;) {
    auto& x = lines[ii];
    x.front() = left[ii];
    x.back() = right[ii];
    const double l = g.left(), r = g.right();
    for (std::size_t j = 1; j + 1 < m; ++j) {
      const double t = g.time(j);
      const double w = (t - l) / (r - l);
      double v = left[ii] + w * (right[ii] - left[ii]) - coefficients[ii] / 2 * (t - l) * (r - t);
      double lo = ii + 1 < n ? lines[ii + 1][j] + off
                             : (lower_wall.empty() ? -kInf : lower_wall[j]);
      x[j] = std::max(v, lo + margin);
    }
  }
  return Ensemble(g, std::move(lines));
}

double GibbsChain::lower_at(std::size_t i, std::size_t j) const {
  if (i + 1 < state_.lines()) return state_.at(i + 1, j) + pair_off_;
  return lower_wall_.empty() ? -kInf : lower_wall_[j];
}

double GibbsChain::upper_at(std::size_t i, std::size_t j) const {
  if (i > 0) return state_.at(i - 1, j) - pair_off_;
  return upper_wall_.empty() ? kInf : upper_wall_[j];
}

SiteLaw GibbsChain::site_law(std::size_t i, std::size_t j) const {
  const TimeGrid& g = state_.grid();
  const double dt = g.dt();
  const auto x = state_.line(i);
  return SiteLaw{0.5 * (x[j - 1] + x[j + 1]) - coef_[i] / 2 * dt * dt, std::sqrt(dt / 2),
                 lower_at(i, j), upper_at(i, j)};
}

void GibbsChain::update_block(std::size_t i, std::size_t b0, std::size_t b1, RngStream& rng) {
  const std::size_t k = b1 - b0;
  if (k < 2) return;
  auto x = state_.line(i);
  const auto& p = shift_[i];
  if (k == 2) {
    const std::size_t j = b0 + 1;
    const double lo = lower_at(i, j) - p[j], hi = upper_at(i, j) - p[j];
    if (!(hi > lo)) throw OrderingViolated("empty slot between neighbouring lines");
    const double mean = 0.5 * ((x[b0] - p[b0]) + (x[b1] - p[b1]));
    const double y = truncated_normal_inverse(mean, std::sqrt(state_.grid().dt() / 2), lo, hi,
                                              rng.uniform());
    x[j] = y + p[j];
    return;
  }
  std::span<double> y(ybuf_.data(), k + 1);
  std::span<double> lo(lobuf_.data(), k + 1), hi(hibuf_.data(), k + 1);
  for (std::size_t j = 0; j <= k; ++j) {
    lo[j] = lower_at(i, b0 + j) - p[b0 + j];
    hi[j] = upper_at(i, b0 + j) - p[b0 + j];
  }
  y[0] = x[b0] - p[b0];
  y[k] = x[b1] - p[b1];
  const double dt = state_.grid().dt();
  for (std::size_t n = 0; n < cfg_.block_attempts; ++n) {
    if (detail::bridge_attempt(dt, y, lo, hi, rng)) {
      for (std::size_t j = 1; j < k; ++j) x[b0 + j] = y[j] + p[b0 + j];
      return;
    }
  }
  // the acceptance probability depends only on data outside the block, so falling back to
  // exact updates of the two halves keeps the conditional law invariant
  const std::size_t mid = b0 + k / 2;
  update_block(i, b0, mid, rng);
  update_block(i, mid, b1, rng);
}

void GibbsChain::sweep(RngStream& rng) {
  const std::size_t m = state_.grid().points();
  const unsigned level = cfg_.multiscale ? std::countr_zero(sweeps_ + 1) : 0u;
  for (std::size_t i = 0; i < state_.lines(); ++i) {
    std::size_t len = base_len_[i];
    for (unsigned l = 0; l < level && len < m - 1; ++l) len *= 2;
    if (len >= m - 1) {
      update_block(i, 0, m - 1, rng);
      continue;
    }
    std::size_t start = static_cast<std::size_t>(rng.uniform() * static_cast<double>(len));
    std::size_t b = 0;
    std::size_t e = start == 0 ? len : start;
    while (b < m - 1) {
      e = std::min(e, m - 1);
      update_block(i, b, e, rng);
      b = e;
      e = b + len;
    }
  }
  ++sweeps_;
}

}  // namespace tiltlab
