#include "tiltlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "tiltlab/bridges.hpp"
#include "tiltlab/special.hpp"

namespace tiltlab {

TestReport TestReport::make(std::string name, double value, double threshold, bool upper) {
  TestReport r;
  r.name = std::move(name);
  r.value = value;
  r.threshold = threshold;
  r.upper = upper;
  r.pass = upper ? value <= threshold : value >= threshold;
  return r;
}

std::string TestReport::to_json() const {
  nlohmann::ordered_json j;
  if (!suite.empty()) j["suite"] = suite;
  j["name"] = name;
  j["value"] = value;
  j["threshold"] = threshold;
  j["direction"] = upper ? "value<=threshold" : "value>=threshold";
  j["pass"] = pass;
  j["sizes"] = sizes;
  j["seed"] = seed;
  j["family_size"] = family;
  if (!note.empty()) j["note"] = note;
  return j.dump();
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw EmptySample("ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size()), m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double ks_critical(double alpha, std::size_t n, std::size_t m) {
  if (!(alpha > 0 && alpha < 1)) throw InvalidArgument("significance must lie in (0,1)");
  const double c = std::sqrt(-0.5 * std::log(alpha / 2));
  if (m == 0) return c / std::sqrt(static_cast<double>(n));
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

double kolmogorov_pvalue(double d, std::size_t n, std::size_t m) {
  const double ne = m == 0 ? static_cast<double>(n)
                           : static_cast<double>(n) * m / static_cast<double>(n + m);
  const double s = std::sqrt(ne);
  const double lam = (s + 0.12 + 0.11 / s) * d;
  if (lam < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    double term = std::exp(-2.0 * k * k * lam * lam);
    sum += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

TestReport ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha) {
  double d = ks_statistic({a.begin(), a.end()}, {b.begin(), b.end()});
  TestReport r = TestReport::make("ks_two_sample", d, ks_critical(alpha, a.size(), b.size()));
  r.sizes = {a.size(), b.size()};
  r.note = "p=" + std::to_string(kolmogorov_pvalue(d, a.size(), b.size()));
  return r;
}

TestReport ks_one_sample(std::span<const double> x, const std::function<double(double)>& cdf,
                         double alpha) {
  if (x.empty()) throw EmptySample("ks: empty sample");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  TestReport r = TestReport::make("ks_one_sample", d, ks_critical(alpha, s.size(), 0));
  r.sizes = {s.size()};
  r.note = "p=" + std::to_string(kolmogorov_pvalue(d, s.size(), 0));
  return r;
}

SlopeAccumulator::SlopeAccumulator(double t) : t_(t) {
  if (t == 0.0) throw InvalidArgument("slope needs t != 0");
}

void SlopeAccumulator::add_value(double x) {
  const double v = (x - t_ * t_) / std::fabs(t_);
  ++n_;
  const double d = v - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (v - mean_);
}

void SlopeAccumulator::add(const Ensemble& e) {
  const std::size_t j = e.grid().index_of(t_);
  add_value(e.at(0, j));
}

SlopeEstimate SlopeAccumulator::finish() const {
  if (n_ == 0) throw EmptySample("no draws");
  double se = n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_)) : 0.0;
  return SlopeEstimate{t_, mean_, se};
}

SlopeEstimate slope_estimator(std::span<const Ensemble> draws, double t) {
  SlopeAccumulator acc(t);
  for (const auto& e : draws) acc.add(e);
  return acc.finish();
}

ConfinementAccumulator::ConfinementAccumulator(std::size_t k, double lambda, double wl, double wr,
                                               std::vector<double> t_grid)
    : k_(k), lambda_(lambda), wl_(wl), wr_(wr), t_grid_(std::move(t_grid)) {
  if (!(wr > wl)) throw InvalidArgument("window must have left < right");
}

void ConfinementAccumulator::add(const Ensemble& e) {
  if (k_ >= e.lines()) throw IndexOutOfRange("line k+1 is not sampled");
  const std::size_t jl = e.grid().index_of(wl_), jr = e.grid().index_of(wr_);
  auto x = e.line(k_);
  sum_max_ += *std::max_element(x.begin() + jl, x.begin() + jr + 1);
  at_zero_.push_back(x[e.grid().index_of(0.0)]);
}

ConfinementStats ConfinementAccumulator::finish() const {
  if (at_zero_.empty()) throw EmptySample("no draws");
  const double n = static_cast<double>(at_zero_.size());
  ConfinementStats s;
  s.mean_max = sum_max_ / n;
  double sum = 0.0;
  for (double v : at_zero_) sum += v;
  s.mean_at_zero = sum / n;
  const double scale = std::pow(lambda_, -static_cast<double>(k_) / 3.0);
  for (double t : t_grid_) {
    std::size_t c = 0;
    for (double v : at_zero_) c += v > t * scale;
    s.tail.push_back({t, static_cast<double>(c) / n});
  }
  return s;
}

ConfinementStats confinement_stats(std::span<const Ensemble> draws, std::size_t k, double wl,
                                   double wr, double lambda, std::vector<double> t_grid) {
  ConfinementAccumulator acc(k, lambda, wl, wr, std::move(t_grid));
  for (const auto& e : draws) acc.add(e);
  return acc.finish();
}

double ls_slope(std::span<const double> x, std::span<const double> y, double* intercept) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("ls: need two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0)) throw InvalidArgument("ls: degenerate abscissae");
  const double b = sxy / sxx;
  if (intercept) *intercept = my - b * mx;
  return b;
}

TailFit fit_tail_exponent(std::vector<double> s, double tail_fraction, double keep,
                          std::size_t drop_top) {
  if (s.empty()) throw EmptySample("tail fit: empty sample");
  std::sort(s.begin(), s.end(), std::greater<>());
  const std::size_t N = s.size();
  const std::size_t tail = static_cast<std::size_t>(tail_fraction * static_cast<double>(N));
  if (tail <= drop_top + 4) throw InvalidArgument("tail fit: sample too small");
  // ranks (1-based, descending) drop_top+1 .. tail, trimmed symmetrically to the central share
  const std::size_t span = tail - drop_top;
  const std::size_t cut = static_cast<std::size_t>((1.0 - keep) / 2 * static_cast<double>(span));
  std::vector<double> lx, ly;
  for (std::size_t r = drop_top + 1 + cut; r + cut <= tail; ++r) {
    const double x = s[r - 1];
    if (!(x > 0)) continue;
    const double surv = (static_cast<double>(r) - 0.5) / static_cast<double>(N);
    lx.push_back(std::log(x));
    ly.push_back(std::log(-std::log(surv)));
  }
  TailFit f{};
  f.exponent = ls_slope(lx, ly, &f.intercept);
  f.points = lx.size();
  return f;
}

double fit_tail_prefactor(std::vector<double> s, double t_lo, double t_hi, std::size_t points) {
  if (s.empty()) throw EmptySample("tail fit: empty sample");
  if (points < 2 || !(t_hi > t_lo)) throw InvalidArgument("tail fit: bad t range");
  std::sort(s.begin(), s.end());
  const double N = static_cast<double>(s.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double above = static_cast<double>(s.end() - std::upper_bound(s.begin(), s.end(), t));
    if (above == 0) continue;
    const double y = -std::log(above / N);
    const double x = std::pow(t, 1.5);
    num += x * y;
    den += x * x;
  }
  if (den == 0) throw InvalidArgument("tail fit: no tail mass in range");
  return num / den;
}

TestReport gaussian_marginal_check(std::span<const double> top, double s, double K, double T,
                                   double alpha, double regime_const) {
  if (top.empty()) throw EmptySample("gaussian check: no draws");
  const double var = s;
  std::vector<double> c(top.begin(), top.end());
  for (double& v : c) v -= s * s - 2 * K * s;
  TestReport r;
  if (!(var > 0)) {
    r = TestReport::make("gaussian_marginal", 1.0, ks_critical(alpha, c.size(), 0));
    r.sizes = {c.size()};
  } else {
    const double sd = std::sqrt(var);
    r = ks_one_sample(c, [sd](double x) { return normal_cdf(x / sd); }, alpha);
    r.name = "gaussian_marginal";
  }
  std::string tag = "proxy=KS for total variation";
  if (T < regime_const * s) tag += "; regime-violation: s too close to T";
  r.note = r.note.empty() ? tag : r.note + "; " + tag;
  return r;
}

TestReport gaussian_marginal_check(std::span<const Ensemble> draws, double s, double K, double T,
                                   double alpha) {
  std::vector<double> v;
  for (const auto& e : draws) v.push_back(e.at(0, e.grid().index_of(s)));
  return gaussian_marginal_check(v, s, K, T, alpha);
}

double fs_l1_distance(std::span<const double> x, double a, double hi, std::size_t bins) {
  if (x.empty()) throw EmptySample("fs l1: empty sample");
  std::vector<double> count(bins + 1, 0.0);
  const double w = hi / static_cast<double>(bins);
  for (double v : x) {
    std::size_t b = v >= hi ? bins : static_cast<std::size_t>(std::max(0.0, v) / w);
    count[std::min(b, bins)] += 1.0;
  }
  const double n = static_cast<double>(x.size());
  double l1 = 0.0, prev = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const double c = fs_cdf(w * static_cast<double>(b + 1), a);
    l1 += std::fabs(count[b] / n - (c - prev));
    prev = c;
  }
  l1 += std::fabs(count[bins] / n - (1.0 - prev));
  return l1;
}

TestReport gibbs_invariance_test(const GibbsInvarianceSetup& su) {
  if (su.n_top == 0) {
    TestReport r = TestReport::make("gibbs_invariance", 0.0, 0.0);
    r.note = "no lines resampled";
    r.seed = su.seed;
    return r;
  }
  if (!su.draw_pair) throw InvalidArgument("gibbs invariance: no draw routine");
  std::vector<double> a, b;
  a.reserve(su.repetitions);
  b.reserve(su.repetitions);
  for (std::size_t r = 0; r < su.repetitions; ++r) {
    RngStream rng(su.seed, r);
    auto [x, y] = su.draw_pair(r, rng);
    a.push_back(x);
    b.push_back(y);
  }
  TestReport rep = ks_two_sample(a, b, su.significance);
  rep.name = "gibbs_invariance";
  rep.seed = su.seed;
  return rep;
}

namespace {

// Where a bridge from (0,0) to (T,0) most cheaply reaches the curve h + t^2.
double cheapest_touch(double h, double T) {
  auto cost = [&](double t) {
    const double c = h + t * t;
    return c * c * T / (2 * t * (T - t));
  };
  double lo = 1e-9 * T, hi = T * (1 - 1e-9);
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  for (int i = 0; i < 200; ++i) {
    if (cost(x1) < cost(x2)) {
      hi = x2;
      x2 = x1;
      x1 = hi - g * (hi - lo);
    } else {
      lo = x1;
      x1 = x2;
      x2 = lo + g * (hi - lo);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

AvoidanceTable avoidance_probability_check(const std::vector<double>& hs, double T,
                                           std::size_t draws, std::size_t m, std::uint64_t seed,
                                           double shift) {
  if (hs.size() < 2) throw InvalidArgument("avoidance: need at least two heights");
  for (double h : hs)
    if (!(h > 1)) throw InvalidArgument("avoidance: heights must exceed 1");
  if (draws == 0 || m < 3) throw InvalidArgument("avoidance: need draws and >= 3 grid points");
  if (shift < 0) shift = kMonitorShift;
  const TimeGrid g(0.0, T, m);
  const double dt = g.dt(), off = shift * std::sqrt(dt);
  std::vector<double> curve(m);
  for (std::size_t j = 0; j < m; ++j) curve[j] = g.time(j) * g.time(j) - off;

  AvoidanceTable tab;
  tab.draws = draws;
  tab.grid_points = m;
  // plain draws: one bridge serves every height through its largest excess over t^2
  std::vector<std::size_t> plain(hs.size(), 0);
  {
    RngStream rng(seed, 0);
    for (std::size_t d = 0; d < draws; ++d) {
      Path p = sample_bridge(g, 0.0, 0.0, rng);
      double top = -INFINITY;
      for (std::size_t j = 1; j + 1 < m; ++j) top = std::max(top, p.values[j] - curve[j]);
      for (std::size_t k = 0; k < hs.size(); ++k) plain[k] += top >= hs[k];
    }
  }
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const double h = hs[k];
    const double tau = cheapest_touch(h, T);
    const double peak = h + tau * tau;
    std::vector<double> mu(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double t = g.time(j);
      mu[j] = t <= tau ? peak * t / tau : peak * (T - t) / (T - tau);
    }
    mu.front() = mu.back() = 0.0;
    double quad = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) quad += (mu[j + 1] - mu[j]) * (mu[j + 1] - mu[j]);
    quad /= dt;
    RngStream rng(seed, k + 1);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t d = 0; d < draws; ++d) {
      Path p = sample_bridge(g, 0.0, 0.0, rng);
      bool fail = false;
      double cross = 0.0;
      for (std::size_t j = 0; j + 1 < m; ++j) {
        const double z0 = p.values[j] + mu[j], z1 = p.values[j + 1] + mu[j + 1];
        cross += (mu[j + 1] - mu[j]) * (z1 - z0);
        if (j + 1 < m - 1 && z1 >= h + curve[j + 1]) fail = true;
      }
      if (fail) {
        const double w = std::exp(-cross / dt + 0.5 * quad);
        sum += w;
        sum2 += w * w;
      }
    }
    const double n = static_cast<double>(draws);
    const double mean = sum / n;
    const double se = std::sqrt(std::max(0.0, sum2 / n - mean * mean) / n);
    tab.rows.push_back({h, mean, se, plain[k]});
    if (mean > 0 && mean < 1) {
      lx.push_back(std::log(h));
      ly.push_back(std::log(-std::log(mean)));
    }
  }
  tab.exponent = lx.size() >= 2 ? ls_slope(lx, ly) : NAN;
  return tab;
}

}  // namespace tiltlab
