#include "tiltlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "tiltlab/ensemble.hpp"
#include "tiltlab/hydro.hpp"
#include "tiltlab/oneline.hpp"
#include "tiltlab/special.hpp"

namespace tiltlab {

Budget Budget::smoke() {
  Budget b;
  b.tier = "smoke";
  b.pbr_draws = 4000;
  b.pbr_points = 65;
  b.fs_draws = 4000;
  b.fs_intervals = 512;
  b.fs_tail_draws = 10000;
  b.fs_tail_intervals = 256;
  b.scaling_draws = 3000;
  b.conf_draws = 2000;
  b.conf_points = 257;
  b.slope_draws = 200;
  b.shift_draws = 1000;
  b.gauss_draws = 1000;
  b.avoid_draws = 10000;
  b.gibbs_reps = 2000;
  b.coupling_sweeps = 200;
  return b;
}

Budget Budget::full() {
  Budget b;
  b.tier = "full";
  b.pbr_draws = 100000;
  b.pbr_points = 129;
  b.fs_draws = 100000;
  b.fs_intervals = 2048;
  b.fs_tail_draws = 1000000;
  b.fs_tail_intervals = 1024;
  b.scaling_draws = 100000;
  b.conf_draws = 100000;
  b.conf_points = 1025;
  b.slope_draws = 1000;
  b.shift_draws = 10000;
  b.gauss_draws = 10000;
  b.avoid_draws = 200000;
  b.gibbs_reps = 10000;
  b.coupling_sweeps = 1000;
  return b;
}

Budget Budget::named(const std::string& tier) {
  if (tier == "smoke") return smoke();
  if (tier == "full") return full();
  throw InvalidArgument("budget must be smoke or full");
}

namespace {

constexpr std::size_t kChains = 10;

// Spread `draws` recorded states over independent chains (stream c for chain c), each burnt in
// and thinned by its config; rec(c, state) sees the states of chain c in order.
template <class Make, class Rec>
void run_chains(std::size_t draws, std::size_t threads, std::uint64_t seed, Make make, Rec rec) {
  const std::size_t chains = std::min(kChains, draws);
  for_each_chain(chains, threads, [&](std::size_t c) {
    const std::size_t quota = draws / chains + (c < draws % chains ? 1 : 0);
    GibbsChain chain = make();
    RngStream rng(seed, c);
    const auto& cfg = chain.config();
    const std::size_t burn = cfg.burn_in_for(chain.state().grid());
    for (std::size_t s = 0; s < burn; ++s) chain.sweep(rng);
    for (std::size_t d = 0; d < quota; ++d) {
      for (std::size_t s = 0; s < cfg.thinning; ++s) chain.sweep(rng);
      rec(c, chain.state());
    }
  });
}

std::vector<double> concat(const std::vector<std::vector<double>>& parts) {
  std::vector<double> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

TestReport band_report(std::string name, double value, double centre, double half_width) {
  TestReport r = TestReport::make(std::move(name), std::fabs(value - centre), half_width);
  r.note = "estimate=" + fmt(value) + " target=" + fmt(centre) + "+-" + fmt(half_width);
  return r;
}

}  // namespace

TestReport pbr_cell(double a, double x, double T, std::size_t draws, std::size_t points,
                    std::uint64_t seed) {
  OneLineSpec spec(TimeGrid(-T, T, points), a, x, x);
  const std::size_t mid = (points - 1) / 2;
  std::vector<double> primal(draws), dual(draws);
  RngStream r1(seed, 0), r2(seed, 1);
  for (std::size_t d = 0; d < draws; ++d) {
    primal[d] = sample_tilted_exact(spec, r1, 100000).path[mid];
    dual[d] = sample_pbr_dual(spec, r2, 100000).path[mid];
  }
  TestReport r = ks_two_sample(primal, dual, 1e-3);
  r.name = "pbr_duality a=" + fmt(a) + " x=" + fmt(x) + " T=" + fmt(T);
  r.seed = seed;
  return r;
}

std::vector<TestReport> pbr_matrix(std::size_t draws, std::size_t points, std::uint64_t seed) {
  std::vector<TestReport> out;
  double worst = 0.0;
  std::uint64_t cell = 0;
  for (double a : {1.0, 2.0})
    for (double x : {0.3, 1.0})
      for (double T : {0.5, 1.0}) {
        out.push_back(pbr_cell(a, x, T, draws, points, seed + 1000 * cell++));
        worst = std::max(worst, out.back().value / out.back().threshold);
      }
  TestReport s = TestReport::make("pbr_duality_matrix", worst, 1.0);
  s.note = "largest KS statistic over critical value across the 8 cells";
  s.sizes = {draws, draws};
  s.seed = seed;
  out.push_back(s);
  return out;
}

FsSamples fs_samples(std::size_t draws, std::size_t intervals, double T, std::size_t thinning,
                     std::uint64_t seed, std::size_t threads) {
  const TimeGrid g(-T, T, intervals + 1);
  McmcConfig cfg;
  cfg.block_points = 65;
  cfg.thinning = thinning;
  const double eps = zero_boundary_value(g);
  const OneLineSpec spec(g, 2.0, eps, eps);
  const std::size_t j0 = g.index_of(0.0), j1 = g.index_of(1.0);
  const std::size_t wl = g.index_of(-2.0), wr = g.index_of(2.0);
  std::vector<std::vector<double>> x0(kChains), x1(kChains), mx(kChains);
  run_chains(draws, threads, seed, [&] { return make_one_line_chain(spec, cfg); },
             [&](std::size_t c, const Ensemble& e) {
               auto x = e.line(0);
               x0[c].push_back(x[j0]);
               x1[c].push_back(x[j1]);
               mx[c].push_back(*std::max_element(x.begin() + wl, x.begin() + wr + 1));
             });
  return FsSamples{concat(x0), concat(x1), concat(mx)};
}

TestReport fs_l1_report(const FsSamples& s) {
  TestReport r = TestReport::make("fs_density_l1", fs_l1_distance(s.at_zero), 0.05);
  r.sizes = {s.at_zero.size()};
  r.note = "binned L1 on 50 bins of [0,5] plus overflow";
  return r;
}

TestReport fs_translation_report(const FsSamples& s) {
  TestReport r = ks_two_sample(s.at_zero, s.at_one, 1e-3);
  r.name = "fs_translation_invariance";
  return r;
}

TestReport fs_max_tail_report(const FsSamples& s) {
  TailFit f = fit_tail_exponent(s.window_max);
  TestReport r = band_report("fs_window_max_tail_exponent", f.exponent, 1.5, 0.2);
  r.sizes = {s.window_max.size()};
  return r;
}

TestReport fs_tail_prefactor_report(const FsSamples& s) {
  const double c = fit_tail_prefactor(s.at_zero, 1.5, 2.5);
  const double target = fs_tail_exponent(1.0, 2.0);
  TestReport r = TestReport::make("fs_tail_prefactor", std::fabs(c / target - 1.0), 0.15);
  r.note = "prefactor=" + fmt(c) + " target=" + fmt(target) + " fit over t in [1.5,2.5]";
  r.sizes = {s.at_zero.size()};
  return r;
}

TestReport scaling_report(std::size_t draws, std::size_t points, std::uint64_t seed,
                          std::size_t threads) {
  const double lam = 2.0, T = 3.0;
  McmcConfig cfg;
  cfg.block_points = 33;
  cfg.thinning = 2;
  const TimeGrid ga(-T, T, points);
  const double s2 = std::pow(lam, 2.0 / 3.0);
  const TimeGrid gb(-T / s2, T / s2, points);
  const TiltParams pa(2.0, lam, 2), pb(2.0 * lam, lam, 2);
  const std::size_t mid = (points - 1) / 2;
  std::vector<std::vector<double>> va(kChains), vb(kChains);
  const double s1 = std::cbrt(lam);
  run_chains(draws, threads, seed,
             [&] { return make_lambda_chain(ga, pa, BoundaryScheme::zero(), cfg); },
             [&](std::size_t c, const Ensemble& e) { va[c].push_back(e.at(0, mid) / s1); });
  run_chains(draws, threads, seed + 1,
             [&] { return make_lambda_chain(gb, pb, BoundaryScheme::zero(), cfg); },
             [&](std::size_t c, const Ensemble& e) { vb[c].push_back(e.at(0, mid)); });
  TestReport r = ks_two_sample(concat(va), concat(vb), 1e-3);
  r.name = "scaling_covariance";
  r.seed = seed;
  return r;
}

ConfinementRun confinement_samples(std::size_t draws, std::size_t points, std::uint64_t seed,
                                   std::size_t threads) {
  const TimeGrid g(-6.0, 6.0, points);
  const TiltParams p(2.0, 2.0, 6);
  McmcConfig cfg;
  cfg.block_points = 65;
  cfg.thinning = 2;
  const std::size_t mid = g.index_of(0.0);
  std::vector<std::vector<std::vector<double>>> per(kChains, std::vector<std::vector<double>>(6));
  run_chains(draws, threads, seed,
             [&] { return make_lambda_chain(g, p, BoundaryScheme::zero(), cfg); },
             [&](std::size_t c, const Ensemble& e) {
               for (std::size_t i = 0; i < 6; ++i) per[c][i].push_back(e.at(i, mid));
             });
  ConfinementRun r;
  r.at_zero.resize(6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t c = 0; c < kChains; ++c)
      r.at_zero[i].insert(r.at_zero[i].end(), per[c][i].begin(), per[c][i].end());
  return r;
}

std::vector<TestReport> confinement_ratio_reports(const ConfinementRun& r) {
  std::vector<TestReport> out;
  const double target = std::cbrt(2.0);
  for (std::size_t k = 2; k <= 4; ++k) {
    const double ratio = mean_of(r.at_zero[k - 1]) / mean_of(r.at_zero[k]);
    TestReport t = TestReport::make("confinement_ratio k=" + std::to_string(k),
                                    std::fabs(std::log(ratio / target)), std::log(1.25));
    t.note = "ratio=" + fmt(ratio) + " target=" + fmt(target) + " band [0.8,1.25]x";
    t.sizes = {r.at_zero[k - 1].size()};
    out.push_back(t);
  }
  return out;
}

TestReport lower_tail_report(const ConfinementRun& r) {
  TailFit f = fit_tail_exponent(r.at_zero[1]);
  TestReport t = band_report("second_line_tail_exponent", f.exponent, 1.5, 0.3);
  t.sizes = {r.at_zero[1].size()};
  return t;
}

namespace {

GibbsChain nu_chain(double L, double R) {
  const double T = 20.0;
  const TimeGrid g(-T, T, 641);
  McmcConfig cfg;
  cfg.block_points = 33;
  cfg.thinning = 10;
  cfg.burn_in = 400;
  return make_lambda_chain(g, TiltParams(2.0, 2.0, 2),
                           BoundaryScheme::slopes(SlopePair(ExtendedReal::finite(L),
                                                            ExtendedReal::finite(R))),
                           cfg);
}

}  // namespace

std::vector<TestReport> slope_reports(std::size_t draws, std::uint64_t seed, std::size_t threads) {
  const double ts[2] = {-8.0, 8.0};
  std::vector<std::vector<double>> v[2] = {std::vector<std::vector<double>>(kChains),
                                           std::vector<std::vector<double>>(kChains)};
  run_chains(draws, threads, seed, [&] { return nu_chain(-2, -2); },
             [&](std::size_t c, const Ensemble& e) {
               for (int s = 0; s < 2; ++s) v[s][c].push_back(e.at(0, e.grid().index_of(ts[s])));
             });
  const SlopePair pair(ExtendedReal::finite(-2), ExtendedReal::finite(-2));
  std::vector<TestReport> out;
  for (int s = 0; s < 2; ++s) {
    SlopeAccumulator acc(ts[s]);
    for (double x : concat(v[s])) acc.add_value(x);
    const SlopeEstimate e = acc.finish();
    TestReport r =
        TestReport::make("top_line_slope t=" + fmt(ts[s]), std::fabs(e.estimate + 2.0) / e.stderr_, 3.0);
    // the limit shape is already in parabola-shifted coordinates
    const double shape = hydro_limit_shape(pair, ts[s]);
    r.note = "estimate=" + fmt(e.estimate) + " se=" + fmt(e.stderr_) +
             "; value is the distance from -2 in standard errors; limit-shape slope at this t=" +
             fmt(shape / std::fabs(ts[s]));
    r.sizes = {acc.count()};
    r.seed = seed;
    out.push_back(r);
  }
  return out;
}

TestReport shift_covariance_report(std::size_t draws, std::uint64_t seed, std::size_t threads) {
  // translating the (-2,-2) field by one unit gives the (0,-4) field
  std::vector<std::vector<double>> a(kChains), b(kChains);
  run_chains(draws, threads, seed, [&] { return nu_chain(-2, -2); },
             [&](std::size_t c, const Ensemble& e) {
               a[c].push_back(e.at(0, e.grid().index_of(-1.0)));
             });
  run_chains(draws, threads, seed + 1, [&] { return nu_chain(0, -4); },
             [&](std::size_t c, const Ensemble& e) {
               b[c].push_back(e.at(0, e.grid().index_of(0.0)));
             });
  TestReport r = ks_two_sample(concat(a), concat(b), 1e-3);
  r.name = "slope_shift_covariance";
  r.note += "; X(-1) under (-2,-2) vs X(0) under (0,-4)";
  r.seed = seed;
  return r;
}

TestReport gaussian_marginal_report(std::size_t draws, std::uint64_t seed, std::size_t threads) {
  const double T = 64.0, K = 1.0, s = 8.0;
  const TimeGrid g(-T, T, 2049);
  McmcConfig cfg;
  cfg.block_points = 65;
  cfg.thinning = 5;
  cfg.burn_in = 400;
  const std::size_t js = g.index_of(s);
  std::vector<std::vector<double>> v(kChains);
  run_chains(draws, threads, seed,
             [&] { return make_lambda_chain(g, TiltParams(2.0, 2.0, 3),
                                            BoundaryScheme::top_line(K), cfg); },
             [&](std::size_t c, const Ensemble& e) { v[c].push_back(e.at(0, js)); });
  auto all = concat(v);
  TestReport r = gaussian_marginal_check(all, s, K, T, 1e-3);
  r.note += "; mean offset=" + fmt(mean_of(all) - (s * s - 2 * K * s));
  r.seed = seed;
  return r;
}

std::vector<TestReport> avoidance_reports(std::size_t draws, std::uint64_t seed) {
  AvoidanceTable tab = avoidance_probability_check({1.5, 2.0, 3.0, 4.0}, 8.0, draws, 401, seed);
  std::vector<TestReport> out;
  TestReport e = band_report("avoidance_exponent", tab.exponent, 1.5, 0.3);
  std::string rows;
  for (const auto& r : tab.rows)
    rows += " h=" + fmt(r.h) + ":p=" + fmt(r.fail_prob) + "(se " + fmt(r.stderr_) + ")";
  e.note += ";" + rows;
  e.sizes = {draws};
  e.seed = seed;
  out.push_back(e);
  TestReport h4 = TestReport::make("avoidance_failure_h4", tab.rows.back().fail_prob, 1e-2);
  h4.note = "plain failures=" + std::to_string(tab.rows.back().plain_failures);
  h4.sizes = {draws};
  h4.seed = seed;
  out.push_back(h4);
  return out;
}

TestReport gibbs_one_line_report(std::size_t reps, std::uint64_t seed, bool mutate) {
  const TimeGrid g(-1.0, 1.0, 65);
  const OneLineSpec spec(g, 2.0, 0.5, 0.5);
  const TiltParams used(mutate ? 1e-12 : 2.0, 2.0, 1);
  McmcConfig cfg;
  cfg.sweeps = 1;
  cfg.burn_in = 0;
  cfg.block_points = 65;
  cfg.block_attempts = 100000;
  const std::size_t mid = g.index_of(0.0);
  GibbsInvarianceSetup su;
  su.n_top = 1;
  su.repetitions = reps;
  su.seed = seed;
  su.draw_pair = [&](std::size_t, RngStream& rng) {
    const double a = sample_pbr_dual(spec, rng).path[mid];
    Ensemble e(g, {sample_pbr_dual(spec, rng).path.values});
    e = resample_stopping_domain(e, used, 1, -0.5, 0.5, cfg, rng);
    return std::make_pair(a, e.at(0, mid));
  };
  TestReport r = gibbs_invariance_test(su);
  if (mutate) {
    r = TestReport::make("gibbs_mutation_one_line", r.value, r.threshold, false);
    r.note = "tilt omitted in the resampling step; must be detected";
    r.sizes = {reps, reps};
  } else {
    r.name = "gibbs_invariance_one_line";
  }
  r.seed = seed;
  return r;
}

TestReport gibbs_three_line_report(std::size_t reps, std::uint64_t seed, bool mutate) {
  const TimeGrid g(-2.0, 2.0, 129);
  const TiltParams p(2.0, 2.0, 3);
  const TiltParams used(mutate ? 1e-12 : 2.0, 2.0, 3);
  McmcConfig cfg;
  cfg.block_points = 33;
  cfg.thinning = 20;
  McmcConfig one = cfg;
  one.sweeps = 1;
  const std::size_t mid = g.index_of(0.0);
  std::vector<std::vector<double>> a(kChains), b(kChains);
  run_chains(reps, 1, seed, [&] { return make_lambda_chain(g, p, BoundaryScheme::flat(1.0), cfg); },
             [&](std::size_t c, const Ensemble& e) { a[c].push_back(e.at(0, mid)); });
  // B chains: every recorded state has just passed through the extra resampling step, which
  // is also fed back into the chain
  const std::size_t chains = std::min(kChains, reps);
  for (std::size_t c = 0; c < chains; ++c) {
    const std::size_t quota = reps / chains + (c < reps % chains ? 1 : 0);
    GibbsChain chain = make_lambda_chain(g, p, BoundaryScheme::flat(1.0), cfg);
    RngStream rng(seed + 1, c);
    const std::size_t burn = cfg.burn_in_for(g);
    for (std::size_t s = 0; s < burn; ++s) chain.sweep(rng);
    for (std::size_t d = 0; d < quota; ++d) {
      for (std::size_t s = 0; s < cfg.thinning; ++s) chain.sweep(rng);
      chain.mutable_state() = resample_stopping_domain(chain.state(), used, 2, -0.5, 0.5, one, rng);
      b[c].push_back(chain.state().at(0, mid));
    }
  }
  TestReport r = ks_two_sample(concat(a), concat(b), 1e-3);
  if (mutate) {
    r = TestReport::make("gibbs_mutation_three_line", r.value, r.threshold, false);
    r.note = "tilt omitted in the resampling step; must be detected";
    r.sizes = {reps, reps};
  } else {
    r.name = "gibbs_invariance_three_line";
  }
  r.seed = seed;
  return r;
}

std::vector<TestReport> coupling_reports(std::size_t sweeps, std::uint64_t seed) {
  const TimeGrid g(-2.0, 2.0, 129);
  const TiltParams p(2.0, 2.0, 3), weak(1.0, 2.0, 3);
  McmcConfig cfg;
  struct Case {
    std::string name;
    ChainSetup up, low;
    BoundaryScheme bu, bl;
  };
  std::vector<Case> cases = {
      {"boundary", {p}, {p}, BoundaryScheme::flat(1.0), BoundaryScheme::zero()},
      {"strength", {weak}, {p}, BoundaryScheme::flat(0.5), BoundaryScheme::flat(0.5)},
      {"floor", {p, 0.5}, {p, 0.0}, BoundaryScheme::flat(1.0), BoundaryScheme::flat(1.0)},
      {"identical", {p}, {p}, BoundaryScheme::flat(0.5), BoundaryScheme::flat(0.5)},
  };
  std::vector<TestReport> out;
  std::uint64_t k = 0;
  for (const auto& cs : cases) {
    Ensemble up = make_lambda_chain(g, cs.up.params, cs.bu, cfg, cs.up.wall).state();
    Ensemble lo = make_lambda_chain(g, cs.low.params, cs.bl, cfg, cs.low.wall).state();
    CoupledPair pair{up, lo, RngStream(seed, k++)};
    std::size_t bad = 0;
    for (std::size_t s = 0; s < sweeps; ++s) {
      try {
        monotone_coupled_sweep(pair, cs.up, cs.low, cfg);
      } catch (const OrderingViolated&) {
        ++bad;
        break;
      }
      if (cs.name == "identical" ? !(pair.upper == pair.lower)
                                 : !dominates(pair.upper, pair.lower))
        ++bad;
    }
    TestReport r = TestReport::make("coupling_" + cs.name, static_cast<double>(bad), 0.0);
    r.note = cs.name == "identical" ? "steps where the chains differ"
                                    : "sweeps with an ordering violation";
    r.sizes = {sweeps};
    r.seed = seed;
    out.push_back(r);
  }
  return out;
}

std::vector<TestReport> geometry_reports(std::uint64_t seed) {
  std::vector<TestReport> out;
  // closed-form tangency against a bisection solve of a x^2 - 2 a T x + alpha T^2 = 0
  RngStream rng(seed, 0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double T = 1.0 + 99.0 * rng.uniform();
    const double a = 0.5 + 4.5 * rng.uniform();
    const double alpha = a * rng.uniform();
    double lo = 0.0, hi = T;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (lo + hi);
      if (a * m * m - 2 * a * T * m + alpha * T * T > 0)
        lo = m;
      else
        hi = m;
    }
    const double x = tangency_location(T, alpha, a).first;
    worst = std::max(worst, std::fabs(x - 0.5 * (lo + hi)) / T);
  }
  TestReport t = TestReport::make("tangency_closed_form", worst, 1e-10);
  t.note = "largest relative gap to the numeric solve over 100 random inputs";
  t.seed = seed;
  out.push_back(t);

  const HydroGeometry geo(1e3, 1.0, 2.0, 0.02);
  std::size_t outside = 0, gap_bad = 0;
  const double gap_floor = std::pow(std::sqrt(geo.gamma) - geo.beta, 2) * geo.T * geo.T;
  for (int k = 2; k <= geo.n0; ++k) {
    LightScaffold s = light_path_scaffold(geo, k);
    // deep tangencies sit within rounding of T, so the ends get a relative slack
    const double slack = 1e-12 * geo.T;
    if (!(s.xi >= s.bracket_lo - slack && s.xi <= s.bracket_hi + slack)) ++outside;
    if (!(scaffold_gap(geo, k) >= gap_floor)) ++gap_bad;
  }
  TestReport b = TestReport::make("tangency_bracket", static_cast<double>(outside), 0.0);
  b.note = "k in [2, n0=" + std::to_string(geo.n0) + "] at T=1000 K=1 lambda=2 delta=0.02";
  out.push_back(b);
  TestReport gp = TestReport::make("scaffold_gap", static_cast<double>(gap_bad), 0.0);
  gp.note = "lines k in [2, n0] where the path clears the floor at the midpoint by less than (sqrt(gamma)-beta)^2 T^2";
  out.push_back(gp);

  std::size_t wrong = 0;
  wrong += n0_threshold(10.0, std::pow(10.0, 33)) != 1;
  wrong += n0_threshold(10.0, 100.0) != 17;
  wrong += n0_threshold(10.0, std::exp(2.0)) != 37;
  TestReport n = TestReport::make("n0_examples", static_cast<double>(wrong), 0.0);
  out.push_back(n);
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"pbr",    "fs",    "scaling",  "confinement",
                                                 "slopes", "gibbs", "avoidance"};
  return names;
}

std::vector<TestReport> run_suite(const std::string& suite, const Budget& b, std::uint64_t seed) {
  std::vector<TestReport> out;
  auto add = [&](std::vector<TestReport> v) { out.insert(out.end(), v.begin(), v.end()); };
  const std::size_t th = b.threads;
  if (suite == "all") {
    for (const auto& s : suite_names()) add(run_suite(s, b, seed));
    return out;
  }
  if (suite == "pbr") {
    add(pbr_matrix(b.pbr_draws, b.pbr_points, seed));
  } else if (suite == "fs") {
    FsSamples s = fs_samples(b.fs_draws, b.fs_intervals, 8.0, 4, seed, th);
    add({fs_l1_report(s), fs_translation_report(s), fs_max_tail_report(s)});
    FsSamples t = fs_samples(b.fs_tail_draws, b.fs_tail_intervals, 8.0, 2, seed + 7, th);
    add({fs_tail_prefactor_report(t)});
  } else if (suite == "scaling") {
    add({scaling_report(b.scaling_draws, 513, seed, th)});
  } else if (suite == "confinement") {
    ConfinementRun r = confinement_samples(b.conf_draws, b.conf_points, seed, th);
    add(confinement_ratio_reports(r));
    add({lower_tail_report(r)});
  } else if (suite == "slopes") {
    add(slope_reports(b.slope_draws, seed, th));
    add({shift_covariance_report(b.shift_draws, seed + 3, th)});
    add({gaussian_marginal_report(b.gauss_draws, seed + 5, th)});
    add(geometry_reports(seed));
  } else if (suite == "gibbs") {
    add({gibbs_one_line_report(b.gibbs_reps, seed, false),
         gibbs_one_line_report(b.gibbs_reps, seed + 1, true),
         gibbs_three_line_report(b.gibbs_reps, seed + 2, false),
         gibbs_three_line_report(b.gibbs_reps, seed + 3, true)});
    add(coupling_reports(b.coupling_sweeps, seed));
  } else if (suite == "avoidance") {
    add(avoidance_reports(b.avoid_draws, seed));
  } else {
    throw InvalidArgument("unknown suite: " + suite);
  }
  for (auto& r : out) {
    r.suite = suite;
    r.family = out.size();
    if (r.seed == 0) r.seed = seed;
  }
  return out;
}

std::string reports_jsonl(const std::vector<TestReport>& reports) {
  std::string s;
  for (const auto& r : reports) s += r.to_json() + "\n";
  return s;
}

}  // namespace tiltlab
