#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "tiltlab/diagnostics.hpp"
#include "tiltlab/oneline.hpp"
#include "tiltlab/special.hpp"

using namespace tiltlab;

namespace {

struct Summary {
  double mean, se;
};

Summary summarize(const std::vector<double>& v) {
  double s = 0, s2 = 0;
  for (double x : v) {
    s += x;
    s2 += x * x;
  }
  const double n = static_cast<double>(v.size());
  const double m = s / n;
  return {m, std::sqrt((s2 / n - m * m) / n)};
}

std::vector<double> pbr_at_zero(double a, double x, std::size_t n, std::uint64_t seed,
                                 std::size_t points = 65) {
  TimeGrid g(-1, 1, points);
  OneLineSpec spec(g, a, x, x);
  RngStream r(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = sample_pbr_dual(spec, r).path[(points - 1) / 2];
  return out;
}

}  // namespace

TEST_SUITE("oneline") {

TEST_CASE("spec validation") {
  TimeGrid g(-1, 1, 9);
  CHECK_THROWS_AS(OneLineSpec(g, -1, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(OneLineSpec(g, 1, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(OneLineSpec(g, 1, 1, 1, BarrierSpec::line(0, 2, Side::below)), InvalidArgument);
  CHECK_NOTHROW(OneLineSpec(g, 0, 1e-9, 1));
}

TEST_CASE("zero strength reduces to the conditioned bridge under a shared stream") {
  TimeGrid g(-1, 1, 33);
  OneLineSpec spec(g, 0.0, 0.4, 0.2);
  RngStream a(1), b(1);
  for (int k = 0; k < 100; ++k) {
    BridgeDraw d = sample_tilted_exact(spec, a);
    BridgeDraw e = sample_bridge_above(g, 0.4, 0.2, spec.floor, 10000, b);
    CHECK(d.path.values == e.path.values);
    CHECK(d.attempts == e.attempts);
  }
}

TEST_CASE("normalizer is positive") {
  TimeGrid g(-1, 1, 33);
  RngStream r(2);
  double z = 0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    Path p = sample_bridge(g, 0.3, 0.3, r);
    bool pos = true;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) pos = pos && p[i] > 0;
    if (pos) z += std::exp(-2.0 * trapezoid_area(p));
  }
  CHECK(z / n > 0);
}

TEST_CASE("dual sampler pins the endpoints") {
  TimeGrid g(-1.5, 0.5, 17);
  OneLineSpec spec(g, 3.0, 0.7, 1.9);
  RngStream r(3);
  for (int k = 0; k < 50; ++k) {
    Path p = sample_pbr_dual(spec, r).path;
    CHECK(p[0] == 0.7);
    CHECK(p[16] == 1.9);
  }
}

TEST_CASE("primal and dual samplers agree") {
  TimeGrid g(-1, 1, 65);
  OneLineSpec spec(g, 2.0, 0.5, 0.5);
  RngStream r1(4), r2(5);
  std::vector<double> a(100000), b(100000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = sample_tilted_exact(spec, r1, 100000).path[32];
    b[i] = sample_pbr_dual(spec, r2, 100000).path[32];
  }
  CHECK(ks_two_sample(a, b, 1e-3).pass);
}

TEST_CASE("raising the tilt lowers the path") {
  TimeGrid g(-1, 1, 65);
  OneLineSpec s1(g, 1.0, 0.5, 0.5), s2(g, 2.0, 0.5, 0.5);
  RngStream r(6);
  std::vector<double> a(100000), b(100000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = sample_tilted_exact(s1, r, 100000).path[32];
    b[i] = sample_tilted_exact(s2, r, 100000).path[32];
  }
  const Summary m1 = summarize(a), m2 = summarize(b);
  // one-sided z at 1e-3: the larger tilt must not sit significantly higher
  CHECK((m2.mean - m1.mean) / std::hypot(m1.se, m2.se) < 3.09);
  CHECK(m2.mean < m1.mean);
}

TEST_CASE("raising the boundary or the floor raises the path") {
  const Summary lo = summarize(pbr_at_zero(2.0, 0.5, 40000, 7));
  const Summary hi = summarize(pbr_at_zero(2.0, 1.0, 40000, 8));
  CHECK(hi.mean > lo.mean + 3 * std::hypot(lo.se, hi.se));

  TimeGrid g(-1, 1, 65);
  OneLineSpec base(g, 2.0, 0.5, 0.5), lifted(g, 2.0, 0.5, 0.5, BarrierSpec::line(0.0, 0.1));
  RngStream r(9);
  std::vector<double> a(40000), b(40000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = sample_pbr_dual(base, r).path[32];
    b[i] = sample_pbr_dual(lifted, r, 1000000).path[32];
  }
  const Summary ma = summarize(a), mb = summarize(b);
  CHECK(mb.mean > ma.mean + 3 * std::hypot(ma.se, mb.se));
}

TEST_CASE("a full-domain block update is the dual sampler") {
  TimeGrid g(-1, 1, 33);
  OneLineSpec spec(g, 2.0, 0.6, 0.4);
  McmcConfig cfg;
  cfg.block_points = 33;
  cfg.block_attempts = 10000;
  GibbsChain chain = make_one_line_chain(spec, cfg);
  RngStream a(10), b(10);
  for (int k = 0; k < 50; ++k) {
    chain.update_block(0, 0, 32, a);
    Path p = sample_pbr_dual(spec, b, 10000).path;
    auto x = chain.state().line(0);
    for (std::size_t j = 0; j < 33; ++j) CHECK(x[j] == doctest::Approx(p[j]).epsilon(1e-13));
  }
}

TEST_CASE("block sweeps leave the exact law invariant") {
  TimeGrid g(-1, 1, 65);
  OneLineSpec spec(g, 2.0, 0.5, 0.5);
  McmcConfig cfg;
  cfg.block_points = 17;
  RngStream r(11), q(12);
  const std::size_t n = 10000;
  std::vector<double> before(n), after(n);
  for (std::size_t c = 0; c < n; ++c) {
    before[c] = sample_tilted_exact(spec, q, 100000).path[32];
    GibbsChain chain = make_one_line_chain(spec, cfg, sample_tilted_exact(spec, r, 100000).path);
    for (int s = 0; s < 50; ++s) chain.sweep(r);
    after[c] = chain.state().at(0, 32);
  }
  CHECK(ks_two_sample(before, after, 1e-3).pass);
}

TEST_CASE("chain started far from equilibrium matches the exact law") {
  TimeGrid g(-1, 1, 65);
  OneLineSpec spec(g, 2.0, 0.5, 0.5);
  McmcConfig cfg;
  cfg.block_points = 9;
  cfg.sweeps = 40;
  RngStream r(13), q(14);
  std::vector<double> mc(5000), ex(5000);
  for (std::size_t c = 0; c < mc.size(); ++c) {
    mc[c] = sample_tilted_mcmc(spec, cfg, r)[32];
    ex[c] = sample_pbr_dual(spec, q).path[32];
  }
  CHECK(ks_two_sample(mc, ex, 1e-3).pass);
}

TEST_CASE("tail at the origin decays at least exponentially") {
  // boundary T^2 - alpha T with alpha = 1 at T = 4 (strength 2, parabola t^2)
  const double T = 4, alpha = 1;
  TimeGrid g(-T, T, 257);
  OneLineSpec spec(g, 2.0, T * T - alpha * T, T * T - alpha * T);
  McmcConfig cfg;
  cfg.block_points = 33;
  GibbsChain chain = make_one_line_chain(spec, cfg);
  RngStream r(15);
  for (int s = 0; s < 400; ++s) chain.sweep(r);
  std::vector<double> x(20000);
  for (auto& v : x) {
    for (int s = 0; s < 2; ++s) chain.sweep(r);
    v = chain.state().at(0, 128);
  }
  std::sort(x.begin(), x.end());
  // log-survival against t over the upper half
  std::vector<double> ts, ls;
  for (std::size_t i = x.size() / 2; i + 20 < x.size(); i += 200) {
    ts.push_back(x[i]);
    ls.push_back(std::log(1.0 - static_cast<double>(i) / x.size()));
  }
  const double slope = ls_slope(ts, ls);
  CHECK(slope <= -alpha / 3);
}

TEST_CASE("coming down from high boundary values") {
  // x = y = T^{2/3}; the chance that the path stays above C everywhere falls with T
  const double C = 0.3;
  double prev = 1.1;
  for (double T : {4.0, 8.0, 16.0}) {
    const std::size_t m = static_cast<std::size_t>(2 * T * 8) + 1;
    TimeGrid g(-T, T, m);
    const double H = std::pow(T, 2.0 / 3.0);
    McmcConfig cfg;
    cfg.block_points = 33;
    GibbsChain chain = make_one_line_chain(OneLineSpec(g, 2.0, H, H), cfg);
    RngStream r(16);
    for (int s = 0; s < 300; ++s) chain.sweep(r);
    int stay = 0;
    const int n = 2000;
    for (int d = 0; d < n; ++d) {
      chain.sweep(r);
      auto x = chain.state().line(0);
      stay += *std::min_element(x.begin() + 1, x.end() - 1) >= C;
    }
    const double p = static_cast<double>(stay) / n;
    INFO("T = " << T << " p = " << p);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("scaling a path") {
  TimeGrid g(-2, 2, 5);
  Path p(g, {1, 2, 3, 2, 1});
  Path q = scale_path(p, 8.0);
  CHECK(q.grid.left() == doctest::Approx(-0.5));
  CHECK(q[2] == doctest::Approx(1.5));
  Path id = scale_path(p, 1.0);
  CHECK(id.values == p.values);
}

TEST_CASE("stationary window sampler") {
  std::size_t off = 0;
  TimeGrid w(-1, 1, 33);
  TimeGrid d = fs_domain(w, &off);
  CHECK(d.points() == 129);
  CHECK(d.left() == doctest::Approx(-4));
  CHECK(d.time(off) == doctest::Approx(-1));
  CHECK_THROWS_AS(fs_domain(TimeGrid(-1, 1, 32)), InvalidArgument);

  McmcConfig cfg;
  cfg.block_points = 33;
  cfg.sweeps = 60;
  RngStream r(17);
  std::vector<double> x(1500);
  for (auto& v : x) v = sample_fs(2.0, w, cfg, r)[16];
  // one-sample KS against the stationary cdf, loose because of the finite domain
  CHECK(ks_one_sample(x, [](double t) { return fs_cdf(t, 2.0); }, 1e-3).pass);
}

TEST_CASE("exhausted rejection budget") {
  TimeGrid g(-4, 4, 129);
  OneLineSpec spec(g, 2.0, 1e-3, 1e-3);
  RngStream r(18);
  CHECK_THROWS_AS(sample_tilted_exact(spec, r, 5), AttemptsExhausted);
}

}  // TEST_SUITE
