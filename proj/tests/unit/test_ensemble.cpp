#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "tiltlab/diagnostics.hpp"
#include "tiltlab/ensemble.hpp"
#include "tiltlab/oneline.hpp"

using namespace tiltlab;

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double se_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1) / v.size());
}

}  // namespace

TEST_SUITE("ensemble") {

TEST_CASE("boundary vectors") {
  auto [l, r] = boundary_vectors(BoundaryScheme::top_line(1.0, 0.6), 10.0, 3);
  CHECK(l[0] == doctest::Approx(100 - 20 - std::pow(10.0, 0.6)).epsilon(1e-14));
  CHECK(l[0] == doctest::Approx(76.019).epsilon(1e-5));
  CHECK(r[0] == l[0]);
  CHECK(l[1] == 0);
  CHECK(l[2] == 0);

  const double K = 1.5, T = 7.0;
  auto [nl, nr] = boundary_vectors(
      BoundaryScheme::slopes(SlopePair(ExtendedReal::finite(-2 * K), ExtendedReal::finite(-2 * K))), T, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(nl[i] == doctest::Approx(T * T - 2 * K * T));
    CHECK(nr[i] == doctest::Approx(T * T - 2 * K * T));
  }
  auto [sl, sr] = boundary_vectors(
      BoundaryScheme::slopes(SlopePair(ExtendedReal::finite(-20), ExtendedReal::finite(1))), 3.0, 2);
  CHECK(sl[0] == 0);
  CHECK(sr[1] == doctest::Approx(12));

  for (std::size_t n : {1u, 5u}) {
    auto [zl, zr] = boundary_vectors(BoundaryScheme::zero(), 2.5, n);
    CHECK(std::all_of(zl.begin(), zl.end(), [](double v) { return v == 0; }));
    CHECK(std::all_of(zr.begin(), zr.end(), [](double v) { return v == 0; }));
  }

  BoundaryScheme bad = BoundaryScheme::zero();
  bad.kind = BoundaryScheme::Kind::slopes;
  bad.left_slope = ExtendedReal::neg_infinity();
  CHECK_THROWS_AS(boundary_vectors(bad, 2.0, 2), InvalidArgument);
  CHECK_THROWS_AS(boundary_vectors(BoundaryScheme::explicit_values({1, 2}, {1, 1}), 2.0, 2), InvalidArgument);
}

TEST_CASE("one line reduces to the one-line chain") {
  TimeGrid g(-1, 1, 65);
  McmcConfig cfg;
  cfg.block_points = 17;
  GibbsChain a = make_lambda_chain(g, TiltParams(2.0, 2.0, 1), BoundaryScheme::flat(0.5), cfg);
  GibbsChain b = make_one_line_chain(OneLineSpec(g, 2.0, 0.5, 0.5), cfg);
  CHECK(a.state() == b.state());
  RngStream ra(1), rb(1);
  for (int s = 0; s < 30; ++s) {
    a.sweep(ra);
    b.sweep(rb);
  }
  CHECK(a.state() == b.state());
}

TEST_CASE("ordering holds after every sweep") {
  TimeGrid g(-3, 3, 193);
  McmcConfig cfg;
  cfg.block_points = 33;
  GibbsChain c = make_lambda_chain(g, TiltParams(2.0, 2.0, 5), BoundaryScheme::zero(), cfg);
  RngStream r(2);
  CHECK(c.state().ordered());
  for (int s = 0; s < 500; ++s) {
    c.sweep(r);
    REQUIRE(c.state().ordered());
  }
}

// Lines stack on one another, so the mean ratio exceeds the cube root of the ratio and grows toward
// the bottom of a finite ensemble.
TEST_CASE("lower lines sit lower by at least about the cube root of the ratio") {
  TimeGrid g(-4, 4, 257);
  McmcConfig cfg;
  cfg.block_points = 33;
  GibbsChain c = make_lambda_chain(g, TiltParams(2.0, 2.0, 4), BoundaryScheme::zero(), cfg);
  RngStream r(3);
  for (int s = 0; s < 200; ++s) c.sweep(r);
  std::vector<double> x2, x3;
  for (int d = 0; d < 6000; ++d) {
    c.sweep(r);
    x2.push_back(c.state().at(1, 128));
    x3.push_back(c.state().at(2, 128));
  }
  const double ratio = mean_of(x2) / mean_of(x3);
  CHECK(ratio > std::cbrt(2.0) * 0.8);
}

TEST_CASE("stopping-domain resampling") {
  TimeGrid g(-1, 1, 33);
  McmcConfig cfg;
  cfg.block_points = 9;
  cfg.sweeps = 5;
  TiltParams p(2.0, 2.0, 3);
  GibbsChain c = make_lambda_chain(g, p, BoundaryScheme::flat(1.0), cfg);
  RngStream r(4);
  for (int s = 0; s < 50; ++s) c.sweep(r);
  const Ensemble e = c.state();

  SUBCASE("a three-point domain moves one interior value") {
    const double l = g.time(10), rr = g.time(12);
    Ensemble f = resample_stopping_domain(e, p, 2, l, rr, cfg, r);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 33; ++j)
        if (!(i < 2 && j == 11)) CHECK(f.at(i, j) == e.at(i, j));
    CHECK(f.at(0, 11) != e.at(0, 11));
    CHECK(f.ordered());
  }
  SUBCASE("two points are too few") {
    CHECK_THROWS_AS(resample_stopping_domain(e, p, 1, g.time(3), g.time(4), cfg, r), DomainTooSmall);
  }
  SUBCASE("no lines is a no-op") {
    CHECK(resample_stopping_domain(e, p, 0, -0.5, 0.5, cfg, r) == e);
  }
  SUBCASE("all lines on the full domain is the chain's own sweep") {
    GibbsChain twin = make_lambda_chain(g, p, BoundaryScheme::flat(1.0), cfg);
    twin.mutable_state() = e;
    RngStream a(5), b(5);
    for (std::size_t s = 0; s < cfg.sweeps; ++s) twin.sweep(a);
    Ensemble f = resample_stopping_domain(e, p, 3, -1, 1, cfg, b);
    CHECK(f == twin.state());
  }
  SUBCASE("lines below the domain stay put") {
    Ensemble f = resample_stopping_domain(e, p, 1, -0.5, 0.5, cfg, r);
    for (std::size_t j = 0; j < 33; ++j) {
      CHECK(f.at(1, j) == e.at(1, j));
      CHECK(f.at(2, j) == e.at(2, j));
    }
    CHECK(f.ordered());
  }
}

TEST_CASE("monotone coupling") {
  TimeGrid g(-2, 2, 129);
  McmcConfig cfg;
  TiltParams p(2.0, 2.0, 3), weak(1.0, 2.0, 3);

  SUBCASE("identical chains stay identical") {
    Ensemble s = make_lambda_chain(g, p, BoundaryScheme::flat(0.5), cfg).state();
    CoupledPair pair{s, s, RngStream(6)};
    for (int k = 0; k < 300; ++k) {
      monotone_coupled_sweep(pair, p, cfg);
      REQUIRE(pair.upper == pair.lower);
    }
  }
  SUBCASE("higher boundary") {
    CoupledPair pair{make_lambda_chain(g, p, BoundaryScheme::flat(1.0), cfg).state(),
                     make_lambda_chain(g, p, BoundaryScheme::zero(), cfg).state(), RngStream(7)};
    for (int k = 0; k < 1000; ++k) {
      monotone_coupled_sweep(pair, p, cfg);
      REQUIRE(dominates(pair.upper, pair.lower));
    }
  }
  SUBCASE("weaker tilt on top") {
    CoupledPair pair{make_lambda_chain(g, weak, BoundaryScheme::flat(0.5), cfg).state(),
                     make_lambda_chain(g, p, BoundaryScheme::flat(0.5), cfg).state(), RngStream(8)};
    for (int k = 0; k < 1000; ++k) {
      monotone_coupled_sweep(pair, ChainSetup{weak}, ChainSetup{p}, cfg);
      REQUIRE(dominates(pair.upper, pair.lower));
    }
  }
  SUBCASE("higher wall") {
    CoupledPair pair{make_lambda_chain(g, p, BoundaryScheme::flat(1.0), cfg, 0.5).state(),
                     make_lambda_chain(g, p, BoundaryScheme::flat(1.0), cfg).state(), RngStream(9)};
    for (int k = 0; k < 1000; ++k) {
      monotone_coupled_sweep(pair, ChainSetup{p, 0.5}, ChainSetup{p, 0.0}, cfg);
      REQUIRE(dominates(pair.upper, pair.lower));
    }
  }
  SUBCASE("coupled chains still sample the target") {
    // the heat-bath marginal of either chain must match the block sampler
    CoupledPair pair{make_lambda_chain(g, p, BoundaryScheme::flat(0.5), cfg).state(),
                     make_lambda_chain(g, p, BoundaryScheme::flat(0.5), cfg).state(), RngStream(10)};
    GibbsChain c = make_lambda_chain(g, p, BoundaryScheme::flat(0.5), cfg);
    RngStream r(11);
    for (int k = 0; k < 500; ++k) {
      monotone_coupled_sweep(pair, p, cfg);
      c.sweep(r);
    }
    std::vector<double> a, b;
    for (int k = 0; k < 4000; ++k) {
      for (int s = 0; s < 10; ++s) monotone_coupled_sweep(pair, p, cfg);
      c.sweep(r);
      a.push_back(pair.upper.at(0, 64));
      b.push_back(c.state().at(0, 64));
    }
    CHECK(ks_two_sample(a, b, 1e-3).pass);
  }
}

TEST_CASE("scaling transform") {
  TimeGrid g(-2, 2, 9);
  std::vector<std::vector<double>> v = {{1, 3, 4, 5, 6, 5, 4, 3, 1}, {0.5, 1, 1, 1, 1, 1, 1, 1, 0.5}};
  Ensemble e(g, v);
  CHECK(scaling_transform(e, 1.0) == e);
  Ensemble twice = scaling_transform(scaling_transform(e, 2.0), 3.0);
  Ensemble once = scaling_transform(e, 6.0);
  CHECK(twice.grid().left() == doctest::Approx(once.grid().left()).epsilon(1e-14));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 9; ++j) CHECK(twice.at(i, j) == doctest::Approx(once.at(i, j)).epsilon(1e-14));
  CHECK(once.at(0, 4) == doctest::Approx(6 / std::cbrt(6.0)));
  CHECK(once.grid().right() == doctest::Approx(2 / std::pow(6.0, 2.0 / 3.0)));
}

TEST_CASE("dropping the top line dominates after rescaling") {
  // X^2 of the 3-line field vs lambda^{-1/3} X^1 of the 2-line field on the dilated domain
  const double lam = 2.0, T = 2.0, s = std::pow(lam, 2.0 / 3.0);
  McmcConfig cfg;
  cfg.block_points = 17;
  GibbsChain three = make_lambda_chain(TimeGrid(-T, T, 129), TiltParams(2.0, lam, 3), BoundaryScheme::zero(), cfg);
  GibbsChain two =
      make_lambda_chain(TimeGrid(-s * T, s * T, 129), TiltParams(2.0, lam, 2), BoundaryScheme::zero(), cfg);
  RngStream r(12);
  for (int k = 0; k < 200; ++k) {
    three.sweep(r);
    two.sweep(r);
  }
  std::vector<double> a, b;
  for (int k = 0; k < 5000; ++k) {
    three.sweep(r);
    two.sweep(r);
    a.push_back(three.state().at(1, 64));
    b.push_back(two.state().at(0, 64) / std::cbrt(lam));
  }
  CHECK(mean_of(a) < mean_of(b) + 3.09 * std::hypot(se_of(a), se_of(b)));
}

TEST_CASE("deep lines are pinned") {
  // at n = 8 the bottom line's own scale is about 0.125, so 0.1 is out of reach
  const double eps = 0.5;
  TimeGrid g(-2, 2, 513);
  McmcConfig cfg;
  cfg.block_points = 33;
  GibbsChain c = make_lambda_chain(g, TiltParams(2.0, 2.0, 8), BoundaryScheme::zero(), cfg);
  RngStream r(13);
  for (int k = 0; k < 200; ++k) c.sweep(r);
  std::vector<int> below(8, 0);
  const int n = 600;
  const std::size_t wl = g.index_of(-0.5), wr = g.index_of(0.5);
  for (int d = 0; d < n; ++d) {
    c.sweep(r);
    for (std::size_t i = 0; i < 8; ++i) {
      auto x = c.state().line(i);
      below[i] += *std::max_element(x.begin() + wl, x.begin() + wr + 1) <= eps;
    }
  }
  bool pinned = false;
  for (std::size_t i = 0; i < 8; ++i) pinned = pinned || below[i] >= (1 - eps) * n;
  INFO("deepest line share below eps: " << below[7] / double(n));
  CHECK(pinned);
  for (std::size_t i = 1; i < 8; ++i) CHECK(below[i] >= below[i - 1]);
}

TEST_CASE("thread count does not change results") {
  std::vector<double> a(6), b(6);
  auto job = [](std::vector<double>& out) {
    return [&out](std::size_t c) {
      RngStream r(99, c);
      out[c] = r.normal();
    };
  };
  for_each_chain(6, 1, job(a));
  for_each_chain(6, 4, job(b));
  CHECK(a == b);
  CHECK_THROWS(for_each_chain(3, 2, [](std::size_t c) {
    if (c == 1) throw InvalidArgument("boom");
  }));
}

}  // TEST_SUITE
