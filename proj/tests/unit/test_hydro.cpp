#include <cmath>
#include <algorithm>

#include "doctest.h"
#include "tiltlab/hydro.hpp"
#include "tiltlab/rng.hpp"

using namespace tiltlab;

namespace {

// inner root of a x^2 - 2 a T x + alpha T^2 = 0 by bisection on [0, T]
double tangent_solve(double T, double alpha, double a) {
  double lo = 0, hi = T;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (a * m * m - 2 * a * T * m + alpha * T * T > 0 ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

SlopePair pair(double L, double R) { return SlopePair(ExtendedReal::finite(L), ExtendedReal::finite(R)); }

}  // namespace

TEST_SUITE("hydro") {

TEST_CASE("tangency examples") {
  CHECK(tangency_location(2, 1.5, 2).first == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tangency_location(2, 1.5, 2).first == doctest::Approx(tangent_solve(2, 1.5, 2)).epsilon(1e-12));
  CHECK(tangency_location(3, 2 - 1e-12, 2).first == doctest::Approx(3).epsilon(1e-5));
  CHECK(tangency_location(3, 1e-12, 2).first == doctest::Approx(0).scale(1).epsilon(1e-5));
  CHECK_THROWS_AS(tangency_location(3, 2, 2), DomainError);
  CHECK_THROWS_AS(tangency_location(3, 0, 2), DomainError);
}

TEST_CASE("tangency against a numeric solve and the product identity") {
  RngStream r(1);
  for (int i = 0; i < 100; ++i) {
    const double T = 0.5 + 50 * r.uniform(), a = 0.1 + 5 * r.uniform(), alpha = a * (0.001 + 0.998 * r.uniform());
    auto [in, out] = tangency_location(T, alpha, a);
    CHECK(std::fabs(in - tangent_solve(T, alpha, a)) <= 1e-10 * T);
    CHECK(in * out == doctest::Approx(T * T * alpha / a).epsilon(1e-12));
    // the line from (T, -alpha T^2) through (in, -a in^2) has the parabola's slope there
    const double slope = (-alpha * T * T + a * in * in) / (T - in);
    CHECK(slope == doctest::Approx(-2 * a * in).epsilon(1e-8));
  }
}

TEST_CASE("limit shape") {
  const double L = -3, R = -1;
  CHECK(hydro_limit_shape(pair(L, R), L / 2) == doctest::Approx(-L * L / 4));
  for (double t = L / 2; t <= -R / 2; t += 0.01) CHECK(hydro_limit_shape(pair(L, R), t) == doctest::Approx(-t * t));
  for (double t0 : {L / 2, -R / 2}) {
    const double h = 1e-6;
    const double fl = hydro_limit_shape(pair(L, R), t0 - h), f0 = hydro_limit_shape(pair(L, R), t0),
                 fr = hydro_limit_shape(pair(L, R), t0 + h);
    CHECK(std::fabs(fl - f0) < 1e-5);
    CHECK(std::fabs(fr - f0) < 1e-5);
    CHECK((f0 - fl) / h == doctest::Approx((fr - f0) / h).epsilon(1e-4));
  }
  // concave: second differences never positive
  for (double t = -10; t < 10; t += 0.05) {
    const double d2 = hydro_limit_shape(pair(L, R), t - 0.05) - 2 * hydro_limit_shape(pair(L, R), t) +
                      hydro_limit_shape(pair(L, R), t + 0.05);
    CHECK(d2 <= 1e-12);
  }
  const double K = 1.3;
  double best = -INFINITY, arg = 0;
  for (double t = -10; t <= 10; t += 0.01) {
    CHECK(hydro_limit_shape(pair(-2 * K, -2 * K), t) == doctest::Approx(hydro_limit_shape(pair(-2 * K, -2 * K), -t)));
    if (hydro_limit_shape(pair(-2 * K, -2 * K), t) > best) {
      best = hydro_limit_shape(pair(-2 * K, -2 * K), t);
      arg = t;
    }
  }
  CHECK(std::fabs(arg) < 0.011);
  CHECK(best == doctest::Approx(0).scale(1));
}

TEST_CASE("light/heavy threshold") {
  CHECK(n0_threshold(10, std::pow(10.0, 33)) == 1);
  // at exact equality the closed form still admits the second line
  CHECK(n0_threshold(10, std::pow(10.0, 32)) == 2);
  CHECK(n0_threshold(10, std::pow(10.0, 40)) == 1);
  CHECK(n0_threshold(7, 49) == 17);
  CHECK(n0_threshold(10, std::exp(2.0)) == 37);
}

TEST_CASE("geometry constants") {
  HydroGeometry g(1e3, 1, 2, 0.02);
  CHECK(g.beta > 0.5);
  CHECK(g.beta < 1);
  CHECK(g.beta == doctest::Approx(0.5 * (1 + std::sqrt(0.5))));
  CHECK(g.gamma == doctest::Approx(1 - 2.0 / 1e3));
  CHECK(g.n0 >= 1);
}

TEST_CASE("light-path scaffold") {
  HydroGeometry g(1e3, 1, 2, 0.02);
  const double T = g.T, Td = std::pow(T, g.delta);
  for (int k = 2; k <= g.n0; ++k) {
    LightScaffold s = light_path_scaffold(g, k);
    CHECK(s.S == doctest::Approx(T * T - 2 * g.K * T + 4.0 * (g.n0 - k + 1) * Td));
    CHECK(s.xi >= s.bracket_lo);
    CHECK(s.xi <= s.bracket_hi + 1e-12 * T);
    // tangency from (T, -p_k(T) + S) satisfies (T - x)^2 = S / lambda^{k-1}
    const double target = s.S / std::pow(2.0, k - 1);
    double lo = 0, hi = T;
    for (int it = 0; it < 200; ++it) {
      double m = 0.5 * (lo + hi);
      ((T - m) * (T - m) > target ? lo : hi) = m;
    }
    CHECK(std::fabs(s.xi - 0.5 * (lo + hi)) <= 1e-12 * T);
    CHECK(std::isfinite(s.floor(s.xi_bar)));
    CHECK(std::isfinite(s.floor(T)));
    if (k < g.n0) {
      CHECK(s.floor(T) == doctest::Approx(-g.parabola(k, T) + T * T - 2 * g.K * T + (4.0 * (g.n0 - k) + 2) * Td));
      CHECK(s.floor(-T) == doctest::Approx(s.floor(T)));
    }
    // the hat path hugs the parabola exactly on its inner stretch
    for (double t = -s.path_touch; t <= s.path_touch; t += s.path_touch / 50)
      CHECK(s.hat_path(t) + g.parabola(k, t) == doctest::Approx(0).scale(T * T));
    // the lift above the parabola drops below double resolution of p_k(T) for deep lines
    if (k <= 30) CHECK(s.hat_path(T) + g.parabola(k, T) > 0);
  }
  // beyond a few dozen lines both sides are ~2^k T^2 and the difference drowns in rounding
  for (int k = 2; k <= g.n0; ++k) {
    CHECK(scaffold_gap(g, k) >= std::pow(std::sqrt(g.gamma) - g.beta, 2) * T * T);
    if (k > 30) continue;
    LightScaffold s = light_path_scaffold(g, k);
    CHECK(s.hat_path(s.xi_bar) + g.parabola(k, s.xi_bar) == doctest::Approx(scaffold_gap(g, k)).epsilon(1e-6));
  }
  CHECK_THROWS_AS(light_path_scaffold(g, 1), IndexOutOfRange);
  CHECK_THROWS_AS(light_path_scaffold(g, g.n0 + 1), IndexOutOfRange);
}

TEST_CASE("error profiles") {
  HydroGeometry g(50, 1, 2, 0.02);
  const double T = g.T, Td = std::pow(T, g.delta);
  CHECK(err_bounds(g, 2, T).first == doctest::Approx(std::pow(T, -10)));
  CHECK(err_bounds(g, 2, -T).first == doctest::Approx(std::pow(T, -10)));
  CHECK(err_bounds(g, 2, 0).first == doctest::Approx(std::pow(T, g.delta + 0.5) + std::pow(T, -10)));
  for (int k = 2; k <= std::min(g.n0, 6); ++k)
    for (double t = -T; t <= T; t += T / 100) {
      auto [e, ep] = err_bounds(g, k, t);
      CHECK(ep <= e + 1e-15);
      CHECK((ep == e || ep == Td));
    }
  CHECK_THROWS_AS(err_bounds(g, 2, T + 1), InvalidArgument);
}

TEST_CASE("heavy envelopes") {
  HydroGeometry g(20, 1, 2, 0.02);
  const double T = g.T, H = 2 * T * T;
  const int k = g.n0 + 1;
  Piecewise e = heavy_envelope(g, k, H);
  const double d2 = std::pow(T, g.delta) * std::pow(2.0, -1.0 / 5);
  CHECK(e(T) == doctest::Approx(H + d2));
  CHECK(e(-T) == doctest::Approx(H + d2));
  CHECK(e(0) == doctest::Approx(d2));
  CHECK(heavy_envelope(g, k + 1, H)(0) / e(0) == doctest::Approx(std::pow(2.0, -0.2)));
  for (int j = k; j < k + 5; ++j)
    for (double t = -T; t <= T; t += 0.01) CHECK(heavy_envelope(g, j + 1, H)(t) <= heavy_envelope(g, j, H)(t));
  CHECK_THROWS_AS(heavy_envelope(g, g.n0, H), IndexOutOfRange);
  CHECK_THROWS_AS(heavy_envelope(g, k, 3 * T * T), InvalidArgument);
}

TEST_CASE("geometry is deterministic") {
  HydroGeometry a(300, 2, 3), b(300, 2, 3);
  LightScaffold s = light_path_scaffold(a, 2), t = light_path_scaffold(b, 2);
  CHECK(s.xi == t.xi);
  CHECK(s.path(17.3) == t.path(17.3));
}

}  // TEST_SUITE
