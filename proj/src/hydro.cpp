#include "tiltlab/hydro.hpp"

#include <cmath>

namespace tiltlab {

std::pair<double, double> tangency_location(double T, double alpha, double a) {
  if (!(alpha > 0) || !(alpha < a)) throw DomainError("tangency needs 0 < alpha < a");
  const double s = std::sqrt(1.0 - alpha / a);
  return {T * (1.0 - s), T * (1.0 + s)};
}

double hydro_limit_shape(const SlopePair& pair, double t) {
  if (!pair.left.is_finite() || !pair.right.is_finite())
    throw InvalidArgument("limit shape needs finite slopes");
  const double L = pair.left.value(), R = pair.right.value();
  if (t <= L / 2) return -L * t + L * L / 4;
  if (t >= -R / 2) return R * t + R * R / 4;
  return -t * t;
}

int n0_threshold(double T, double lambda) {
  if (!(T > 1) || !(lambda > 1)) throw InvalidArgument("n0 needs T > 1 and lambda > 1");
  // the tiny slack keeps exact powers (lambda = T^32) from rounding across the boundary
  return 1 + static_cast<int>(std::floor(32.0 * std::log(T) / std::log(lambda) + 1e-12));
}

HydroGeometry::HydroGeometry(double T_, double K_, double lam, double d, double c)
    : T(T_), K(K_), lambda(lam), delta(d), err_const(c) {
  if (!(d > 0 && d < 0.05)) throw InvalidArgument("delta must lie in (0, 1/20)");
  n0 = n0_threshold(T, lambda);
  beta = 0.5 * (1.0 + std::sqrt(1.0 / lambda));
  gamma = 1.0 - 2.0 * K / T;
  if (!(gamma > 0)) throw InvalidArgument("need T > 2K");
}

double HydroGeometry::parabola(int k, double t) const {
  return std::pow(lambda, k - 1) * t * t;
}

namespace {

void check_light(const HydroGeometry& g, int k) {
  if (k < 2 || k > g.n0) throw IndexOutOfRange("light index must lie in [2, n0]");
}

// distance from T back to the inner tangency from (T, -p_k(T) + A) to -p_k
double touch_gap(const HydroGeometry& g, int k, double A) {
  const double ratio = A / (g.T * g.T * std::pow(g.lambda, k - 1));
  if (!(ratio > 0 && ratio < 1)) throw DomainError("anchor is not above the parabola");
  return g.T * std::sqrt(ratio);
}

double inner_touch(const HydroGeometry& g, int k, double A) { return g.T - touch_gap(g, k, A); }

}  // namespace

double start_offset(const HydroGeometry& g, int k) {
  return g.T * g.T - 2 * g.K * g.T + 4.0 * (g.n0 - k + 1) * std::pow(g.T, g.delta);
}

double tangency_point(const HydroGeometry& g, int k) { return inner_touch(g, k, start_offset(g, k)); }

LightScaffold light_path_scaffold(const HydroGeometry& g, int k) {
  check_light(g, k);
  LightScaffold s;
  const double T = g.T;
  const double Td = std::pow(T, g.delta);
  const double decay = std::pow(g.lambda, -(k - 1) / 2.0);
  s.S = start_offset(g, k);
  s.bracket_lo = T * (1.0 - decay);
  s.bracket_hi = T * (1.0 - std::sqrt(g.gamma) * decay);
  s.xi = tangency_point(g, k);
  s.xi_bar = 0.5 * (s.xi + tangency_point(g, k + 1));
  const double lift = (4.0 * (g.n0 - k) + 2.0) * Td;

  if (k == g.n0) {
    s.floor = Piecewise{{}, [g, k](double t) { return -g.parabola(k, t); }};
  } else {
    const double xb = s.xi_bar, at_xb = -g.parabola(k, xb);
    // T - xb underflows to zero for deep lines, so the chord slope is expanded by hand
    const double back = 0.5 * (touch_gap(g, k, s.S) + touch_gap(g, k + 1, start_offset(g, k + 1)));
    const double slope = -std::pow(g.lambda, k - 1) * (T + xb) + (T * T - 2 * g.K * T) / back;
    s.floor = Piecewise{{-xb, xb}, [=](double t) {
                          double a = std::fabs(t);
                          double hat = a >= xb ? at_xb + slope * ((a - T) + back) : -g.parabola(k, t);
                          return lift + hat;
                        }};
  }

  const double anchor = T * T - 2 * g.K * T + 2 * Td;
  const double x_hat = inner_touch(g, k, anchor), hat_back = touch_gap(g, k, anchor);
  s.path_touch = x_hat;
  const double lk = std::pow(g.lambda, k - 1);
  // tangent line = parabola + lambda^{k-1} (a - x_hat)^2, with a - x_hat taken relative to T
  auto hat = [=](double t) {
    double a = std::fabs(t);
    if (a < x_hat) return -g.parabola(k, t);
    const double off = (a - T) + hat_back;
    return -lk * a * a + lk * off * off;
  };
  s.hat_path = Piecewise{{-x_hat, x_hat}, hat};
  s.path = Piecewise{{-x_hat, x_hat}, [=](double t) { return lift + hat(t); }};
  return s;
}

double scaffold_gap(const HydroGeometry& g, int k) {
  check_light(g, k);
  // the tangent line exceeds the parabola by lambda^{k-1} (x - touch)^2; both offsets are taken from T
  const double bar_back =
      0.5 * (touch_gap(g, k, start_offset(g, k)) + touch_gap(g, k + 1, start_offset(g, k + 1)));
  const double hat_back = touch_gap(g, k, g.T * g.T - 2 * g.K * g.T + 2 * std::pow(g.T, g.delta));
  const double d = hat_back - bar_back;
  return std::pow(g.lambda, k - 1) * d * d;
}

std::pair<double, double> err_bounds(const HydroGeometry& g, int k, double t) {
  const double T = g.T;
  if (std::fabs(t) > T) throw InvalidArgument("|t| must not exceed T");
  const double Td = std::pow(T, g.delta);
  const double err = Td * std::sqrt(T - std::fabs(t)) + std::pow(T, -10.0);
  const double xi = tangency_point(g, k);
  const double cut = xi - g.err_const * std::pow(T, 1.5 * g.delta) * std::pow(T - xi, 0.75) *
                              std::pow(g.lambda, -(k - 1) / 6.0);
  return {err, std::fabs(t) >= cut ? err : Td};
}

Piecewise heavy_envelope(const HydroGeometry& g, int k, double H) {
  if (k <= g.n0) throw IndexOutOfRange("heavy index must exceed n0");
  if (H > 2 * g.T * g.T) throw InvalidArgument("H must not exceed 2 T^2");
  const double T = g.T;
  const double d1 = T * std::pow(g.lambda, -k / 2.0);
  const double d2 = std::pow(T, g.delta) * std::pow(g.lambda, -(k - g.n0) / 5.0);
  return Piecewise{{-T + d1, T - d1},
                   [=](double t) { return std::fabs(t) >= T - d1 ? H + d2 : d2; }};
}

}  // namespace tiltlab
