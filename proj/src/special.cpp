#include "tiltlab/special.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tiltlab/core.hpp"

namespace tiltlab {
namespace {

long double airy_series(long double x) {
  const long double c1 = 1.0L / (std::cbrt(9.0L) * std::tgamma(2.0L / 3.0L));
  const long double c2 = 1.0L / (std::cbrt(3.0L) * std::tgamma(1.0L / 3.0L));
  const long double x3 = x * x * x;
  long double f = 1.0L, g = x, tf = 1.0L, tg = x;
  for (int k = 0; k < 200; ++k) {
    tf *= x3 / ((3.0L * k + 2) * (3.0L * k + 3));
    tg *= x3 / ((3.0L * k + 3) * (3.0L * k + 4));
    f += tf;
    g += tg;
    if (std::fabs(tf) < 1e-22L * std::fabs(f) && std::fabs(tg) < 1e-22L * (std::fabs(g) + 1e-300L))
      break;
  }
  return c1 * f - c2 * g;
}

// coefficients of the large-argument expansion
double u_coef(int k) {
  double u = 1.0;
  for (int j = 1; j <= k; ++j)
    u *= (6.0 * j - 5) * (6.0 * j - 3) * (6.0 * j - 1) / ((2.0 * j - 1) * 216.0 * j);
  return u;
}

double airy_asym_pos(double x) {
  const double z = 2.0 / 3.0 * x * std::sqrt(x);
  double sum = 1.0, prev = 1.0;
  for (int k = 1; k < 60; ++k) {
    double term = u_coef(k) / std::pow(z, k);
    if (term > prev) break;
    sum += (k % 2 ? -term : term);
    prev = term;
  }
  return std::exp(-z) / (2.0 * std::sqrt(M_PI) * std::pow(x, 0.25)) * sum;
}

double airy_asym_neg(double x) {
  const double y = -x;
  const double z = 2.0 / 3.0 * y * std::sqrt(y);
  double p = 0.0, q = 0.0, prev = INFINITY;
  for (int k = 0; k < 80; ++k) {
    double term = u_coef(k) / std::pow(z, k);
    if (term > prev) break;
    prev = term;
    double sgn = (k / 2) % 2 ? -1.0 : 1.0;
    if (k % 2 == 0)
      p += sgn * term;
    else
      q += sgn * term;
  }
  return (std::cos(z - M_PI / 4) * p + std::sin(z - M_PI / 4) * q) /
         (std::sqrt(M_PI) * std::pow(y, 0.25));
}

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6 * (fa + 4 * flm + fm);
  double right = (b - m) / 6 * (fm + 4 * frm + fb);
  double diff = left + right - whole;
  if (depth <= 0 || std::fabs(diff) <= 15 * tol) return left + right + diff / 15;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

// Tabulated integral of Ai^2 from the first zero, with cubic Hermite interpolation.
struct SquareIntegral {
  double z0, z1, h;
  std::vector<double> cum, dens;
  double total;

  SquareIntegral() {
    z0 = -airy_first_zero();
    z1 = 12.0;
    const int n = 24000;
    h = (z1 - z0) / n;
    cum.assign(n + 1, 0.0);
    dens.resize(n + 1);
    auto sq = [](double z) {
      double v = airy_ai(z);
      return v * v;
    };
    for (int i = 0; i <= n; ++i) dens[i] = sq(z0 + i * h);
    for (int i = 0; i < n; ++i) {
      double a = z0 + i * h;
      // 3-point Gauss-Legendre per cell: exact to degree 5
      const double r = std::sqrt(0.6);
      double m = a + 0.5 * h;
      cum[i + 1] = cum[i] + h / 18 * (5 * sq(m - 0.5 * h * r) + 8 * sq(m) + 5 * sq(m + 0.5 * h * r));
    }
    total = cum[n];
  }

  double upto(double z) const {
    if (z <= z0) return 0.0;
    if (z >= z1) return total;
    double s = (z - z0) / h;
    std::size_t i = std::min(static_cast<std::size_t>(s), cum.size() - 2);
    double t = s - static_cast<double>(i);
    double y0 = cum[i], y1 = cum[i + 1], d0 = dens[i] * h, d1 = dens[i + 1] * h;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * d1;
  }
};

const SquareIntegral& square_integral() {
  static const SquareIntegral table;
  return table;
}

double scale_of(double a) {
  if (!(a > 0) || !std::isfinite(a)) throw InvalidArgument("strength must be positive");
  return std::cbrt(2.0 * a);
}

}  // namespace

double airy_ai(double x) {
  if (std::isnan(x)) return x;
  if (x >= 5.5) return airy_asym_pos(x);
  if (x <= -8.5) return airy_asym_neg(x);
  double s = static_cast<double>(airy_series(x));
  if (x > 4.5) {
    double w = x - 4.5;
    return (1 - w) * s + w * airy_asym_pos(x);
  }
  if (x < -7.5) {
    double w = -7.5 - x;
    return (1 - w) * s + w * airy_asym_neg(x);
  }
  return s;
}

double airy_first_zero() {
  static const double zero = [] {
    double lo = -3.0, hi = -2.0;  // Ai(-3) < 0 < Ai(-2)
    for (int i = 0; i < 60; ++i) {
      double mid = 0.5 * (lo + hi);
      if (airy_ai(mid) < 0)
        lo = mid;
      else
        hi = mid;
    }
    return -0.5 * (lo + hi);
  }();
  return zero;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double fs_density(double x, double a) {
  const double s = scale_of(a);
  if (x < 0) return 0.0;
  static const double norm = [] {
    const double w = airy_first_zero();
    return adaptive_simpson(
        [](double z) {
          double v = airy_ai(z);
          return v * v;
        },
        -w, 12.0, 1e-15);
  }();
  double v = airy_ai(s * x - airy_first_zero());
  return s * v * v / norm;
}

double fs_cdf(double x, double a) {
  const double s = scale_of(a);
  if (x <= 0) return 0.0;
  const auto& tab = square_integral();
  return tab.upto(s * x - airy_first_zero()) / tab.total;
}

double fs_quantile(double u, double a) {
  const double s = scale_of(a);
  if (!(u > 0 && u < 1)) throw InvalidArgument("fs_quantile: u must be in (0,1)");
  const auto& tab = square_integral();
  double lo = tab.z0, hi = tab.z1, target = u * tab.total;
  for (int i = 0; i < 100 && hi - lo > 1e-14; ++i) {
    double mid = 0.5 * (lo + hi);
    if (tab.upto(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return (0.5 * (lo + hi) + airy_first_zero()) / s;
}

double fs_tail_exponent(double t, double a) {
  if (!(a > 0)) throw InvalidArgument("strength must be positive");
  if (t < 0) throw InvalidArgument("t must be nonnegative");
  return 2.0 * std::sqrt(2.0 * a) / 3.0 * std::pow(t, 1.5);
}

}  // namespace tiltlab
