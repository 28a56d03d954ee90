#include "tiltlab/rng.hpp"

#include <cmath>
#include <limits>

#include "tiltlab/core.hpp"

namespace tiltlab {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::uint64_t x = seed;
  std::uint64_t key = splitmix64(x) ^ (stream * 0xd1b54a32d192ed03ULL);
  std::uint64_t y = key;
  for (auto& w : s_) w = splitmix64(y);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  // (k + 0.5) / 2^53 never hits 0 or 1
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

RngStream RngStream::substream(std::uint64_t id) const {
  std::uint64_t x = stream_ ^ 0x5851f42d4c957f2dULL;
  std::uint64_t h = splitmix64(x) + id;
  return RngStream(seed_, splitmix64(h));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw InvalidArgument("normal_quantile: p outside [0,1]");
  }
  // Acklam's rational approximation followed by one Halley step
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                             1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                             6.680131188771972e+01,  -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                             -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                             3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - plow) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  // refine against whichever tail is better conditioned
  double e = p < 0.5 ? normal_cdf(x) - p : (1.0 - p) - normal_sf(x);
  double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
  x = x - u / (1 + x * u / 2);
  return x;
}

double truncated_normal_inverse(double mean, double sd, double lo, double hi, double u) {
  if (!(hi > lo)) throw InvalidArgument("truncated normal: empty interval");
  double a = (lo - mean) / sd;
  double b = (hi - mean) / sd;
  double z;
  if (a > 30) {
    // far tail: exponential approximation of the normal tail
    double w = std::isfinite(b) ? -std::expm1(-a * (b - a)) : 1.0;
    z = a - std::log1p(-u * w) / a;
  } else if (b < -30) {
    double w = std::isfinite(a) ? -std::expm1(b * (b - a)) : 1.0;
    z = b + std::log1p(-(1 - u) * w) / (-b);
  } else if (a > 0) {
    // upper tail: work with survival functions
    double sa = normal_sf(a), sb = normal_sf(b);
    double s = sa - u * (sa - sb);
    z = s > 0 ? -normal_quantile(s) : a;
  } else if (b < 0) {
    double fa = normal_cdf(a), fb = normal_cdf(b);
    double f = fa + u * (fb - fa);
    z = f > 0 ? normal_quantile(f) : b;
  } else {
    double fa = normal_cdf(a), fb = normal_cdf(b);
    z = normal_quantile(fa + u * (fb - fa));
  }
  double x = mean + sd * z;
  if (x <= lo) x = std::nextafter(lo, hi);
  if (x >= hi) x = std::nextafter(hi, lo);
  return x;
}

}  // namespace tiltlab
