#pragma once

#include <array>
#include <cstdint>

namespace tiltlab {

// xoshiro256** keyed by (seed, stream); every random draw in the library goes through one of these.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64();
  // open interval (0, 1), 53 random bits
  double uniform();
  double normal();

  RngStream substream(std::uint64_t id) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

double normal_cdf(double x);
// upper tail 1 - Phi(x), accurate for large x
double normal_sf(double x);
double normal_quantile(double p);

// Inverse-CDF draw from N(mean, sd^2) restricted to (lo, hi) given a uniform u; monotone in
// mean, lo, hi and u.
double truncated_normal_inverse(double mean, double sd, double lo, double hi, double u);

}  // namespace tiltlab
