#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "crahnflood/errors.hpp"

namespace crahn {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// mt19937_64 engine with hand-rolled variate transforms. The std::*
// _distribution classes are implementation-defined, which would break the
// byte-identical reproducibility guarantee across toolchains; everything here
// is pinned by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

  // Independent stream derived from a master seed (one per round / trial).
  Rng(std::uint64_t master, std::uint64_t stream)
      : eng_(splitmix64(splitmix64(master) ^ (0x9E3779B97F4A7C15ull * (stream + 1)))) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // Unit-mean exponential; log1p keeps full precision near u = 0.
  double expo() { return -std::log1p(-u01()); }

  // Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t t = (-n) % n;  // 2^64 mod n
    std::uint64_t x;
    do {
      x = eng_();
    } while (x < t);
    return x % n;
  }

  // Exact Poisson. Knuth's product method for small means; larger means are
  // split into independent halves (sums of Poissons are Poisson), which keeps
  // the product method away from exp() underflow.
  long poisson(double mean) {
    if (mean < 0 || !std::isfinite(mean)) fail(Errc::kArgOutOfDomain, "poisson: bad mean");
    if (mean == 0) return 0;
    if (mean > 30.0) return poisson(mean / 2) + poisson(mean / 2);
    double limit = std::exp(-mean);
    double prod = 1.0;
    long k = 0;
    do {
      ++k;
      prod *= u01();
    } while (prod > limit);
    return k - 1;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace crahn
