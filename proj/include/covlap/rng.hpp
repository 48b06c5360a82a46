#ifndef COVLAP_RNG_HPP
#define COVLAP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace covlap {

/// Deterministic random stream. Doubles are produced directly from the
/// mt19937_64 output stream, so sequences are bit-identical across
/// platforms and standard library implementations (std::uniform_real_distribution
/// makes no such guarantee).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Derive an independent stream for a keyed subtask (e.g. sample index).
  static Rng keyed(std::uint64_t seed, std::uint64_t key) {
    // splitmix64 scramble of (seed, key)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (key + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

  std::uint64_t bits() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Standard normal via Box-Muller (deterministic, no library distribution).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  /// Isotropic direction on the Euclidean unit sphere in dimension d.
  std::vector<double> unit_vector(int d) {
    std::vector<double> v(static_cast<std::size_t>(d));
    double s = 0.0;
    do {
      s = 0.0;
      for (auto& x : v) {
        x = normal();
        s += x * x;
      }
    } while (s == 0.0);
    const double inv = 1.0 / std::sqrt(s);
    for (auto& x : v) x *= inv;
    return v;
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace covlap

#endif  // COVLAP_RNG_HPP
