#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace entisac {

/// Deterministic seed derivation for a named substream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag,
                              std::uint64_t salt = 0) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ull;
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 32;
  };
  mix(seed);
  for (char c : tag) mix(static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
  mix(salt);
  return h;
}

/// Deterministic random stream. Every consumer of randomness owns a named
/// child stream derived from the run seed, so draws in one subsystem never
/// shift draws in another.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Derives a stream for (seed, tag, salt); equal inputs give equal streams.
  static RandomStream child(std::uint64_t seed, std::string_view tag,
                            std::uint64_t salt = 0) {
    return RandomStream(mix_seed(seed, tag, salt));
  }

  double uniform() { return unit_(engine_); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }

  /// Inclusive integer range.
  int uniform_int(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(engine_);
  }

  double normal() { return normal_(engine_); }

  double normal(double mean, double stddev) { return mean + stddev * normal_(engine_); }

  /// Circularly symmetric complex Gaussian with total variance `variance`.
  std::complex<double> cnormal(double variance) {
    const double s = std::sqrt(variance / 2.0);
    return {s * normal_(engine_), s * normal_(engine_)};
  }

  Eigen::VectorXcd cnormal_vector(int n, double variance) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = cnormal(variance);
    return v;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace entisac
