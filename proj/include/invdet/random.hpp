#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "invdet/linalg.hpp"

namespace invdet {

/// splitmix64 finalizer; used to turn (seed, stream, counter) keys into
/// well-separated engine seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Explicit random-stream handle. Every sampler in the library takes one of
/// these by reference; there is no global generator.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(mix64(seed)) {}

  /// Stream keyed by (seed, stream, counter). Two keys that differ in any
  /// component give unrelated sequences, and the result does not depend on
  /// which other keys were drawn before.
  static RandomStream keyed(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return RandomStream(mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL) ^
                              (counter * 0xd1b54a32d192ed03ULL)));
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return normal_(engine_); }

  /// Circular complex normal with unit variance (1/2 per real component).
  Complex complex_normal() {
    constexpr double kHalf = 0.70710678118654752440;
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {kHalf * re, kHalf * im};
  }

  ComplexVector complex_normal_vector(Index n) {
    ComplexVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  ComplexMatrix complex_normal_matrix(Index rows, Index cols) {
    ComplexMatrix a(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) a(i, j) = complex_normal();
    return a;
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace invdet
