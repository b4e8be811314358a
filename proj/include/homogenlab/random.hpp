#pragma once

#include <cstdint>
#include <random>

#include "homogenlab/numerics.hpp"

namespace homogenlab {

/// Seeded generator. Independent streams come from `split`, which hashes the
/// parent seed with a stream index (SplitMix64), so results never depend on
/// the order in which streams are consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  Rng split(std::uint64_t stream) const { return Rng(mix(seed_ ^ mix(stream + 0x632be59bd9b4e019ULL))); }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  double exponential() { return std::exponential_distribution<double>(1.0)(engine_); }
  bool coin() { return (engine_() >> 63) != 0; }

  Vector normal_vector(std::size_t n, double stddev = 1.0);
  Matrix normal_matrix(std::size_t rows, std::size_t cols, double stddev = 1.0);
  /// Uniform point on the Euclidean sphere of the given radius.
  Vector sphere_point(std::size_t n, double radius = 1.0);
  /// Point on the unit ℓ1 sphere: symmetric Dirichlet(1) magnitudes with
  /// independent random signs.
  Vector l1_sphere_point(std::size_t n);

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Gaussian measurement matrix with i.i.d. N(0, 1/rows) entries.
Matrix gaussian_measurement_matrix(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace homogenlab
