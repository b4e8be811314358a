#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "homogenlab/homogenize.hpp"
#include "homogenlab/network.hpp"
#include "homogenlab/numerics.hpp"

namespace homogenlab {

/// Columns x_1 … x_ñ of an n×ñ matrix, each of unit ℓ2 norm.
struct DirectionSet {
  Matrix directions;

  /// Rejects empty sets and columns whose norm is off by more than 1e-12.
  void validate() const;
  static DirectionSet identity(std::size_t n) { return {Matrix::identity(n)}; }
};

/// sqrt((1/ñ)·Σ_{k>m} σ_k(X)²): no one-hidden-layer unbiased relu network fed
/// with m linear measurements can do better on the directions of X.
/// 0 when m ≥ ñ.
double one_layer_lower_bound(std::size_t m, const DirectionSet& x);

/// 2×n matrix with columns (1, w_k)/sqrt(1 + w_k²). Rejects repeated w.
Matrix uat_negative_matrix(std::span<const double> w);

/// sqrt(1 − 2/n) for n > 4 and sqrt(n/8) for n ≤ 4. Rejects n = 0.
double uat_negative_bound(std::size_t n);

struct RipReport {
  std::size_t order = 0;
  double delta = 0.0;
  double delta_lb = 0.0;
  double delta_ub = 0.0;
  std::size_t supports_checked = 0;
};

inline constexpr std::size_t kDefaultSupportCap = 200000;

/// C(n, k), saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k);

/// Restricted isometry constant of order t by enumerating every support of
/// size t (lexicographic) and taking extreme Gram eigenvalues.
RipReport rip_exhaustive(const Matrix& a, std::size_t t, std::size_t cap = kDefaultSupportCap);

enum class NormTag { l1, l2, nuclear };

struct ConditioningReport {
  double tau_hat = 0.0;
  double rho_hat = 0.0;
  std::size_t pairs_sampled = 0;
  NormTag norm_tag = NormTag::l2;
  /// M with ‖·‖_II ≤ M·‖·‖₂: 1 for l2, √n for l1, √k for the nuclear norm of k×k.
  double norm_equiv_m = 1.0;
};

/// ‖v‖_II for the given tag. For `nuclear`, v is a row-major k×k matrix.
double norm_ii(std::span<const double> v, NormTag tag);

/// Splits x into pieces whose ℓ2 norms sum to ‖x‖_II: one piece per
/// coordinate for l1, one rank-one piece per singular value for nuclear, x
/// itself for l2.
std::vector<Vector> norm_decomposition(std::span<const double> x, NormTag tag);

/// One-sided sampled estimates of the conditioning constants of g on U:
/// tau_hat is the smallest ‖g(x1) − g(x2)‖₂/‖x1 − x2‖₂ over `pairs` sampled
/// pairs from U (so tau_hat ≥ τ), rho_hat the largest
/// ‖g(x1) − g(x2)‖₂/‖x1 − x2‖_II over the same pairs plus `pairs` Gaussian
/// pairs in ℝⁿ (so rho_hat ≤ ρ). Coincident pairs are skipped.
ConditioningReport empirical_conditioning(const Evaluatable& g, const SignalSampler& sampler, std::size_t pairs,
                                          NormTag tag, std::uint64_t seed);

/// Observed (1 − min, max − 1) of (1/m)·‖𝒜(X)‖₁ over `samples` random
/// symmetric unit-Frobenius X of rank ≤ 2r.
std::pair<double, double> lowrank_rip_sample(const Matrix& a, std::size_t r, std::size_t samples,
                                             std::uint64_t seed);

struct EckartYoungGap {
  double tail = 0.0;
  double best_candidate_err = 0.0;
};

/// Truncation tail against the best of `candidates` random rank-r matrices
/// P·M, with P the orthogonal projector onto a random r-dimensional subspace.
EckartYoungGap eckart_young_gap(const Matrix& m, std::size_t r, std::size_t candidates, std::uint64_t seed);

}  // namespace homogenlab
