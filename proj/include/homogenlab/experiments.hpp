#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "homogenlab/homogenize.hpp"
#include "homogenlab/numerics.hpp"
#include "homogenlab/random.hpp"

namespace homogenlab {

/// The 2n signed unit vectors ±e_i, in the order +e_0, −e_0, +e_1, …
std::vector<Vector> signed_unit_vectors(std::size_t n);

/// max over the 2n signed unit vectors of ‖f(A·x) − x‖₂ (= relative error, ‖x‖₂ = 1).
double max_sparse_error(const Evaluatable& f, const Matrix& a);

struct ImpossibilityRow {
  std::size_t width = 0;
  double max_rel_error = 0.0;
  double bound = 0.0;
  double fit_mse = 0.0;
  /// "ok", "fit_failed" (error columns NaN) or "bound_violated".
  std::string status;
};

/// For each width trains an unbiased one-hidden-layer relu network to invert a
/// Gaussian m×n matrix on 1-sparse signals and records its worst error on the
/// signed unit vectors next to sqrt(1 − m/n). Requires m ≤ n (m = n is the
/// degenerate zero bound).
std::vector<ImpossibilityRow> impossibility_experiment(std::size_t m, std::size_t n,
                                                       const std::vector<std::size_t>& widths, const FitConfig& fit,
                                                       std::uint64_t seed);

/// Gaussian m×n matrix with columns scaled to unit ℓ2 norm, redrawn until
/// its order-`order` isometry constant is at most `delta_max`. Rejected when
/// `max_draws` draws all miss.
Matrix sample_rip_matrix(std::size_t m, std::size_t n, std::size_t order, double delta_max, Rng& rng,
                         std::size_t max_draws = 100000);

struct RecoveryConfig {
  std::size_t n = 6;
  std::size_t m = 4;
  std::size_t s = 1;
  /// Positive: draw A with sample_rip_matrix at this δ_2s target. Otherwise a
  /// single N(0, 1/m) draw, accepted when δ_2s < 1.
  double rip_target = 0.6;
  FitConfig fit = {.width = 64, .learning_rate = 0.1, .steps = 20000, .restarts = 2};
  RecoverySampling sampling;
  std::vector<double> noise_levels = {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1};
  std::size_t trials = 4;
  std::uint64_t seed = 0;
};

struct RecoveryRow {
  /// "zero", "exact", "approx" or "noisy".
  std::string kind;
  std::size_t index = 0;
  double norm_x = 0.0;
  double sigma_s_l1 = 0.0;
  double norm_e = 0.0;
  double error = 0.0;
};

struct RecoveryOutcome {
  Matrix a;
  double delta_2s = 0.0;
  double lipschitz = 0.0;
  NetworkSpec network;
  std::vector<RecoveryRow> rows;
};

/// ℓ1 distance from x to its best s-term approximation.
double sparse_tail_l1(std::span<const double> x, std::size_t s);

/// Builds the two-hidden-layer inverse for a Gaussian A (see rip_target) and
/// measures ‖f(Ax + e) − x‖₂ on exactly sparse, approximately sparse and
/// noisy inputs.
RecoveryOutcome recovery_experiment(const RecoveryConfig& config);

}  // namespace homogenlab
