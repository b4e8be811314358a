#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "homogenlab/network.hpp"
#include "homogenlab/numerics.hpp"

namespace homogenlab {

enum class ProblemKind {
  qcbp,    // min ‖z‖₁ s.t. ‖Az − y‖₂ ≤ eta
  bpdn,    // min λ‖z‖₁ + ‖Az − y‖₂²
  lasso,   // min ‖Az − y‖₂ s.t. ‖z‖₁ ≤ budget
  dantzig  // min ‖z‖₁ s.t. ‖Aᵀ(Az − y)‖∞ ≤ eta
};

std::string_view to_string(ProblemKind kind);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::qcbp;
  Matrix a;
  Vector y;
  /// eta for qcbp/dantzig, λ for bpdn, the ℓ1 budget for lasso.
  double parameter = 0.0;

  static ProblemSpec qcbp(Matrix a, Vector y, double eta) { return {ProblemKind::qcbp, std::move(a), std::move(y), eta}; }
  static ProblemSpec bpdn(Matrix a, Vector y, double lambda) {
    return {ProblemKind::bpdn, std::move(a), std::move(y), lambda};
  }
  static ProblemSpec lasso(Matrix a, Vector y, double budget) {
    return {ProblemKind::lasso, std::move(a), std::move(y), budget};
  }
  static ProblemSpec dantzig(Matrix a, Vector y, double eta) {
    return {ProblemKind::dantzig, std::move(a), std::move(y), eta};
  }

  /// Dimension checks, parameter signs, and full row rank for dantzig.
  void validate() const;
};

struct SolveConfig {
  std::size_t max_iters = 50000;
  double tol = 1e-8;
  /// Defaults to 0.95/‖K‖ for both.
  std::optional<double> primal_step;
  std::optional<double> dual_step;
  std::uint64_t seed = 0;
  /// Re-solve from a seeded random start to flag non-unique minimizers.
  bool detect_multiplicity = true;
};

struct SolveReport {
  Vector solution;
  /// Dual variable of the splitting (a certificate for the optimality check).
  Vector dual;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool multiplicity_hint = false;
};

/// Primal-dual proximal splitting (Chambolle–Pock, θ = 1) on
/// min_z f(z) + g(Kz), one (f, g, K) triple per problem kind. Convergence is
/// declared when both optimality residuals are ≤ tol:
///   primal: w ∈ ∂g(Kz) (feasibility of Kz plus complementary slackness),
///   dual:   −Kᵀw ∈ ∂f(z).
/// Hitting max_iters yields converged = false, never an exception.
SolveReport solve(const ProblemSpec& problem, const SolveConfig& config = {});

/// Objective of the problem as stated (see ProblemKind).
double problem_objective(const ProblemSpec& problem, std::span<const double> z);

struct SparseFit {
  std::vector<std::size_t> support;
  Vector coefficients;  // length n, zero off the support
  double residual = 0.0;
};

/// Global minimizer of ‖Az − y‖₂ over vectors with at most s non-zeros by
/// least squares on every support of size ≤ s. Residuals within
/// 1e-12·(1 + ‖y‖₂) of the best count as ties, broken by the smaller support,
/// then the lexicographically smaller one.
SparseFit brute_force_sparse_fit(const Matrix& a, std::span<const double> y, std::size_t s,
                                 std::size_t cap = 200000);

/// x⁰ = x0, x^{ℓ+1} = η_{λ/L}(x^ℓ − (1/L)·Aᵀ(A·x^ℓ − y)); returns iters + 1 iterates.
std::vector<Vector> ista_run(const Matrix& a, std::span<const double> y, double lambda, double lipschitz,
                             std::size_t iters, std::span<const double> x0);

/// ½‖Az − y‖₂² + λ‖z‖₁, the objective ISTA descends. It equals half the bpdn
/// objective with λ_bpdn = 2λ.
double ista_objective(const Matrix& a, std::span<const double> y, double lambda, std::span<const double> z);

/// Unrolled network x^{ℓ+1} = η_threshold(W1^ℓ·x^ℓ + W2^ℓ·y).
struct Lista {
  std::vector<Matrix> w1;  // n×n per layer
  std::vector<Matrix> w2;  // n×m per layer
  double threshold = 0.0;

  std::size_t depth() const noexcept { return w1.size(); }
  void validate() const;
};

/// Ties every layer to W1 = Id − (1/L)AᵀA, W2 = (1/L)Aᵀ, threshold λ/L.
Lista lista_from_ista(const Matrix& a, double lambda, double lipschitz, std::size_t depth);
Vector lista_eval(const Lista& net, std::span<const double> y, std::span<const double> x0);
/// All depth + 1 intermediate iterates.
std::vector<Vector> lista_trajectory(const Lista& net, std::span<const double> y, std::span<const double> x0);

/// (𝒜(X))_j = a_jᵀ·X·a_j for the rows a_j of A.
Vector lowrank_forward(const Matrix& a, const Matrix& x);
/// (A·x)_j², componentwise.
Vector phase_retrieval_forward(const Matrix& a, std::span<const double> x);

struct RobustnessRow {
  double noise_level = 0.0;
  std::size_t trial = 0;
  double ratio = 0.0;
};

/// For each level and trial draws e uniformly on the sphere of that radius and
/// records ‖f(Ax + e) − f(Ax)‖₂ / ‖e‖₂. Noise for (level index i, trial t)
/// comes from RNG stream i·trials + t.
std::vector<RobustnessRow> robustness_scan(const Evaluatable& f, const Matrix& a, std::span<const double> x,
                                           std::span<const double> noise_levels, std::size_t trials,
                                           std::uint64_t seed);

struct SelectionResult {
  double z1 = 0.0;
  bool multiplicity = false;
};

/// Exact minimizer of h(z1) = |z1| + y2·|1 − z1| for y2 ∈ (0, 2): z1 = 0 below
/// y2 = 1, z1 = 1 above, and the whole interval [0, 1] at y2 = 1 (reported as 0).
SelectionResult selection_discontinuity_demo(double y2);

}  // namespace homogenlab
