#include <gtest/gtest.h>

#include <cmath>

#include "homogenlab/bounds.hpp"
#include "homogenlab/error.hpp"
#include "homogenlab/experiments.hpp"
#include "homogenlab/solvers.hpp"
#include "test_support.hpp"

using namespace homogenlab;
using testing_support::max_abs_diff;
using testing_support::random_network;
using testing_support::to_eigen;

namespace {

std::string code_of(const std::function<void()>& action) {
  try {
    action();
  } catch (const InputError& e) {
    return e.code();
  }
  return "accepted";
}

// Lower bound on the optimal value from the report's dual vector w, after
// scaling w into the dual feasible set. Written from the Fenchel dual of each
// problem independently of the solver's residuals:
//   qcbp:    −⟨w, y⟩ − η‖w‖₂,          ‖Aᵀw‖∞ ≤ 1
//   dantzig: −⟨w, Aᵀy⟩ − η‖w‖₁,        ‖AᵀAw‖∞ ≤ 1
//   bpdn:    −⟨w, y⟩ − ‖w‖₂²/4,        ‖Aᵀw‖∞ ≤ λ
//   lasso:   −⟨w, y⟩ − ‖w‖₂²/2 − B‖Aᵀw‖∞  (bound on ½‖Az − y‖₂²)
double dual_lower_bound(const ProblemSpec& p, Vector w) {
  const Matrix& a = p.a;
  switch (p.kind) {
    case ProblemKind::qcbp: {
      const double s = std::max(1.0, norm(matvec_transposed(a, w), VectorNorm::linf));
      w = scaled(w, 1.0 / s);
      return -dot(w, p.y) - p.parameter * norm(w);
    }
    case ProblemKind::dantzig: {
      const Matrix gram = a.transpose() * a;
      const double s = std::max(1.0, norm(matvec(gram, w), VectorNorm::linf));
      w = scaled(w, 1.0 / s);
      return -dot(w, matvec_transposed(a, p.y)) - p.parameter * norm(w, VectorNorm::l1);
    }
    case ProblemKind::bpdn: {
      const double s = std::max(1.0, norm(matvec_transposed(a, w), VectorNorm::linf) / p.parameter);
      w = scaled(w, 1.0 / s);
      return -dot(w, p.y) - dot(w, w) / 4.0;
    }
    case ProblemKind::lasso:
      return -dot(w, p.y) - dot(w, w) / 2.0 - p.parameter * norm(matvec_transposed(a, w), VectorNorm::linf);
  }
  return 0.0;
}

double primal_value(const ProblemSpec& p, const Vector& z) {
  if (p.kind == ProblemKind::lasso) {
    const double r = norm(subtract(matvec(p.a, z), p.y));
    return 0.5 * r * r;
  }
  return problem_objective(p, z);
}

double infeasibility(const ProblemSpec& p, const Vector& z) {
  const Vector r = subtract(matvec(p.a, z), p.y);
  switch (p.kind) {
    case ProblemKind::qcbp:
      return std::max(0.0, norm(r) - p.parameter);
    case ProblemKind::dantzig:
      return std::max(0.0, norm(matvec_transposed(p.a, r), VectorNorm::linf) - p.parameter);
    case ProblemKind::lasso:
      return std::max(0.0, norm(z, VectorNorm::l1) - p.parameter);
    case ProblemKind::bpdn:
      return 0.0;
  }
  return 0.0;
}

// Least squares on every support of size ≤ s with Eigen; best residual.
double eigen_best_sparse_residual(const Matrix& a, const Vector& y, std::size_t s) {
  const Eigen::MatrixXd e = to_eigen(a);
  const Eigen::VectorXd ye = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
  const auto n = static_cast<unsigned>(a.cols());
  double best = ye.norm();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > s) continue;
    std::vector<Eigen::Index> cols;
    for (unsigned j = 0; j < n; ++j)
      if (mask >> j & 1u) cols.push_back(j);
    const Eigen::MatrixXd sub = e(Eigen::all, cols);
    const Eigen::VectorXd c = sub.colPivHouseholderQr().solve(ye);
    best = std::min(best, (sub * c - ye).norm());
  }
  return best;
}

}  // namespace

TEST(Solve, ClosedForms) {
  const SolveConfig cfg;
  const SolveReport bpdn = solve(ProblemSpec::bpdn(Matrix::identity(1), Vector{3}, 2), cfg);
  ASSERT_TRUE(bpdn.converged);
  EXPECT_NEAR(bpdn.solution[0], 2.0, 1e-8);

  const SolveReport lasso = solve(ProblemSpec::lasso(Matrix::identity(2), Vector{3, 0}, 1), cfg);
  ASSERT_TRUE(lasso.converged);
  EXPECT_LE(max_abs_diff(lasso.solution, Vector{1, 0}), 1e-8);

  const SolveReport qcbp = solve(ProblemSpec::qcbp(Matrix::identity(2), Vector{3, 0}, 1), cfg);
  ASSERT_TRUE(qcbp.converged);
  EXPECT_LE(max_abs_diff(qcbp.solution, Vector{2, 0}), 1e-8);
  EXPECT_FALSE(qcbp.multiplicity_hint);
}

TEST(Solve, DantzigOnOrthonormalMatrixIsSoftThreshold) {
  Rng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix q = svd(rng.normal_matrix(4, 4)).left_vectors;
    const Vector y = rng.normal_vector(4, 2.0);
    const double eta = 0.3 + 0.2 * trial;
    // Residuals at 1e-8 leave the iterate about 1e-8 from the answer; ask for
    // more so the comparison has room.
    const SolveReport r = solve(ProblemSpec::dantzig(q, y, eta), SolveConfig{.tol = 1e-10});
    ASSERT_TRUE(r.converged);
    EXPECT_LE(max_abs_diff(r.solution, soft_threshold(matvec_transposed(q, y), eta)), 1e-8);
  }
}

TEST(Solve, DualCertificatesCloseTheGap) {
  // Property: for random instances of every kind, the returned z is feasible
  // and the returned dual vector certifies near-optimality.
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 3 + trial % 3, n = 5 + trial % 4;
    const Matrix a = gaussian_measurement_matrix(m, n, rng);
    const Vector y = rng.normal_vector(m);
    const std::vector<ProblemSpec> problems{
        ProblemSpec::qcbp(a, y, 0.1 + 0.1 * (trial % 3)), ProblemSpec::bpdn(a, y, 0.5),
        ProblemSpec::lasso(a, y, 0.5), ProblemSpec::dantzig(a, y, 0.2)};
    for (const ProblemSpec& p : problems) {
      // A few random instances need several hundred thousand iterations.
      const SolveReport r = solve(p, SolveConfig{.max_iters = 1000000, .detect_multiplicity = false});
      ASSERT_TRUE(r.converged) << to_string(p.kind) << " trial " << trial;
      const double primal = primal_value(p, r.solution);
      EXPECT_LE(infeasibility(p, r.solution), 1e-6) << to_string(p.kind);
      EXPECT_LE(primal - dual_lower_bound(p, r.dual), 1e-6 * (1 + std::abs(primal))) << to_string(p.kind);
    }
  }
}

TEST(Solve, MatchesBruteForceOnExactSparseSignals) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t s = 1 + trial % 2, n = s == 1 ? 6 : 8;
    const Matrix a = s == 1 ? sample_rip_matrix(4, n, 2, 0.6, rng) : testing_support::flat_kernel_matrix(n, rng);
    ASSERT_LT(rip_exhaustive(a, 2 * s).delta, 0.6);
    Vector x(n, 0.0);
    for (std::size_t k = 0; k < s; ++k) x[(trial + 2 * k) % n] = rng.normal() + (rng.coin() ? 1.0 : -1.0);
    const Vector y = matvec(a, x);
    const SparseFit fit = brute_force_sparse_fit(a, y, s);
    EXPECT_LE(max_abs_diff(fit.coefficients, x), 1e-9);
    const SolveReport r = solve(ProblemSpec::qcbp(a, y, 0.0));
    ASSERT_TRUE(r.converged);
    EXPECT_LE(max_abs_diff(r.solution, fit.coefficients), 1e-6);
  }
}

TEST(Solve, NonConvergenceIsReportedNotThrown) {
  Rng rng(4);
  const Matrix a = gaussian_measurement_matrix(3, 6, rng);
  const SolveReport r = solve(ProblemSpec::qcbp(a, rng.normal_vector(3), 0.0), SolveConfig{.max_iters = 3});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3u);
}

TEST(Solve, RejectsBadProblems) {
  const Matrix a = Matrix::identity(2);
  EXPECT_EQ(code_of([&] { solve(ProblemSpec::qcbp(a, Vector{1, 2, 3}, 0.1)); }), "dimension_mismatch");
  EXPECT_EQ(code_of([&] { solve(ProblemSpec::bpdn(a, Vector{1, 2}, 0.0)); }), "invalid_parameter");
  EXPECT_EQ(code_of([&] { solve(ProblemSpec::qcbp(a, Vector{1, NAN}, 0.1)); }), "non_finite");
  const Matrix rank_one = Matrix::from_rows({{1, 2, 3}, {2, 4, 6}});
  EXPECT_EQ(code_of([&] { solve(ProblemSpec::dantzig(rank_one, Vector{1, 2}, 0.1)); }), "rank_deficient");
}

TEST(Solve, FlagsNonUniqueMinimizers) {
  // Two identical columns: any split of the mass between them is optimal.
  const Matrix a = Matrix::from_rows({{1, 1}});
  const SolveReport r = solve(ProblemSpec::qcbp(a, Vector{1}, 0.0), SolveConfig{.seed = 5});
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.multiplicity_hint);
}

TEST(BruteForce, MatchesEigenEnumeration) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = rng.normal_matrix(4, 7);
    const Vector y = rng.normal_vector(4);
    const std::size_t s = 1 + trial % 3;
    const SparseFit fit = brute_force_sparse_fit(a, y, s);
    EXPECT_NEAR(fit.residual, eigen_best_sparse_residual(a, y, s), 1e-10);
    EXPECT_LE(fit.support.size(), s);
    EXPECT_NEAR(norm(subtract(matvec(a, fit.coefficients), y)), fit.residual, 1e-10);
  }
}

TEST(BruteForce, TieBreakPrefersSmallerThenLexicographicSupport) {
  const Matrix a = Matrix::from_rows({{1, 1, 0}, {0, 0, 1}});
  const SparseFit fit = brute_force_sparse_fit(a, Vector{2, 0}, 2);
  EXPECT_EQ(fit.support, (std::vector<std::size_t>{0}));
  EXPECT_LE(max_abs_diff(fit.coefficients, Vector{2, 0, 0}), 1e-12);
  EXPECT_EQ(brute_force_sparse_fit(a, Vector{0, 0}, 2).support, std::vector<std::size_t>{});
}

TEST(Ista, IdentityConvergesInOneStep) {
  const Vector y{3, -0.2, -1.5};
  const auto iterates = ista_run(Matrix::identity(3), y, 0.5, 1.0, 4, Vector(3, 0.0));
  ASSERT_EQ(iterates.size(), 5u);
  for (std::size_t k = 1; k < iterates.size(); ++k) EXPECT_EQ(iterates[k], soft_threshold(y, 0.5));
  EXPECT_EQ(code_of([&] { ista_run(Matrix::identity(3), y, 0.5, 0.0, 4, Vector(3, 0.0)); }), "invalid_lipschitz");
}

TEST(Ista, ObjectiveIsMonotoneAtSpectralStep) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = gaussian_measurement_matrix(5, 9, rng);
    const Vector y = rng.normal_vector(5);
    const double l = std::pow(svd(a).singular_values.front(), 2);
    const auto iterates = ista_run(a, y, 0.1, l, 200, Vector(9, 0.0));
    for (std::size_t k = 1; k < iterates.size(); ++k)
      EXPECT_LE(ista_objective(a, y, 0.1, iterates[k]), ista_objective(a, y, 0.1, iterates[k - 1]) + 1e-13);
  }
}

TEST(Ista, ConvergesToBpdnMinimizer) {
  // ½‖Az − y‖² + λ‖z‖₁ has the same minimizer as bpdn with 2λ.
  Rng rng(8);
  const Matrix a = gaussian_measurement_matrix(6, 8, rng);
  const Vector y = rng.normal_vector(6);
  const double l = std::pow(svd(a).singular_values.front(), 2);
  const Vector z = ista_run(a, y, 0.2, l, 20000, Vector(8, 0.0)).back();
  const SolveReport r = solve(ProblemSpec::bpdn(a, y, 0.4), SolveConfig{.detect_multiplicity = false});
  EXPECT_LE(max_abs_diff(z, r.solution), 1e-6);
}

TEST(Lista, TiedWeightsReproduceIsta) {
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = gaussian_measurement_matrix(4, 7, rng);
    const Vector y = rng.normal_vector(4);
    const Vector x0 = rng.normal_vector(7);
    const double l = 1.1 * std::pow(svd(a).singular_values.front(), 2);
    const auto ista = ista_run(a, y, 0.05, l, 50, x0);
    const Lista net = lista_from_ista(a, 0.05, l, 50);
    EXPECT_EQ(net.depth(), 50u);
    const auto traj = lista_trajectory(net, y, x0);
    ASSERT_EQ(traj.size(), ista.size());
    for (std::size_t k = 0; k < traj.size(); ++k) EXPECT_LE(max_abs_diff(traj[k], ista[k]), 1e-12);
    EXPECT_EQ(lista_eval(net, y, x0), traj.back());
  }
}

TEST(Forward, PhaseRetrievalIsRankOneLowRank) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = rng.normal_matrix(6, 4);
    const Vector x = rng.normal_vector(4);
    const Vector pr = phase_retrieval_forward(a, x);
    const Vector lr = lowrank_forward(a, outer(x, x));
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(pr[j], lr[j], 1e-12 * (1 + pr[j]));
    const Vector ax = matvec(a, x);
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(pr[j], ax[j] * ax[j], 1e-12 * (1 + pr[j]));
  }
}

TEST(Robustness, LinearMapRatiosAreBoundedBySpectralNorm) {
  Rng rng(11);
  const Matrix a = gaussian_measurement_matrix(3, 5, rng);
  const Matrix b = rng.normal_matrix(5, 3);
  const Evaluatable f = [&b](std::span<const double> y) { return matvec(b, y); };
  const Vector x{1, 0, 0, 0, 0};
  const Vector levels{1e-3, 1e-1};
  const auto rows = robustness_scan(f, a, x, levels, 4, 3);
  ASSERT_EQ(rows.size(), 8u);
  const double smax = svd(b).singular_values.front();
  for (const auto& row : rows) EXPECT_LE(row.ratio, smax * (1 + 1e-12));
  const auto again = robustness_scan(f, a, x, levels, 4, 3);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].ratio, again[i].ratio);
  EXPECT_EQ(code_of([&] { robustness_scan(f, a, x, Vector{0.0}, 1, 1); }), "invalid_noise_level");
}

TEST(Robustness, HomogeneousNetworkScan) {
  Rng rng(12);
  const Matrix a = gaussian_measurement_matrix(3, 4, rng);
  const NetworkSpec net = random_network({3, 6, 4}, false, rng);
  const auto rows = robustness_scan(as_function(net), a, Vector{0, 1, 0, 0}, Vector{1e-2}, 3, 1);
  for (const auto& row : rows) EXPECT_TRUE(std::isfinite(row.ratio));
}

TEST(Selection, DiscontinuityAtOne) {
  EXPECT_EQ(selection_discontinuity_demo(0.9).z1, 0.0);
  EXPECT_EQ(selection_discontinuity_demo(1.1).z1, 1.0);
  EXPECT_TRUE(selection_discontinuity_demo(1.0).multiplicity);
  EXPECT_FALSE(selection_discontinuity_demo(0.5).multiplicity);
  EXPECT_EQ(code_of([] { selection_discontinuity_demo(2.0); }), "out_of_range");
  // Brute-force check of the minimizer on a grid.
  for (double y2 : {0.3, 0.8, 1.2, 1.9}) {
    double best = 1e300, arg = 0;
    for (int i = -200; i <= 400; ++i) {
      const double z = i / 200.0;
      const double h = std::abs(z) + y2 * std::abs(1 - z);
      if (h < best) best = h, arg = z;
    }
    EXPECT_EQ(selection_discontinuity_demo(y2).z1, arg);
  }
}
