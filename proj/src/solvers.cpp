#include "homogenlab/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "homogenlab/bounds.hpp"
#include "homogenlab/error.hpp"
#include "homogenlab/parallel.hpp"
#include "homogenlab/random.hpp"

namespace homogenlab {

SparseFit brute_force_sparse_fit(const Matrix& a, std::span<const double> y, std::size_t s, std::size_t cap) {
  const std::size_t n = a.cols();
  require(a.all_finite() && all_finite(y), "non_finite", "problem data contains non-finite values");
  require(y.size() == a.rows(), "dimension_mismatch",
          "y has length " + std::to_string(y.size()) + " but A has " + std::to_string(a.rows()) + " rows");
  s = std::min(s, n);
  std::size_t total = 0;
  for (std::size_t k = 0; k <= s; ++k) {
    const std::size_t c = binomial(n, k);
    if (c > cap || total > cap - c) {
      reject("support_cap_exceeded", "supports of size <= " + std::to_string(s) + " over n = " +
                                         std::to_string(n) + " exceed the cap " + std::to_string(cap));
    }
    total += c;
  }

  // Every support of size ≤ s, ordered by size then lexicographically.
  std::vector<std::vector<std::size_t>> supports{{}};
  for (std::size_t k = 1; k <= s; ++k) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      supports.push_back(idx);
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }

  std::vector<SparseFit> fits(supports.size());
  parallel_for(supports.size(), [&](std::size_t i) {
    SparseFit& fit = fits[i];
    fit.support = supports[i];
    fit.coefficients.assign(n, 0.0);
    if (!fit.support.empty()) {
      const Vector c = matvec(pseudo_inverse(a.select_columns(fit.support)), y);
      for (std::size_t j = 0; j < c.size(); ++j) fit.coefficients[fit.support[j]] = c[j];
    }
    fit.residual = norm(subtract(matvec(a, fit.coefficients), y));
  });

  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : fits) best = std::min(best, f.residual);
  const double slack = 1e-12 * (1.0 + norm(y));
  for (auto& f : fits) {
    if (f.residual <= best + slack) return std::move(f);
  }
  return fits.front();
}

std::vector<Vector> ista_run(const Matrix& a, std::span<const double> y, double lambda, double lipschitz,
                             std::size_t iters, std::span<const double> x0) {
  require(lipschitz > 0.0, "invalid_lipschitz", "L must be positive");
  require(lambda >= 0.0, "invalid_parameter", "lambda must be non-negative");
  require(y.size() == a.rows() && x0.size() == a.cols(), "dimension_mismatch",
          "ista expects y of length " + std::to_string(a.rows()) + " and x0 of length " +
              std::to_string(a.cols()));
  std::vector<Vector> trajectory;
  trajectory.reserve(iters + 1);
  trajectory.emplace_back(x0.begin(), x0.end());
  const double inv_l = 1.0 / lipschitz;
  for (std::size_t it = 0; it < iters; ++it) {
    const Vector& x = trajectory.back();
    const Vector grad = matvec_transposed(a, subtract(matvec(a, x), y));
    Vector step(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) step[i] = x[i] - inv_l * grad[i];
    trajectory.push_back(soft_threshold(step, lambda * inv_l));
  }
  return trajectory;
}

double ista_objective(const Matrix& a, std::span<const double> y, double lambda, std::span<const double> z) {
  const double r = norm(subtract(matvec(a, z), y));
  return 0.5 * r * r + lambda * norm(z, VectorNorm::l1);
}

void Lista::validate() const {
  require(w1.size() == w2.size(), "dimension_mismatch", "LISTA needs as many W2 as W1 matrices");
  require(threshold >= 0.0, "invalid_parameter", "LISTA threshold must be non-negative");
  if (w1.empty()) return;
  const std::size_t n = w1.front().rows();
  const std::size_t m = w2.front().cols();
  for (std::size_t l = 0; l < w1.size(); ++l) {
    require(w1[l].rows() == n && w1[l].cols() == n, "dimension_mismatch",
            "layer " + std::to_string(l) + ": W1 must be " + std::to_string(n) + "x" + std::to_string(n));
    require(w2[l].rows() == n && w2[l].cols() == m, "dimension_mismatch",
            "layer " + std::to_string(l) + ": W2 must be " + std::to_string(n) + "x" + std::to_string(m));
  }
}

Lista lista_from_ista(const Matrix& a, double lambda, double lipschitz, std::size_t depth) {
  require(lipschitz > 0.0, "invalid_lipschitz", "L must be positive");
  require(lambda >= 0.0, "invalid_parameter", "lambda must be non-negative");
  const double inv_l = 1.0 / lipschitz;
  const Matrix w1 = Matrix::identity(a.cols()) - inv_l * (a.transpose() * a);
  const Matrix w2 = inv_l * a.transpose();
  return Lista{std::vector<Matrix>(depth, w1), std::vector<Matrix>(depth, w2), lambda * inv_l};
}

std::vector<Vector> lista_trajectory(const Lista& net, std::span<const double> y, std::span<const double> x0) {
  net.validate();
  std::vector<Vector> trajectory;
  trajectory.emplace_back(x0.begin(), x0.end());
  for (std::size_t l = 0; l < net.depth(); ++l) {
    require(x0.size() == net.w1[l].cols(), "dimension_mismatch",
            "x0 has length " + std::to_string(x0.size()) + ", W1 expects " + std::to_string(net.w1[l].cols()));
    require(y.size() == net.w2[l].cols(), "dimension_mismatch",
            "y has length " + std::to_string(y.size()) + ", W2 expects " + std::to_string(net.w2[l].cols()));
    const Vector pre = add(matvec(net.w1[l], trajectory.back()), matvec(net.w2[l], y));
    trajectory.push_back(soft_threshold(pre, net.threshold));
  }
  return trajectory;
}

Vector lista_eval(const Lista& net, std::span<const double> y, std::span<const double> x0) {
  return lista_trajectory(net, y, x0).back();
}

Vector lowrank_forward(const Matrix& a, const Matrix& x) {
  const std::size_t n = a.cols();
  require(x.rows() == n && x.cols() == n, "dimension_mismatch",
          "X must be " + std::to_string(n) + "x" + std::to_string(n));
  Vector out(a.rows());
  for (std::size_t j = 0; j < a.rows(); ++j) {
    const auto row = a.row(j);
    out[j] = dot(row, matvec(x, row));
  }
  return out;
}

Vector phase_retrieval_forward(const Matrix& a, std::span<const double> x) {
  require(x.size() == a.cols(), "dimension_mismatch",
          "x has length " + std::to_string(x.size()) + ", A has " + std::to_string(a.cols()) + " columns");
  Vector out = matvec(a, x);
  for (double& v : out) v *= v;
  return out;
}

std::vector<RobustnessRow> robustness_scan(const Evaluatable& f, const Matrix& a, std::span<const double> x,
                                           std::span<const double> noise_levels, std::size_t trials,
                                           std::uint64_t seed) {
  require(!noise_levels.empty(), "empty_input", "need at least one noise level");
  require(trials >= 1, "invalid_count", "need at least one trial");
  for (double level : noise_levels) {
    require(level > 0.0 && std::isfinite(level), "invalid_noise_level",
            "noise levels must be strictly positive, got " + std::to_string(level));
  }
  const Vector clean = matvec(a, x);
  const Vector base = f(clean);
  Rng root(seed);
  std::vector<RobustnessRow> rows(noise_levels.size() * trials);
  parallel_for(rows.size(), [&](std::size_t idx) {
    const std::size_t i = idx / trials;
    Rng rng = root.split(idx);
    const Vector e = rng.sphere_point(clean.size(), noise_levels[i]);
    const Vector out = f(add(clean, e));
    rows[idx] = {noise_levels[i], idx % trials, norm(subtract(out, base)) / norm(e)};
  });
  return rows;
}

SelectionResult selection_discontinuity_demo(double y2) {
  require(y2 > 0.0 && y2 < 2.0, "out_of_range", "y2 must lie in (0, 2)");
  // h is piecewise linear with kinks at 0 and 1; h(0) = y2, h(1) = 1 and h
  // grows outside [0, 1], so the minimum sits at whichever end is lower.
  if (y2 < 1.0) return {0.0, false};
  if (y2 > 1.0) return {1.0, false};
  return {0.0, true};
}

}  // namespace homogenlab
