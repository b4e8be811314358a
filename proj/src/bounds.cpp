#include "homogenlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "homogenlab/error.hpp"
#include "homogenlab/parallel.hpp"
#include "homogenlab/random.hpp"
#include "homogenlab/solvers.hpp"

namespace homogenlab {

void DirectionSet::validate() const {
  require(!directions.empty(), "empty_directions", "direction set is empty");
  require(directions.all_finite(), "non_finite", "direction set contains non-finite entries");
  for (std::size_t k = 0; k < directions.cols(); ++k) {
    const double len = norm(directions.column(k));
    require(std::abs(len - 1.0) <= 1e-12, "non_unit_direction",
            "direction " + std::to_string(k) + " has l2 norm " + std::to_string(len) + ", expected 1");
  }
}

double one_layer_lower_bound(std::size_t m, const DirectionSet& x) {
  x.validate();
  const std::size_t count = x.directions.cols();
  if (m >= count) return 0.0;
  const Vector sigma = svd(x.directions).singular_values;
  double tail = 0.0;
  for (std::size_t k = m; k < sigma.size(); ++k) tail += sigma[k] * sigma[k];
  return std::sqrt(tail / static_cast<double>(count));
}

Matrix uat_negative_matrix(std::span<const double> w) {
  require(!w.empty(), "empty_input", "uat_negative_matrix needs at least one value");
  for (std::size_t i = 0; i < w.size(); ++i) {
    require(std::isfinite(w[i]), "non_finite", "w contains a non-finite value");
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      require(w[i] != w[j], "repeated_value",
              "w values must be pairwise distinct (w[" + std::to_string(i) + "] = w[" + std::to_string(j) + "])");
    }
  }
  Matrix a(2, w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double s = std::sqrt(1.0 + w[k] * w[k]);
    a(0, k) = 1.0 / s;
    a(1, k) = w[k] / s;
  }
  return a;
}

double uat_negative_bound(std::size_t n) {
  require(n >= 1, "invalid_dimension", "n must be at least 1");
  const double d = static_cast<double>(n);
  return n > 4 ? std::sqrt(1.0 - 2.0 / d) : std::sqrt(d / 8.0);
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t num = n - k + i;
    // result·num/i stays integral at every step; guard the multiplication.
    if (result > std::numeric_limits<std::size_t>::max() / num) return std::numeric_limits<std::size_t>::max();
    result = result * num / i;
  }
  return result;
}

RipReport rip_exhaustive(const Matrix& a, std::size_t t, std::size_t cap) {
  const std::size_t n = a.cols();
  require(a.all_finite(), "non_finite", "matrix contains non-finite entries");
  require(t >= 1 && t <= n, "invalid_order", "RIP order must lie in [1, " + std::to_string(n) + "], got " +
                                                 std::to_string(t));
  const std::size_t count = binomial(n, t);
  if (count > cap) {
    reject("support_cap_exceeded", "C(" + std::to_string(n) + ", " + std::to_string(t) + ") = " +
                                       std::to_string(count) + " supports exceed the cap " + std::to_string(cap));
  }

  std::vector<std::vector<std::size_t>> supports;
  supports.reserve(count);
  std::vector<std::size_t> s(t);
  std::iota(s.begin(), s.end(), 0);
  while (true) {
    supports.push_back(s);
    std::size_t i = t;
    while (i > 0 && s[i - 1] == n - t + i - 1) --i;
    if (i == 0) break;
    ++s[i - 1];
    for (std::size_t j = i; j < t; ++j) s[j] = s[j - 1] + 1;
  }

  std::vector<std::pair<double, double>> extremes(supports.size());
  parallel_for(supports.size(), [&](std::size_t idx) {
    const Matrix sub = a.select_columns(supports[idx]);
    const Vector eig = symmetric_eigen(sub.transpose() * sub).values;
    extremes[idx] = {1.0 - eig.front(), eig.back() - 1.0};
  });

  RipReport report;
  report.order = t;
  report.supports_checked = supports.size();
  report.delta_lb = -std::numeric_limits<double>::infinity();
  report.delta_ub = -std::numeric_limits<double>::infinity();
  for (const auto& [lb, ub] : extremes) {
    report.delta_lb = std::max(report.delta_lb, lb);
    report.delta_ub = std::max(report.delta_ub, ub);
  }
  report.delta = std::max(report.delta_lb, report.delta_ub);
  return report;
}

namespace {

std::size_t square_side(std::size_t len) {
  const auto k = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(len))));
  require(k * k == len, "dimension_mismatch",
          "nuclear norm needs a vectorized square matrix, got length " + std::to_string(len));
  return k;
}

}  // namespace

double norm_ii(std::span<const double> v, NormTag tag) {
  switch (tag) {
    case NormTag::l1:
      return norm(v, VectorNorm::l1);
    case NormTag::l2:
      return norm(v);
    case NormTag::nuclear: {
      const std::size_t k = square_side(v.size());
      return matrix_norm(Matrix(k, k, Vector(v.begin(), v.end())), MatrixNorm::nuclear);
    }
  }
  return 0.0;
}

std::vector<Vector> norm_decomposition(std::span<const double> x, NormTag tag) {
  std::vector<Vector> pieces;
  switch (tag) {
    case NormTag::l2:
      pieces.emplace_back(x.begin(), x.end());
      break;
    case NormTag::l1:
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] == 0.0) continue;
        Vector e(x.size(), 0.0);
        e[j] = x[j];
        pieces.push_back(std::move(e));
      }
      break;
    case NormTag::nuclear: {
      const std::size_t k = square_side(x.size());
      const SvdResult s = svd(Matrix(k, k, Vector(x.begin(), x.end())));
      for (std::size_t j = 0; j < s.singular_values.size(); ++j) {
        if (s.singular_values[j] == 0.0) continue;
        const Matrix piece = s.singular_values[j] * outer(s.left_vectors.column(j), s.right_vectors.column(j));
        pieces.emplace_back(piece.entries().begin(), piece.entries().end());
      }
      break;
    }
  }
  return pieces;
}

ConditioningReport empirical_conditioning(const Evaluatable& g, const SignalSampler& sampler, std::size_t pairs,
                                          NormTag tag, std::uint64_t seed) {
  require(pairs >= 2, "too_few_pairs", "empirical conditioning needs at least 2 pairs, got " + std::to_string(pairs));
  Rng root(seed);

  struct Ratios {
    double tau = std::numeric_limits<double>::infinity();
    double rho = -std::numeric_limits<double>::infinity();
    bool used = false;
  };
  // Pair i < pairs is drawn from U, pair i ≥ pairs from ℝⁿ.
  std::vector<Ratios> ratios(2 * pairs);
  std::size_t n = 0;
  {
    Rng probe = root.split(0);
    n = sampler(probe).size();
    require(n > 0, "dimension_mismatch", "sampler produced an empty signal");
  }
  parallel_for(2 * pairs, [&](std::size_t i) {
    Rng rng = root.split(i + 1);
    const bool in_u = i < pairs;
    const Vector x1 = in_u ? sampler(rng) : rng.normal_vector(n);
    const Vector x2 = in_u ? sampler(rng) : rng.normal_vector(n);
    require(x1.size() == n && x2.size() == n, "dimension_mismatch", "sampler changed the signal length");
    const Vector d = subtract(x1, x2);
    const double d2 = norm(d);
    if (d2 == 0.0) return;
    const double gap = norm(subtract(g(x1), g(x2)));
    ratios[i].used = true;
    if (in_u) ratios[i].tau = gap / d2;
    ratios[i].rho = gap / norm_ii(d, tag);
  });

  ConditioningReport report;
  report.norm_tag = tag;
  report.tau_hat = std::numeric_limits<double>::infinity();
  report.rho_hat = -std::numeric_limits<double>::infinity();
  std::size_t used_u = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!ratios[i].used) continue;
    ++report.pairs_sampled;
    if (i < pairs) ++used_u;
    report.tau_hat = std::min(report.tau_hat, ratios[i].tau);
    report.rho_hat = std::max(report.rho_hat, ratios[i].rho);
  }
  require(used_u > 0, "degenerate_pairs", "every sampled pair from U was degenerate");
  switch (tag) {
    case NormTag::l2:
      report.norm_equiv_m = 1.0;
      break;
    case NormTag::l1:
      report.norm_equiv_m = std::sqrt(static_cast<double>(n));
      break;
    case NormTag::nuclear:
      report.norm_equiv_m = std::sqrt(static_cast<double>(square_side(n)));
      break;
  }
  return report;
}

std::pair<double, double> lowrank_rip_sample(const Matrix& a, std::size_t r, std::size_t samples,
                                             std::uint64_t seed) {
  const std::size_t n = a.cols();
  require(r >= 1 && 2 * r <= n, "invalid_rank",
          "rank r must satisfy 1 <= 2r <= n = " + std::to_string(n) + ", got r = " + std::to_string(r));
  require(samples >= 1, "invalid_count", "need at least one sample");
  const double m = static_cast<double>(a.rows());
  Rng root(seed);
  Vector values(samples);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng = root.split(i);
    // F·diag(±1)·Fᵀ: symmetric with rank ≤ 2r. The operator only sees the
    // symmetric part of X, so antisymmetric samples would be meaningless.
    const Matrix f = rng.normal_matrix(n, 2 * r);
    Matrix fs = f;
    for (std::size_t j = 0; j < 2 * r; ++j) {
      if (rng.coin()) {
        for (std::size_t row = 0; row < n; ++row) fs(row, j) = -fs(row, j);
      }
    }
    Matrix x = fs * f.transpose();
    x = (1.0 / matrix_norm(x, MatrixNorm::frobenius)) * x;
    values[i] = norm(lowrank_forward(a, x), VectorNorm::l1) / m;
  });
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {1.0 - *lo, *hi - 1.0};
}

EckartYoungGap eckart_young_gap(const Matrix& m, std::size_t r, std::size_t candidates, std::uint64_t seed) {
  const std::size_t min_dim = std::min(m.rows(), m.cols());
  require(r <= min_dim, "invalid_rank",
          "rank " + std::to_string(r) + " exceeds min dimension " + std::to_string(min_dim));
  EckartYoungGap out;
  out.tail = rank_truncate(m, r).second;
  out.best_candidate_err = std::numeric_limits<double>::infinity();
  if (candidates == 0) return out;
  Rng root(seed);
  Vector errors(candidates);
  parallel_for(candidates, [&](std::size_t i) {
    Rng rng = root.split(i);
    Matrix c(m.rows(), m.cols());
    if (r > 0) {
      const Matrix q = svd(rng.normal_matrix(m.rows(), r)).left_vectors;
      c = q * (q.transpose() * m);
    }
    errors[i] = matrix_norm(m - c, MatrixNorm::frobenius);
  });
  out.best_candidate_err = *std::min_element(errors.begin(), errors.end());
  return out;
}

}  // namespace homogenlab
