#include "homogenlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "homogenlab/bounds.hpp"
#include "homogenlab/error.hpp"
#include "homogenlab/random.hpp"

namespace homogenlab {

std::vector<Vector> signed_unit_vectors(std::size_t n) {
  std::vector<Vector> out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vector e(n, 0.0);
      e[i] = sign;
      out.push_back(std::move(e));
    }
  }
  return out;
}

double max_sparse_error(const Evaluatable& f, const Matrix& a) {
  double worst = 0.0;
  for (const Vector& x : signed_unit_vectors(a.cols())) {
    const double err = norm(subtract(f(matvec(a, x)), x));
    worst = std::max(worst, std::isnan(err) ? std::numeric_limits<double>::infinity() : err);
  }
  return worst;
}

std::vector<ImpossibilityRow> impossibility_experiment(std::size_t m, std::size_t n,
                                                       const std::vector<std::size_t>& widths, const FitConfig& fit,
                                                       std::uint64_t seed) {
  require(m >= 1 && n >= 1, "invalid_dimension", "m and n must be positive");
  require(m <= n, "invalid_dimension", "impossibility experiment needs m <= n");
  require(!widths.empty(), "empty_input", "need at least one width");
  for (std::size_t w : widths) require(w >= 1, "invalid_width", "widths must be at least 1");

  Rng root(seed);
  Rng matrix_rng = root.split(0);
  const Matrix a = gaussian_measurement_matrix(m, n, matrix_rng);
  const double bound = one_layer_lower_bound(m, DirectionSet::identity(n));

  // Raw pairs (A·x, x) with unit x: the mse is then the mean squared relative
  // error on the signed unit vectors, the quantity the bound constrains.
  // Moving pairs onto the ℓ1 sphere instead would weight each vector by
  // 1/‖A·x‖₁ and let columns with large measurements go unfitted.
  std::vector<std::pair<Vector, Vector>> pairs;
  for (const Vector& x : signed_unit_vectors(n)) pairs.emplace_back(matvec(a, x), x);

  std::vector<ImpossibilityRow> rows;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    ImpossibilityRow row;
    row.width = widths[i];
    row.bound = bound;
    FitConfig cfg = fit;
    cfg.width = widths[i];
    cfg.with_bias = false;
    cfg.seed = root.split(1 + i).seed();
    try {
      const FitResult result = fit_to_pairs(pairs, cfg);
      row.fit_mse = result.achieved_mse;
      row.max_rel_error = max_sparse_error(as_function(result.network), a);
      row.status = row.max_rel_error >= bound - 1e-9 ? "ok" : "bound_violated";
    } catch (const InputError&) {
      row.fit_mse = std::numeric_limits<double>::quiet_NaN();
      row.max_rel_error = std::numeric_limits<double>::quiet_NaN();
      row.status = "fit_failed";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double sparse_tail_l1(std::span<const double> x, std::size_t s) {
  Vector mags(x.size());
  std::transform(x.begin(), x.end(), mags.begin(), [](double v) { return std::abs(v); });
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double tail = 0.0;
  for (std::size_t i = std::min(s, mags.size()); i < mags.size(); ++i) tail += mags[i];
  return tail;
}

Matrix sample_rip_matrix(std::size_t m, std::size_t n, std::size_t order, double delta_max, Rng& rng,
                         std::size_t max_draws) {
  require(m >= 1 && n >= 1, "invalid_dimension", "m and n must be positive");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t draw = 0; draw < max_draws; ++draw) {
    Matrix a = rng.normal_matrix(m, n);
    for (std::size_t j = 0; j < n; ++j) {
      const double len = norm(a.column(j));
      for (std::size_t i = 0; i < m; ++i) a(i, j) /= len;
    }
    const double delta = rip_exhaustive(a, order).delta;
    if (delta <= delta_max) return a;
    best = std::min(best, delta);
  }
  reject("rip_target_missed", "no draw out of " + std::to_string(max_draws) + " reached delta_" +
                                  std::to_string(order) + " <= " + std::to_string(delta_max) + " (best " +
                                  std::to_string(best) + ")");
}

RecoveryOutcome recovery_experiment(const RecoveryConfig& config) {
  const std::size_t n = config.n, m = config.m, s = config.s;
  require(n >= 1 && m >= 1, "invalid_dimension", "m and n must be positive");
  require(s >= 1 && 2 * s <= n, "invalid_sparsity", "sparsity must satisfy 1 <= 2s <= n");
  require(config.trials >= 1, "invalid_count", "need at least one trial");
  for (double level : config.noise_levels)
    require(level > 0.0, "invalid_noise_level", "noise levels must be strictly positive");

  Rng root(config.seed);
  Rng matrix_rng = root.split(0);
  const Matrix a = config.rip_target > 0.0 ? sample_rip_matrix(m, n, 2 * s, config.rip_target, matrix_rng)
                                             : gaussian_measurement_matrix(m, n, matrix_rng);
  const double delta = rip_exhaustive(a, 2 * s).delta;
  if (!(delta < 1.0)) {
    reject("rip_check_failed", "delta_" + std::to_string(2 * s) + " = " + std::to_string(delta) +
                                   " >= 1; the signal set is not injectively measured");
  }
  // For sparse x1, x2: ‖x1 − x2‖₂ ≤ ‖A(x1 − x2)‖₂ / sqrt(1 − δ_2s), so each
  // inverse coordinate is consistent with this constant.
  const double lipschitz = (1.0 + 1e-9) / std::sqrt(1.0 - delta);

  RecoverySampling sampling = config.sampling;
  sampling.seed = root.split(1).seed();
  FitConfig fit = config.fit;
  fit.seed = root.split(2).seed();
  NetworkSpec net = build_inverse_recovery_net(a, sparse_unit_sampler(n, s), fit, lipschitz, sampling);

  std::vector<RecoveryRow> rows;
  auto record = [&](std::string kind, std::size_t index, const Vector& x, const Vector& e) {
    const Vector y = add(matvec(a, x), e);
    rows.push_back({std::move(kind), index, norm(x), sparse_tail_l1(x, s), norm(e), norm(subtract(eval(net, y), x))});
  };

  const Vector zeros_m(m, 0.0);
  record("zero", 0, Vector(n, 0.0), zeros_m);

  const std::vector<Vector> units = signed_unit_vectors(n);
  std::size_t index = 0;
  for (const Vector& x : units) record("exact", index++, x, zeros_m);
  Rng eval_rng = root.split(3);
  const SignalSampler sampler = sparse_unit_sampler(n, s);
  for (std::size_t t = 0; t < config.trials; ++t) {
    const double scale = 0.5 + 4.5 * eval_rng.uniform();
    record("exact", index++, scaled(sampler(eval_rng), scale), zeros_m);
  }

  for (std::size_t t = 0; t < config.trials; ++t) {
    Vector x = sampler(eval_rng);
    const Vector bump = eval_rng.sphere_point(n, 0.05);
    record("approx", t, add(x, bump), zeros_m);
  }

  index = 0;
  for (double level : config.noise_levels) {
    for (std::size_t t = 0; t < config.trials; ++t) {
      const Vector& x = units[t % units.size()];
      record("noisy", index++, x, eval_rng.sphere_point(m, level));
    }
  }
  return RecoveryOutcome{a, delta, lipschitz, std::move(net), std::move(rows)};
}

}  // namespace homogenlab
