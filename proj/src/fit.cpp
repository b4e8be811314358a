#include <cmath>
#include <limits>

#include "homogenlab/error.hpp"
#include "homogenlab/homogenize.hpp"
#include "homogenlab/parallel.hpp"

namespace homogenlab {

void FitConfig::validate() const {
  require(width >= 1, "invalid_config", "fit width must be at least 1");
  require(steps >= 1, "invalid_config", "fit steps must be at least 1");
  require(restarts >= 1, "invalid_config", "fit restarts must be at least 1");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "invalid_config",
          "learning rate must be positive");
  require(target_mse >= 0.0, "invalid_config", "target mse must be non-negative");
}

namespace {

struct Params {
  std::size_t m, k, p;
  Vector w1, b1, w2, b2;  // w1: k×m, w2: p×k, row-major

  Params(std::size_t m_, std::size_t k_, std::size_t p_)
      : m(m_), k(k_), p(p_), w1(k_ * m_), b1(k_), w2(p_ * k_), b2(p_) {}
};

// Flat copy of the training data for tight loops.
struct Flat {
  std::size_t n, m, p;
  Vector u, v;
};

// Mean squared error at `w`; fills `grad` when non-null.
double loss_and_gradient(const Params& w, const Flat& d, Params* grad) {
  const std::size_t k = w.k, m = w.m, p = w.p;
  if (grad) {
    std::fill(grad->w1.begin(), grad->w1.end(), 0.0);
    std::fill(grad->b1.begin(), grad->b1.end(), 0.0);
    std::fill(grad->w2.begin(), grad->w2.end(), 0.0);
    std::fill(grad->b2.begin(), grad->b2.end(), 0.0);
  }
  const double scale = 1.0 / static_cast<double>(d.n * p);
  Vector z(k), h(k), r(p), dh(k);
  double loss = 0.0;
  for (std::size_t s = 0; s < d.n; ++s) {
    const double* u = &d.u[s * m];
    const double* v = &d.v[s * p];
    for (std::size_t i = 0; i < k; ++i) {
      double acc = w.b1[i];
      const double* row = &w.w1[i * m];
      for (std::size_t c = 0; c < m; ++c) acc += row[c] * u[c];
      z[i] = acc;
      h[i] = acc > 0.0 ? acc : 0.0;
    }
    for (std::size_t j = 0; j < p; ++j) {
      double acc = w.b2[j];
      const double* row = &w.w2[j * k];
      for (std::size_t i = 0; i < k; ++i) acc += row[i] * h[i];
      r[j] = acc - v[j];
      loss += r[j] * r[j];
    }
    if (!grad) continue;
    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t j = 0; j < p; ++j) {
      const double g = 2.0 * scale * r[j];
      grad->b2[j] += g;
      double* grow = &grad->w2[j * k];
      const double* row = &w.w2[j * k];
      for (std::size_t i = 0; i < k; ++i) {
        grow[i] += g * h[i];
        dh[i] += g * row[i];
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (z[i] <= 0.0) continue;
      grad->b1[i] += dh[i];
      double* grow = &grad->w1[i * m];
      for (std::size_t c = 0; c < m; ++c) grow[c] += dh[i] * u[c];
    }
  }
  return loss * scale;
}

struct RestartOutcome {
  Params params;
  double mse = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::size_t, double>> curve;
};

RestartOutcome run_restart(const Flat& d, const FitConfig& cfg, std::size_t restart) {
  Rng rng = Rng(cfg.seed).split(restart);
  const std::size_t m = d.m, k = cfg.width, p = d.p;
  Params w(m, k, p);
  // He-style scaling for the hidden layer; inputs live on the ℓ1 sphere, so
  // pre-activations start O(1/√m).
  for (double& x : w.w1) x = rng.normal() * std::sqrt(2.0);
  for (double& x : w.w2) x = rng.normal() / std::sqrt(static_cast<double>(k));
  if (cfg.with_bias) {
    for (double& x : w.b1) x = 0.1 * rng.normal();
    for (std::size_t j = 0; j < p; ++j) {
      double mean = 0.0;
      for (std::size_t s = 0; s < d.n; ++s) mean += d.v[s * p + j];
      w.b2[j] = mean / static_cast<double>(d.n);
    }
  }

  RestartOutcome out{w, 0.0, {}};
  Params grad(m, k, p);
  const double lr = cfg.learning_rate;
  auto step_vec = [lr](Vector& x, const Vector& g) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= lr * g[i];
  };
  double loss = 0.0;
  std::size_t step = 0;
  for (; step < cfg.steps; ++step) {
    loss = loss_and_gradient(w, d, &grad);
    if (cfg.curve_every > 0 && step % cfg.curve_every == 0) out.curve.emplace_back(step, loss);
    if (!std::isfinite(loss) || loss <= cfg.target_mse) break;
    step_vec(w.w1, grad.w1);
    step_vec(w.w2, grad.w2);
    if (cfg.with_bias) {
      step_vec(w.b1, grad.b1);
      step_vec(w.b2, grad.b2);
    }
  }
  if (step == cfg.steps) loss = loss_and_gradient(w, d, nullptr);
  if (cfg.curve_every > 0 && (out.curve.empty() || out.curve.back().first != step)) out.curve.emplace_back(step, loss);
  out.params = std::move(w);
  out.mse = std::isfinite(loss) ? loss : std::numeric_limits<double>::infinity();
  return out;
}

NetworkSpec to_network(const Params& w, bool with_bias) {
  std::vector<LayerSpec> layers;
  layers.push_back({Matrix(w.k, w.m, w.w1), std::nullopt});
  layers.push_back({Matrix(w.p, w.k, w.w2), std::nullopt});
  if (with_bias) {
    layers[0].bias = w.b1;
    layers[1].bias = w.b2;
  }
  return NetworkSpec(std::move(layers), ActivationSpec::relu(), !with_bias);
}

}  // namespace

FitResult fit_one_hidden_layer(const SphereSampleSet& data, const FitConfig& config) {
  data.validate();
  return fit_to_pairs(data.pairs, config);
}

FitResult fit_to_pairs(std::span<const std::pair<Vector, Vector>> pairs, const FitConfig& config) {
  config.validate();
  require(!pairs.empty(), "empty_data", "sample set is empty");
  const std::size_t m = pairs.front().first.size(), p = pairs.front().second.size();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    require(pairs[i].first.size() == m && pairs[i].second.size() == p && m > 0 && p > 0, "dimension_mismatch",
            "pairs[" + std::to_string(i) + "] has inconsistent dimensions");
    require(all_finite(pairs[i].first) && all_finite(pairs[i].second), "non_finite",
            "pairs[" + std::to_string(i) + "] is not finite");
  }
  Flat flat{pairs.size(), m, p, {}, {}};
  flat.u.reserve(flat.n * flat.m);
  flat.v.reserve(flat.n * flat.p);
  for (const auto& [u, v] : pairs) {
    flat.u.insert(flat.u.end(), u.begin(), u.end());
    flat.v.insert(flat.v.end(), v.begin(), v.end());
  }

  std::vector<std::optional<RestartOutcome>> outcomes(config.restarts);
  parallel_for(config.restarts, [&](std::size_t r) { outcomes[r] = run_restart(flat, config, r); });

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r]->mse < outcomes[best]->mse) best = r;
  }
  RestartOutcome& winner = *outcomes[best];
  require(std::isfinite(winner.mse), "fit_diverged", "every restart diverged; lower the learning rate");
  return FitResult{to_network(winner.params, config.with_bias), winner.mse, best, std::move(winner.curve)};
}

}  // namespace homogenlab
