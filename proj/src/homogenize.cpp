#include "homogenlab/homogenize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "homogenlab/error.hpp"
#include "homogenlab/parallel.hpp"

namespace homogenlab {

void SphereSampleSet::validate() const {
  require(!pairs.empty(), "empty_data", "sample set is empty");
  const std::size_t m = pairs.front().first.size();
  const std::size_t p = pairs.front().second.size();
  require(m > 0 && p > 0, "dimension_mismatch", "sample dimensions must be positive");
  const VectorNorm kind = norm_tag == SphereNorm::l1 ? VectorNorm::l1 : VectorNorm::l2;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [u, v] = pairs[i];
    require(u.size() == m && v.size() == p, "dimension_mismatch",
            "pairs[" + std::to_string(i) + "] has inconsistent dimensions");
    require(all_finite(u) && all_finite(v), "non_finite", "pairs[" + std::to_string(i) + "] is not finite");
    require(std::abs(norm(u, kind) - 1.0) <= 1e-12, "off_sphere",
            "pairs[" + std::to_string(i) + "] direction is not on the unit sphere");
  }
}

NetworkSpec homogenize_stacked(std::span<const NetworkSpec> coordinate_nets) {
  require(!coordinate_nets.empty(), "empty_network", "nothing to homogenize");
  const std::size_t m = coordinate_nets.front().input_dim();
  std::size_t second_width = 0;
  for (const auto& g : coordinate_nets) {
    require(g.depth() == 1, "wrong_depth", "homogenization needs exactly one hidden layer, got " +
                                               std::to_string(g.depth()));
    require(g.activation().is_relu(), "not_relu", "homogenization needs the relu activation");
    require(g.input_dim() == m, "dimension_mismatch", "coordinate networks disagree on input dimension");
    require(g.output_dim() == 1, "dimension_mismatch", "stacked homogenization needs scalar networks");
    second_width += g.hidden_widths().front() + 1;
  }
  const std::size_t p = coordinate_nets.size();

  // relu((Id; −Id)·x) = (x⁺, x⁻)
  Matrix first(2 * m, m);
  for (std::size_t i = 0; i < m; ++i) {
    first(i, i) = 1.0;
    first(m + i, i) = -1.0;
  }

  // Per block: (W1 + b1·1ᵀ   −W1 + b1·1ᵀ ; 1ᵀ 1ᵀ), so the block sees
  // W1·x + ‖x‖₁·b1 and ‖x‖₁ itself.
  Matrix second(second_width, 2 * m);
  Matrix readout(p, second_width);
  std::size_t offset = 0;
  for (std::size_t j = 0; j < p; ++j) {
    const auto& hidden = coordinate_nets[j].layers()[0];
    const auto& out = coordinate_nets[j].layers()[1];
    const std::size_t k = hidden.outputs();
    for (std::size_t r = 0; r < k; ++r) {
      const double b = hidden.bias ? (*hidden.bias)[r] : 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        second(offset + r, c) = hidden.weights(r, c) + b;
        second(offset + r, m + c) = -hidden.weights(r, c) + b;
      }
      readout(j, offset + r) = out.weights(0, r);
    }
    for (std::size_t c = 0; c < 2 * m; ++c) second(offset + k, c) = 1.0;
    readout(j, offset + k) = out.bias ? (*out.bias)[0] : 0.0;
    offset += k + 1;
  }

  std::vector<LayerSpec> layers;
  layers.push_back({std::move(first), std::nullopt});
  layers.push_back({std::move(second), std::nullopt});
  layers.push_back({std::move(readout), std::nullopt});
  return NetworkSpec(std::move(layers), ActivationSpec::relu(), true);
}

NetworkSpec homogenize_one_layer(const NetworkSpec& g) {
  require(g.depth() == 1, "wrong_depth",
          "homogenization needs exactly one hidden layer, got " + std::to_string(g.depth()));
  require(g.activation().is_relu(), "not_relu", "homogenization needs the relu activation");
  const auto& hidden = g.layers()[0];
  const auto& out = g.layers()[1];
  std::vector<NetworkSpec> coordinates;
  coordinates.reserve(g.output_dim());
  for (std::size_t j = 0; j < g.output_dim(); ++j) {
    auto row = out.weights.row(j);
    LayerSpec read{Matrix(1, row.size(), Vector(row.begin(), row.end())), std::nullopt};
    if (out.bias) read.bias = Vector{(*out.bias)[j]};
    coordinates.push_back(NetworkSpec::from_layers({hidden, std::move(read)}));
  }
  return homogenize_stacked(coordinates);
}

Evaluatable radial_extend_l2(Evaluatable f_on_sphere) {
  return [f = std::move(f_on_sphere)](std::span<const double> x) -> Vector {
    const double r = norm(x);
    if (r == 0.0) {
      Vector e(x.size(), 0.0);
      if (!e.empty()) e[0] = 1.0;
      return Vector(f(e).size(), 0.0);
    }
    Vector out = f(scaled(x, 1.0 / r));
    for (double& v : out) v *= r;
    return out;
  };
}

McShaneExtension::McShaneExtension(std::vector<std::pair<Vector, Vector>> samples, double lipschitz)
    : samples_(std::move(samples)), lipschitz_(lipschitz) {}

Vector McShaneExtension::operator()(std::span<const double> x) const {
  const std::size_t p = output_dim();
  Vector out(p, INFINITY);
  for (const auto& [u, v] : samples_) {
    const double reach = lipschitz_ * norm(subtract(x, u));
    for (std::size_t j = 0; j < p; ++j) out[j] = std::min(out[j], v[j] + reach);
  }
  return out;
}

McShaneExtension mcshane_extend(std::vector<std::pair<Vector, Vector>> samples, double lipschitz) {
  require(!samples.empty(), "empty_data", "McShane extension needs at least one sample");
  require(lipschitz > 0.0 && std::isfinite(lipschitz), "invalid_lipschitz", "Lipschitz bound must be positive");
  const std::size_t m = samples.front().first.size();
  const std::size_t p = samples.front().second.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require(samples[i].first.size() == m && samples[i].second.size() == p, "dimension_mismatch",
            "samples[" + std::to_string(i) + "] has inconsistent dimensions");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t k = i + 1; k < samples.size(); ++k) {
      const double dist = norm(subtract(samples[i].first, samples[k].first));
      for (std::size_t j = 0; j < p; ++j) {
        const double gap = std::abs(samples[i].second[j] - samples[k].second[j]);
        if (gap > lipschitz * dist * (1.0 + 1e-12) + 1e-15) {
          reject("inconsistent_samples", "samples " + std::to_string(i) + " and " + std::to_string(k) +
                                             " violate the Lipschitz bound in coordinate " +
                                             std::to_string(j) + " (gap " + std::to_string(gap) +
                                             " > L*dist " + std::to_string(lipschitz * dist) + ")");
        }
      }
    }
  }
  return McShaneExtension(std::move(samples), lipschitz);
}

double min_consistent_lipschitz(std::span<const std::pair<Vector, Vector>> samples) {
  double best = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t k = i + 1; k < samples.size(); ++k) {
      const double dist = norm(subtract(samples[i].first, samples[k].first));
      double gap = 0.0;
      for (std::size_t j = 0; j < samples[i].second.size(); ++j)
        gap = std::max(gap, std::abs(samples[i].second[j] - samples[k].second[j]));
      if (gap == 0.0) continue;
      if (dist == 0.0) return INFINITY;
      best = std::max(best, gap / dist);
    }
  }
  return best;
}

SignalSampler sparse_unit_sampler(std::size_t n, std::size_t s) {
  require(s >= 1 && s <= n, "invalid_sparsity", "sparsity must lie in [1, n]");
  return [n, s](Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < s; ++i) std::swap(idx[i], idx[i + rng.index(n - i)]);
    Vector x(n, 0.0);
    Vector coeffs = rng.sphere_point(s);
    for (std::size_t i = 0; i < s; ++i) x[idx[i]] = coeffs[i];
    return x;
  };
}

NetworkSpec build_inverse_recovery_net(const Matrix& a, const SignalSampler& sampler, const FitConfig& fit,
                                       double lipschitz_bound, const RecoverySampling& sampling) {
  require(a.all_finite(), "non_finite", "measurement matrix contains non-finite entries");
  fit.validate();
  require(sampling.signal_samples >= 1, "empty_data", "need at least one signal sample");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  // (1)-(2): measured pairs moved onto the ℓ1 sphere of the measurement space.
  Rng rng(sampling.seed);
  Rng signal_rng = rng.split(1);
  std::vector<std::pair<Vector, Vector>> measured;
  for (std::size_t i = 0; i < sampling.signal_samples; ++i) {
    Vector x = sampler(signal_rng);
    require(x.size() == n, "dimension_mismatch", "sampler produced a signal of the wrong length");
    Vector y = matvec(a, x);
    const double scale = norm(y, VectorNorm::l1);
    if (scale == 0.0) reject("signal_in_kernel", "signal in kernel of A (sample " + std::to_string(i) + ")");
    Vector u = scaled(y, 1.0 / scale);
    Vector v = scaled(x, 1.0 / scale);
    const bool duplicate = std::any_of(measured.begin(), measured.end(), [&](const auto& s) {
      return norm(subtract(s.first, u)) <= 1e-12 && norm(subtract(s.second, v)) <= 1e-12;
    });
    if (!duplicate) measured.emplace_back(std::move(u), std::move(v));
  }

  // (3): densify with the McShane extension on fresh ℓ1-sphere points.
  const McShaneExtension extension = mcshane_extend(measured, lipschitz_bound);
  SphereSampleSet data{{}, SphereNorm::l1};
  for (std::size_t w = 0; w < std::max<std::size_t>(1, sampling.sample_weight); ++w)
    data.pairs.insert(data.pairs.end(), measured.begin(), measured.end());
  Rng dense_rng = rng.split(2);
  for (std::size_t i = 0; i < sampling.dense_points; ++i) {
    Vector u = dense_rng.l1_sphere_point(m);
    // Keep the direction exactly on the sphere after rounding.
    const double l1 = norm(u, VectorNorm::l1);
    for (double& c : u) c /= l1;
    data.pairs.emplace_back(u, extension(u));
  }

  // (4): one scalar network per signal coordinate.
  std::vector<NetworkSpec> coordinate_nets;
  coordinate_nets.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    SphereSampleSet coordinate{{}, SphereNorm::l1};
    coordinate.pairs.reserve(data.pairs.size());
    for (const auto& [u, v] : data.pairs) coordinate.pairs.emplace_back(u, Vector{v[j]});
    FitConfig cfg = fit;
    cfg.seed = Rng(fit.seed).split(100 + j).seed();
    coordinate_nets.push_back(fit_one_hidden_layer(coordinate, cfg).network);
  }

  // (5)
  return homogenize_stacked(coordinate_nets);
}

}  // namespace homogenlab
