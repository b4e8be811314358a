#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "homogenlab/network.hpp"
#include "homogenlab/numerics.hpp"
#include "homogenlab/random.hpp"

namespace homogenlab {

enum class SphereNorm { l1, l2 };

/// Input/target pairs whose inputs all lie on the unit sphere of `norm_tag`.
struct SphereSampleSet {
  std::vector<std::pair<Vector, Vector>> pairs;
  SphereNorm norm_tag = SphereNorm::l1;

  /// Rejects empty sets, ragged dimensions and directions off the sphere
  /// (tolerance 1e-12).
  void validate() const;
  std::size_t input_dim() const { return pairs.front().first.size(); }
  std::size_t output_dim() const { return pairs.front().second.size(); }
};

struct FitConfig {
  std::size_t width = 32;
  double learning_rate = 0.05;
  std::size_t steps = 4000;
  std::size_t restarts = 2;
  std::uint64_t seed = 0;
  /// Stop a restart early once its mse drops to this value.
  double target_mse = 0.0;
  /// false trains a bias-free network (both layers).
  bool with_bias = true;
  /// Record (step, mse) every this many steps; 0 disables the curve.
  std::size_t curve_every = 0;

  void validate() const;
};

struct FitResult {
  NetworkSpec network;
  double achieved_mse = 0.0;
  std::size_t best_restart = 0;
  std::vector<std::pair<std::size_t, double>> curve;
};

/// Seeded full-batch gradient descent on a one-hidden-layer relu network
/// (mean squared error averaged over samples and output coordinates). Each
/// restart uses its own RNG stream; the best restart wins with ties going to
/// the lower restart index.
FitResult fit_one_hidden_layer(const SphereSampleSet& data, const FitConfig& config);

/// The same fitter on arbitrary input/target pairs (no sphere constraint).
/// With `with_bias = false` the loss weights each pair by its own scale, so
/// pairs (A·x, x) with unit x make the mse the mean squared relative error.
FitResult fit_to_pairs(std::span<const std::pair<Vector, Vector>> pairs, const FitConfig& config);

/// Exact homogenization of a one-hidden-layer relu network g (biases allowed):
/// returns an unbiased two-hidden-layer relu network computing
/// ‖x‖₁·g(x/‖x‖₁) (and 0 at x = 0). First hidden width 2m, second hidden
/// width p·(k+1).
NetworkSpec homogenize_one_layer(const NetworkSpec& g);

/// Same construction for p scalar-output networks sharing the input; output
/// coordinate j comes from coordinate_nets[j]. The first hidden layer is shared.
NetworkSpec homogenize_stacked(std::span<const NetworkSpec> coordinate_nets);

/// f̃(x) = ‖x‖₂·f(x/‖x‖₂), f̃(0) = 0. If f is L-Lipschitz on the sphere
/// (and bounded by L there), f̃ is 2L-Lipschitz.
Evaluatable radial_extend_l2(Evaluatable f_on_sphere);

/// Per-coordinate McShane extension f_j(x) = min_i [(v_i)_j + L·‖x − u_i‖₂].
/// Each coordinate is L-Lipschitz, so the vector map is √p·L-Lipschitz.
class McShaneExtension {
 public:
  McShaneExtension(std::vector<std::pair<Vector, Vector>> samples, double lipschitz);

  Vector operator()(std::span<const double> x) const;
  double lipschitz() const noexcept { return lipschitz_; }
  std::size_t output_dim() const noexcept { return samples_.front().second.size(); }

 private:
  std::vector<std::pair<Vector, Vector>> samples_;
  double lipschitz_;
};

/// Rejects samples violating |(v_i)_j − (v_k)_j| ≤ L·‖u_i − u_k‖₂, naming the pair.
McShaneExtension mcshane_extend(std::vector<std::pair<Vector, Vector>> samples, double lipschitz);

/// Smallest L for which the samples are coordinate-wise consistent.
double min_consistent_lipschitz(std::span<const std::pair<Vector, Vector>> samples);

using SignalSampler = std::function<Vector(Rng&)>;

/// Unit-ℓ2 s-sparse signals: uniform support, Gaussian entries, normalized.
SignalSampler sparse_unit_sampler(std::size_t n, std::size_t s);

struct RecoverySampling {
  std::size_t signal_samples = 96;
  std::size_t dense_points = 96;
  /// Each measured signal enters the training set this many times.
  std::size_t sample_weight = 8;
  std::uint64_t seed = 0;
};

/// Two-hidden-layer unbiased relu inverse for y = A·x on the signal set drawn
/// by `sampler`: normalize measured pairs onto the ℓ1 sphere, densify the
/// inverse with a McShane extension, fit one scalar network per signal
/// coordinate, then homogenize.
NetworkSpec build_inverse_recovery_net(const Matrix& a, const SignalSampler& sampler, const FitConfig& fit,
                                       double lipschitz_bound, const RecoverySampling& sampling = {});

}  // namespace homogenlab
