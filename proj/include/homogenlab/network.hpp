#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "homogenlab/numerics.hpp"

namespace homogenlab {

/// σ(x) = alpha·relu(x) + beta·relu(−x). relu itself is (1, 0).
struct ReluFamily {
  double alpha = 1.0;
  double beta = 0.0;
  friend bool operator==(const ReluFamily&, const ReluFamily&) = default;
};

/// Smooth activations kept around as negative controls for homogeneity probes.
enum class NamedActivation { tanh, softplus };

class ActivationSpec {
 public:
  ActivationSpec() = default;
  ActivationSpec(ReluFamily family) : kind_(family) {}
  ActivationSpec(NamedActivation named) : kind_(named) {}

  static ActivationSpec relu() { return ReluFamily{1.0, 0.0}; }
  static ActivationSpec relu_family(double alpha, double beta) { return ReluFamily{alpha, beta}; }

  bool is_relu_family() const noexcept { return std::holds_alternative<ReluFamily>(kind_); }
  bool is_relu() const noexcept { return is_relu_family() && family() == ReluFamily{1.0, 0.0}; }
  const ReluFamily& family() const { return std::get<ReluFamily>(kind_); }
  NamedActivation named() const { return std::get<NamedActivation>(kind_); }

  double apply(double x) const noexcept;
  std::string describe() const;

  friend bool operator==(const ActivationSpec&, const ActivationSpec&) = default;

 private:
  std::variant<ReluFamily, NamedActivation> kind_ = ReluFamily{};
};

std::string_view to_string(NamedActivation a);

/// One affine map W·h + b. `bias` is absent for bias-free layers.
struct LayerSpec {
  Matrix weights;
  std::optional<Vector> bias;

  std::size_t inputs() const noexcept { return weights.cols(); }
  std::size_t outputs() const noexcept { return weights.rows(); }
  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Feedforward network W_{d+1} σ(W_d σ(… σ(W_1 x + b_1) …) + b_d) + b_{d+1}.
/// The last layer is the affine read-out; σ acts on hidden layers only.
class NetworkSpec {
 public:
  /// Validates the dimension chain and the unbiased flag.
  NetworkSpec(std::vector<LayerSpec> layers, ActivationSpec activation, bool unbiased);

  /// Convenience: unbiased flag derived from the absence of every bias.
  static NetworkSpec from_layers(std::vector<LayerSpec> layers,
                                 ActivationSpec activation = ActivationSpec::relu());

  const std::vector<LayerSpec>& layers() const noexcept { return layers_; }
  const ActivationSpec& activation() const noexcept { return activation_; }
  bool unbiased() const noexcept { return unbiased_; }

  /// Number of hidden layers d.
  std::size_t depth() const noexcept { return layers_.size() - 1; }
  std::size_t input_dim() const noexcept { return layers_.front().inputs(); }
  std::size_t output_dim() const noexcept { return layers_.back().outputs(); }
  std::vector<std::size_t> hidden_widths() const;
  bool has_any_bias() const noexcept;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;

 private:
  std::vector<LayerSpec> layers_;
  ActivationSpec activation_;
  bool unbiased_ = true;
};

using Evaluatable = std::function<Vector(std::span<const double>)>;

/// Forward pass. Rejects inputs whose length differs from the input dimension.
Vector eval(const NetworkSpec& net, std::span<const double> x);
Evaluatable as_function(NetworkSpec net);

struct HomogeneityReport {
  double max_defect = 0.0;
  Vector worst_point;
  double worst_scale = 0.0;
  std::size_t samples = 0;
  bool within_tolerance = true;
};

/// Sampling plan for homogeneity checks. Points are `point_count` standard
/// normal vectors of length `dimension`, followed by any `extra_points`.
struct HomogeneityProbe {
  std::size_t dimension = 1;
  std::size_t point_count = 64;
  std::vector<double> scales = {0.5, 1.0, 2.0, 10.0, 100.0};
  double tolerance = 1e-12;
  std::uint64_t seed = 0;
  std::vector<Vector> extra_points;
};

/// max over probed (x, λ) of ‖f(λx) − λ·f(x)‖₂ / (λ·(1 + ‖x‖₂)). A sampled
/// statistic, not a certificate.
HomogeneityReport check_positive_homogeneity(const Evaluatable& f, const HomogeneityProbe& probe);
HomogeneityReport check_positive_homogeneity(const NetworkSpec& net, HomogeneityProbe probe);

/// Coefficients (γ1, γ2) with γ1·σ(x) − γ2·σ(−x) = relu(x) for
/// σ = alpha·relu(x) + beta·relu(−x). Rejects |alpha| = |beta|.
std::pair<double, double> relu_recovery_coefficients(double alpha, double beta);

/// Rewrites an unbiased relu network for the activation alpha·relu(x) +
/// beta·relu(−x): every hidden layer doubles to (B; −B) and the following
/// layer reads (γ1·A  −γ2·A). The function represented is unchanged.
NetworkSpec convert_relu_to_activation(const NetworkSpec& net, double alpha, double beta);

/// Inserts identity gadgets x ↦ (Id −Id)·relu((Id; −Id)·x) before the
/// read-out until the network has `target_depth` hidden layers.
NetworkSpec pad_identity_layers(const NetworkSpec& net, std::size_t target_depth);

/// Probe of σ_γ(x) = γ_k σ(γ_{k−1} σ(… γ_1 σ(x) …)) as a scalar function.
HomogeneityReport sigma_gamma_probe(const ActivationSpec& activation, std::span<const double> gamma,
                                    HomogeneityProbe probe);

/// JSON network document (see README for the schema).
std::string serialize(const NetworkSpec& net);
NetworkSpec deserialize(std::string_view text);

NetworkSpec load_network(const std::string& path);
void save_network(const NetworkSpec& net, const std::string& path);

}  // namespace homogenlab
