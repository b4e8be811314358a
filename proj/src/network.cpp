#include "homogenlab/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "homogenlab/error.hpp"
#include "homogenlab/parallel.hpp"
#include "homogenlab/random.hpp"

namespace homogenlab {

double ActivationSpec::apply(double x) const noexcept {
  if (const auto* f = std::get_if<ReluFamily>(&kind_)) {
    return x > 0 ? f->alpha * x : (x < 0 ? -f->beta * x : 0.0);
  }
  switch (std::get<NamedActivation>(kind_)) {
    case NamedActivation::tanh:
      return std::tanh(x);
    case NamedActivation::softplus:
      return x > 30 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  }
  return 0.0;
}

std::string_view to_string(NamedActivation a) {
  switch (a) {
    case NamedActivation::tanh:
      return "tanh";
    case NamedActivation::softplus:
      return "softplus";
  }
  return "?";
}

std::string ActivationSpec::describe() const {
  if (is_relu_family()) {
    std::ostringstream os;
    os << "relu_family(" << family().alpha << ", " << family().beta << ")";
    return os.str();
  }
  return std::string(to_string(named()));
}

NetworkSpec::NetworkSpec(std::vector<LayerSpec> layers, ActivationSpec activation, bool unbiased)
    : layers_(std::move(layers)), activation_(activation), unbiased_(unbiased) {
  require(!layers_.empty(), "empty_network", "a network needs at least the read-out layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    const std::string where = "layers[" + std::to_string(i) + "]";
    require(l.weights.rows() > 0 && l.weights.cols() > 0, "dimension_mismatch",
            where + ": weight matrix is empty");
    require(l.weights.all_finite(), "non_finite", where + ": non-finite weight");
    if (l.bias) {
      require(l.bias->size() == l.outputs(), "dimension_mismatch",
              where + ".bias: length " + std::to_string(l.bias->size()) + " != weight rows " +
                  std::to_string(l.outputs()));
      require(all_finite(*l.bias), "non_finite", where + ".bias: non-finite entry");
      require(!unbiased_, "bias_in_unbiased", where + ".bias: present although the network is unbiased");
    }
    if (i > 0) {
      require(l.inputs() == layers_[i - 1].outputs(), "dimension_mismatch",
              where + ": expects " + std::to_string(l.inputs()) + " inputs but layers[" +
                  std::to_string(i - 1) + "] produces " + std::to_string(layers_[i - 1].outputs()));
    }
  }
}

NetworkSpec NetworkSpec::from_layers(std::vector<LayerSpec> layers, ActivationSpec activation) {
  const bool unbiased = std::none_of(layers.begin(), layers.end(), [](const LayerSpec& l) { return l.bias.has_value(); });
  return NetworkSpec(std::move(layers), activation, unbiased);
}

std::vector<std::size_t> NetworkSpec::hidden_widths() const {
  std::vector<std::size_t> w;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) w.push_back(layers_[i].outputs());
  return w;
}

bool NetworkSpec::has_any_bias() const noexcept {
  return std::any_of(layers_.begin(), layers_.end(), [](const LayerSpec& l) { return l.bias.has_value(); });
}

Vector eval(const NetworkSpec& net, std::span<const double> x) {
  require(x.size() == net.input_dim(), "dimension_mismatch",
          "network expects input length " + std::to_string(net.input_dim()) + ", got " +
              std::to_string(x.size()));
  Vector h(x.begin(), x.end());
  const auto& layers = net.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    Vector next = matvec(layers[i].weights, h);
    if (layers[i].bias) {
      for (std::size_t j = 0; j < next.size(); ++j) next[j] += (*layers[i].bias)[j];
    }
    if (i + 1 < layers.size()) {
      for (double& v : next) v = net.activation().apply(v);
    }
    h = std::move(next);
  }
  return h;
}

Evaluatable as_function(NetworkSpec net) {
  return [net = std::move(net)](std::span<const double> x) { return eval(net, x); };
}

HomogeneityReport check_positive_homogeneity(const Evaluatable& f, const HomogeneityProbe& probe) {
  require(!probe.scales.empty(), "empty_probe", "homogeneity probe needs at least one scale");
  for (double s : probe.scales) require(s > 0.0, "invalid_scale", "probe scales must be positive");
  require(probe.point_count + probe.extra_points.size() > 0, "empty_probe",
          "homogeneity probe needs at least one point");

  std::vector<Vector> points;
  points.reserve(probe.point_count + probe.extra_points.size());
  Rng rng(probe.seed);
  for (std::size_t i = 0; i < probe.point_count; ++i) points.push_back(rng.normal_vector(probe.dimension));
  for (const auto& p : probe.extra_points) points.push_back(p);

  struct Worst {
    double defect = -1.0;
    double scale = 0.0;
  };
  std::vector<Worst> per_point(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Vector& x = points[i];
    const Vector fx = f(x);
    const double denom_base = 1.0 + norm(x);
    for (double lambda : probe.scales) {
      const Vector flx = f(scaled(x, lambda));
      require(flx.size() == fx.size(), "dimension_mismatch", "function output length changed between calls");
      double acc = 0.0;
      for (std::size_t j = 0; j < fx.size(); ++j) {
        const double d = flx[j] - lambda * fx[j];
        acc += d * d;
      }
      const double defect = std::sqrt(acc) / (lambda * denom_base);
      // NaN outputs count as infinitely defective.
      const double value = std::isnan(defect) ? INFINITY : defect;
      if (value > per_point[i].defect) per_point[i] = {value, lambda};
    }
  });

  HomogeneityReport report;
  report.samples = points.size() * probe.scales.size();
  report.max_defect = -1.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (per_point[i].defect > report.max_defect) {
      report.max_defect = per_point[i].defect;
      report.worst_scale = per_point[i].scale;
      report.worst_point = points[i];
    }
  }
  report.within_tolerance = report.max_defect <= probe.tolerance;
  return report;
}

HomogeneityReport check_positive_homogeneity(const NetworkSpec& net, HomogeneityProbe probe) {
  probe.dimension = net.input_dim();
  return check_positive_homogeneity([&net](std::span<const double> x) { return eval(net, x); }, probe);
}

std::pair<double, double> relu_recovery_coefficients(double alpha, double beta) {
  if (std::abs(alpha) == std::abs(beta)) {
    reject("degenerate_activation_family",
           "degenerate activation family: |alpha| = |beta| (" + std::to_string(alpha) + ", " +
               std::to_string(beta) + ")");
  }
  const double det = alpha * alpha - beta * beta;
  return {alpha / det, beta / det};
}

namespace {

void require_unbiased_relu(const NetworkSpec& net, const char* op) {
  require(net.activation().is_relu(), "not_relu", std::string(op) + " needs a relu network");
  require(!net.has_any_bias(), "biased_network", std::string(op) + " needs an unbiased network");
}

// (B; −B)
Matrix stack_negated(const Matrix& b) {
  Matrix out(2 * b.rows(), b.cols());
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      out(i, j) = b(i, j);
      out(b.rows() + i, j) = -b(i, j);
    }
  }
  return out;
}

// (c1·A  c2·A)
Matrix side_by_side(const Matrix& a, double c1, double c2) {
  Matrix out(a.rows(), 2 * a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(i, j) = c1 * a(i, j);
      out(i, a.cols() + j) = c2 * a(i, j);
    }
  }
  return out;
}

}  // namespace

NetworkSpec convert_relu_to_activation(const NetworkSpec& net, double alpha, double beta) {
  require_unbiased_relu(net, "convert_relu_to_activation");
  const auto [g1, g2] = relu_recovery_coefficients(alpha, beta);
  const auto& layers = net.layers();
  std::vector<LayerSpec> out;
  out.reserve(layers.size());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Matrix& w = layers[i].weights;
    const bool hidden = i + 1 < layers.size();
    if (i == 0) {
      out.push_back({hidden ? stack_negated(w) : w, std::nullopt});
    } else {
      // Previous hidden output relu(z) is γ1·σ(z) − γ2·σ(−z).
      Matrix read = side_by_side(w, g1, -g2);
      out.push_back({hidden ? stack_negated(read) : std::move(read), std::nullopt});
    }
  }
  return NetworkSpec(std::move(out), ActivationSpec::relu_family(alpha, beta), true);
}

NetworkSpec pad_identity_layers(const NetworkSpec& net, std::size_t target_depth) {
  require_unbiased_relu(net, "pad_identity_layers");
  require(target_depth >= net.depth(), "depth_too_small",
          "target depth " + std::to_string(target_depth) + " is below current depth " +
              std::to_string(net.depth()));
  const std::size_t extra = target_depth - net.depth();
  if (extra == 0) return net;

  std::vector<LayerSpec> out(net.layers().begin(), net.layers().end() - 1);
  const Matrix& readout = net.layers().back().weights;
  const std::size_t k = readout.cols();
  const Matrix id = Matrix::identity(k);
  out.push_back({stack_negated(id), std::nullopt});
  // relu((Id; −Id)·(Id −Id)·s): the gadget read-out fused with the next gadget.
  const Matrix fused = stack_negated(side_by_side(id, 1.0, -1.0));
  for (std::size_t i = 1; i < extra; ++i) out.push_back({fused, std::nullopt});
  out.push_back({side_by_side(readout, 1.0, -1.0), std::nullopt});
  return NetworkSpec(std::move(out), ActivationSpec::relu(), true);
}

HomogeneityReport sigma_gamma_probe(const ActivationSpec& activation, std::span<const double> gamma,
                                    HomogeneityProbe probe) {
  require(!gamma.empty(), "empty_gamma", "sigma_gamma needs k >= 1 coefficients");
  Vector g(gamma.begin(), gamma.end());
  probe.dimension = 1;
  auto composed = [activation, g](std::span<const double> x) {
    double v = x[0];
    for (double c : g) v = c * activation.apply(v);
    return Vector{v};
  };
  return check_positive_homogeneity(composed, probe);
}

}  // namespace homogenlab
