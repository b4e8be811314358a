#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "homogenlab/error.hpp"
#include "homogenlab/network.hpp"
#include "test_support.hpp"

using namespace homogenlab;
using testing_support::max_abs_diff;
using testing_support::random_network;
using testing_support::to_eigen;

namespace {

// Forward pass written against Eigen, independent of eval().
Eigen::VectorXd eigen_forward(const NetworkSpec& net, const Eigen::VectorXd& x) {
  Eigen::VectorXd h = x;
  const auto& layers = net.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    h = to_eigen(layers[i].weights) * h;
    if (layers[i].bias) h += Eigen::Map<const Eigen::VectorXd>(layers[i].bias->data(), layers[i].bias->size());
    if (i + 1 < layers.size()) h = h.unaryExpr([&](double v) { return net.activation().apply(v); });
  }
  return h;
}

double relative_gap(const Vector& a, const Vector& b) { return max_abs_diff(a, b) / (1.0 + norm(b, VectorNorm::linf)); }

}  // namespace

TEST(Activation, ReluFamilyValues) {
  const ActivationSpec a = ActivationSpec::relu_family(2.0, -0.5);
  EXPECT_DOUBLE_EQ(a.apply(3.0), 6.0);
  EXPECT_DOUBLE_EQ(a.apply(-4.0), -2.0);
  EXPECT_TRUE(ActivationSpec::relu().is_relu());
  EXPECT_FALSE(a.is_relu());
  EXPECT_FALSE(ActivationSpec(NamedActivation::tanh).is_relu_family());
}

TEST(Network, EvalMatchesEigenForwardPass) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const NetworkSpec net = random_network({4, 7, 5, 3}, trial % 2 == 0, rng);
    const Vector x = rng.normal_vector(4);
    const Eigen::VectorXd ref = eigen_forward(net, Eigen::Map<const Eigen::VectorXd>(x.data(), 4));
    const Vector got = eval(net, x);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(got[i], ref[i], 1e-12 * (1 + std::abs(ref[i])));
  }
}

TEST(Network, ValidatesStructure) {
  Rng rng(2);
  std::vector<LayerSpec> bad{{rng.normal_matrix(3, 2), std::nullopt}, {rng.normal_matrix(1, 4), std::nullopt}};
  try {
    NetworkSpec::from_layers(bad);
    FAIL() << "expected rejection";
  } catch (const InputError& e) {
    EXPECT_EQ(e.code(), "dimension_mismatch");
  }
  std::vector<LayerSpec> biased{{rng.normal_matrix(3, 2), Vector{1, 2, 3}}, {rng.normal_matrix(1, 3), std::nullopt}};
  try {
    NetworkSpec(biased, ActivationSpec::relu(), true);
    FAIL() << "expected rejection";
  } catch (const InputError& e) {
    EXPECT_EQ(e.code(), "bias_in_unbiased");
  }
  const NetworkSpec net = random_network({2, 3, 1}, false, rng);
  EXPECT_THROW(eval(net, Vector{1, 2, 3}), InputError);
}

TEST(Homogeneity, UnbiasedReluNetsPassBiasedFail) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const NetworkSpec unbiased = random_network({5, 8, 8, 2}, false, rng);
    const HomogeneityReport r = check_positive_homogeneity(unbiased, HomogeneityProbe{.seed = 4});
    EXPECT_LE(r.max_defect, 1e-12);
    EXPECT_TRUE(r.within_tolerance);
    EXPECT_EQ(r.samples, 64u * 5u);
  }
  const NetworkSpec biased = random_network({5, 8, 2}, true, rng);
  const HomogeneityReport r = check_positive_homogeneity(biased, HomogeneityProbe{.seed = 4});
  EXPECT_FALSE(r.within_tolerance);
  EXPECT_GT(r.max_defect, 1e-3);
}

TEST(Homogeneity, ProbeIsDeterministicInSeed) {
  Rng rng(5);
  const NetworkSpec net = random_network({3, 4, 1}, true, rng);
  const auto a = check_positive_homogeneity(net, HomogeneityProbe{.seed = 9});
  const auto b = check_positive_homogeneity(net, HomogeneityProbe{.seed = 9});
  EXPECT_EQ(a.max_defect, b.max_defect);
  EXPECT_EQ(a.worst_point, b.worst_point);
  EXPECT_THROW(check_positive_homogeneity(net, HomogeneityProbe{.scales = {1.0, -2.0}}), InputError);
}

TEST(Conversion, RecoveryCoefficientsInvertTheFamily) {
  for (auto [alpha, beta] : std::vector<std::pair<double, double>>{{1, 0}, {2, 1}, {1, -2}, {0, 3}, {-3, 0.5}}) {
    const auto [g1, g2] = relu_recovery_coefficients(alpha, beta);
    const ActivationSpec sigma = ActivationSpec::relu_family(alpha, beta);
    for (double x : {-3.0, -0.5, 0.0, 0.25, 4.0})
      EXPECT_NEAR(g1 * sigma.apply(x) - g2 * sigma.apply(-x), std::max(x, 0.0), 1e-14);
  }
  for (auto [alpha, beta] : std::vector<std::pair<double, double>>{{1, 1}, {1, -1}, {0, 0}, {-2, 2}}) {
    try {
      relu_recovery_coefficients(alpha, beta);
      FAIL() << "expected rejection";
    } catch (const InputError& e) {
      EXPECT_EQ(e.code(), "degenerate_activation_family");
    }
  }
}

TEST(Conversion, ConvertedNetworkMatchesOriginal) {
  Rng rng(6);
  const NetworkSpec net = random_network({4, 6, 5, 2}, false, rng);
  for (auto [alpha, beta] : std::vector<std::pair<double, double>>{{1, 0}, {2, 1}, {1, -2}, {0, 3}}) {
    const NetworkSpec converted = convert_relu_to_activation(net, alpha, beta);
    EXPECT_EQ(converted.hidden_widths(), (std::vector<std::size_t>{12, 10}));
    EXPECT_FALSE(converted.has_any_bias());
    for (int i = 0; i < 200; ++i) {
      const Vector x = rng.normal_vector(4, 3.0);
      EXPECT_LE(relative_gap(eval(converted, x), eval(net, x)), 1e-12);
    }
  }
  EXPECT_THROW(convert_relu_to_activation(net, 1, 1), InputError);
  EXPECT_THROW(convert_relu_to_activation(random_network({2, 3, 1}, true, rng), 2, 1), InputError);
}

TEST(Padding, PaddedNetworkKeepsItsFunction) {
  Rng rng(7);
  const NetworkSpec net = random_network({3, 5, 4, 2}, false, rng);
  for (std::size_t depth : {2u, 3u, 5u, 8u}) {
    const NetworkSpec padded = pad_identity_layers(net, depth);
    EXPECT_EQ(padded.depth(), depth);
    for (int i = 0; i < 100; ++i) {
      const Vector x = rng.normal_vector(3, 2.0);
      EXPECT_LE(relative_gap(eval(padded, x), eval(net, x)), 1e-12);
    }
  }
  try {
    pad_identity_layers(net, 1);
    FAIL() << "expected rejection";
  } catch (const InputError& e) {
    EXPECT_EQ(e.code(), "depth_too_small");
  }
}

TEST(SigmaGamma, ReluFamilyHomogeneousSmoothNot) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector gamma = rng.normal_vector(3);
    const auto r = sigma_gamma_probe(ActivationSpec::relu_family(1.5, -0.3), gamma, HomogeneityProbe{.seed = 1});
    EXPECT_LE(r.max_defect, 1e-12);
  }
  const Vector gamma{1.0, 1.0};
  EXPECT_GE(sigma_gamma_probe(NamedActivation::tanh, gamma, HomogeneityProbe{.seed = 1}).max_defect, 0.01);
  EXPECT_GE(sigma_gamma_probe(NamedActivation::softplus, gamma, HomogeneityProbe{.seed = 1}).max_defect, 0.01);
  EXPECT_THROW(sigma_gamma_probe(ActivationSpec::relu(), Vector{}, HomogeneityProbe{}), InputError);
}

TEST(Serialization, RoundTripIsExact) {
  Rng rng(9);
  for (bool biased : {false, true}) {
    const NetworkSpec net = random_network({3, 4, 2}, biased, rng);
    EXPECT_EQ(deserialize(serialize(net)), net);
  }
  const NetworkSpec tanh_net({{rng.normal_matrix(2, 2), Vector{0.5, -1}}, {rng.normal_matrix(1, 2), std::nullopt}},
                             NamedActivation::tanh, false);
  EXPECT_EQ(deserialize(serialize(tanh_net)), tanh_net);
}

TEST(Serialization, FileRoundTrip) {
  Rng rng(10);
  const NetworkSpec net = random_network({2, 3, 1}, false, rng);
  const auto path = (std::filesystem::temp_directory_path() / "homogenlab_net_roundtrip.json").string();
  save_network(net, path);
  EXPECT_EQ(load_network(path), net);
  std::filesystem::remove(path);
  EXPECT_THROW(load_network(path), InputError);
}

TEST(Serialization, RejectsMalformedDocuments) {
  auto code_of = [](std::string_view text) {
    try {
      deserialize(text);
    } catch (const InputError& e) {
      return e.code();
    }
    return std::string("accepted");
  };
  EXPECT_EQ(code_of("{"), "malformed_document");
  EXPECT_EQ(code_of("[]"), "malformed_document");
  EXPECT_EQ(code_of(R"({"activation": {"relu_family": {"alpha": 1, "beta": 0}}, "unbiased": true})"),
            "malformed_document");
  EXPECT_EQ(code_of(R"({"activation": {"named": "gelu"}, "unbiased": true, "layers": [{"weights": [[1]]}]})"),
            "malformed_document");
  EXPECT_EQ(code_of(R"({"activation": {"relu_family": {"alpha": 1, "beta": 0}}, "unbiased": true,
                        "layers": [{"weights": [[1, 2], [3]]}]})"),
            "malformed_document");
  EXPECT_EQ(code_of(R"({"activation": {"relu_family": {"alpha": 1, "beta": 0}}, "unbiased": true,
                        "layers": [{"weights": [[1]], "bias": [2]}]})"),
            "bias_in_unbiased");
  EXPECT_EQ(code_of(R"({"activation": {"relu_family": {"alpha": 1, "beta": 0}}, "unbiased": false,
                        "layers": [{"weights": [[1, 2]]}, {"weights": [[1, 2]]}]})"),
            "dimension_mismatch");
  EXPECT_EQ(code_of(R"({"activation": {"relu_family": {"alpha": 1, "beta": 0}}, "unbiased": false,
                        "layers": [{"weights": [[1, 2]], "bias": [0.5]}]})"),
            "accepted");
}
