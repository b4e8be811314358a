#include <gtest/gtest.h>

#include <cmath>

#include "homogenlab/bounds.hpp"
#include "homogenlab/error.hpp"
#include "homogenlab/homogenize.hpp"
#include "test_support.hpp"

using namespace homogenlab;
using testing_support::max_abs_diff;
using testing_support::random_network;

namespace {

std::string code_of(const std::function<void()>& action) {
  try {
    action();
  } catch (const InputError& e) {
    return e.code();
  }
  return "accepted";
}

// ‖x‖₁·g(x/‖x‖₁), written out directly.
Vector lifted(const NetworkSpec& g, const Vector& x) {
  const double r = norm(x, VectorNorm::l1);
  if (r == 0.0) return Vector(g.output_dim(), 0.0);
  return scaled(eval(g, scaled(x, 1.0 / r)), r);
}

SphereSampleSet l1_samples(std::size_t m, std::size_t count, Rng& rng,
                           const std::function<Vector(const Vector&)>& target) {
  SphereSampleSet data{{}, SphereNorm::l1};
  for (std::size_t i = 0; i < count; ++i) {
    const Vector u = rng.l1_sphere_point(m);
    data.pairs.emplace_back(u, target(u));
  }
  return data;
}

}  // namespace

TEST(Homogenize, MatchesLiftedFunction) {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = 2 + trial % 4, k = 3 + trial, p = 1 + trial % 3;
    const NetworkSpec g = random_network({m, k, p}, true, rng);
    const NetworkSpec f = homogenize_one_layer(g);
    EXPECT_TRUE(f.unbiased());
    EXPECT_EQ(f.hidden_widths(), (std::vector<std::size_t>{2 * m, p * (k + 1)}));
    for (int i = 0; i < 100; ++i) {
      const Vector x = rng.normal_vector(m, i % 2 ? 10.0 : 0.1);
      EXPECT_LE(max_abs_diff(eval(f, x), lifted(g, x)), 1e-9 * (1 + norm(x, VectorNorm::l1)));
    }
    EXPECT_EQ(eval(f, Vector(m, 0.0)), Vector(p, 0.0));
    EXPECT_LE(check_positive_homogeneity(f, HomogeneityProbe{.seed = 3}).max_defect, 1e-12);
  }
}

TEST(Homogenize, AgreesWithOriginalOnTheSphere) {
  Rng rng(2);
  const NetworkSpec g = random_network({3, 6, 2}, true, rng);
  const NetworkSpec f = homogenize_one_layer(g);
  for (int i = 0; i < 100; ++i) {
    const Vector u = rng.l1_sphere_point(3);
    EXPECT_LE(max_abs_diff(eval(f, u), eval(g, u)), 1e-12);
  }
}

TEST(Homogenize, StackedUsesOneNetworkPerCoordinate) {
  Rng rng(3);
  std::vector<NetworkSpec> parts{random_network({3, 4, 1}, true, rng), random_network({3, 2, 1}, true, rng)};
  const NetworkSpec f = homogenize_stacked(parts);
  EXPECT_EQ(f.hidden_widths(), (std::vector<std::size_t>{6, 8}));
  const Vector x{0.3, -1.2, 2.0};
  const Vector out = eval(f, x);
  EXPECT_NEAR(out[0], lifted(parts[0], x)[0], 1e-12);
  EXPECT_NEAR(out[1], lifted(parts[1], x)[0], 1e-12);
}

TEST(Homogenize, RejectsWrongShapes) {
  Rng rng(4);
  EXPECT_EQ(code_of([&] { homogenize_one_layer(random_network({2, 3, 3, 1}, true, rng)); }), "wrong_depth");
  const NetworkSpec tanh_net({{rng.normal_matrix(3, 2), std::nullopt}, {rng.normal_matrix(1, 3), std::nullopt}},
                             NamedActivation::tanh, true);
  EXPECT_EQ(code_of([&] { homogenize_one_layer(tanh_net); }), "not_relu");
  std::vector<NetworkSpec> mixed{random_network({2, 3, 1}, true, rng), random_network({3, 3, 1}, true, rng)};
  EXPECT_EQ(code_of([&] { homogenize_stacked(mixed); }), "dimension_mismatch");
}

TEST(SampleSet, Validation) {
  SphereSampleSet data{{}, SphereNorm::l1};
  EXPECT_EQ(code_of([&] { data.validate(); }), "empty_data");
  data.pairs = {{Vector{0.5, 0.5}, Vector{1}}, {Vector{1, 0}, Vector{1, 2}}};
  EXPECT_EQ(code_of([&] { data.validate(); }), "dimension_mismatch");
  data.pairs = {{Vector{0.5, 0.6}, Vector{1}}};
  EXPECT_EQ(code_of([&] { data.validate(); }), "off_sphere");
  data.pairs = {{Vector{0.5, -0.5}, Vector{NAN}}};
  EXPECT_EQ(code_of([&] { data.validate(); }), "non_finite");
  data.norm_tag = SphereNorm::l2;
  data.pairs = {{Vector{0.6, 0.8}, Vector{1}}};
  EXPECT_NO_THROW(data.validate());
}

TEST(Fit, FitsAnExactlyRepresentableTarget) {
  Rng rng(5);
  const SphereSampleSet data = l1_samples(3, 64, rng, [](const Vector& u) { return Vector{2 * u[0]}; });
  FitConfig cfg{.width = 4, .learning_rate = 0.5, .steps = 20000, .restarts = 16, .seed = 1};
  const FitResult result = fit_one_hidden_layer(data, cfg);
  EXPECT_LE(result.achieved_mse, 1e-8);
  EXPECT_EQ(result.network.hidden_widths(), (std::vector<std::size_t>{4}));
}

TEST(Fit, DeterministicAndRecordsCurve) {
  Rng rng(6);
  const SphereSampleSet data =
      l1_samples(2, 20, rng, [](const Vector& u) { return Vector{std::abs(u[0]), u[1] * u[1]}; });
  FitConfig cfg{.width = 8, .steps = 300, .restarts = 3, .seed = 11, .curve_every = 100};
  const FitResult a = fit_one_hidden_layer(data, cfg);
  const FitResult b = fit_one_hidden_layer(data, cfg);
  EXPECT_EQ(a.network, b.network);
  EXPECT_EQ(a.achieved_mse, b.achieved_mse);
  EXPECT_EQ(a.best_restart, b.best_restart);
  EXPECT_FALSE(a.curve.empty());
  cfg.with_bias = false;
  const FitResult unbiased = fit_one_hidden_layer(data, cfg);
  EXPECT_TRUE(unbiased.network.unbiased());
  EXPECT_LE(check_positive_homogeneity(unbiased.network, HomogeneityProbe{.seed = 1}).max_defect, 1e-12);
}

TEST(Fit, RejectsBadConfig) {
  Rng rng(7);
  const SphereSampleSet data = l1_samples(2, 4, rng, [](const Vector& u) { return Vector{u[0]}; });
  EXPECT_EQ(code_of([&] { fit_one_hidden_layer(data, FitConfig{.width = 0}); }), "invalid_config");
  EXPECT_EQ(code_of([&] { fit_one_hidden_layer(data, FitConfig{.learning_rate = -1}); }), "invalid_config");
  EXPECT_EQ(code_of([&] { fit_one_hidden_layer(data, FitConfig{.learning_rate = 1e6, .steps = 50}); }),
            "fit_diverged");
}

TEST(RadialExtension, HomogeneousAndLipschitz) {
  // f on the sphere: u ↦ (u₀², u₁), √5-Lipschitz and bounded by 1 there.
  const Evaluatable on_sphere = [](std::span<const double> u) { return Vector{u[0] * u[0], u[1]}; };
  const Evaluatable ext = radial_extend_l2(on_sphere);
  EXPECT_EQ(ext(Vector{0, 0}), (Vector{0, 0}));
  Rng rng(8);
  double worst_ratio = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const Vector x = rng.normal_vector(2, 3.0), y = rng.normal_vector(2, 3.0);
    const Vector ux = scaled(x, 1.0 / norm(x));
    EXPECT_LE(max_abs_diff(ext(ux), on_sphere(ux)), 1e-15);
    EXPECT_LE(max_abs_diff(ext(scaled(x, 2.5)), scaled(ext(x), 2.5)), 1e-12 * (1 + norm(x)));
    worst_ratio = std::max(worst_ratio, norm(subtract(ext(x), ext(y))) / norm(subtract(x, y)));
  }
  EXPECT_LE(worst_ratio, 2 * std::sqrt(5.0) + 1e-9);
}

TEST(McShane, InterpolatesAndIsLipschitz) {
  Rng rng(9);
  std::vector<std::pair<Vector, Vector>> samples;
  for (int i = 0; i < 30; ++i) {
    const Vector u = rng.normal_vector(3);
    samples.emplace_back(u, Vector{std::sin(u[0]), norm(u)});
  }
  const double lip = min_consistent_lipschitz(samples);
  EXPECT_LE(lip, 1.0 + 1e-12);
  const McShaneExtension ext = mcshane_extend(samples, 1.0);
  for (const auto& [u, v] : samples) EXPECT_LE(max_abs_diff(ext(u), v), 1e-12);
  for (int i = 0; i < 500; ++i) {
    const Vector x = rng.normal_vector(3, 2.0), y = rng.normal_vector(3, 2.0);
    const Vector fx = ext(x), fy = ext(y);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_LE(std::abs(fx[j] - fy[j]), norm(subtract(x, y)) * (1 + 1e-12));
  }
}

TEST(McShane, RejectsInconsistentSamples) {
  std::vector<std::pair<Vector, Vector>> samples{{Vector{0, 0}, Vector{0}}, {Vector{1, 0}, Vector{3}}};
  EXPECT_NEAR(min_consistent_lipschitz(samples), 3.0, 1e-15);
  try {
    mcshane_extend(samples, 2.0);
    FAIL() << "expected rejection";
  } catch (const InputError& e) {
    EXPECT_EQ(e.code(), "inconsistent_samples");
    EXPECT_NE(std::string(e.what()).find("samples 0 and 1"), std::string::npos);
  }
  EXPECT_NO_THROW(mcshane_extend(samples, 3.0));
  EXPECT_EQ(code_of([&] { mcshane_extend({}, 1.0); }), "empty_data");
  EXPECT_EQ(code_of([&] { mcshane_extend(samples, 0.0); }), "invalid_lipschitz");
}

TEST(RecoveryNet, RejectsKernelSignals) {
  const Matrix a = Matrix::from_rows({{1, 0, 0}, {0, 1, 0}});
  const SignalSampler third_axis = [](Rng&) { return Vector{0, 0, 1}; };
  EXPECT_EQ(code_of([&] { build_inverse_recovery_net(a, third_axis, FitConfig{.steps = 10}, 1.0); }),
            "signal_in_kernel");
}

TEST(RecoveryNet, InvertsAnOrthogonalMeasurement) {
  // A = Id on ℝ² with 1-sparse signals: the inverse is the identity, which
  // the pipeline should approximate closely and represent homogeneously.
  const Matrix a = Matrix::identity(2);
  FitConfig fit{.width = 16, .learning_rate = 0.1, .steps = 4000, .restarts = 2, .seed = 3};
  const NetworkSpec net = build_inverse_recovery_net(a, sparse_unit_sampler(2, 1), fit, 1.0,
                                                     RecoverySampling{.signal_samples = 16, .dense_points = 32});
  EXPECT_EQ(net.depth(), 2u);
  EXPECT_TRUE(net.unbiased());
  EXPECT_LE(check_positive_homogeneity(net, HomogeneityProbe{.seed = 2}).max_defect, 1e-12);
  for (const Vector& x : {Vector{1, 0}, Vector{0, -1}, Vector{-3, 0}})
    EXPECT_LE(norm(subtract(eval(net, x), x)), 0.1 * norm(x));
}

TEST(Fit, RawPairsAcceptOffSphereInputs) {
  // Unbiased fit of x ↦ 2x on points of varying scale: representable exactly.
  Rng rng(10);
  std::vector<std::pair<Vector, Vector>> pairs;
  for (int i = 0; i < 32; ++i) {
    const Vector x = rng.normal_vector(2, 1.0 + i % 4);
    pairs.emplace_back(x, scaled(x, 2.0));
  }
  const FitResult r = fit_to_pairs(pairs, FitConfig{.width = 8, .learning_rate = 0.02, .steps = 4000,
                                                    .restarts = 4, .seed = 2, .with_bias = false});
  EXPECT_LE(r.achieved_mse, 1e-4);
  EXPECT_TRUE(r.network.unbiased());
  EXPECT_EQ(code_of([] { fit_to_pairs({}, FitConfig{}); }), "empty_data");
}
