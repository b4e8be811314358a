#include "homogenlab/cli.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "homogenlab/bounds.hpp"
#include "homogenlab/csv.hpp"
#include "homogenlab/error.hpp"
#include "homogenlab/experiments.hpp"
#include "homogenlab/homogenize.hpp"
#include "homogenlab/network.hpp"
#include "homogenlab/random.hpp"
#include "homogenlab/solvers.hpp"

namespace homogenlab {
namespace {

constexpr int kNotConverged = 2;

using Params = std::vector<std::pair<std::string, std::string>>;

// Every option of the subcommand with its effective value, in declaration order.
Params params_of(const CLI::App* sub) {
  Params params;
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "out") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ";") + r;
    } else {
      value = opt->get_default_str();
    }
    if (!value.empty()) params.emplace_back(name, value);
  }
  return params;
}

void write_artifact(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) reject("io_error", "cannot write '" + path + "'");
  file << text;
}

struct Common {
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::string out;

  void add_to(CLI::App* sub, bool seed_required) {
    seed_opt = sub->add_option("--seed", seed, "RNG seed");
    if (seed_required) seed_opt->required();
    sub->add_option("--out", out, "output path (default: stdout)");
  }
  bool has_seed() const { return seed_opt && seed_opt->count() > 0; }
};

struct MatrixSource {
  std::string path;
  std::size_t m = 0;
  std::size_t n = 0;

  void add_to(CLI::App* sub) {
    sub->add_option("--A", path, "CSV file with the matrix");
    sub->add_option("--m", m, "rows of a generated Gaussian matrix");
    sub->add_option("--n", n, "columns of a generated Gaussian matrix");
  }
  // Generated matrices have N(0, 1/m) entries unless unit_variance is set.
  Matrix load(const Common& common, bool unit_variance = false) const {
    if (!path.empty()) return load_matrix_csv(path);
    require(m > 0 && n > 0, "missing_option", "give --A or both --m and --n");
    require(common.has_seed(), "missing_option", "--seed is required to generate a matrix");
    Rng rng(common.seed);
    return unit_variance ? rng.normal_matrix(m, n) : gaussian_measurement_matrix(m, n, rng);
  }
};

struct Measurements {
  std::string y;
  std::string x;

  void add_to(CLI::App* sub) {
    sub->add_option("--y", y, "measurements, comma separated");
    sub->add_option("--x", x, "signal, comma separated (y = A x)");
  }
  Vector load(const Matrix& a) const {
    require(y.empty() != x.empty(), "missing_option", "give exactly one of --y and --x");
    if (!y.empty()) return parse_double_list(y);
    const Vector signal = parse_double_list(x);
    require(signal.size() == a.cols(), "dimension_mismatch",
            "--x has length " + std::to_string(signal.size()) + ", A has " + std::to_string(a.cols()) + " columns");
    return matvec(a, signal);
  }
};

ActivationSpec parse_activation(const std::string& text) {
  if (text == "relu") return ActivationSpec::relu();
  if (text == "tanh") return NamedActivation::tanh;
  if (text == "softplus") return NamedActivation::softplus;
  const std::string prefix = "relu_family:";
  if (text.rfind(prefix, 0) == 0) {
    const Vector ab = parse_double_list(text.substr(prefix.size()));
    require(ab.size() == 2, "malformed_option", "relu_family needs two numbers: relu_family:alpha,beta");
    return ActivationSpec::relu_family(ab[0], ab[1]);
  }
  reject("malformed_option", "unknown activation '" + text + "' (relu, relu_family:a,b, tanh, softplus)");
}

NormTag parse_norm(const std::string& text) {
  if (text == "l1") return NormTag::l1;
  if (text == "l2") return NormTag::l2;
  if (text == "nuclear") return NormTag::nuclear;
  reject("malformed_option", "unknown norm '" + text + "' (l1, l2, nuclear)");
}

ProblemKind parse_problem(const std::string& text) {
  if (text == "qcbp") return ProblemKind::qcbp;
  if (text == "bpdn") return ProblemKind::bpdn;
  if (text == "lasso") return ProblemKind::lasso;
  if (text == "dantzig") return ProblemKind::dantzig;
  reject("malformed_option", "unknown problem '" + text + "' (qcbp, bpdn, lasso, dantzig)");
}

std::string join(std::span<const std::size_t> values, char sep) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(values[i]);
  return s;
}

std::vector<std::string> indexed_columns(std::string first, std::size_t n, const std::string& prefix) {
  std::vector<std::string> cols{std::move(first)};
  for (std::size_t i = 0; i < n; ++i) cols.push_back(prefix + std::to_string(i));
  return cols;
}

struct FitOptions {
  FitConfig fit;
  void add_to(CLI::App* sub, std::size_t width, std::size_t steps, double lr, std::size_t restarts) {
    fit.width = width;
    fit.steps = steps;
    fit.learning_rate = lr;
    fit.restarts = restarts;
    sub->add_option("--width", fit.width, "hidden width of each fitted network");
    sub->add_option("--steps", fit.steps, "gradient steps per restart");
    sub->add_option("--lr", fit.learning_rate, "learning rate");
    sub->add_option("--restarts", fit.restarts, "restarts per fit");
    sub->add_option("--target-mse", fit.target_mse, "stop a restart once mse reaches this value");
  }
};

class Cli {
 public:
  Cli(std::ostream& out) : out_(out) {
    app_.name("homogenlab");
    app_.description("Positively homogeneous relu networks, recovery bounds and sparse solvers");
    app_.require_subcommand(1);
    app_.option_defaults()->always_capture_default();
    add_network_commands();
    add_bound_commands();
    add_solver_commands();
    add_experiment_commands();
  }

  CLI::App& app() { return app_; }

  int dispatch() {
    for (const auto& [sub, action] : actions_) {
      if (sub->parsed()) {
        std::ostringstream text;
        const int code = action(sub, text);
        write_artifact(*outputs_.at(sub), text.str(), out_);
        return code;
      }
    }
    return 1;
  }

 private:
  using Action = std::function<int(CLI::App*, std::ostringstream&)>;

  CLI::App* command(const std::string& name, const std::string& help, Common& common, bool seed_required,
                    Action action) {
    CLI::App* sub = app_.add_subcommand(name, help);
    common.add_to(sub, seed_required);
    actions_.emplace_back(sub, std::move(action));
    outputs_[sub] = &common.out;
    return sub;
  }

  void add_network_commands() {
    {
      auto* sub = command("homogenize", "exact homogenization of a one-hidden-layer relu network", homogenize_,
                          false, [this](CLI::App*, std::ostringstream& text) {
                            text << serialize(homogenize_one_layer(load_network(in_homogenize_)));
                            return 0;
                          });
      sub->add_option("--in", in_homogenize_, "network JSON")->required();
    }
    {
      auto* sub = command("convert-activation", "rewrite an unbiased relu network for alpha*relu(x)+beta*relu(-x)",
                          convert_, false, [this](CLI::App*, std::ostringstream& text) {
                            text << serialize(convert_relu_to_activation(load_network(in_convert_), alpha_, beta_));
                            return 0;
                          });
      sub->add_option("--in", in_convert_, "network JSON")->required();
      sub->add_option("--alpha", alpha_, "coefficient of relu(x)")->required();
      sub->add_option("--beta", beta_, "coefficient of relu(-x)")->required();
    }
    {
      auto* sub = command("pad", "pad an unbiased relu network with identity layers", pad_, false,
                          [this](CLI::App*, std::ostringstream& text) {
                            text << serialize(pad_identity_layers(load_network(in_pad_), pad_depth_));
                            return 0;
                          });
      sub->add_option("--in", in_pad_, "network JSON")->required();
      sub->add_option("--depth", pad_depth_, "target number of hidden layers")->required();
    }
    {
      auto* sub = command(
          "probe-homogeneity", "sampled positive-homogeneity defect of a network or a sigma_gamma composition",
          probe_, true, [this](CLI::App* s, std::ostringstream& text) {
            HomogeneityProbe probe;
            probe.seed = probe_.seed;
            probe.point_count = probe_points_;
            probe.tolerance = probe_tolerance_;
            if (!probe_scales_.empty()) probe.scales = parse_double_list(probe_scales_);
            HomogeneityReport report;
            if (!in_probe_.empty()) {
              require(probe_gamma_.empty(), "malformed_option", "--gamma applies to --activation probes only");
              report = check_positive_homogeneity(load_network(in_probe_), probe);
            } else {
              require(!probe_gamma_.empty(), "missing_option", "give --in, or --activation with --gamma");
              const Vector gamma = parse_double_list(probe_gamma_);
              report = sigma_gamma_probe(parse_activation(probe_activation_), gamma, probe);
            }
            CsvWriter csv(text, s->get_name(), params_of(s));
            csv.header({"max_defect", "worst_scale", "samples", "within_tolerance"});
            csv.row(report.max_defect, report.worst_scale, report.samples, report.within_tolerance);
            return 0;
          });
      sub->add_option("--in", in_probe_, "network JSON");
      sub->add_option("--activation", probe_activation_, "relu, relu_family:a,b, tanh or softplus");
      sub->add_option("--gamma", probe_gamma_, "sigma_gamma coefficients, comma separated");
      sub->add_option("--points", probe_points_, "random probe points");
      sub->add_option("--scales", probe_scales_, "probe scales, comma separated (default 0.5,1,2,10,100)");
      sub->add_option("--tolerance", probe_tolerance_, "defect tolerance");
    }
  }

  void add_bound_commands() {
    {
      auto* sub = command("lower-bound", "one-hidden-layer lower bound sqrt((1/n)*sum_{k>m} sigma_k(X)^2)", lower_,
                          false, [this](CLI::App* s, std::ostringstream& text) {
                            require(lower_n_ > 0 || !lower_x_.empty(), "missing_option",
                                    "give --identity-n or --X");
                            require(lower_n_ == 0 || lower_x_.empty(), "malformed_option",
                                    "--identity-n and --X are exclusive");
                            const DirectionSet x = lower_x_.empty() ? DirectionSet::identity(lower_n_)
                                                                    : DirectionSet{load_matrix_csv(lower_x_)};
                            CsvWriter csv(text, s->get_name(), params_of(s));
                            csv.header({"m", "directions", "bound"});
                            csv.row(lower_m_, x.directions.cols(), one_layer_lower_bound(lower_m_, x));
                            return 0;
                          });
      sub->add_option("--m", lower_m_, "number of measurements")->required();
      sub->add_option("--identity-n", lower_n_, "use the n unit vectors as directions");
      sub->add_option("--X", lower_x_, "CSV file whose columns are unit directions");
    }
    {
      auto* sub = command("uat-negative", "bound of the two-measurement construction, or its matrix", uat_, false,
                          [this](CLI::App* s, std::ostringstream& text) {
                            require((uat_n_ > 0) != !uat_w_.empty(), "missing_option", "give exactly one of --n and --w");
                            CsvWriter csv(text, s->get_name(), params_of(s));
                            if (uat_n_ > 0) {
                              csv.header({"n", "bound"});
                              csv.row(uat_n_, uat_negative_bound(uat_n_));
                            } else {
                              const Vector w = parse_double_list(uat_w_);
                              const Matrix a = uat_negative_matrix(w);
                              csv.header({"column", "w", "a0", "a1"});
                              for (std::size_t k = 0; k < w.size(); ++k) csv.row(k, w[k], a(0, k), a(1, k));
                            }
                            return 0;
                          });
      sub->add_option("--n", uat_n_, "signal dimension");
      sub->add_option("--w", uat_w_, "pairwise distinct values, comma separated");
    }
    {
      auto* sub = command("rip", "exhaustive restricted isometry constant", rip_, false,
                          [this](CLI::App* s, std::ostringstream& text) {
                            const RipReport r = rip_exhaustive(rip_a_.load(rip_), rip_t_, rip_cap_);
                            CsvWriter csv(text, s->get_name(), params_of(s));
                            csv.header({"order", "delta", "delta_lb", "delta_ub", "supports_checked"});
                            csv.row(r.order, r.delta, r.delta_lb, r.delta_ub, r.supports_checked);
                            return 0;
                          });
      rip_a_.add_to(sub);
      sub->add_option("--t", rip_t_, "sparsity order")->required();
      sub->add_option("--cap", rip_cap_, "maximum number of supports");
    }
    {
      auto* sub = command(
          "conditioning", "sampled conditioning constants of x -> A x on s-sparse signals", cond_, true,
          [this](CLI::App* s, std::ostringstream& text) {
            const Matrix a = cond_a_.load(cond_);
            const NormTag tag = parse_norm(cond_norm_);
            const ConditioningReport r = empirical_conditioning(
                [&a](std::span<const double> x) { return matvec(a, x); }, sparse_unit_sampler(a.cols(), cond_s_),
                cond_pairs_, tag, cond_.seed);
            CsvWriter csv(text, s->get_name(), params_of(s));
            csv.comment("one-sided sampled estimates: tau_hat >= tau, rho_hat <= rho");
            csv.header({"tau_hat", "rho_hat", "pairs_sampled", "norm", "norm_equiv_M"});
            csv.row(r.tau_hat, r.rho_hat, r.pairs_sampled, cond_norm_, r.norm_equiv_m);
            return 0;
          });
      cond_a_.add_to(sub);
      sub->add_option("--s", cond_s_, "sparsity of the signal set");
      sub->add_option("--pairs", cond_pairs_, "number of sampled pairs")->required();
      sub->add_option("--norm", cond_norm_, "second norm: l1, l2 or nuclear");
    }
    {
      auto* sub = command("lowrank-rip", "sampled low-rank isometry constants of X -> (a_j' X a_j)_j", lowrank_,
                          true, [this](CLI::App* s, std::ostringstream& text) {
                            // The low-rank operator uses unit-variance rows.
                            const Matrix a = lowrank_a_.load(lowrank_, true);
                            const auto [lb, ub] = lowrank_rip_sample(a, lowrank_r_, lowrank_samples_, lowrank_.seed);
                            CsvWriter csv(text, s->get_name(), params_of(s));
                            csv.header({"m", "n", "r", "samples", "delta_lb_hat", "delta_ub_hat"});
                            csv.row(a.rows(), a.cols(), lowrank_r_, lowrank_samples_, lb, ub);
                            return 0;
                          });
      lowrank_a_.add_to(sub);
      sub->add_option("--r", lowrank_r_, "rank r (samples have rank <= 2r)")->required();
      sub->add_option("--samples", lowrank_samples_, "number of sampled matrices");
    }
  }

  void add_solver_commands() {
    {
      auto* sub = command(
          "solve", "qcbp, bpdn, lasso or dantzig by primal-dual splitting", solve_, false,
          [this](CLI::App* s, std::ostringstream& text) {
            const Matrix a = solve_a_.load(solve_);
            const Vector y = solve_y_.load(a);
            SolveConfig cfg;
            cfg.max_iters = solve_iters_;
            cfg.tol = solve_tol_;
            cfg.seed = solve_.seed;
            const SolveReport r = solve({parse_problem(solve_problem_), a, y, solve_param_}, cfg);
            CsvWriter csv(text, s->get_name(), params_of(s));
            csv.header({"field", "value"});
            csv.row("objective", r.objective);
            csv.row("primal_residual", r.primal_residual);
            csv.row("dual_residual", r.dual_residual);
            csv.row("iterations", r.iterations);
            csv.row("converged", r.converged);
            csv.row("multiplicity_hint", r.multiplicity_hint);
            for (std::size_t i = 0; i < r.solution.size(); ++i) csv.row("z" + std::to_string(i), r.solution[i]);
            return r.converged ? 0 : kNotConverged;
          });
      sub->add_option("--problem", solve_problem_, "qcbp, bpdn, lasso or dantzig")->required();
      solve_a_.add_to(sub);
      solve_y_.add_to(sub);
      sub->add_option("--param", solve_param_, "eta (qcbp, dantzig), lambda (bpdn) or l1 budget (lasso)")
          ->required();
      sub->add_option("--max-iters", solve_iters_, "iteration cap");
      sub->add_option("--tol", solve_tol_, "optimality tolerance");
    }
    {
      auto* sub = command("ista", "iterative soft thresholding trajectory", ista_, false,
                          [this](CLI::App* s, std::ostringstream& text) {
                            const Matrix a = ista_a_.load(ista_);
                            const Vector y = ista_y_.load(a);
                            const double l = ista_l_ > 0.0 ? ista_l_ : std::pow(svd(a).singular_values.front(), 2);
                            const Vector x0 = ista_x0_.empty() ? Vector(a.cols(), 0.0) : parse_double_list(ista_x0_);
                            const auto traj = ista_run(a, y, ista_lambda_, l, ista_iters_, x0);
                            CsvWriter csv(text, s->get_name(), params_of(s));
                            auto cols = indexed_columns("iteration", a.cols(), "x");
                            cols.insert(cols.begin() + 1, "objective");
                            csv.header(cols);
                            for (std::size_t k = 0; k < traj.size(); ++k) {
                              std::vector<std::string> fields{std::to_string(k),
                                                              format_double(ista_objective(a, y, ista_lambda_, traj[k]))};
                              for (double v : traj[k]) fields.push_back(format_double(v));
                              csv.header(fields);
                            }
                            return 0;
                          });
      ista_a_.add_to(sub);
      ista_y_.add_to(sub);
      sub->add_option("--lambda", ista_lambda_, "l1 weight")->required();
      sub->add_option("--L", ista_l_, "step constant (default sigma_max(A)^2)");
      sub->add_option("--iters", ista_iters_, "iterations");
      sub->add_option("--x0", ista_x0_, "starting point, comma separated (default 0)");
    }
    {
      auto* sub = command(
          "lista", "unrolled ISTA network with ISTA-derived weights", lista_, false,
          [this](CLI::App* s, std::ostringstream& text) {
            const Matrix a = lista_a_.load(lista_);
            const Vector y = lista_y_.load(a);
            const double l = lista_l_ > 0.0 ? lista_l_ : std::pow(svd(a).singular_values.front(), 2);
            const Vector x0(a.cols(), 0.0);
            const auto layers = lista_trajectory(lista_from_ista(a, lista_lambda_, l, lista_depth_), y, x0);
            const auto reference = ista_run(a, y, lista_lambda_, l, lista_depth_, x0);
            CsvWriter csv(text, s->get_name(), params_of(s));
            auto cols = indexed_columns("layer", a.cols(), "x");
            cols.insert(cols.begin() + 1, "ista_deviation");
            csv.header(cols);
            for (std::size_t k = 0; k < layers.size(); ++k) {
              std::vector<std::string> fields{
                  std::to_string(k), format_double(norm(subtract(layers[k], reference[k]), VectorNorm::linf))};
              for (double v : layers[k]) fields.push_back(format_double(v));
              csv.header(fields);
            }
            return 0;
          });
      lista_a_.add_to(sub);
      lista_y_.add_to(sub);
      sub->add_option("--lambda", lista_lambda_, "l1 weight")->required();
      sub->add_option("--L", lista_l_, "step constant (default sigma_max(A)^2)");
      sub->add_option("--depth", lista_depth_, "number of layers");
    }
    {
      auto* sub = command("brute-force", "best s-sparse least-squares fit by support enumeration", brute_, false,
                          [this](CLI::App* s, std::ostringstream& text) {
                            const Matrix a = brute_a_.load(brute_);
                            const Vector y = brute_y_.load(a);
                            const SparseFit fit = brute_force_sparse_fit(a, y, brute_s_, brute_cap_);
                            CsvWriter csv(text, s->get_name(), params_of(s));
                            csv.header({"field", "value"});
                            csv.row("residual", fit.residual);
                            csv.row("support", join(fit.support, ';'));
                            for (std::size_t i = 0; i < fit.coefficients.size(); ++i)
                              csv.row("z" + std::to_string(i), fit.coefficients[i]);
                            return 0;
                          });
      brute_a_.add_to(sub);
      brute_y_.add_to(sub);
      sub->add_option("--s", brute_s_, "maximum support size")->required();
      sub->add_option("--cap", brute_cap_, "maximum number of supports");
    }
    {
      auto* sub = command("robustness", "noise amplification ratios of a network applied to A x + e", robust_, true,
                          [this](CLI::App* s, std::ostringstream& text) {
                            const NetworkSpec net = load_network(robust_in_);
                            const Matrix a = robust_a_.load(robust_);
                            const Vector x = parse_double_list(robust_x_);
                            const Vector levels = parse_double_list(robust_levels_);
                            const auto rows =
                                robustness_scan(as_function(net), a, x, levels, robust_trials_, robust_.seed);
                            CsvWriter csv(text, s->get_name(), params_of(s));
                            csv.header({"noise_level", "trial", "ratio"});
                            for (const auto& r : rows) csv.row(r.noise_level, r.trial, r.ratio);
                            return 0;
                          });
      sub->add_option("--in", robust_in_, "network JSON")->required();
      robust_a_.add_to(sub);
      sub->add_option("--x", robust_x_, "signal, comma separated")->required();
      sub->add_option("--levels", robust_levels_, "noise radii, comma separated")->required();
      sub->add_option("--trials", robust_trials_, "draws per level");
    }
    {
      auto* sub = command("counterexample", "minimizer of |z1| + y2*|1 - z1| and its jump at y2 = 1", counter_,
                          false, [this](CLI::App* s, std::ostringstream& text) {
                            const SelectionResult r = selection_discontinuity_demo(counter_y2_);
                            CsvWriter csv(text, s->get_name(), params_of(s));
                            csv.header({"y2", "z1", "multiplicity"});
                            csv.row(counter_y2_, r.z1, r.multiplicity);
                            return 0;
                          });
      sub->add_option("--y2", counter_y2_, "second measurement in (0, 2)")->required();
    }
  }

  void add_experiment_commands() {
    {
      auto* sub = command(
          "impossibility-experiment", "trained one-hidden-layer inverses against the lower bound", impossible_, true,
          [this](CLI::App* s, std::ostringstream& text) {
            const auto rows = impossibility_experiment(imp_m_, imp_n_, parse_count_list(imp_widths_), imp_fit_.fit,
                                                       impossible_.seed);
            CsvWriter csv(text, s->get_name(), params_of(s));
            csv.header({"width", "max_rel_error", "bound", "fit_mse", "status"});
            for (const auto& r : rows) csv.row(r.width, r.max_rel_error, r.bound, r.fit_mse, r.status);
            return 0;
          });
      sub->add_option("--m", imp_m_, "measurements")->required();
      sub->add_option("--n", imp_n_, "signal dimension")->required();
      sub->add_option("--widths", imp_widths_, "hidden widths, comma separated");
      imp_fit_.add_to(sub, 4, 2000, 0.05, 2);
      sub->remove_option(sub->get_option("--width"));
    }
    {
      auto* sub = command(
          "recovery-experiment", "two-hidden-layer inverse network on sparse, compressible and noisy inputs",
          recovery_, true, [this](CLI::App* s, std::ostringstream& text) {
            RecoveryConfig cfg = rec_cfg_;
            cfg.fit = rec_fit_.fit;
            cfg.seed = recovery_.seed;
            cfg.noise_levels = parse_double_list(rec_noise_);
            const RecoveryOutcome outcome = recovery_experiment(cfg);
            if (!rec_net_out_.empty()) save_network(outcome.network, rec_net_out_);
            CsvWriter csv(text, s->get_name(), params_of(s));
            csv.comment("delta_2s=" + format_double(outcome.delta_2s) +
                        " lipschitz=" + format_double(outcome.lipschitz));
            csv.header({"kind", "index", "norm_x", "sigma_s_l1", "norm_e", "error"});
            for (const auto& r : outcome.rows) csv.row(r.kind, r.index, r.norm_x, r.sigma_s_l1, r.norm_e, r.error);
            return 0;
          });
      sub->add_option("--n", rec_cfg_.n, "signal dimension");
      sub->add_option("--m", rec_cfg_.m, "measurements");
      sub->add_option("--s", rec_cfg_.s, "sparsity");
      sub->add_option("--rip-target", rec_cfg_.rip_target,
                      "redraw unit-column Gaussian A until delta_2s <= this; 0 keeps one N(0,1/m) draw");
      rec_fit_.add_to(sub, rec_cfg_.fit.width, rec_cfg_.fit.steps, rec_cfg_.fit.learning_rate, rec_cfg_.fit.restarts);
      sub->add_option("--noise", rec_noise_, "noise radii, comma separated");
      sub->add_option("--trials", rec_cfg_.trials, "random cases per row kind and noise level");
      sub->add_option("--signal-samples", rec_cfg_.sampling.signal_samples, "measured training signals");
      sub->add_option("--dense-points", rec_cfg_.sampling.dense_points, "extension points on the l1 sphere");
      sub->add_option("--net-out", rec_net_out_, "also write the network JSON here");
    }
  }

  std::ostream& out_;
  CLI::App app_;
  std::vector<std::pair<CLI::App*, Action>> actions_;
  std::map<const CLI::App*, const std::string*> outputs_;

  Common homogenize_, convert_, pad_, probe_, lower_, uat_, rip_, cond_, lowrank_, solve_, ista_, lista_, brute_,
      robust_, counter_, impossible_, recovery_;

  std::string in_homogenize_, in_convert_, in_pad_, in_probe_;
  double alpha_ = 1.0, beta_ = 0.0;
  std::size_t pad_depth_ = 0;
  std::string probe_activation_ = "relu", probe_gamma_, probe_scales_;
  std::size_t probe_points_ = 64;
  double probe_tolerance_ = 1e-12;

  std::size_t lower_m_ = 0, lower_n_ = 0;
  std::string lower_x_;
  std::size_t uat_n_ = 0;
  std::string uat_w_;
  MatrixSource rip_a_;
  std::size_t rip_t_ = 1, rip_cap_ = kDefaultSupportCap;
  MatrixSource cond_a_;
  std::size_t cond_s_ = 1, cond_pairs_ = 0;
  std::string cond_norm_ = "l2";
  MatrixSource lowrank_a_;
  std::size_t lowrank_r_ = 1, lowrank_samples_ = 1000;

  std::string solve_problem_;
  MatrixSource solve_a_;
  Measurements solve_y_;
  double solve_param_ = 0.0;
  std::size_t solve_iters_ = SolveConfig{}.max_iters;
  double solve_tol_ = SolveConfig{}.tol;
  MatrixSource ista_a_;
  Measurements ista_y_;
  double ista_lambda_ = 0.0, ista_l_ = 0.0;
  std::size_t ista_iters_ = 100;
  std::string ista_x0_;
  MatrixSource lista_a_;
  Measurements lista_y_;
  double lista_lambda_ = 0.0, lista_l_ = 0.0;
  std::size_t lista_depth_ = 10;
  MatrixSource brute_a_;
  Measurements brute_y_;
  std::size_t brute_s_ = 1, brute_cap_ = 200000;
  std::string robust_in_, robust_x_, robust_levels_;
  MatrixSource robust_a_;
  std::size_t robust_trials_ = 8;
  double counter_y2_ = 0.0;

  std::size_t imp_m_ = 0, imp_n_ = 0;
  std::string imp_widths_ = "4,16,64";
  FitOptions imp_fit_;
  RecoveryConfig rec_cfg_;
  FitOptions rec_fit_;
  std::string rec_noise_ = "0.001,0.002,0.005,0.01,0.02,0.05,0.1";
  std::string rec_net_out_;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Cli cli(out);
  try {
    cli.app().parse(argc, argv);
  } catch (const CLI::Success& e) {
    return cli.app().exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n" << cli.app().help();
    return 1;
  }
  try {
    return cli.dispatch();
  } catch (const InputError& e) {
    err << "error: " << e.code() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace homogenlab
