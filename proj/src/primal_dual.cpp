#include <algorithm>
#include <cmath>

#include "homogenlab/error.hpp"
#include "homogenlab/random.hpp"
#include "homogenlab/solvers.hpp"

namespace homogenlab {

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::qcbp:
      return "qcbp";
    case ProblemKind::bpdn:
      return "bpdn";
    case ProblemKind::lasso:
      return "lasso";
    case ProblemKind::dantzig:
      return "dantzig";
  }
  return "?";
}

void ProblemSpec::validate() const {
  require(!a.empty(), "dimension_mismatch", "measurement matrix is empty");
  require(a.all_finite() && all_finite(y) && std::isfinite(parameter), "non_finite",
          "problem data contains non-finite values");
  require(y.size() == a.rows(), "dimension_mismatch",
          "y has length " + std::to_string(y.size()) + " but A has " + std::to_string(a.rows()) + " rows");
  switch (kind) {
    case ProblemKind::qcbp:
      require(parameter >= 0.0, "invalid_parameter", "eta must be non-negative");
      break;
    case ProblemKind::bpdn:
      require(parameter > 0.0, "invalid_parameter", "lambda must be positive");
      break;
    case ProblemKind::lasso:
      require(parameter >= 0.0, "invalid_parameter", "l1 budget must be non-negative");
      break;
    case ProblemKind::dantzig:
      require(parameter >= 0.0, "invalid_parameter", "eta must be non-negative");
      require(numerical_rank(a) == a.rows(), "rank_deficient",
              "dantzig needs rank(A) = m so that the constraint norm is a norm");
      break;
  }
}

double problem_objective(const ProblemSpec& p, std::span<const double> z) {
  const double l1 = norm(z, VectorNorm::l1);
  switch (p.kind) {
    case ProblemKind::qcbp:
    case ProblemKind::dantzig:
      return l1;
    case ProblemKind::bpdn: {
      const double r = norm(subtract(matvec(p.a, z), p.y));
      return p.parameter * l1 + r * r;
    }
    case ProblemKind::lasso:
      return norm(subtract(matvec(p.a, z), p.y));
  }
  return 0.0;
}

namespace {

double pos(double v) { return v > 0.0 ? v : 0.0; }

// min_z f(z) + g(K·z) for one problem kind.
class Splitting {
 public:
  explicit Splitting(const ProblemSpec& p) : p_(p) {
    if (p.kind == ProblemKind::dantzig) {
      k_ = p.a.transpose() * p.a;
      center_ = matvec_transposed(p.a, p.y);
    } else {
      k_ = p.a;
      center_ = p.y;
    }
  }

  const Matrix& k() const { return k_; }

  // prox of τ·f
  Vector prox_f(std::span<const double> v, double tau) const {
    switch (p_.kind) {
      case ProblemKind::lasso:
        return project_l1_ball(v, p_.parameter);
      case ProblemKind::bpdn:
        return soft_threshold(v, tau * p_.parameter);
      default:
        return soft_threshold(v, tau);
    }
  }

  // prox of σ·g*, via Moreau for the ball indicators.
  Vector prox_g_conj(std::span<const double> v, double sigma) const {
    Vector out(v.size());
    switch (p_.kind) {
      case ProblemKind::qcbp:
      case ProblemKind::dantzig: {
        const Vector scaled_v = scaled(v, 1.0 / sigma);
        const Vector proj = p_.kind == ProblemKind::qcbp ? project_l2_ball(scaled_v, center_, p_.parameter)
                                                         : project_linf_ball(scaled_v, center_, p_.parameter);
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - sigma * proj[i];
        break;
      }
      case ProblemKind::bpdn:
        // g(u) = ‖u − y‖², g*(w) = ⟨w, y⟩ + ‖w‖²/4
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - sigma * center_[i]) / (1.0 + sigma / 2.0);
        break;
      case ProblemKind::lasso:
        // g(u) = ½‖u − y‖², g*(w) = ⟨w, y⟩ + ½‖w‖²
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - sigma * center_[i]) / (1.0 + sigma);
        break;
    }
    return out;
  }

  // Violation of w ∈ ∂g(u).
  double primal_residual(std::span<const double> u, std::span<const double> w) const {
    switch (p_.kind) {
      case ProblemKind::qcbp:
      case ProblemKind::dantzig: {
        const bool l2 = p_.kind == ProblemKind::qcbp;
        const Vector off = subtract(u, center_);
        const double feas = pos(norm(off, l2 ? VectorNorm::l2 : VectorNorm::linf) - p_.parameter);
        const double wdual = norm(w, l2 ? VectorNorm::l2 : VectorNorm::l1);
        // Support function of the ball minus ⟨w, u⟩, i.e. η‖w‖_* − ⟨w, u − c⟩.
        const double gap = pos(p_.parameter * wdual - dot(w, off)) / std::max(1.0, wdual);
        return std::max(feas, gap);
      }
      case ProblemKind::bpdn:
      case ProblemKind::lasso: {
        const double factor = p_.kind == ProblemKind::bpdn ? 2.0 : 1.0;
        Vector grad = subtract(u, center_);
        for (double& g : grad) g *= factor;
        return norm(subtract(w, grad)) / std::max(1.0, norm(grad));
      }
    }
    return 0.0;
  }

  // Violation of q ∈ ∂f(z) with q = −Kᵀw.
  double dual_residual(std::span<const double> z, std::span<const double> q) const {
    const double l1 = norm(z, VectorNorm::l1);
    if (p_.kind == ProblemKind::lasso) {
      const double qinf = norm(q, VectorNorm::linf);
      const double feas = pos(l1 - p_.parameter);
      const double gap = pos(p_.parameter * qinf - dot(q, z)) / std::max(1.0, qinf);
      return std::max(feas, gap);
    }
    const double lambda = p_.kind == ProblemKind::bpdn ? p_.parameter : 1.0;
    const double excess = pos(norm(q, VectorNorm::linf) - lambda) / std::max(1.0, lambda);
    const double gap = pos(lambda * l1 - dot(q, z)) / (std::max(1.0, lambda) * std::max(1.0, l1));
    return std::max(excess, gap);
  }

 private:
  const ProblemSpec& p_;
  Matrix k_;
  Vector center_;
};

SolveReport run(const ProblemSpec& problem, const SolveConfig& config, Vector z) {
  const Splitting split(problem);
  const Matrix& k = split.k();
  const double knorm = svd(k).singular_values.front();
  const double default_step = knorm > 0.0 ? 0.95 / knorm : 1.0;
  const double tau = config.primal_step.value_or(default_step);
  const double sigma = config.dual_step.value_or(default_step);
  require(tau > 0.0 && sigma > 0.0, "invalid_config", "step sizes must be positive");

  const std::size_t n = k.cols();
  Vector w(k.rows(), 0.0);
  Vector kz = matvec(k, z);
  Vector kzbar = kz;
  SolveReport report;
  for (std::size_t it = 0; it < config.max_iters; ++it) {
    Vector v(w.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] + sigma * kzbar[i];
    w = split.prox_g_conj(v, sigma);
    const Vector ktw = matvec_transposed(k, w);
    Vector step(n);
    for (std::size_t i = 0; i < n; ++i) step[i] = z[i] - tau * ktw[i];
    Vector z_next = split.prox_f(step, tau);
    Vector kz_next = matvec(k, z_next);
    for (std::size_t i = 0; i < kzbar.size(); ++i) kzbar[i] = 2.0 * kz_next[i] - kz[i];
    z = std::move(z_next);
    kz = std::move(kz_next);

    report.primal_residual = split.primal_residual(kz, w);
    report.dual_residual = split.dual_residual(z, scaled(ktw, -1.0));
    report.iterations = it + 1;
    if (report.primal_residual <= config.tol && report.dual_residual <= config.tol) {
      report.converged = true;
      break;
    }
  }
  report.objective = problem_objective(problem, z);
  report.solution = std::move(z);
  report.dual = std::move(w);
  return report;
}

}  // namespace

SolveReport solve(const ProblemSpec& problem, const SolveConfig& config) {
  problem.validate();
  require(config.tol > 0.0, "invalid_config", "tolerance must be positive");
  const std::size_t n = problem.a.cols();
  SolveReport report = run(problem, config, Vector(n, 0.0));
  if (config.detect_multiplicity && report.converged) {
    Rng rng(config.seed);
    const SolveReport other = run(problem, config, rng.normal_vector(n));
    if (other.converged) {
      const double spread = norm(subtract(report.solution, other.solution), VectorNorm::linf);
      const double obj_gap = std::abs(report.objective - other.objective);
      report.multiplicity_hint =
          spread > 100.0 * config.tol && obj_gap <= config.tol * std::max(1.0, std::abs(report.objective));
    }
  }
  return report;
}

}  // namespace homogenlab
