#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "homogenlab/error.hpp"
#include "homogenlab/numerics.hpp"

namespace homogenlab {

namespace {

constexpr int kMaxSweeps = 80;
constexpr double kOrthogonality = 1e-15;

// Column-major scratch so rotations touch contiguous memory.
struct Columns {
  std::size_t length = 0;
  std::vector<Vector> cols;
};

Columns columns_of(const Matrix& m) {
  Columns c{m.rows(), std::vector<Vector>(m.cols(), Vector(m.rows()))};
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c.cols[j][i] = m(i, j);
  return c;
}

void rotate(Vector& a, Vector& b, double c, double s) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i];
    const double y = b[i];
    a[i] = c * x - s * y;
    b[i] = s * x + c * y;
  }
}

double sq_norm(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// Extends the orthonormal vectors in `basis` (entries flagged by `valid`) so
// every slot holds a unit vector orthogonal to the others.
void complete_orthonormal(std::vector<Vector>& basis, std::vector<bool>& valid, std::size_t dim) {
  std::size_t candidate = 0;
  for (std::size_t slot = 0; slot < basis.size(); ++slot) {
    if (valid[slot]) continue;
    while (candidate < dim) {
      Vector e(dim, 0.0);
      e[candidate++] = 1.0;
      // Two Gram–Schmidt passes for numerical orthogonality.
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < basis.size(); ++k) {
          if (!valid[k]) continue;
          const double proj = dot(basis[k], e);
          for (std::size_t i = 0; i < dim; ++i) e[i] -= proj * basis[k][i];
        }
      }
      const double len = std::sqrt(sq_norm(e));
      if (len > 1e-6) {
        for (double& x : e) x /= len;
        basis[slot] = std::move(e);
        valid[slot] = true;
        break;
      }
    }
  }
}

// One-sided Jacobi for rows >= cols.
SvdResult svd_tall(const Matrix& m) {
  const std::size_t r = m.rows();
  const std::size_t c = m.cols();
  Columns w = columns_of(m);
  std::vector<Vector> v(c, Vector(c, 0.0));
  for (std::size_t j = 0; j < c; ++j) v[j][j] = 1.0;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < c; ++p) {
      for (std::size_t q = p + 1; q < c; ++q) {
        const double alpha = sq_norm(w.cols[p]);
        const double beta = sq_norm(w.cols[q]);
        const double gamma = dot(w.cols[p], w.cols[q]);
        if (gamma == 0.0 || std::abs(gamma) <= kOrthogonality * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        rotate(w.cols[p], w.cols[q], cs, sn);
        rotate(v[p], v[q], cs, sn);
      }
    }
    if (!rotated) break;
  }

  Vector sigma(c);
  for (std::size_t j = 0; j < c; ++j) sigma[j] = std::sqrt(sq_norm(w.cols[j]));

  std::vector<std::size_t> order(c);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  const double smax = c ? sigma[order.front()] : 0.0;
  std::vector<Vector> u(c);
  std::vector<bool> valid(c, false);
  SvdResult out{Matrix(r, c), Vector(c), Matrix(c, c)};
  for (std::size_t k = 0; k < c; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = sigma[j];
    if (sigma[j] > std::numeric_limits<double>::min() && sigma[j] > kRankCutoff * smax * 1e-4) {
      u[k] = w.cols[j];
      for (double& x : u[k]) x /= sigma[j];
      valid[k] = true;
    } else {
      u[k] = Vector(r, 0.0);
    }
    for (std::size_t i = 0; i < c; ++i) out.right_vectors(i, k) = v[j][i];
  }
  complete_orthonormal(u, valid, r);
  for (std::size_t k = 0; k < c; ++k)
    for (std::size_t i = 0; i < r; ++i) out.left_vectors(i, k) = u[k][i];
  return out;
}

}  // namespace

SvdResult svd(const Matrix& m) {
  require(m.all_finite(), "non_finite", "svd input contains non-finite entries");
  if (m.rows() >= m.cols()) return svd_tall(m);
  SvdResult t = svd_tall(m.transpose());
  std::swap(t.left_vectors, t.right_vectors);
  return t;
}

Matrix reconstruct(const SvdResult& s) {
  const std::size_t r = s.left_vectors.rows();
  const std::size_t c = s.right_vectors.rows();
  Matrix out(r, c);
  for (std::size_t k = 0; k < s.singular_values.size(); ++k) {
    const double sigma = s.singular_values[k];
    for (std::size_t i = 0; i < r; ++i) {
      const double ui = s.left_vectors(i, k) * sigma;
      for (std::size_t j = 0; j < c; ++j) out(i, j) += ui * s.right_vectors(j, k);
    }
  }
  return out;
}

SymmetricEigen symmetric_eigen(const Matrix& sym) {
  require(sym.rows() == sym.cols(), "dimension_mismatch", "symmetric_eigen needs a square matrix");
  require(sym.all_finite(), "non_finite", "symmetric_eigen input contains non-finite entries");
  const std::size_t n = sym.rows();
  Matrix a = sym;
  // Symmetrize to absorb round-off in callers' Gram products.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
  Matrix v = Matrix::identity(n);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += a(i, i) * a(i, i);
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (off == 0.0 || off <= 1e-32 * diag) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

}  // namespace homogenlab
