#include "homogenlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "homogenlab/error.hpp"

namespace homogenlab {

namespace {

void require_same_size(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) {
    reject("dimension_mismatch", std::string(what) + ": lengths " + std::to_string(a.size()) +
                                     " and " + std::to_string(b.size()) + " differ");
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  require(entries_.size() == rows * cols, "dimension_mismatch",
          "matrix entry count " + std::to_string(entries_.size()) + " != " +
              std::to_string(rows) + "x" + std::to_string(cols));
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> copy;
  copy.reserve(rows.size());
  for (const auto& r : rows) copy.emplace_back(r);
  return from_rows(copy);
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == cols, "dimension_mismatch",
            "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                " entries, expected " + std::to_string(cols));
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
  Matrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void Matrix::set_column(std::size_t j, std::span<const double> values) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> indices) const {
  Matrix s(rows_, indices.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < indices.size(); ++k) s(i, k) = (*this)(i, indices[k]);
  return s;
}

bool Matrix::all_finite() const noexcept { return homogenlab::all_finite(entries_); }

Matrix operator*(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "dimension_mismatch",
          "matrix product " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
              " * " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "dimension_mismatch", "matrix sum shapes differ");
  Matrix c = a;
  auto ce = c.entries();
  auto be = b.entries();
  for (std::size_t i = 0; i < ce.size(); ++i) ce[i] += be[i];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "dimension_mismatch",
          "matrix difference shapes differ");
  Matrix c = a;
  auto ce = c.entries();
  auto be = b.entries();
  for (std::size_t i = 0; i < ce.size(); ++i) ce[i] -= be[i];
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (double& v : c.entries()) v *= s;
  return c;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  require(a.cols() == x.size(), "dimension_mismatch",
          "matrix has " + std::to_string(a.cols()) + " columns but vector has length " +
              std::to_string(x.size()));
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

Vector matvec_transposed(const Matrix& a, std::span<const double> x) {
  require(a.rows() == x.size(), "dimension_mismatch",
          "matrix has " + std::to_string(a.rows()) + " rows but vector has length " +
              std::to_string(x.size()));
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += r[j] * xi;
  }
  return y;
}

Matrix outer(std::span<const double> u, std::span<const double> v) {
  Matrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * v[j];
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vector add(std::span<const double> a, std::span<const double> b) {
  require_same_size(a, b, "add");
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  require_same_size(a, b, "subtract");
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

Vector scaled(std::span<const double> a, double s) {
  Vector c(a.begin(), a.end());
  for (double& v : c) v *= s;
  return c;
}

bool all_finite(std::span<const double> v) noexcept {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double norm(std::span<const double> v, VectorNorm kind) {
  require(all_finite(v), "non_finite", "norm of a non-finite vector");
  switch (kind) {
    case VectorNorm::l1: {
      double s = 0.0;
      for (double x : v) s += std::abs(x);
      return s;
    }
    case VectorNorm::l2: {
      // Scaled accumulation keeps tiny and huge entries from under/overflowing.
      double scale = 0.0;
      for (double x : v) scale = std::max(scale, std::abs(x));
      if (scale == 0.0) return 0.0;
      double s = 0.0;
      for (double x : v) {
        const double r = x / scale;
        s += r * r;
      }
      return scale * std::sqrt(s);
    }
    case VectorNorm::linf: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      return m;
    }
  }
  return 0.0;
}

double matrix_norm(const Matrix& m, MatrixNorm kind) {
  require(m.all_finite(), "non_finite", "norm of a non-finite matrix");
  switch (kind) {
    case MatrixNorm::frobenius:
      return norm(m.entries(), VectorNorm::l2);
    case MatrixNorm::nuclear: {
      if (m.empty()) return 0.0;
      const auto s = svd(m);
      return std::accumulate(s.singular_values.begin(), s.singular_values.end(), 0.0);
    }
    case MatrixNorm::spectral: {
      if (m.empty()) return 0.0;
      const auto s = svd(m);
      return s.singular_values.empty() ? 0.0 : s.singular_values.front();
    }
  }
  return 0.0;
}

double soft_threshold(double t, double z) {
  require(z >= 0.0, "negative_threshold", "soft threshold requires z >= 0, got " + std::to_string(z));
  if (std::abs(t) < z) return 0.0;
  return t > 0 ? t - z : (t < 0 ? t + z : 0.0);
}

Vector soft_threshold(std::span<const double> t, double z) {
  Vector out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = soft_threshold(t[i], z);
  return out;
}

std::pair<Matrix, double> rank_truncate(const Matrix& m, std::size_t r) {
  const std::size_t k = std::min(m.rows(), m.cols());
  require(r <= k, "rank_out_of_range",
          "rank " + std::to_string(r) + " exceeds min dimension " + std::to_string(k));
  const auto s = svd(m);
  Matrix approx(m.rows(), m.cols());
  for (std::size_t t = 0; t < r; ++t) {
    const double sigma = s.singular_values[t];
    if (sigma == 0.0) continue;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const double ui = s.left_vectors(i, t) * sigma;
      for (std::size_t j = 0; j < m.cols(); ++j) approx(i, j) += ui * s.right_vectors(j, t);
    }
  }
  Vector discarded(s.singular_values.begin() + static_cast<std::ptrdiff_t>(r), s.singular_values.end());
  return {std::move(approx), norm(discarded, VectorNorm::l2)};
}

Vector project_l2_ball(std::span<const double> u, std::span<const double> center, double radius) {
  require_same_size(u, center, "project_l2_ball");
  require(radius >= 0.0, "negative_radius", "ball radius must be non-negative");
  Vector d = subtract(u, center);
  const double dist = norm(d, VectorNorm::l2);
  if (dist <= radius) return Vector(u.begin(), u.end());
  const double f = radius / dist;
  Vector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = center[i] + f * d[i];
  return out;
}

Vector project_linf_ball(std::span<const double> u, std::span<const double> center, double radius) {
  require_same_size(u, center, "project_linf_ball");
  require(radius >= 0.0, "negative_radius", "ball radius must be non-negative");
  Vector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = std::clamp(u[i], center[i] - radius, center[i] + radius);
  return out;
}

Vector project_l1_ball(std::span<const double> u, double radius) {
  require(radius >= 0.0, "negative_radius", "ball radius must be non-negative");
  double l1 = 0.0;
  for (double x : u) l1 += std::abs(x);
  if (l1 <= radius) return Vector(u.begin(), u.end());
  if (radius == 0.0) return Vector(u.size(), 0.0);
  // Threshold θ solves Σ max(|u_i| − θ, 0) = radius.
  Vector mags(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) mags[i] = std::abs(u[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    cumulative += mags[k];
    const double candidate = (cumulative - radius) / static_cast<double>(k + 1);
    if (k + 1 == mags.size() || mags[k + 1] <= candidate) {
      theta = candidate;
      break;
    }
  }
  return soft_threshold(u, std::max(theta, 0.0));
}

Matrix pseudo_inverse(const Matrix& m) {
  Matrix pinv(m.cols(), m.rows());
  if (m.empty()) return pinv;
  const auto s = svd(m);
  const double smax = s.singular_values.empty() ? 0.0 : s.singular_values.front();
  if (smax == 0.0) return pinv;
  for (std::size_t t = 0; t < s.singular_values.size(); ++t) {
    const double sigma = s.singular_values[t];
    if (sigma <= kRankCutoff * smax) continue;
    const double inv = 1.0 / sigma;
    for (std::size_t i = 0; i < m.cols(); ++i) {
      const double vi = s.right_vectors(i, t) * inv;
      for (std::size_t j = 0; j < m.rows(); ++j) pinv(i, j) += vi * s.left_vectors(j, t);
    }
  }
  return pinv;
}

std::size_t numerical_rank(const Matrix& m) {
  if (m.empty()) return 0;
  const auto s = svd(m);
  const double smax = s.singular_values.empty() ? 0.0 : s.singular_values.front();
  if (smax == 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(s.singular_values.begin(), s.singular_values.end(),
                                                [&](double v) { return v > kRankCutoff * smax; }));
}

}  // namespace homogenlab
