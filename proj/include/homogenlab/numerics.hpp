#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace homogenlab {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  /// Builds a matrix from nested row lists; all rows must have equal length.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {entries_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {entries_.data() + i * cols_, cols_};
  }
  Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> values);

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<double> entries() noexcept { return entries_; }

  Matrix transpose() const;
  /// Columns listed in `indices`, in that order.
  Matrix select_columns(std::span<const std::size_t> indices) const;

  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

Vector matvec(const Matrix& a, std::span<const double> x);
/// aᵀ·x without forming the transpose.
Vector matvec_transposed(const Matrix& a, std::span<const double> x);
/// Outer product u·vᵀ.
Matrix outer(std::span<const double> u, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
Vector add(std::span<const double> a, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> a, double s);
bool all_finite(std::span<const double> v) noexcept;

enum class VectorNorm { l1, l2, linf };
enum class MatrixNorm { frobenius, nuclear, spectral };

double norm(std::span<const double> v, VectorNorm kind = VectorNorm::l2);
double matrix_norm(const Matrix& m, MatrixNorm kind);

struct SvdResult {
  Matrix left_vectors;   // rows x k, orthonormal columns
  Vector singular_values;  // k = min(rows, cols), non-increasing
  Matrix right_vectors;  // cols x k, orthonormal columns
};

/// Thin SVD by one-sided Jacobi rotations. Rejects non-finite input.
SvdResult svd(const Matrix& m);

/// Multiplies the factors back together: U·diag(σ)·Vᵀ.
Matrix reconstruct(const SvdResult& s);

/// Eigenvalues (ascending) and eigenvectors (columns) of a symmetric matrix,
/// computed with cyclic two-sided Jacobi sweeps.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
};
SymmetricEigen symmetric_eigen(const Matrix& sym);

/// η_z(t) = sign(t)(|t| − z) for |t| ≥ z, else 0. Rejects z < 0.
double soft_threshold(double t, double z);
Vector soft_threshold(std::span<const double> t, double z);

/// Best rank-r approximation in Frobenius norm and the discarded tail
/// sqrt(Σ_{k>r} σ_k²).
std::pair<Matrix, double> rank_truncate(const Matrix& m, std::size_t r);

Vector project_l2_ball(std::span<const double> u, std::span<const double> center, double radius);
Vector project_linf_ball(std::span<const double> u, std::span<const double> center, double radius);
/// Euclidean projection onto {z : ‖z‖₁ ≤ radius} (sort-based).
Vector project_l1_ball(std::span<const double> u, double radius);

/// Moore–Penrose pseudo-inverse; singular values below 1e-12·σ_max count as zero.
Matrix pseudo_inverse(const Matrix& m);

/// Numerical rank with the same relative cutoff as pseudo_inverse.
std::size_t numerical_rank(const Matrix& m);

/// Relative cutoff below which singular values are treated as zero.
inline constexpr double kRankCutoff = 1e-12;

}  // namespace homogenlab
