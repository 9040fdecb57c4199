#pragma once

// Special functions and small dense linear algebra.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace crn::numerics {

/// ln Γ(x) for x > 0 (Lanczos, g = 7). Throws DomainError for x <= 0.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(a, x).
double reg_inc_gamma_lower(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly.
double reg_inc_gamma_upper(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x);

/// Standard normal CDF and upper tail.
double normal_cdf(double x);
double normal_sf(double x);

/// Dense row-major matrix. Sized for the small systems this project needs.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Matrix transpose() const;
  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix scaled(double s) const;
  std::vector<double> apply(std::span<const double> v) const;

  /// Max absolute row sum.
  double norm_inf() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Symmetric positive definite matrix with its Cholesky factor computed at construction.
/// Throws NumericError when the input is not symmetric or a pivot is not positive.
class SpdMatrix {
 public:
  explicit SpdMatrix(Matrix m);

  std::size_t dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  /// Lower-triangular L with L Lᵀ = matrix().
  const Matrix& cholesky_factor() const { return l_; }

  /// Solves matrix() · x = b.
  std::vector<double> solve(std::span<const double> b) const;
  Matrix inverse() const;
  double log_determinant() const;

 private:
  Matrix m_;
  Matrix l_;
};

/// Lower Cholesky factor of a symmetric positive definite matrix.
Matrix cholesky(const Matrix& m);

double dot(std::span<const double> a, std::span<const double> b);

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
};

/// Adaptive Gauss–Kronrod (7/15) integration of f over [lo, hi] to the requested relative
/// tolerance. Starts from up to 32 panels, log-spaced when 0 < lo and hi/lo > 64, so narrow
/// peaks in wide ranges are not missed. Throws NumericError, with the achieved tolerance, when
/// max_intervals is exhausted first.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           double rel_tol = 1e-10, std::size_t max_intervals = 2000);

struct Maximum {
  double argmax = 0.0;
  double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
Maximum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                           double tol = 1e-12, int max_iter = 300);

}  // namespace crn::numerics
