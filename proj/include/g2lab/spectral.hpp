#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "g2lab/boolmat.hpp"

namespace g2lab {

/// Dense row-major real matrix.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static RealMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static RealMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool all_finite() const noexcept;
  RealMatrix transpose() const;

  bool operator==(const RealMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Real lift of a Boolean matrix.
RealMatrix lift(const BoolMatrix& m);

RealMatrix multiply(const RealMatrix& a, const RealMatrix& b);
RealMatrix add(const RealMatrix& a, const RealMatrix& b);
RealMatrix scale(const RealMatrix& a, double factor);
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);
double frobenius_norm(const RealMatrix& a);

/// Largest l2 norm over rows (the 2 -> infinity operator norm).
double max_row_norm(const RealMatrix& a);
/// Largest l2 norm over columns (the 1 -> 2 operator norm).
double max_col_norm(const RealMatrix& a);

RealMatrix hadamard(const RealMatrix& a, const RealMatrix& b);
RealMatrix kronecker(const RealMatrix& a, const RealMatrix& b);
RealMatrix direct_sum(const RealMatrix& a, const RealMatrix& b);

/// Thin SVD A = U diag(sigma) V^T with k = min(m, n): U is m x k, V is n x k,
/// sigma descending. Columns belonging to clamped (zero) singular values are
/// not meaningful.
struct Svd {
  RealMatrix u;
  std::vector<double> sigma;
  RealMatrix v;
};

/// One-sided Jacobi on the smaller Gram side. Singular values below
/// clamp_relative * sigma_1 are set to zero; pass 0 to keep every nonzero one.
/// Throws InputError on non-finite input.
Svd svd(const RealMatrix& a, double clamp_relative = 1e-10);
std::vector<double> singular_values(const RealMatrix& a);

/// (sum sigma_i^p)^(1/p); p may be +infinity (spectral norm). Throws InputError for p <= 0.
double schatten_norm(const RealMatrix& a, double p);
double trace_norm(const RealMatrix& a);
std::size_t numerical_rank(const RealMatrix& a);

}  // namespace g2lab
