#include "g2lab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "g2lab/error.hpp"

namespace g2lab {

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) throw InputError("RealMatrix: entry count does not match shape");
}

RealMatrix RealMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  RealMatrix out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != out.cols()) throw InputError("RealMatrix::from_rows: ragged rows");
    std::copy(rows[i].begin(), rows[i].end(), out.row(i).begin());
  }
  return out;
}

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

bool RealMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

RealMatrix RealMatrix::transpose() const {
  RealMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

RealMatrix lift(const BoolMatrix& m) {
  RealMatrix out(m.rows(), m.cols());
  for (const auto& [i, j] : m.coords()) out(i, j) = 1.0;
  return out;
}

RealMatrix multiply(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("multiply: inner dimensions differ");
  RealMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto src = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) dst[j] += aik * src[j];
    }
  }
  return out;
}

namespace {

void require_same_shape(const RealMatrix& a, const RealMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InputError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

}  // namespace

RealMatrix add(const RealMatrix& a, const RealMatrix& b) {
  require_same_shape(a, b, "add");
  std::vector<double> out(a.data().size());
  std::transform(a.data().begin(), a.data().end(), b.data().begin(), out.begin(), std::plus<>());
  return {a.rows(), a.cols(), std::move(out)};
}

RealMatrix scale(const RealMatrix& a, double factor) {
  std::vector<double> out(a.data());
  for (double& x : out) x *= factor;
  return {a.rows(), a.cols(), std::move(out)};
}

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
  return worst;
}

double frobenius_norm(const RealMatrix& a) {
  double sum = 0.0;
  for (double x : a.data()) sum += x * x;
  return std::sqrt(sum);
}

double max_row_norm(const RealMatrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (double x : a.row(i)) sum += x * x;
    best = std::max(best, sum);
  }
  return std::sqrt(best);
}

double max_col_norm(const RealMatrix& a) {
  std::vector<double> sums(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) sums[j] += a(i, j) * a(i, j);
  }
  return sums.empty() ? 0.0 : std::sqrt(*std::max_element(sums.begin(), sums.end()));
}

RealMatrix hadamard(const RealMatrix& a, const RealMatrix& b) {
  require_same_shape(a, b, "hadamard");
  std::vector<double> out(a.data().size());
  std::transform(a.data().begin(), a.data().end(), b.data().begin(), out.begin(), std::multiplies<>());
  return {a.rows(), a.cols(), std::move(out)};
}

RealMatrix kronecker(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
      }
    }
  }
  return out;
}

RealMatrix direct_sum(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  }
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
  }
  return out;
}

namespace {

constexpr double kOffDiagonalTol = 1e-12;
constexpr int kMaxSweeps = 60;
constexpr double kNegligibleMass = 1e-30;

/// Hestenes one-sided Jacobi on a tall matrix (rows >= cols), stored column-major
/// in `cols` so rotations touch contiguous memory.
Svd jacobi_tall(const RealMatrix& a, double clamp_relative) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<std::vector<double>> work(n, std::vector<double>(m));
  std::vector<std::vector<double>> vcols(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) work[j][i] = a(i, j);
    vcols[j][j] = 1.0;
  }

  double total = 0.0;
  for (const auto& col : work) {
    for (double x : col) total += x * x;
  }
  // Columns this small are rounding noise; rotating them against each other never settles.
  const double negligible = kNegligibleMass * total;

  bool converged = n < 2;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto& x = work[p];
        auto& y = work[q];
        double alpha = 0.0;
        double beta = 0.0;
        double gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += x[i] * x[i];
          beta += y[i] * y[i];
          gamma += x[i] * y[i];
        }
        if (gamma == 0.0 || alpha <= negligible || beta <= negligible ||
            std::abs(gamma) <= kOffDiagonalTol * std::sqrt(alpha * beta)) {
          continue;
        }
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double xi = x[i];
          x[i] = c * xi - s * y[i];
          y[i] = s * xi + c * y[i];
        }
        auto& vx = vcols[p];
        auto& vy = vcols[q];
        for (std::size_t i = 0; i < n; ++i) {
          const double xi = vx[i];
          vx[i] = c * xi - s * vy[i];
          vy[i] = s * xi + c * vy[i];
        }
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("jacobi svd did not converge in " + std::to_string(kMaxSweeps) + " sweeps", 0.0, 0.0);
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (double xi : work[j]) sum += xi * xi;
    sigma[j] = std::sqrt(sum);
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t l, std::size_t r) { return sigma[l] > sigma[r]; });

  Svd out{RealMatrix(m, n), std::vector<double>(n), RealMatrix(n, n)};
  const double cutoff = n == 0 ? 0.0 : clamp_relative * sigma[perm[0]];
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = perm[k];
    const double s = sigma[j] <= cutoff ? 0.0 : sigma[j];
    out.sigma[k] = s;
    for (std::size_t i = 0; i < m; ++i) out.u(i, k) = s > 0.0 ? work[j][i] / sigma[j] : 0.0;
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = vcols[j][i];
  }
  return out;
}

}  // namespace

Svd svd(const RealMatrix& a, double clamp_relative) {
  if (!a.all_finite()) throw InputError("svd: matrix has a non-finite entry");
  if (!(clamp_relative >= 0.0)) throw InputError("svd: clamp must be nonnegative");
  if (a.rows() >= a.cols()) return jacobi_tall(a, clamp_relative);
  Svd t = jacobi_tall(a.transpose(), clamp_relative);
  return {std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

std::vector<double> singular_values(const RealMatrix& a) { return svd(a).sigma; }

double schatten_norm(const RealMatrix& a, double p) {
  if (!(p > 0.0)) throw InputError("schatten_norm: p must be positive");
  const auto sigma = singular_values(a);
  if (sigma.empty() || sigma.front() == 0.0) return 0.0;
  const double top = sigma.front();
  if (std::isinf(p)) return top;
  double sum = 0.0;
  for (double s : sigma) sum += std::pow(s / top, p);
  return top * std::pow(sum, 1.0 / p);
}

double trace_norm(const RealMatrix& a) {
  const auto sigma = singular_values(a);
  return std::accumulate(sigma.begin(), sigma.end(), 0.0);
}

std::size_t numerical_rank(const RealMatrix& a) {
  const auto sigma = singular_values(a);
  return static_cast<std::size_t>(std::count_if(sigma.begin(), sigma.end(), [](double s) { return s > 0.0; }));
}

}  // namespace g2lab
