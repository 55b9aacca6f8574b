#include "g2lab/gamma2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "g2lab/error.hpp"

namespace g2lab {

namespace {

/// Product that only visits nonzeros of both factors; certificate factors are
/// mostly indicator and identity matrices.
RealMatrix sparse_product(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("factorization part: inner dimensions differ");
  std::vector<std::vector<std::pair<std::size_t, double>>> brows(b.rows());
  for (std::size_t k = 0; k < b.rows(); ++k) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      if (b(k, j) != 0.0) brows[k].emplace_back(j, b(k, j));
    }
  }
  RealMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (const auto& [j, bkj] : brows[k]) dst[j] += aik * bkj;
    }
  }
  return out;
}

RealMatrix scaled(const RealMatrix& m, const std::vector<double>& u, const std::vector<double>& v) {
  RealMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = u[i] * m(i, j) * v[j];
  }
  return out;
}

RealMatrix bool_part(const BoolMatrix& m, const std::vector<std::pair<Index, Index>>& cells) {
  RealMatrix out(m.rows(), m.cols());
  for (const auto& [i, j] : cells) out(i, j) = 1.0;
  return out;
}

FactorizationCert finish(std::string method, std::vector<FactorPart> parts) {
  FactorizationCert cert{std::move(method), std::move(parts), 0.0};
  cert.value = factorization_value(cert);
  return cert;
}

}  // namespace

double factorization_value(const FactorizationCert& cert) {
  double total = 0.0;
  for (const auto& part : cert.parts) total += max_row_norm(part.left) * max_col_norm(part.right);
  return total;
}

double factorization_residual(const FactorizationCert& cert, const RealMatrix& target) {
  RealMatrix sum(target.rows(), target.cols());
  for (const auto& part : cert.parts) {
    if (part.left.rows() != target.rows() || part.right.cols() != target.cols()) {
      throw InputError("factorization part does not match the target shape");
    }
    sum = add(sum, sparse_product(part.left, part.right));
  }
  return max_abs_diff(sum, target);
}

bool verify_factorization(const FactorizationCert& cert, const RealMatrix& target, double tol) {
  return factorization_residual(cert, target) <= tol;
}

double witness_value(const RealMatrix& target, const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != target.rows() || v.size() != target.cols()) throw InputError("witness: vector length mismatch");
  const auto norm = [](const std::vector<double>& x) {
    return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
  };
  if (std::abs(norm(u) - 1.0) > 1e-9 || std::abs(norm(v) - 1.0) > 1e-9) {
    throw InputError("witness: u and v must be unit vectors");
  }
  return trace_norm(scaled(target, u, v));
}

bool verify_witness(const WitnessCert& cert, const RealMatrix& target, double tol) {
  return std::abs(witness_value(target, cert.u, cert.v) - cert.value) <= tol;
}

double lower_cert_value(const LowerCert& cert) {
  return std::visit([](const auto& c) { return c.value; }, cert);
}

FactorizationCert upper_rowcol(const BoolMatrix& m) {
  const auto rd = m.row_degrees();
  const auto cd = m.col_degrees();
  const std::size_t max_row = *std::max_element(rd.begin(), rd.end());
  const std::size_t max_col = *std::max_element(cd.begin(), cd.end());
  if (max_row <= max_col) return finish("rowcol", {{lift(m), RealMatrix::identity(m.cols())}});
  return finish("rowcol", {{RealMatrix::identity(m.rows()), lift(m)}});
}

FactorizationCert upper_degeneracy(const BoolMatrix& m) {
  const auto dg = degeneracy(m);
  std::vector<std::size_t> row_pos(m.rows());
  std::vector<std::size_t> col_pos(m.cols());
  for (std::size_t k = 0; k < dg.order.size(); ++k) {
    (dg.order[k].side == Side::Row ? row_pos : col_pos)[dg.order[k].index] = k;
  }
  // An edge belongs to whichever endpoint leaves the peeling first; that
  // endpoint had at most dgc remaining neighbours at the time.
  std::vector<std::pair<Index, Index>> by_row;
  std::vector<std::pair<Index, Index>> by_col;
  for (const auto& cell : m.coords()) {
    (row_pos[cell.first] < col_pos[cell.second] ? by_row : by_col).push_back(cell);
  }
  std::vector<FactorPart> parts;
  if (!by_row.empty()) parts.push_back({bool_part(m, by_row), RealMatrix::identity(m.cols())});
  if (!by_col.empty()) parts.push_back({RealMatrix::identity(m.rows()), bool_part(m, by_col)});
  if (parts.empty()) parts.push_back({RealMatrix(m.rows(), m.cols()), RealMatrix::identity(m.cols())});
  return finish("degeneracy", std::move(parts));
}

namespace {

/// Partition by identical row supports: each class is one all-ones rectangle.
/// Returns the class supports and each row's class (or -1 for zero rows).
struct RowClasses {
  std::vector<IndexSet> supports;
  std::vector<long> label;
};

RowClasses row_classes(const BoolMatrix& m) {
  RowClasses out;
  out.label.assign(m.rows(), -1);
  std::map<std::vector<BoolMatrix::Word>, long> seen;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto words = m.row_words(i);
    if (std::all_of(words.begin(), words.end(), [](auto w) { return w == 0; })) continue;
    auto [it, inserted] = seen.try_emplace({words.begin(), words.end()}, static_cast<long>(out.supports.size()));
    if (inserted) out.supports.push_back(m.row_support(i));
    out.label[i] = it->second;
  }
  return out;
}

std::size_t max_classes_per_col(const BoolMatrix& m, const RowClasses& rc) {
  std::vector<std::size_t> per_col(m.cols(), 0);
  for (const auto& s : rc.supports) {
    for (Index j : s) ++per_col[j];
  }
  return per_col.empty() ? 0 : *std::max_element(per_col.begin(), per_col.end());
}

}  // namespace

FactorizationCert upper_rectangle_cover(const BoolMatrix& m) {
  const BoolMatrix mt = m.transpose();
  const RowClasses by_rows = row_classes(m);
  const RowClasses by_cols = row_classes(mt);
  const bool use_cols = max_classes_per_col(mt, by_cols) < max_classes_per_col(m, by_rows);
  const RowClasses& rc = use_cols ? by_cols : by_rows;
  const std::size_t k = std::max<std::size_t>(rc.supports.size(), 1);

  // For classes of rows: U = row-class indicators, V = class supports. For
  // classes of columns the roles swap.
  RealMatrix indicator(use_cols ? m.cols() : m.rows(), k);
  RealMatrix support(k, use_cols ? m.rows() : m.cols());
  for (std::size_t i = 0; i < rc.label.size(); ++i) {
    if (rc.label[i] >= 0) indicator(i, static_cast<std::size_t>(rc.label[i])) = 1.0;
  }
  for (std::size_t c = 0; c < rc.supports.size(); ++c) {
    for (Index j : rc.supports[c]) support(c, j) = 1.0;
  }
  if (!use_cols) return finish("rectangle_cover", {{std::move(indicator), std::move(support)}});
  return finish("rectangle_cover", {{support.transpose(), indicator.transpose()}});
}

WitnessCert lower_avg(const BoolMatrix& m) {
  std::vector<double> u(m.rows(), 1.0 / std::sqrt(static_cast<double>(m.rows())));
  std::vector<double> v(m.cols(), 1.0 / std::sqrt(static_cast<double>(m.cols())));
  const double value = witness_value(lift(m), u, v);
  return {"avg", std::move(u), std::move(v), value};
}

WitnessCert lower_degree_weighted(const BoolMatrix& m) {
  const std::size_t f = m.count_ones();
  if (f == 0) throw InputError("no witness on zero matrix");
  const auto rd = m.row_degrees();
  std::vector<double> u(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) u[i] = std::sqrt(static_cast<double>(rd[i]) / static_cast<double>(f));
  std::vector<double> v(m.cols(), 1.0 / std::sqrt(static_cast<double>(m.cols())));
  const double value = witness_value(lift(m), u, v);
  return {"degree_weighted", std::move(u), std::move(v), value};
}

SchattenDatum lower_schatten_datum(const BoolMatrix& m) {
  const auto f = static_cast<double>(m.count_ones());
  if (f == 0.0) throw InputError("schatten bound undefined on zero matrix");
  const auto s4 = static_cast<double>(count_squares(m));
  const double value =
      std::pow(f, 1.5) / (std::sqrt(static_cast<double>(m.rows()) * static_cast<double>(m.cols())) * std::sqrt(s4));
  return {m.rows(), m.cols(), f, s4, value};
}

double lower_schatten(const BoolMatrix& m) { return lower_schatten_datum(m).value; }

namespace {

struct Iterate {
  double lower = 0.0;
  double upper = 0.0;     // max row norm times max column norm of left * right
  double residual = 0.0;  // cost of the part covering core - left * right
  std::vector<double> r;  // squared row norms of the left factor
  std::vector<double> c;  // squared column norms of the right factor
  RealMatrix left;
  RealMatrix right;
  RealMatrix rest;  // core - left * right
  bool rest_by_rows = true;
};

// Truncation levels relative to sigma_1 tried for the factorization. Rounding
// leaves singular values near 1e-16 on rank-deficient inputs, while weights
// near the floor produce genuine ones only a little larger.
constexpr double kCutoffs[] = {0.0, 1e-14, 1e-12, 1e-10};

/// left = M diag(sq) V S^{-1/2}, right = S^{-1/2} U^T diag(sp) M over the
/// first k singular triples.
Iterate factor(const RealMatrix& m, const Svd& d, const std::vector<double>& sp, const std::vector<double>& sq,
               std::size_t k) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  Iterate it;
  it.left = RealMatrix(rows, k);
  it.right = RealMatrix(k, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double w = m(i, j) * sq[j];
      if (w == 0.0) continue;
      for (std::size_t t = 0; t < k; ++t) it.left(i, t) += w * d.v(j, t);
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t t = 0; t < k; ++t) {
      const double w = sp[i] * d.u(i, t);
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) it.right(t, j) += w * m(i, j);
    }
  }
  for (std::size_t t = 0; t < k; ++t) {
    const double s = 1.0 / std::sqrt(d.sigma[t]);
    for (std::size_t i = 0; i < rows; ++i) it.left(i, t) *= s;
    for (std::size_t j = 0; j < cols; ++j) it.right(t, j) *= s;
  }
  it.r.assign(rows, 0.0);
  it.c.assign(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t t = 0; t < k; ++t) it.r[i] += it.left(i, t) * it.left(i, t);
  }
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t j = 0; j < cols; ++j) it.c[j] += it.right(t, j) * it.right(t, j);
  }
  it.upper = k == 0 ? 0.0
                    : std::sqrt(*std::max_element(it.r.begin(), it.r.end()) *
                                *std::max_element(it.c.begin(), it.c.end()));
  it.rest = k == 0 ? m : add(m, scale(multiply(it.left, it.right), -1.0));
  const double res_rows = max_row_norm(it.rest);
  const double res_cols = max_col_norm(it.rest);
  it.rest_by_rows = res_rows <= res_cols;
  it.residual = std::min(res_rows, res_cols);
  return it;
}

/// One primal-dual evaluation at weights (p, q) on a matrix with no zero rows
/// or columns. Keeps the truncation with the smallest certified upper bound.
Iterate evaluate(const RealMatrix& m, const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> sp(m.rows());
  std::vector<double> sq(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) sp[i] = std::sqrt(p[i]);
  for (std::size_t j = 0; j < m.cols(); ++j) sq[j] = std::sqrt(q[j]);

  // No clamping here: a weight near zero shrinks a singular value that may
  // still carry an entry of M.
  const Svd d = svd(scaled(m, sp, sq), 0.0);
  Iterate best;
  std::size_t tried = std::numeric_limits<std::size_t>::max();
  for (double cut : kCutoffs) {
    std::size_t k = 0;
    while (k < d.sigma.size() && d.sigma[k] > cut * d.sigma.front()) ++k;
    if (k == tried) continue;
    tried = k;
    Iterate it = factor(m, d, sp, sq, k);
    if (best.left.rows() == 0 || it.upper + it.residual < best.upper + best.residual) best = std::move(it);
  }
  std::size_t k = 0;
  while (k < d.sigma.size() && d.sigma[k] > 0.0) ++k;
  best.lower = std::accumulate(d.sigma.begin(), d.sigma.begin() + static_cast<long>(k), 0.0);
  return best;
}

// Below this the Jacobi sweep treats a scaled column as noise.
constexpr double kWeightFloor = 1e-12;

/// Multiplicative step w_i *= norms_i / scale. A weight that collapsed early
/// regrows only by that ratio per step, so a coordinate whose norm exceeds the
/// scale also gets an additive share of its excess; the share vanishes at an
/// optimum, where no norm exceeds the scale.
void reweight(std::vector<double>& w, const std::vector<double>& norms, double scale) {
  const double share = 1.0 / static_cast<double>(w.size());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double ratio = norms[i] / scale;
    w[i] = w[i] * ratio + share * std::max(0.0, ratio - 1.0);
    total += w[i];
  }
  double again = 0.0;
  for (double& x : w) {
    x = std::max(x / total, kWeightFloor);
    again += x;
  }
  for (double& x : w) x /= again;
}

/// Embeds a factor computed on the nonzero rows/cols back into full size.
RealMatrix embed_rows(const RealMatrix& a, const IndexSet& rows, std::size_t total) {
  RealMatrix out(total, a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) std::copy(a.row(i).begin(), a.row(i).end(), out.row(rows[i]).begin());
  return out;
}

RealMatrix embed_cols(const RealMatrix& a, const IndexSet& cols, std::size_t total) {
  RealMatrix out(a.rows(), total);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, cols[j]) = a(i, j);
  }
  return out;
}

}  // namespace

ExactSolution solve_gamma2(const RealMatrix& m, const ExactOptions& options) {
  if (!(options.tol >= 1e-8 && options.tol <= 1e-2)) throw InputError("exact gamma2: tol must lie in [1e-8, 1e-2]");
  if (!m.all_finite()) throw InputError("exact gamma2: matrix has a non-finite entry");
  if (std::min(m.rows(), m.cols()) > options.max_dim) {
    throw CapabilityError("exact gamma2: min(m, n) = " + std::to_string(std::min(m.rows(), m.cols())) +
                          " exceeds the limit " + std::to_string(options.max_dim));
  }

  // Zero rows and columns do not affect gamma2; solve on the rest.
  IndexSet rows;
  IndexSet cols;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    if (std::any_of(r.begin(), r.end(), [](double x) { return x != 0.0; })) rows.push_back(i);
  }
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (m(i, j) != 0.0) {
        cols.push_back(j);
        break;
      }
    }
  }

  ExactSolution sol;
  if (rows.empty()) {
    sol.witness = {"exact", std::vector<double>(m.rows(), 1.0 / std::sqrt(static_cast<double>(m.rows()))),
                   std::vector<double>(m.cols(), 1.0 / std::sqrt(static_cast<double>(m.cols()))), 0.0};
    sol.factorization = finish("exact", {{RealMatrix(m.rows(), 1), RealMatrix(1, m.cols())}});
    return sol;
  }

  RealMatrix core(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) core(i, j) = m(rows[i], cols[j]);
  }

  std::vector<double> p(rows.size(), 1.0 / static_cast<double>(rows.size()));
  std::vector<double> q(cols.size(), 1.0 / static_cast<double>(cols.size()));
  double best_lower = 0.0;
  double best_upper = std::numeric_limits<double>::infinity();
  std::vector<double> best_p;
  std::vector<double> best_q;
  std::vector<FactorPart> best_parts;

  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    Iterate it = evaluate(core, p, q);
    if (it.lower > best_lower) {
      best_lower = it.lower;
      best_p = p;
      best_q = q;
    }
    // Truncation and rounding leave a small residual; it becomes an extra
    // part so the certificate sums to M exactly.
    const double upper = it.upper + it.residual;
    if (upper < best_upper) {
      best_upper = upper;
      best_parts.clear();
      best_parts.push_back({embed_rows(it.left, rows, m.rows()), embed_cols(it.right, cols, m.cols())});
      const RealMatrix full_res = embed_cols(embed_rows(it.rest, rows, m.rows()), cols, m.cols());
      if (it.rest_by_rows) {
        best_parts.push_back({full_res, RealMatrix::identity(m.cols())});
      } else {
        best_parts.push_back({RealMatrix::identity(m.rows()), full_res});
      }
    }
    sol.iterations = iter + 1;
    if (best_upper - best_lower <= options.tol) break;
    if (iter + 1 == options.max_iterations) {
      throw ConvergenceError("exact gamma2: no convergence in " + std::to_string(options.max_iterations) +
                                 " iterations, gap " + std::to_string(best_upper - best_lower),
                             best_lower, best_upper);
    }
    reweight(p, it.r, it.lower);
    reweight(q, it.c, it.lower);
  }

  std::vector<double> u(m.rows(), 0.0);
  std::vector<double> v(m.cols(), 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) u[rows[i]] = std::sqrt(best_p[i]);
  for (std::size_t j = 0; j < cols.size(); ++j) v[cols[j]] = std::sqrt(best_q[j]);
  sol.lower = best_lower;
  sol.upper = best_upper;
  sol.value = 0.5 * (best_lower + best_upper);
  sol.witness = {"exact", std::move(u), std::move(v), best_lower};
  sol.factorization = finish("exact", std::move(best_parts));
  return sol;
}

ExactSolution solve_gamma2(const BoolMatrix& m, const ExactOptions& options) { return solve_gamma2(lift(m), options); }

double exact_gamma2(const BoolMatrix& m, double tol) {
  ExactOptions options;
  options.tol = tol;
  return solve_gamma2(m, options).value;
}

double exact_gamma2(const RealMatrix& m, double tol) {
  ExactOptions options;
  options.tol = tol;
  return solve_gamma2(m, options).value;
}

Gamma2Bounds best_bounds(const BoolMatrix& m, const BoundsOptions& options) {
  Gamma2Bounds out;
  std::vector<FactorizationCert> uppers;
  uppers.push_back(upper_rowcol(m));
  uppers.push_back(upper_degeneracy(m));

  std::size_t classes = 0;
  {
    // Cheap size estimate for the cover: distinct nonzero rows bound k.
    std::map<std::vector<BoolMatrix::Word>, int> distinct;
    for (std::size_t i = 0; i < m.rows() && distinct.size() * (m.rows() + m.cols()) <= options.max_cover_entries;
         ++i) {
      const auto w = m.row_words(i);
      distinct.emplace(std::vector<BoolMatrix::Word>(w.begin(), w.end()), 0);
    }
    classes = distinct.size();
  }
  if (classes * (m.rows() + m.cols()) <= options.max_cover_entries) uppers.push_back(upper_rectangle_cover(m));

  std::vector<LowerCert> lowers;
  const bool nonzero = m.count_ones() > 0;
  const bool svd_ok = std::min(m.rows(), m.cols()) <= options.max_svd_dim;
  if (svd_ok) lowers.emplace_back(lower_avg(m));
  if (nonzero && svd_ok) lowers.emplace_back(lower_degree_weighted(m));
  if (nonzero) lowers.emplace_back(lower_schatten_datum(m));
  if (lowers.empty()) lowers.emplace_back(WitnessCert{"zero", {}, {}, 0.0});

  if (options.with_exact) {
    if (std::min(m.rows(), m.cols()) > options.exact.max_dim) {
      out.exact_skipped = "min(m, n) = " + std::to_string(std::min(m.rows(), m.cols())) + " exceeds max exact dim " +
                          std::to_string(options.exact.max_dim);
    } else {
      try {
        ExactSolution sol = solve_gamma2(m, options.exact);
        out.exact = sol.value;
        lowers.emplace_back(std::move(sol.witness));
        uppers.push_back(std::move(sol.factorization));
      } catch (const ConvergenceError& e) {
        out.exact_skipped = e.what();
      }
    }
  }

  std::size_t best_up = 0;
  for (std::size_t k = 0; k < uppers.size(); ++k) {
    out.upper_candidates.push_back({uppers[k].method, uppers[k].value});
    if (uppers[k].value < uppers[best_up].value) best_up = k;
  }
  std::size_t best_lo = 0;
  for (std::size_t k = 0; k < lowers.size(); ++k) {
    const double value = lower_cert_value(lowers[k]);
    const std::string method = std::holds_alternative<WitnessCert>(lowers[k])
                                   ? std::get<WitnessCert>(lowers[k]).method
                                   : std::string("schatten");
    out.lower_candidates.push_back({method, value});
    if (value > lower_cert_value(lowers[best_lo])) best_lo = k;
  }
  out.upper = uppers[best_up].value;
  out.upper_cert = std::move(uppers[best_up]);
  out.lower = lower_cert_value(lowers[best_lo]);
  out.lower_cert = std::move(lowers[best_lo]);
  return out;
}

}  // namespace g2lab
