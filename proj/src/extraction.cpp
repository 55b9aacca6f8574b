#include "g2lab/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "g2lab/error.hpp"
#include "g2lab/gamma2.hpp"
#include "g2lab/rng.hpp"

namespace g2lab {

namespace {

struct Induced {
  IndexSet rows;
  IndexSet cols;
  std::size_t ones = 0;
};

double density_of(const Induced& g) {
  return 2.0 * static_cast<double>(g.ones) / static_cast<double>(g.rows.size() + g.cols.size());
}

/// Drops vertices of degree below half the current average, one at a time.
/// Each removal raises the average, so the result has min degree >= avg / 2.
Induced cleanup(const BoolMatrix& m, Induced g) {
  const BoolMatrix sub = m.submatrix(g.rows, g.cols);
  std::vector<std::size_t> rdeg = sub.row_degrees();
  std::vector<std::size_t> cdeg = sub.col_degrees();
  std::vector<bool> row_alive(g.rows.size(), true);
  std::vector<bool> col_alive(g.cols.size(), true);
  std::size_t ones = sub.count_ones();
  std::size_t vertices = g.rows.size() + g.cols.size();
  bool changed = true;
  while (changed) {
    changed = false;
    // deg < avg / 2 with avg = 2 ones / vertices.
    for (std::size_t i = 0; i < rdeg.size(); ++i) {
      if (!row_alive[i] || rdeg[i] * vertices >= ones) continue;
      row_alive[i] = false;
      --vertices;
      ones -= rdeg[i];
      for (Index j : sub.row_support(i)) {
        if (col_alive[j]) --cdeg[j];
      }
      changed = true;
    }
    for (std::size_t j = 0; j < cdeg.size(); ++j) {
      if (!col_alive[j] || cdeg[j] * vertices >= ones) continue;
      col_alive[j] = false;
      --vertices;
      ones -= cdeg[j];
      for (std::size_t i = 0; i < rdeg.size(); ++i) {
        if (row_alive[i] && sub(i, j)) --rdeg[i];
      }
      changed = true;
    }
  }
  Induced out;
  for (std::size_t i = 0; i < g.rows.size(); ++i) {
    if (row_alive[i]) out.rows.push_back(g.rows[i]);
  }
  for (std::size_t j = 0; j < g.cols.size(); ++j) {
    if (col_alive[j]) out.cols.push_back(g.cols[j]);
  }
  out.ones = ones;
  return out;
}

/// Densest induced subgraph of M[rows, cols], in M's indices, after cleanup.
Induced densest(const BoolMatrix& m, const IndexSet& rows, const IndexSet& cols, DensityMode mode) {
  const BoolMatrix sub = m.submatrix(rows, cols);
  const DenseSubgraph d = max_avg_degree_subgraph(sub, mode);
  Induced g;
  for (Index i : d.rows) g.rows.push_back(rows[i]);
  for (Index j : d.cols) g.cols.push_back(cols[j]);
  g.ones = d.ones;
  return cleanup(m, std::move(g));
}

}  // namespace

RegularizedSubmatrix regularize(const BoolMatrix& m, DensityMode mode) {
  if (m.count_ones() == 0) throw InputError("regularize: zero matrix");
  const Induced g0 = densest(m, all_indices(m.rows()), all_indices(m.cols()), mode);
  const bool rows_larger = g0.rows.size() >= g0.cols.size();

  // Drop the vertices of degree above 2 d0 = 4 ones / vertices on the larger side.
  const BoolMatrix sub = m.submatrix(g0.rows, g0.cols);
  const std::size_t vertices = g0.rows.size() + g0.cols.size();
  const auto heavy = [&](std::size_t deg) { return deg * vertices > 4 * g0.ones; };
  IndexSet rows1 = g0.rows;
  IndexSet cols1 = g0.cols;
  if (rows_larger) {
    const auto deg = sub.row_degrees();
    rows1.clear();
    for (std::size_t i = 0; i < deg.size(); ++i) {
      if (!heavy(deg[i])) rows1.push_back(g0.rows[i]);
    }
  } else {
    const auto deg = sub.col_degrees();
    cols1.clear();
    for (std::size_t j = 0; j < deg.size(); ++j) {
      if (!heavy(deg[j])) cols1.push_back(g0.cols[j]);
    }
  }

  const Induced g = densest(m, rows1, cols1, mode);
  RegularizedSubmatrix out{g.rows, g.cols, density_of(g), rows_larger ? Side::Row : Side::Col};
  if (auto err = check_regularized(m, out); !err.empty()) throw InternalError("regularize: " + err);
  return out;
}

std::string check_regularized(const BoolMatrix& m, const RegularizedSubmatrix& r) {
  constexpr double eps = 1e-9;
  if (r.rows.empty() || r.cols.empty()) return "empty submatrix";
  const BoolMatrix n = m.submatrix(r.rows, r.cols);
  const double avg = avg_degree(n);
  if (avg < r.d_prime - eps) return "average degree below d'";
  if (r.d_prime < avg_degree(m) / 3.0 - eps) return "d' below avg_degree(M) / 3";
  const auto rd = n.row_degrees();
  const auto cd = n.col_degrees();
  const auto low = [&](std::size_t deg) { return static_cast<double>(deg) < r.d_prime / 2.0 - eps; };
  if (std::any_of(rd.begin(), rd.end(), low) || std::any_of(cd.begin(), cd.end(), low)) {
    return "a row or column has fewer than d'/2 ones";
  }
  const auto& bounded = r.bounded_side == Side::Row ? rd : cd;
  if (static_cast<double>(*std::max_element(bounded.begin(), bounded.end())) > 6.0 * r.d_prime + eps) {
    return "bounded side exceeds 6 d'";
  }
  return {};
}

BoolMatrix oriented(const BoolMatrix& m, const BiregularCert& cert) {
  BoolMatrix x = m.submatrix(cert.rows, cert.cols);
  return cert.transposed ? x.transpose() : x;
}

std::string check_biregular(const BoolMatrix& m, const BiregularCert& cert) {
  constexpr double eps = 1e-9;
  if (cert.rows.empty() || cert.cols.empty()) return "empty submatrix";
  const BoolMatrix x = oriented(m, cert);
  if (!(static_cast<double>(cert.a) > cert.d) || !(static_cast<double>(cert.b) > cert.d)) return "a or b not above d";
  const auto rd = x.row_degrees();
  const auto cd = x.col_degrees();
  if (*std::max_element(rd.begin(), rd.end()) > cert.a) return "a row exceeds a ones";
  if (*std::max_element(cd.begin(), cd.end()) > cert.b) return "a column exceeds b ones";
  const auto ones = static_cast<double>(x.count_ones());
  if (ones < cert.p * static_cast<double>(cert.a) * static_cast<double>(x.rows()) - eps) return "too few ones for p a m";
  if (ones < cert.q * static_cast<double>(cert.b) * static_cast<double>(x.cols()) - eps) return "too few ones for q b n";
  return {};
}

namespace {

/// Smallest integer bounds a, b above d and the realized maxima of X.
BiregularCert make_cert(const BoolMatrix& m, IndexSet rows, IndexSet cols, bool transposed, double p, double q,
                        double d) {
  BiregularCert c{std::move(rows), std::move(cols), p, q, d, 0, 0, transposed};
  const BoolMatrix x = oriented(m, c);
  const auto rd = x.row_degrees();
  const auto cd = x.col_degrees();
  const auto floor_d = static_cast<std::size_t>(std::floor(d)) + 1;
  c.a = std::max(*std::max_element(rd.begin(), rd.end()), floor_d);
  c.b = std::max(*std::max_element(cd.begin(), cd.end()), floor_d);
  return c;
}

}  // namespace

BiregularCert biregularize(const BoolMatrix& m, DensityMode mode) {
  if (m.count_ones() == 0) throw InputError("biregularize: zero matrix");
  const RegularizedSubmatrix reg = regularize(m, mode);
  const double d = avg_degree(m) / 2.0;
  const double p = 0.5;
  const double q = 1.0 / (12.0 * std::log2(static_cast<double>(m.rows() + m.cols())));

  // X's rows are the unbounded side, bucketed dyadically by degree: (2^(k-1), 2^k].
  const bool transposed = reg.bounded_side == Side::Row;
  const BoolMatrix m0 = m.submatrix(reg.rows, reg.cols);
  const BoolMatrix y = transposed ? m0.transpose() : m0;
  const IndexSet& lines = transposed ? reg.cols : reg.rows;
  std::map<int, IndexSet> buckets;
  const auto deg = y.row_degrees();
  for (std::size_t i = 0; i < deg.size(); ++i) {
    if (deg[i] == 0) continue;
    int k = 0;
    while ((std::size_t{1} << k) < deg[i]) ++k;
    buckets[k].push_back(lines[i]);
  }

  std::optional<BiregularCert> best;
  std::size_t best_ones = 0;
  for (const auto& [k, chosen] : buckets) {
    BiregularCert c = transposed ? make_cert(m, reg.rows, chosen, true, p, q, d)
                                 : make_cert(m, chosen, reg.cols, false, p, q, d);
    if (!check_biregular(m, c).empty()) continue;
    const std::size_t ones = oriented(m, c).count_ones();
    if (!best || ones > best_ones) {
      best = std::move(c);
      best_ones = ones;
    }
  }
  if (best) return *best;
  for (bool t : {transposed, !transposed}) {
    BiregularCert c = make_cert(m, reg.rows, reg.cols, t, p, q, d);
    if (check_biregular(m, c).empty()) return c;
  }
  throw InternalError("biregularize: no bucket satisfies the biregular certificate");
}

namespace {

IndexSet sample_distinct(const IndexSet& from, std::size_t z, Rng& rng) {
  IndexSet pool = from;
  for (std::size_t k = 0; k < z; ++k) {
    const auto pick = k + static_cast<std::size_t>(rng.below(pool.size() - k));
    std::swap(pool[k], pool[pick]);
  }
  pool.resize(z);
  std::sort(pool.begin(), pool.end());
  return pool;
}

/// The `z` entries of `candidates` with the largest score, ties by index, sorted.
IndexSet top_by(const IndexSet& candidates, const std::vector<std::size_t>& score, std::size_t z) {
  IndexSet order = candidates;
  std::stable_sort(order.begin(), order.end(), [&](Index l, Index r) { return score[l] > score[r]; });
  order.resize(std::min(z, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

std::size_t ones_of(const BoolMatrix& x, const IndexSet& rows, const IndexSet& cols) {
  std::size_t total = 0;
  for (Index i : rows) {
    for (Index j : cols) total += x(i, j) ? 1 : 0;
  }
  return total;
}

/// z rows of largest degree, then the z columns of largest count within them.
std::pair<IndexSet, IndexSet> greedy_pick(const BoolMatrix& x, const IndexSet& rows, const IndexSet& cols,
                                          std::size_t z) {
  std::vector<std::size_t> rscore(x.rows(), 0);
  for (Index i : rows) {
    for (Index j : cols) rscore[i] += x(i, j) ? 1 : 0;
  }
  IndexSet r = top_by(rows, rscore, z);
  std::vector<std::size_t> cscore(x.cols(), 0);
  for (Index i : r) {
    for (Index j : cols) cscore[j] += x(i, j) ? 1 : 0;
  }
  return {std::move(r), top_by(cols, cscore, z)};
}

}  // namespace

DenseSubmatrix dense_submatrix(const BoolMatrix& m, std::size_t z, const DenseSubmatrixOptions& options) {
  if (z == 0) throw InputError("dense_submatrix: z must be positive");
  if (m.count_ones() == 0) throw InputError("dense_submatrix: zero matrix");
  if (z > std::min(m.rows(), m.cols())) {
    throw CapabilityError("dense_submatrix: z = " + std::to_string(z) + " exceeds min(m, n)");
  }

  DenseSubmatrix out;
  out.gamma2_upper = options.gamma2_upper ? *options.gamma2_upper : best_bounds(m).upper;
  const double g2 = out.gamma2_upper * out.gamma2_upper;
  out.alpha = 1.0 / (200.0 * g2 * std::log2(static_cast<double>(m.rows() + m.cols())));
  const double limit = out.alpha * avg_degree(m);
  out.max_feasible_z = static_cast<std::size_t>(std::floor(limit));
  if (options.enforce_precondition && z > 1 && static_cast<double>(z) > limit) {
    throw CapabilityError("dense_submatrix: z = " + std::to_string(z) + " is outside the guaranteed range; max feasible z = " +
                          std::to_string(out.max_feasible_z));
  }
  const double target = out.alpha * static_cast<double>(z) * static_cast<double>(z);
  const auto finish = [&](IndexSet rows, IndexSet cols, std::size_t ones, std::string method) {
    out.rows = std::move(rows);
    out.cols = std::move(cols);
    out.ones = ones;
    out.density = static_cast<double>(ones) / static_cast<double>(z);
    out.method = std::move(method);
    out.meets_bound = static_cast<double>(ones) >= target - 1e-9;
    if (options.enforce_precondition && !out.meets_bound) {
      throw InternalError("dense_submatrix: extracted submatrix misses the alpha z density bound");
    }
    return out;
  };

  if (z == 1) {
    const auto cells = m.coords();
    return finish({cells.front().first}, {cells.front().second}, 1, "single");
  }

  const BiregularCert cert = biregularize(m, options.mode);
  const BoolMatrix x = oriented(m, cert);
  const IndexSet& x_rows = cert.transposed ? cert.cols : cert.rows;
  const IndexSet& x_cols = cert.transposed ? cert.rows : cert.cols;
  const auto to_original = [&](const IndexSet& r, const IndexSet& c) -> std::pair<IndexSet, IndexSet> {
    IndexSet a;
    IndexSet b;
    for (Index i : r) a.push_back(x_rows[i]);
    for (Index j : c) b.push_back(x_cols[j]);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return cert.transposed ? std::pair{std::move(b), std::move(a)} : std::pair{std::move(a), std::move(b)};
  };

  // Row i0 heading the most squares; its neighbourhood J; rows meeting J in >= x cells.
  std::size_t i0 = 0;
  std::uint64_t best_squares = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    std::uint64_t squares = 0;
    for (std::size_t k = 0; k < x.rows(); ++k) {
      const std::uint64_t c = and_count(x.row_words(i), x.row_words(k));
      squares += c * c;
    }
    if (squares > best_squares) {
      best_squares = squares;
      i0 = i;
    }
  }
  const IndexSet j_set = x.row_support(i0);
  const double threshold =
      cert.p * cert.p * cert.q * static_cast<double>(cert.a) / (2.0 * g2);
  IndexSet heavy_rows;
  std::vector<std::size_t> meet(x.rows(), 0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    meet[i] = and_count(x.row_words(i), x.row_words(i0));
    if (static_cast<double>(meet[i]) >= threshold) heavy_rows.push_back(i);
  }

  std::optional<std::pair<IndexSet, IndexSet>> best;
  std::size_t best_ones = 0;
  std::string best_method;
  const auto consider = [&](std::pair<IndexSet, IndexSet> pick, const char* method) {
    const std::size_t ones = ones_of(x, pick.first, pick.second);
    if (!best || ones > best_ones) {
      best = std::move(pick);
      best_ones = ones;
      best_method = method;
    }
    return static_cast<double>(best_ones) >= target - 1e-9;
  };

  if (heavy_rows.size() >= z && j_set.size() >= z) {
    Rng rng(derive_seed(options.seed, 0x4c656d6d61ULL));
    for (std::size_t s = 0; s < options.samples; ++s) {
      if (consider({sample_distinct(heavy_rows, z, rng), sample_distinct(j_set, z, rng)}, "sample")) {
        auto [r, c] = to_original(best->first, best->second);
        return finish(std::move(r), std::move(c), best_ones, best_method);
      }
    }
    if (consider(greedy_pick(x, heavy_rows, j_set, z), "greedy")) {
      auto [r, c] = to_original(best->first, best->second);
      return finish(std::move(r), std::move(c), best_ones, best_method);
    }
  }
  if (x.rows() >= z && x.cols() >= z) consider(greedy_pick(x, all_indices(x.rows()), all_indices(x.cols()), z), "greedy");
  if (best && best->first.size() == z && best->second.size() == z) {
    auto [r, c] = to_original(best->first, best->second);
    if (static_cast<double>(best_ones) >= target - 1e-9) return finish(std::move(r), std::move(c), best_ones, best_method);
  }
  // Fall back to the whole matrix when the pipeline's submatrix is too small.
  auto [r, c] = greedy_pick(m, all_indices(m.rows()), all_indices(m.cols()), z);
  const std::size_t ones = ones_of(m, r, c);
  if (best && best->first.size() == z && best->second.size() == z && best_ones >= ones) {
    auto [br, bc] = to_original(best->first, best->second);
    return finish(std::move(br), std::move(bc), best_ones, best_method);
  }
  return finish(std::move(r), std::move(c), ones, "greedy_full");
}

}  // namespace g2lab
