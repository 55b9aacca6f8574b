#include "g2lab/boolmat.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "g2lab/maxflow.hpp"

namespace g2lab {

namespace {

std::size_t words_for(std::size_t cols) { return (cols + BoolMatrix::kWordBits - 1) / BoolMatrix::kWordBits; }

std::size_t popcount(std::span<const BoolMatrix::Word> words) noexcept {
  std::size_t total = 0;
  for (auto w : words) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

}  // namespace

BoolMatrix::BoolMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_per_row_(words_for(cols)) {
  if (rows == 0 || cols == 0) {
    throw InputError("matrix dimensions must be at least 1x1, got " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  bits_.assign(rows_ * words_per_row_, 0);
}

BoolMatrix BoolMatrix::from_coords(std::size_t rows, std::size_t cols,
                                   std::span<const std::pair<Index, Index>> coords) {
  BoolMatrix m(rows, cols);
  for (const auto& [i, j] : coords) {
    if (i >= rows || j >= cols) {
      throw InputError("coordinate (" + std::to_string(i) + "," + std::to_string(j) + ") out of range for " +
                       std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
    }
    m.set(i, j);
  }
  return m;
}

BoolMatrix BoolMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) throw InputError("from_rows: no rows");
  const std::size_t cols = rows.front().size();
  BoolMatrix m(rows.size(), cols);
  for (Index i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InputError("from_rows: ragged row " + std::to_string(i));
    for (Index j = 0; j < cols; ++j) {
      if (rows[i][j] != 0 && rows[i][j] != 1) throw InputError("from_rows: entries must be 0 or 1");
      if (rows[i][j] == 1) m.set(i, j);
    }
  }
  return m;
}

BoolMatrix BoolMatrix::generate(std::size_t rows, std::size_t cols, const std::function<bool(Index, Index)>& cell) {
  BoolMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (cell(i, j)) m.set(i, j);
    }
  }
  return m;
}

BoolMatrix BoolMatrix::identity(std::size_t n) {
  BoolMatrix m(n, n);
  for (Index i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BoolMatrix BoolMatrix::ones(std::size_t rows, std::size_t cols) {
  return generate(rows, cols, [](Index, Index) { return true; });
}

bool BoolMatrix::at(Index i, Index j) const {
  if (i >= rows_ || j >= cols_) throw InputError("index out of range");
  return (*this)(i, j);
}

std::size_t BoolMatrix::count_ones() const noexcept { return popcount(bits_); }

std::size_t BoolMatrix::row_degree(Index i) const noexcept { return popcount(row_words(i)); }

std::vector<std::size_t> BoolMatrix::row_degrees() const {
  std::vector<std::size_t> out(rows_);
  for (Index i = 0; i < rows_; ++i) out[i] = row_degree(i);
  return out;
}

std::vector<std::size_t> BoolMatrix::col_degrees() const {
  std::vector<std::size_t> out(cols_, 0);
  for (Index i = 0; i < rows_; ++i) {
    const auto words = row_words(i);
    for (std::size_t w = 0; w < words.size(); ++w) {
      for (Word bits = words[w]; bits != 0; bits &= bits - 1) {
        ++out[w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits))];
      }
    }
  }
  return out;
}

IndexSet BoolMatrix::row_support(Index i) const {
  IndexSet out;
  const auto words = row_words(i);
  for (std::size_t w = 0; w < words.size(); ++w) {
    for (Word bits = words[w]; bits != 0; bits &= bits - 1) {
      out.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
    }
  }
  return out;
}

std::vector<std::pair<Index, Index>> BoolMatrix::coords() const {
  std::vector<std::pair<Index, Index>> out;
  out.reserve(count_ones());
  for (Index i = 0; i < rows_; ++i) {
    for (Index j : row_support(i)) out.emplace_back(i, j);
  }
  return out;
}

BoolMatrix BoolMatrix::transpose() const {
  BoolMatrix t(cols_, rows_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index j : row_support(i)) t.set(j, i);
  }
  return t;
}

BoolMatrix BoolMatrix::submatrix(std::span<const Index> rows, std::span<const Index> cols) const {
  BoolMatrix s(rows.size(), cols.size());
  for (Index a = 0; a < rows.size(); ++a) {
    if (rows[a] >= rows_) throw InputError("submatrix: row index out of range");
    for (Index b = 0; b < cols.size(); ++b) {
      if (cols[b] >= cols_) throw InputError("submatrix: column index out of range");
      if ((*this)(rows[a], cols[b])) s.set(a, b);
    }
  }
  return s;
}

IndexSet all_indices(std::size_t n) {
  IndexSet out(n);
  std::iota(out.begin(), out.end(), Index{0});
  return out;
}

std::size_t and_count(std::span<const BoolMatrix::Word> a, std::span<const BoolMatrix::Word> b) noexcept {
  std::size_t total = 0;
  for (std::size_t w = 0; w < a.size(); ++w) total += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
  return total;
}

BoolMatrix direct_sum(const BoolMatrix& a, const BoolMatrix& b) {
  return BoolMatrix::generate(a.rows() + b.rows(), a.cols() + b.cols(), [&](Index i, Index j) {
    if (i < a.rows() && j < a.cols()) return a(i, j);
    if (i >= a.rows() && j >= a.cols()) return b(i - a.rows(), j - a.cols());
    return false;
  });
}

BoolMatrix kronecker(const BoolMatrix& a, const BoolMatrix& b) {
  return BoolMatrix::generate(a.rows() * b.rows(), a.cols() * b.cols(), [&](Index i, Index j) {
    return a(i / b.rows(), j / b.cols()) && b(i % b.rows(), j % b.cols());
  });
}

BoolMatrix complement(const BoolMatrix& m) {
  return BoolMatrix::generate(m.rows(), m.cols(), [&](Index i, Index j) { return !m(i, j); });
}

double avg_degree(const BoolMatrix& m) {
  return 2.0 * static_cast<double>(m.count_ones()) / static_cast<double>(m.rows() + m.cols());
}

namespace {

/// Row-pair work is |rows|^2 * words; pick the orientation that minimizes it.
bool prefer_transpose_for_pairs(const BoolMatrix& m) {
  const double row_cost = static_cast<double>(m.rows()) * m.rows() * m.words_per_row();
  const double col_cost = static_cast<double>(m.cols()) * m.cols() * words_for(m.rows());
  return col_cost < row_cost;
}

}  // namespace

bool is_four_cycle_free(const BoolMatrix& input) {
  const BoolMatrix m = prefer_transpose_for_pairs(input) ? input.transpose() : input;
  const auto degrees = m.row_degrees();
  for (Index i = 0; i < m.rows(); ++i) {
    if (degrees[i] < 2) continue;
    for (Index k = i + 1; k < m.rows(); ++k) {
      if (degrees[k] >= 2 && and_count(m.row_words(i), m.row_words(k)) >= 2) return false;
    }
  }
  return true;
}

namespace {

struct RectangleSearch {
  const BoolMatrix& m;
  std::size_t rows_needed;
  std::size_t cols_needed;
  IndexSet candidates;
  IndexSet chosen;
  std::vector<std::vector<BoolMatrix::Word>> masks;  // masks[depth] = AND of chosen rows

  bool run(std::size_t start, std::size_t depth) {
    if (depth == rows_needed) return true;
    const std::size_t remaining = rows_needed - depth;
    for (std::size_t idx = start; idx + remaining <= candidates.size(); ++idx) {
      const auto row = m.row_words(candidates[idx]);
      auto& next = masks[depth + 1];
      std::size_t count = 0;
      for (std::size_t w = 0; w < row.size(); ++w) {
        next[w] = masks[depth][w] & row[w];
        count += static_cast<std::size_t>(std::popcount(next[w]));
      }
      if (count < cols_needed) continue;
      chosen.push_back(candidates[idx]);
      if (run(idx + 1, depth + 1)) return true;
      chosen.pop_back();
    }
    return false;
  }
};

std::optional<AllOnesWitness> search_rectangle(const BoolMatrix& m, std::size_t r, std::size_t c) {
  if (r > m.rows() || c > m.cols()) return std::nullopt;
  RectangleSearch search{m, r, c, {}, {}, {}};
  const auto degrees = m.row_degrees();
  for (Index i = 0; i < m.rows(); ++i) {
    if (degrees[i] >= c) search.candidates.push_back(i);
  }
  if (search.candidates.size() < r) return std::nullopt;
  std::stable_sort(search.candidates.begin(), search.candidates.end(),
                   [&](Index a, Index b) { return degrees[a] > degrees[b]; });
  search.masks.assign(r + 1, std::vector<BoolMatrix::Word>(m.words_per_row(), ~BoolMatrix::Word{0}));
  if (!search.run(0, 0)) return std::nullopt;

  AllOnesWitness witness;
  witness.rows = search.chosen;
  std::sort(witness.rows.begin(), witness.rows.end());
  const auto& mask = search.masks[r];
  for (Index j = 0; j < m.cols() && witness.cols.size() < c; ++j) {
    if ((mask[j / BoolMatrix::kWordBits] >> (j % BoolMatrix::kWordBits)) & 1U) witness.cols.push_back(j);
  }
  return witness;
}

std::size_t count_at_least(const std::vector<std::size_t>& degrees, std::size_t bound) {
  return static_cast<std::size_t>(
      std::count_if(degrees.begin(), degrees.end(), [&](std::size_t d) { return d >= bound; }));
}

}  // namespace

std::optional<AllOnesWitness> find_allones_rectangle(const BoolMatrix& m, std::size_t r, std::size_t c) {
  if (r == 0 || c == 0) throw InputError("all-ones rectangle dimensions must be at least 1");
  if (r > m.rows() || c > m.cols()) return std::nullopt;
  // Enumerate subsets on whichever side has fewer eligible vertices.
  const std::size_t row_cands = count_at_least(m.row_degrees(), c);
  const std::size_t col_cands = count_at_least(m.col_degrees(), r);
  if (col_cands < row_cands || (col_cands == row_cands && c < r)) {
    auto w = search_rectangle(m.transpose(), c, r);
    if (!w) return std::nullopt;
    return AllOnesWitness{std::move(w->cols), std::move(w->rows)};
  }
  return search_rectangle(m, r, c);
}

std::optional<AllOnesWitness> has_allones_submatrix(const BoolMatrix& m, std::size_t t) {
  if (t == 0) throw InputError("has_allones_submatrix: t must be at least 1");
  if (t > std::min(m.rows(), m.cols())) return std::nullopt;
  return find_allones_rectangle(m, t, t);
}

namespace {

/// Combined vertex ids: rows are [0, m), columns are [m, m + n).
struct BipartiteAdjacency {
  std::size_t m;
  std::vector<IndexSet> neighbors;

  explicit BipartiteAdjacency(const BoolMatrix& mat) : m(mat.rows()), neighbors(mat.rows() + mat.cols()) {
    for (Index i = 0; i < mat.rows(); ++i) {
      for (Index j : mat.row_support(i)) {
        neighbors[i].push_back(m + j);
        neighbors[m + j].push_back(i);
      }
    }
  }

  Vertex vertex(std::size_t id) const { return id < m ? Vertex{Side::Row, id} : Vertex{Side::Col, id - m}; }
};

struct PeelResult {
  std::vector<std::size_t> order;
  std::vector<std::size_t> removal_degree;
};

PeelResult peel(const BipartiteAdjacency& adj) {
  const std::size_t total = adj.neighbors.size();
  std::vector<std::size_t> degree(total);
  std::set<std::pair<std::size_t, std::size_t>> queue;
  for (std::size_t v = 0; v < total; ++v) {
    degree[v] = adj.neighbors[v].size();
    queue.emplace(degree[v], v);
  }
  std::vector<bool> removed(total, false);
  PeelResult out;
  out.order.reserve(total);
  out.removal_degree.reserve(total);
  while (!queue.empty()) {
    const auto [deg, v] = *queue.begin();
    queue.erase(queue.begin());
    removed[v] = true;
    out.order.push_back(v);
    out.removal_degree.push_back(deg);
    for (std::size_t w : adj.neighbors[v]) {
      if (removed[w]) continue;
      queue.erase({degree[w], w});
      --degree[w];
      queue.emplace(degree[w], w);
    }
  }
  return out;
}

}  // namespace

DegeneracyResult degeneracy(const BoolMatrix& m) {
  const BipartiteAdjacency adj(m);
  const PeelResult peeled = peel(adj);

  DegeneracyResult result;
  result.value = *std::max_element(peeled.removal_degree.begin(), peeled.removal_degree.end());
  result.order.reserve(peeled.order.size());
  for (std::size_t v : peeled.order) result.order.push_back(adj.vertex(v));

  // The vertices still present when the first maximum-degree vertex is peeled
  // all have degree >= value, and the peeled one has exactly value.
  const auto first = static_cast<std::size_t>(
      std::find(peeled.removal_degree.begin(), peeled.removal_degree.end(), result.value) -
      peeled.removal_degree.begin());
  for (std::size_t k = first; k < peeled.order.size(); ++k) {
    const Vertex v = adj.vertex(peeled.order[k]);
    (v.side == Side::Row ? result.core_rows : result.core_cols).push_back(v.index);
  }
  std::sort(result.core_rows.begin(), result.core_rows.end());
  std::sort(result.core_cols.begin(), result.core_cols.end());
  return result;
}

std::uint64_t count_squares(const BoolMatrix& input) {
  const BoolMatrix m = prefer_transpose_for_pairs(input) ? input.transpose() : input;
  std::uint64_t total = 0;
  for (Index i = 0; i < m.rows(); ++i) {
    const std::uint64_t own = m.row_degree(i);
    total += own * own;
    for (Index k = i + 1; k < m.rows(); ++k) {
      const std::uint64_t common = and_count(m.row_words(i), m.row_words(k));
      total += 2 * common * common;
    }
  }
  return total;
}

namespace {

DenseSubgraph make_subgraph(const BoolMatrix& m, const BipartiteAdjacency& adj, const std::vector<bool>& keep) {
  DenseSubgraph out;
  for (std::size_t v = 0; v < keep.size(); ++v) {
    if (!keep[v]) continue;
    const Vertex vert = adj.vertex(v);
    (vert.side == Side::Row ? out.rows : out.cols).push_back(vert.index);
  }
  for (Index i : out.rows) {
    for (Index j : out.cols) out.ones += m(i, j) ? 1 : 0;
  }
  const std::size_t size = out.rows.size() + out.cols.size();
  out.density = size == 0 ? 0.0 : 2.0 * static_cast<double>(out.ones) / static_cast<double>(size);
  return out;
}

DenseSubgraph densest_by_peeling(const BoolMatrix& m, const BipartiteAdjacency& adj) {
  const PeelResult peeled = peel(adj);
  const std::size_t total = peeled.order.size();
  std::size_t edges = m.count_ones();
  double best = -1.0;
  std::size_t best_start = 0;
  for (std::size_t k = 0; k < total; ++k) {
    const double density = 2.0 * static_cast<double>(edges) / static_cast<double>(total - k);
    if (density > best) {
      best = density;
      best_start = k;
    }
    edges -= peeled.removal_degree[k];
  }
  std::vector<bool> keep(total, false);
  for (std::size_t k = best_start; k < total; ++k) keep[peeled.order[k]] = true;
  return make_subgraph(m, adj, keep);
}

/// Goldberg's parametric min-cut. With lambda = num / den, vertex weights are
/// deg(v) - lambda and every edge costs den in each direction; a nonempty source
/// side exists iff some induced subgraph has density 2e/|S| > lambda.
DenseSubgraph densest_by_mincut(const BoolMatrix& m, const BipartiteAdjacency& adj) {
  using Cap = FlowNetwork::Capacity;
  const std::size_t total = adj.neighbors.size();
  const Cap den = static_cast<Cap>(total) * static_cast<Cap>(total);
  std::size_t max_degree = 0;
  for (const auto& nb : adj.neighbors) max_degree = std::max(max_degree, nb.size());

  auto attempt = [&](Cap num) -> std::optional<std::vector<bool>> {
    FlowNetwork net(total + 2);
    const std::size_t source = total;
    const std::size_t sink = total + 1;
    Cap positive = 0;
    for (std::size_t v = 0; v < total; ++v) {
      const Cap weight = static_cast<Cap>(adj.neighbors[v].size()) * den - num;
      if (weight > 0) {
        net.add_edge(source, v, weight);
        positive += weight;
      } else if (weight < 0) {
        net.add_edge(v, sink, -weight);
      }
    }
    for (std::size_t v = 0; v < adj.m; ++v) {
      for (std::size_t w : adj.neighbors[v]) net.add_edge(v, w, den, den);
    }
    if (net.max_flow(source, sink) >= positive) return std::nullopt;
    auto side = net.source_side(source);
    side.resize(total);
    return side;
  };

  Cap lo = 0;
  Cap hi = static_cast<Cap>(max_degree) * den;
  auto best = attempt(lo);
  if (!best) throw InternalError("densest subgraph: zero threshold infeasible on a nonzero matrix");
  // Distinct densities 2e/k differ by at least 2/total^2 > 1/den, so unit
  // resolution in num pins the optimum.
  while (hi - lo > 1) {
    const Cap mid = lo + (hi - lo) / 2;
    if (auto side = attempt(mid)) {
      lo = mid;
      best = std::move(side);
    } else {
      hi = mid;
    }
  }
  return make_subgraph(m, adj, *best);
}

}  // namespace

DenseSubgraph max_avg_degree_subgraph(const BoolMatrix& m, DensityMode mode) {
  if (m.count_ones() == 0) throw InputError("no edges");
  const BipartiteAdjacency adj(m);
  return mode == DensityMode::Exact ? densest_by_mincut(m, adj) : densest_by_peeling(m, adj);
}

BmxParseError::BmxParseError(std::size_t line, const std::string& what)
    : InputError("bmx line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

template <typename... Ts>
bool parse_fields(const std::string& line, Ts&... fields) {
  std::istringstream ss(line);
  long long values[sizeof...(Ts)];
  for (auto& v : values) {
    if (!(ss >> v) || v < 0) return false;
  }
  std::string rest;
  if (ss >> rest) return false;
  std::size_t k = 0;
  ((fields = static_cast<Ts>(values[k++])), ...);
  return true;
}

}  // namespace

BoolMatrix read_bmx(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_content_line(in, line, line_no)) throw BmxParseError(line_no + 1, "missing header `m n nnz`");
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t nnz = 0;
  if (!parse_fields(line, rows, cols, nnz)) throw BmxParseError(line_no, "header must be `m n nnz`");
  if (rows == 0 || cols == 0) throw BmxParseError(line_no, "dimensions must be positive");

  std::vector<std::pair<Index, Index>> coords;
  coords.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!next_content_line(in, line, line_no)) {
      throw BmxParseError(line_no + 1, "expected " + std::to_string(nnz) + " entries, found " + std::to_string(k));
    }
    Index i = 0;
    Index j = 0;
    if (!parse_fields(line, i, j)) throw BmxParseError(line_no, "entry must be `i j`");
    if (i >= rows || j >= cols) {
      throw BmxParseError(line_no, "coordinate (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    }
    if (!coords.empty() && std::pair{i, j} < coords.back()) {
      throw BmxParseError(line_no, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                       ") out of ascending row-major order");
    }
    coords.emplace_back(i, j);
  }
  if (next_content_line(in, line, line_no)) throw BmxParseError(line_no, "trailing content after entries");
  return BoolMatrix::from_coords(rows, cols, coords);
}

BoolMatrix read_bmx_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_bmx(in);
}

void write_bmx(std::ostream& out, const BoolMatrix& m) {
  const auto cells = m.coords();
  out << m.rows() << ' ' << m.cols() << ' ' << cells.size() << '\n';
  for (const auto& [i, j] : cells) out << i << ' ' << j << '\n';
}

std::string to_string(const BoolMatrix& m) {
  std::string out;
  out.reserve(m.rows() * (m.cols() + 1));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

}  // namespace g2lab
