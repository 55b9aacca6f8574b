#include "g2lab/blocky.hpp"

#include <algorithm>
#include <map>

#include "g2lab/error.hpp"

namespace g2lab {

BoolMatrix BlockyMatrix::to_bool() const {
  return BoolMatrix::generate(rows, cols, [&](Index i, Index j) {
    return row_label[i] != 0 && row_label[i] == col_label[j];
  });
}

std::pair<std::size_t, std::size_t> BlockyMatrix::block_shape(std::size_t b) const {
  return {static_cast<std::size_t>(std::count(row_label.begin(), row_label.end(), b)),
          static_cast<std::size_t>(std::count(col_label.begin(), col_label.end(), b))};
}

bool BlockyMatrix::is_thin() const {
  std::vector<std::size_t> r(k + 1, 0);
  std::vector<std::size_t> c(k + 1, 0);
  for (auto l : row_label) ++r[l];
  for (auto l : col_label) ++c[l];
  for (std::size_t b = 1; b <= k; ++b) {
    if (r[b] != 1 && c[b] != 1) return false;
  }
  return true;
}

std::optional<BlockyMatrix> recognize_blocky(const BoolMatrix& m) {
  BlockyMatrix out{m.rows(), m.cols(), std::vector<std::size_t>(m.rows(), 0),
                   std::vector<std::size_t>(m.cols(), 0), 0};
  std::map<std::vector<BoolMatrix::Word>, std::size_t> groups;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto words = m.row_words(i);
    if (std::all_of(words.begin(), words.end(), [](auto w) { return w == 0; })) continue;
    auto [it, inserted] = groups.try_emplace({words.begin(), words.end()}, out.k + 1);
    if (inserted) {
      ++out.k;
      for (Index j : m.row_support(i)) {
        if (out.col_label[j] != 0) return std::nullopt;  // supports of distinct groups overlap
        out.col_label[j] = out.k;
      }
    }
    out.row_label[i] = it->second;
  }
  return out;
}

namespace {

/// Thin blocky matrix whose ones are `cells`; every row or every column holds at most one of them.
BlockyMatrix thin_term(std::size_t rows, std::size_t cols, const std::vector<std::pair<Index, Index>>& cells) {
  const BoolMatrix m = BoolMatrix::from_coords(rows, cols, cells);
  auto b = recognize_blocky(m);
  if (!b || !b->is_thin()) throw InternalError("thin_decompose produced a term that is not thin blocky");
  return *b;
}

}  // namespace

ThinBlockyDecomposition thin_decompose(const BoolMatrix& m) {
  const auto dg = degeneracy(m);
  std::vector<std::size_t> row_pos(m.rows());
  std::vector<std::size_t> col_pos(m.cols());
  for (std::size_t k = 0; k < dg.order.size(); ++k) {
    (dg.order[k].side == Side::Row ? row_pos : col_pos)[dg.order[k].index] = k;
  }

  const auto cells = m.coords();
  std::vector<bool> row_owned(cells.size());
  std::vector<std::size_t> row_count(m.rows(), 0);
  std::vector<std::size_t> col_count(m.cols(), 0);
  for (std::size_t e = 0; e < cells.size(); ++e) {
    const auto [i, j] = cells[e];
    row_owned[e] = row_pos[i] < col_pos[j];
    ++(row_owned[e] ? row_count[i] : col_count[j]);
  }

  // The term count is max row_count + max col_count. Move cells to the other
  // side while that side stays within its current maximum; neither maximum grows.
  const auto widest = [](const std::vector<std::size_t>& v) { return v.empty() ? 0 : *std::max_element(v.begin(), v.end()); };
  const std::size_t row_cap = widest(row_count);
  for (std::size_t e = 0; e < cells.size(); ++e) {
    const auto [i, j] = cells[e];
    if (!row_owned[e] && row_count[i] < row_cap) {
      row_owned[e] = true;
      ++row_count[i];
      --col_count[j];
    }
  }
  const std::size_t col_cap = widest(col_count);
  for (std::size_t e = 0; e < cells.size(); ++e) {
    const auto [i, j] = cells[e];
    if (row_owned[e] && col_count[j] < col_cap) {
      row_owned[e] = false;
      --row_count[i];
      ++col_count[j];
    }
  }

  // by_row[l] collects the l-th row-owned one of each row; by_col likewise per column.
  std::vector<std::vector<std::pair<Index, Index>>> by_row;
  std::vector<std::vector<std::pair<Index, Index>>> by_col;
  std::vector<std::size_t> row_seen(m.rows(), 0);
  std::vector<std::size_t> col_seen(m.cols(), 0);
  // coords() is row-major, so within a row the order is by column; the column
  // side needs row order within a column, which row-major scanning also gives.
  for (std::size_t e = 0; e < cells.size(); ++e) {
    const auto [i, j] = cells[e];
    if (row_owned[e]) {
      const std::size_t l = row_seen[i]++;
      if (by_row.size() <= l) by_row.resize(l + 1);
      by_row[l].emplace_back(i, j);
    } else {
      const std::size_t l = col_seen[j]++;
      if (by_col.size() <= l) by_col.resize(l + 1);
      by_col[l].emplace_back(i, j);
    }
  }

  ThinBlockyDecomposition out{{}, m};
  for (const auto& cells : by_row) out.terms.push_back(thin_term(m.rows(), m.cols(), cells));
  for (const auto& cells : by_col) out.terms.push_back(thin_term(m.rows(), m.cols(), cells));
  return out;
}

bool verify_decomposition(const ThinBlockyDecomposition& d) {
  std::vector<std::pair<int, BlockyMatrix>> signed_terms;
  for (const auto& t : d.terms) {
    if (!t.is_thin()) return false;
    signed_terms.emplace_back(1, t);
  }
  return verify_signed_combination(signed_terms, d.target);
}

std::size_t ones_in(const BlockyMatrix& term, const IndexSet& rows, const IndexSet& cols) {
  std::vector<std::size_t> r(term.k + 1, 0);
  std::vector<std::size_t> c(term.k + 1, 0);
  for (Index i : rows) ++r[term.row_label[i]];
  for (Index j : cols) ++c[term.col_label[j]];
  std::size_t total = 0;
  for (std::size_t b = 1; b <= term.k; ++b) total += r[b] * c[b];
  return total;
}

bool verify_signed_combination(const std::vector<std::pair<int, BlockyMatrix>>& terms, const BoolMatrix& m) {
  std::vector<long> sum(m.rows() * m.cols(), 0);
  for (const auto& [sign, t] : terms) {
    if (t.rows != m.rows() || t.cols != m.cols()) throw InputError("signed combination: term shape differs from target");
    if (sign != 1 && sign != -1) throw InputError("signed combination: signs must be +1 or -1");
    for (std::size_t i = 0; i < t.rows; ++i) {
      if (t.row_label[i] == 0) continue;
      for (std::size_t j = 0; j < t.cols; ++j) {
        if (t.col_label[j] == t.row_label[i]) sum[i * m.cols() + j] += sign;
      }
    }
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (sum[i * m.cols() + j] != (m(i, j) ? 1 : 0)) return false;
    }
  }
  return true;
}

}  // namespace g2lab
