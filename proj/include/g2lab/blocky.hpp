#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "g2lab/boolmat.hpp"

namespace g2lab {

/// Blow-up of a partial permutation matrix: cell (i, j) is one iff
/// row_label[i] == col_label[j] != 0. Labels run 1..k; 0 marks zero lines.
struct BlockyMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_label;
  std::vector<std::size_t> col_label;
  std::size_t k = 0;

  BoolMatrix to_bool() const;
  /// (row count, col count) of block b in 1..k.
  std::pair<std::size_t, std::size_t> block_shape(std::size_t b) const;
  /// Every block has a single row or a single column.
  bool is_thin() const;
};

/// Labels are assigned in order of each block's smallest row index.
std::optional<BlockyMatrix> recognize_blocky(const BoolMatrix& m);

struct ThinBlockyDecomposition {
  std::vector<BlockyMatrix> terms;
  BoolMatrix target;
};

/// Splits M along its degeneracy order into a row-owned and a column-owned part
/// (then moves cells across while neither part's widest line grows);
/// term l of the row part takes the l-th one (by column) of every row, and
/// symmetrically for the column part. Empty terms are dropped.
ThinBlockyDecomposition thin_decompose(const BoolMatrix& m);

/// Entrywise sum of the terms equals the target and all terms are thin.
bool verify_decomposition(const ThinBlockyDecomposition& d);

/// Ones of `term` inside X x Y; a thin blocky matrix has at most |X| + |Y| - 1 there.
std::size_t ones_in(const BlockyMatrix& term, const IndexSet& rows, const IndexSet& cols);

/// True iff sum of sign * term equals M entrywise. Throws InputError on shape mismatch.
bool verify_signed_combination(const std::vector<std::pair<int, BlockyMatrix>>& terms, const BoolMatrix& m);

}  // namespace g2lab
