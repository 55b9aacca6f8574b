#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "g2lab/error.hpp"

namespace g2lab {

using Index = std::size_t;
using IndexSet = std::vector<Index>;

/// Bit-packed m x n 0/1 matrix, equivalently the bi-adjacency matrix of a
/// bipartite graph with rows on one side and columns on the other.
///
/// Rows are stored as runs of 64-bit words; bits past column n-1 in the last
/// word of each row are always zero. Values are immutable once built.
class BoolMatrix {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  /// All-zero m x n matrix. Throws InputError unless m, n >= 1.
  BoolMatrix(std::size_t rows, std::size_t cols);

  static BoolMatrix from_coords(std::size_t rows, std::size_t cols,
                                std::span<const std::pair<Index, Index>> coords);
  static BoolMatrix from_rows(const std::vector<std::vector<int>>& rows);
  static BoolMatrix generate(std::size_t rows, std::size_t cols,
                             const std::function<bool(Index, Index)>& cell);
  static BoolMatrix identity(std::size_t n);
  static BoolMatrix ones(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t words_per_row() const noexcept { return words_per_row_; }

  bool operator()(Index i, Index j) const noexcept {
    return (bits_[i * words_per_row_ + j / kWordBits] >> (j % kWordBits)) & 1U;
  }
  bool at(Index i, Index j) const;

  std::span<const Word> row_words(Index i) const noexcept {
    return {bits_.data() + i * words_per_row_, words_per_row_};
  }

  std::size_t count_ones() const noexcept;
  std::size_t row_degree(Index i) const noexcept;
  std::vector<std::size_t> row_degrees() const;
  std::vector<std::size_t> col_degrees() const;
  /// Column indices of the ones in row i, ascending.
  IndexSet row_support(Index i) const;
  /// Row-major list of all one cells.
  std::vector<std::pair<Index, Index>> coords() const;

  BoolMatrix transpose() const;
  BoolMatrix submatrix(std::span<const Index> rows, std::span<const Index> cols) const;

  bool operator==(const BoolMatrix& other) const noexcept = default;

 private:
  Word* row_data(Index i) noexcept { return bits_.data() + i * words_per_row_; }
  void set(Index i, Index j) noexcept {
    bits_[i * words_per_row_ + j / kWordBits] |= Word{1} << (j % kWordBits);
  }

  std::size_t rows_;
  std::size_t cols_;
  std::size_t words_per_row_;
  std::vector<Word> bits_;
};

IndexSet all_indices(std::size_t n);

/// Popcount of the AND of two equally sized word runs.
std::size_t and_count(std::span<const BoolMatrix::Word> a, std::span<const BoolMatrix::Word> b) noexcept;

BoolMatrix direct_sum(const BoolMatrix& a, const BoolMatrix& b);
BoolMatrix kronecker(const BoolMatrix& a, const BoolMatrix& b);
/// Complement J - M.
BoolMatrix complement(const BoolMatrix& m);

/// 2 * ones / (rows + cols): the average degree of the bipartite graph.
double avg_degree(const BoolMatrix& m);

/// No 2 x 2 all-ones submatrix, i.e. every two rows share at most one column.
bool is_four_cycle_free(const BoolMatrix& m);

struct AllOnesWitness {
  IndexSet rows;
  IndexSet cols;
};

/// Searches for a t x t all-ones submatrix by branch and bound; nullopt if none.
/// t > min(m, n) is vacuously absent. Throws InputError for t == 0.
std::optional<AllOnesWitness> has_allones_submatrix(const BoolMatrix& m, std::size_t t);

/// Rectangular variant: r rows and c columns with all r*c cells set.
std::optional<AllOnesWitness> find_allones_rectangle(const BoolMatrix& m, std::size_t r, std::size_t c);

enum class Side : std::uint8_t { Row, Col };

struct Vertex {
  Side side;
  Index index;
  bool operator==(const Vertex&) const = default;
};

struct DegeneracyResult {
  std::size_t value = 0;
  /// Peeling order over all m + n vertices.
  std::vector<Vertex> order;
  /// Rows/columns of a submatrix with minimum degree exactly `value`.
  IndexSet core_rows;
  IndexSet core_cols;
};

/// Joint min-degree peeling over rows and columns; ties go to the lowest
/// combined index (rows first, then columns).
DegeneracyResult degeneracy(const BoolMatrix& m);

/// Number of 4-tuples (i, i', j, j') with all four cells set; equals ||M||_4^4.
std::uint64_t count_squares(const BoolMatrix& m);

enum class DensityMode : std::uint8_t {
  Exact,   ///< parametric min-cut, optimal
  Greedy,  ///< best suffix of min-degree peeling, within a factor 2
};

struct DenseSubgraph {
  IndexSet rows;
  IndexSet cols;
  std::size_t ones = 0;
  /// 2 * ones / (|rows| + |cols|).
  double density = 0.0;
};

/// Induced submatrix maximizing 2 * ones / (rows + cols). Throws InputError
/// ("no edges") on the zero matrix.
DenseSubgraph max_avg_degree_subgraph(const BoolMatrix& m, DensityMode mode = DensityMode::Exact);

/// Sparse ".bmx" text format: `m n nnz` then nnz lines `i j`, ascending row-major.
/// Repeated identical consecutive pairs are accepted; pairs out of order are not.
BoolMatrix read_bmx(std::istream& in);
BoolMatrix read_bmx_file(const std::string& path);
void write_bmx(std::ostream& out, const BoolMatrix& m);

/// Parse failure carrying the 1-based line number.
class BmxParseError : public InputError {
 public:
  BmxParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

std::string to_string(const BoolMatrix& m);

}  // namespace g2lab
