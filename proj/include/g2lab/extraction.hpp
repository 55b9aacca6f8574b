#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "g2lab/boolmat.hpp"

namespace g2lab {

struct RegularizedSubmatrix {
  IndexSet rows;
  IndexSet cols;
  double d_prime = 0.0;
  /// Side whose maximum degree is at most 6 d'.
  Side bounded_side = Side::Row;
};

/// Induced submatrix N with avg_degree(N) = d' >= avg_degree(M) / 3, minimum
/// degree >= d'/2 and max degree <= 6 d' on one side. Greedy mode replaces the
/// exact densest-subgraph steps by peeling; a min-degree cleanup keeps the
/// invariants in both modes. Throws InputError on the zero matrix.
RegularizedSubmatrix regularize(const BoolMatrix& m, DensityMode mode = DensityMode::Exact);

/// Empty string if all invariants hold for `r` as a submatrix of `m`, else the first violation.
std::string check_regularized(const BoolMatrix& m, const RegularizedSubmatrix& r);

/// (p, q, d)-biregular certificate for X = M[rows, cols], or its transpose when
/// `transposed`: X has rows <= a ones, columns <= b ones, a, b > d, and
/// ones(X) >= max(p a rows(X), q b cols(X)).
struct BiregularCert {
  IndexSet rows;
  IndexSet cols;
  double p = 0.0;
  double q = 0.0;
  double d = 0.0;
  std::size_t a = 0;
  std::size_t b = 0;
  bool transposed = false;
};

/// The oriented matrix X described by the certificate.
BoolMatrix oriented(const BoolMatrix& m, const BiregularCert& cert);
std::string check_biregular(const BoolMatrix& m, const BiregularCert& cert);

/// p = 1/2, q = 1/(12 log2(m + n)), d = avg_degree(M) / 2. Regularizes, then
/// keeps the dyadic bucket of the unbounded side carrying the most ones among
/// those that satisfy the certificate. Throws InputError on the zero matrix.
BiregularCert biregularize(const BoolMatrix& m, DensityMode mode = DensityMode::Exact);

struct DenseSubmatrixOptions {
  std::uint64_t seed = 0;
  /// Refuse z above the guaranteed range (z = 1 is always allowed).
  bool enforce_precondition = true;
  /// Certified upper bound on gamma2(M); computed if absent.
  std::optional<double> gamma2_upper;
  DensityMode mode = DensityMode::Exact;
  std::size_t samples = 64;
};

struct DenseSubmatrix {
  IndexSet rows;
  IndexSet cols;
  std::size_t ones = 0;
  /// ones / z, the average degree of the z x z submatrix.
  double density = 0.0;
  double alpha = 0.0;
  double gamma2_upper = 0.0;
  /// floor(alpha * avg_degree(M)).
  std::size_t max_feasible_z = 0;
  std::string method;
  bool meets_bound = false;
};

/// z x z submatrix with average degree >= alpha z, alpha = 1 / (200 gamma2^2 log2(m + n))
/// with gamma2 replaced by a certified upper bound. Throws CapabilityError when
/// z exceeds min(m, n), or exceeds alpha * avg_degree(M) while enforcing, and
/// InternalError if an enforced result misses the bound.
DenseSubmatrix dense_submatrix(const BoolMatrix& m, std::size_t z, const DenseSubmatrixOptions& options = {});

}  // namespace g2lab
