#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "g2lab/boolmat.hpp"
#include "g2lab/spectral.hpp"

namespace g2lab {

/// One term U * V of a factorization; contributes ||U||_row * ||V||_col.
struct FactorPart {
  RealMatrix left;
  RealMatrix right;
};

/// Upper-bound certificate: target = sum of parts, gamma2(target) <= value by
/// subadditivity.
struct FactorizationCert {
  std::string method;
  std::vector<FactorPart> parts;
  double value = 0.0;
};

/// Lower-bound certificate: unit u, v with gamma2(M) >= ||M o u v^T||_tr.
struct WitnessCert {
  std::string method;
  std::vector<double> u;
  std::vector<double> v;
  double value = 0.0;
};

/// Lower bound ||M||_2^3 / (sqrt(mn) ||M||_4^2) from the Frobenius mass and the
/// square count.
struct SchattenDatum {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double frobenius_sq = 0.0;
  double schatten4_pow4 = 0.0;
  double value = 0.0;
};

using LowerCert = std::variant<WitnessCert, SchattenDatum>;

struct BoundEntry {
  std::string method;
  double value;
};

struct Gamma2Bounds {
  double lower = 0.0;
  double upper = 0.0;
  LowerCert lower_cert;
  FactorizationCert upper_cert;
  std::optional<double> exact;
  /// Every candidate that was computed, for reporting.
  std::vector<BoundEntry> lower_candidates;
  std::vector<BoundEntry> upper_candidates;
  /// Reason the exact solve was skipped, if requested and skipped.
  std::string exact_skipped;
};

// --- Certificate verification: values are always recomputed from raw data. ---

double factorization_value(const FactorizationCert& cert);
/// Max entrywise deviation of sum(U_k V_k) from the target.
double factorization_residual(const FactorizationCert& cert, const RealMatrix& target);
bool verify_factorization(const FactorizationCert& cert, const RealMatrix& target, double tol = 1e-9);

/// ||M o u v^T||_tr for the given vectors; throws InputError if u, v are not unit.
double witness_value(const RealMatrix& target, const std::vector<double>& u, const std::vector<double>& v);
bool verify_witness(const WitnessCert& cert, const RealMatrix& target, double tol = 1e-9);

double lower_cert_value(const LowerCert& cert);

// --- Upper bounds. ---

/// (U, V) = (M, I) or (I, M), whichever is smaller: min of sqrt(max row ones), sqrt(max col ones).
FactorizationCert upper_rowcol(const BoolMatrix& m);
/// Split along a degeneracy order: rows of the first part and columns of the
/// second part carry at most dgc ones, so the value is <= 2 sqrt(dgc).
FactorizationCert upper_degeneracy(const BoolMatrix& m);
/// Greedy partition of the ones into all-ones rectangles; U and V are the
/// rectangle indicator vectors. Value is sqrt(max rectangles per row * max per column).
FactorizationCert upper_rectangle_cover(const BoolMatrix& m);

// --- Lower bounds. ---

/// Uniform u, v: ||M||_tr / sqrt(mn).
WitnessCert lower_avg(const BoolMatrix& m);
/// u(i) = sqrt(d_i / f), v uniform. Throws InputError on the zero matrix.
WitnessCert lower_degree_weighted(const BoolMatrix& m);
/// Throws InputError on the zero matrix.
SchattenDatum lower_schatten_datum(const BoolMatrix& m);
double lower_schatten(const BoolMatrix& m);

// --- Exact value by primal-dual ascent. ---

struct ExactOptions {
  double tol = 1e-6;
  std::size_t max_dim = 32;
  std::size_t max_iterations = 50000;
};

struct ExactSolution {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t iterations = 0;
  WitnessCert witness;
  FactorizationCert factorization;
};

/// Solves gamma2 to within `tol` by multiplicative ascent on the dual weights
/// (p, q) in the product of simplices, maximizing ||diag(sqrt p) M diag(sqrt q)||_tr.
/// Each iterate yields a witness (lower) and a factorization (upper); the solver
/// stops when they are within tol and returns their midpoint.
///
/// Throws CapabilityError when min(m, n) > max_dim, InputError for tol outside
/// [1e-8, 1e-2], and ConvergenceError carrying the last gap at the iteration cap.
ExactSolution solve_gamma2(const RealMatrix& m, const ExactOptions& options = {});
ExactSolution solve_gamma2(const BoolMatrix& m, const ExactOptions& options = {});
double exact_gamma2(const BoolMatrix& m, double tol);
double exact_gamma2(const RealMatrix& m, double tol);

struct BoundsOptions {
  bool with_exact = false;
  ExactOptions exact;
  /// Skip the rectangle cover when its factors would exceed this many entries.
  std::size_t max_cover_entries = 20'000'000;
  /// Skip SVD-based witnesses when min(m, n) exceeds this.
  std::size_t max_svd_dim = 512;
};

Gamma2Bounds best_bounds(const BoolMatrix& m, const BoundsOptions& options = {});

}  // namespace g2lab
