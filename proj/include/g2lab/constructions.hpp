#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "g2lab/boolmat.hpp"
#include "g2lab/gamma2.hpp"

namespace g2lab {

bool is_prime(std::size_t p);

/// Rows and columns indexed by (x, x') in [q] x {0..p-1}, row index (x-1) p + x';
/// entry one iff x y + x' = y' (mod p). Throws InputError unless p is prime and 1 <= q <= p-1.
BoolMatrix gen_P_modp(std::size_t q, std::size_t p);

/// As gen_P_modp without the modulus. Throws InputError unless 1 <= q <= p.
BoolMatrix gen_P_real(std::size_t q, std::size_t p);

/// Each cell independently one with the given probability.
BoolMatrix gen_random(std::size_t m, std::size_t n, double density, std::uint64_t seed);

/// Outcomes of the probabilistic events behind the construction; reported, not asserted.
struct SetSystemDiagnostics {
  double expected_family = 0.0;  ///< p * C(m, l)
  std::size_t family_size = 0;   ///< X, before pruning
  bool family_event = false;     ///< X > E[X] / 2
  std::size_t heavy_pairs = 0;   ///< Y: pairs meeting in >= 2 elements
  bool heavy_event = false;      ///< Y < 10 m
  std::size_t light_pairs = 0;   ///< Y': pairs meeting in exactly 1 element
  bool light_event = false;      ///< Y' < 10 m^2
  double half_bound = 0.0;       ///< 2 E[Z_T] = 2 p C(m/2, l)
  std::optional<std::size_t> max_half_count;  ///< max Z_T over |T| = m/2, when m <= 24
  std::optional<bool> half_event;
  /// No t x t all-ones submatrix of M for t > floor(8 * 2^-l * n).
  std::size_t allones_threshold = 0;
  /// Largest t with a t x t all-ones submatrix of M, when n <= 20.
  std::optional<std::size_t> largest_allones;
};

struct SetSystemConstruction {
  double gamma = 0.0;
  std::size_t ell = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;  ///< seed actually used
  std::size_t retries = 0;
  /// Pruned family, sorted lexicographically; A = first n, B = next n.
  std::vector<IndexSet> family;
  std::vector<IndexSet> a;
  std::vector<IndexSet> b;
  BoolMatrix m0{1, 1};
  BoolMatrix matrix{1, 1};  ///< J - M0
  FactorizationCert cert;   ///< J + (-U) V, value l + 1
  SetSystemDiagnostics diagnostics;
};

/// l = floor(gamma - 1) >= 2, p = m^(3/2 - l); the family size is drawn from
/// Binomial(C(m, l), p) and filled with distinct uniform l-subsets, then every
/// pair meeting in two or more elements loses its lexicographically later set.
/// Retries with seed + 1 up to 16 times while fewer than 2 sets survive; then
/// throws GenerationError. Throws InputError when l < 2 or m < l.
SetSystemConstruction gen_setsystem(double gamma, std::size_t m, std::uint64_t seed);

/// The four structural invariants; empty string if all hold.
std::string check_setsystem(const SetSystemConstruction& c);

}  // namespace g2lab
