#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "g2lab/boolmat.hpp"
#include "g2lab/gamma2.hpp"

namespace g2lab {

inline constexpr std::size_t kMaxDiscColumns = 24;

struct DiscResult {
  std::size_t value = 0;
  /// Entries are +1 or -1.
  std::vector<int> argmin;
};

/// ||M x||_inf for a sign vector x. Throws InputError on a length mismatch.
std::size_t signed_linf(const BoolMatrix& m, const std::vector<int>& x);

/// min over x in {-1, 1}^n of ||M x||_inf by a Gray-code scan with the last
/// sign fixed to +1. Throws CapabilityError when n > 24.
DiscResult disc_exact(const BoolMatrix& m);

/// Largest disc over M and `samples` submatrices with uniform random nonempty
/// row and column subsets. A lower bound on the hereditary discrepancy.
std::size_t herdisc_lower(const BoolMatrix& m, std::size_t samples, std::uint64_t seed);

struct MntReport {
  Gamma2Bounds gamma2;
  std::size_t disc = 0;
  std::size_t herdisc_lb = 0;
  std::size_t samples = 0;
  /// herdisc_lb / (gamma2 upper * sqrt(log2 m)); empty when not finite.
  std::optional<double> ratio_upper;
  /// gamma2 lower / (herdisc_lb * log2 m); empty when not finite.
  std::optional<double> ratio_lower;
};

struct MntOptions {
  std::size_t samples = 64;
  std::uint64_t seed = 0;
  bool with_exact = true;
  std::size_t max_exact_dim = 32;
};

MntReport mnt_report(const BoolMatrix& m, const MntOptions& options = {});
/// Same, reusing bounds already computed for M.
MntReport mnt_report(const BoolMatrix& m, const Gamma2Bounds& bounds, std::size_t samples, std::uint64_t seed);

}  // namespace g2lab
