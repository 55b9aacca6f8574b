#include "g2lab/discrepancy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "g2lab/rng.hpp"

namespace g2lab {

std::size_t signed_linf(const BoolMatrix& m, const std::vector<int>& x) {
  if (x.size() != m.cols()) throw InputError("sign vector length does not match column count");
  std::size_t best = 0;
  for (Index i = 0; i < m.rows(); ++i) {
    long sum = 0;
    for (Index j : m.row_support(i)) sum += x[j];
    best = std::max(best, static_cast<std::size_t>(std::labs(sum)));
  }
  return best;
}

DiscResult disc_exact(const BoolMatrix& m) {
  const std::size_t n = m.cols();
  if (n > kMaxDiscColumns) {
    throw CapabilityError("disc_exact supports at most 24 columns, got " + std::to_string(n));
  }

  // Zero rows never matter and duplicate rows give the same sums.
  std::set<std::vector<BoolMatrix::Word>> seen;
  std::vector<std::vector<Index>> col_rows(n);
  std::vector<int> sums;
  bool odd_row = false;
  for (Index i = 0; i < m.rows(); ++i) {
    const auto words = m.row_words(i);
    std::vector<BoolMatrix::Word> key(words.begin(), words.end());
    const std::size_t deg = m.row_degree(i);
    if (deg == 0 || !seen.insert(std::move(key)).second) continue;
    const Index r = sums.size();
    for (Index j : m.row_support(i)) col_rows[j].push_back(r);
    sums.push_back(static_cast<int>(deg));
    odd_row = odd_row || (deg % 2 == 1);
  }

  DiscResult result;
  result.argmin.assign(n, 1);
  if (sums.empty()) return result;

  // Histogram of |row sum| so the maximum moves in amortized O(column degree).
  std::vector<std::size_t> hist(n + 1, 0);
  std::size_t cur = 0;
  for (int s : sums) {
    ++hist[s];
    cur = std::max<std::size_t>(cur, s);
  }
  const std::size_t floor_value = odd_row ? 1 : 0;
  std::size_t best = cur;
  std::uint64_t best_code = 0;

  // Column n-1 stays +1: x and -x have the same norm.
  const std::uint64_t steps = n >= 1 ? (std::uint64_t{1} << (n - 1)) : 1;
  std::uint64_t code = 0;
  for (std::uint64_t k = 1; k < steps && best > floor_value; ++k) {
    const int j = std::countr_zero(k);
    code ^= std::uint64_t{1} << j;
    const int delta = (code >> j) & 1U ? -2 : 2;
    for (Index r : col_rows[j]) {
      --hist[std::abs(sums[r])];
      sums[r] += delta;
      const std::size_t a = std::abs(sums[r]);
      ++hist[a];
      cur = std::max(cur, a);
    }
    while (hist[cur] == 0) --cur;
    if (cur < best) {
      best = cur;
      best_code = code;
    }
  }

  result.value = best;
  for (std::size_t j = 0; j < n; ++j) {
    if ((best_code >> j) & 1U) result.argmin[j] = -1;
  }
  return result;
}

namespace {

IndexSet random_nonempty_subset(Rng& rng, std::size_t n) {
  IndexSet out;
  while (out.empty()) {
    for (Index i = 0; i < n; ++i) {
      if (rng.next() >> 63) out.push_back(i);
    }
  }
  return out;
}

}  // namespace

std::size_t herdisc_lower(const BoolMatrix& m, std::size_t samples, std::uint64_t seed) {
  std::size_t best = disc_exact(m).value;
  Rng rng(derive_seed(seed, 0x6865726469736321ULL));
  for (std::size_t s = 0; s < samples; ++s) {
    const IndexSet rows = random_nonempty_subset(rng, m.rows());
    const IndexSet cols = random_nonempty_subset(rng, m.cols());
    best = std::max(best, disc_exact(m.submatrix(rows, cols)).value);
  }
  return best;
}

MntReport mnt_report(const BoolMatrix& m, const Gamma2Bounds& bounds, std::size_t samples, std::uint64_t seed) {
  MntReport report;
  report.gamma2 = bounds;
  report.disc = disc_exact(m).value;
  report.samples = samples;
  report.herdisc_lb = herdisc_lower(m, samples, seed);

  const double log_m = std::log2(static_cast<double>(m.rows()));
  const double herdisc = static_cast<double>(report.herdisc_lb);
  const double up = herdisc / (bounds.upper * std::sqrt(log_m));
  const double low = bounds.lower / (herdisc * log_m);
  if (std::isfinite(up)) report.ratio_upper = up;
  if (std::isfinite(low)) report.ratio_lower = low;
  return report;
}

MntReport mnt_report(const BoolMatrix& m, const MntOptions& options) {
  if (m.cols() > kMaxDiscColumns) {
    throw CapabilityError("disc_exact supports at most 24 columns, got " + std::to_string(m.cols()));
  }
  BoundsOptions bounds;
  bounds.with_exact = options.with_exact;
  bounds.exact.max_dim = options.max_exact_dim;
  return mnt_report(m, best_bounds(m, bounds), options.samples, options.seed);
}

}  // namespace g2lab
