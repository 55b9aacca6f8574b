#include "g2lab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "g2lab/error.hpp"
#include "g2lab/rng.hpp"

namespace g2lab {

bool is_prime(std::size_t p) {
  if (p < 2) return false;
  for (std::size_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

BoolMatrix gen_P_modp(std::size_t q, std::size_t p) {
  if (!is_prime(p)) throw InputError("pmodp: p = " + std::to_string(p) + " is not prime");
  if (q < 1 || q > p - 1) throw InputError("pmodp: q must satisfy 1 <= q <= p - 1");
  const std::size_t size = q * p;
  return BoolMatrix::generate(size, size, [&](Index r, Index c) {
    const std::size_t x = r / p + 1;
    const std::size_t xp = r % p;
    const std::size_t y = c / p + 1;
    const std::size_t yp = c % p;
    return (x * y + xp) % p == yp;
  });
}

BoolMatrix gen_P_real(std::size_t q, std::size_t p) {
  if (p < 1 || q < 1 || q > p) throw InputError("preal: q must satisfy 1 <= q <= p");
  const std::size_t size = q * p;
  return BoolMatrix::generate(size, size, [&](Index r, Index c) {
    const std::size_t x = r / p + 1;
    const std::size_t xp = r % p;
    const std::size_t y = c / p + 1;
    const std::size_t yp = c % p;
    return x * y + xp == yp;
  });
}

BoolMatrix gen_random(std::size_t m, std::size_t n, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) throw InputError("random: density must lie in [0, 1]");
  Rng rng(derive_seed(seed, 0x72616e64ULL));
  return BoolMatrix::generate(m, n, [&](Index, Index) { return rng.coin(density); });
}

namespace {

double binomial_coefficient(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double out = 1.0;
  for (std::size_t i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  return out;
}

/// Binomial(trials, p) by geometric skips between successes.
std::size_t binomial_draw(double trials, double p, Rng& rng) {
  if (p >= 1.0) return static_cast<std::size_t>(trials);
  const double log_q = std::log1p(-p);
  std::size_t successes = 0;
  double position = -1.0;
  while (true) {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    position += 1.0 + std::floor(std::log(u) / log_q);
    if (position >= trials) return successes;
    ++successes;
  }
}

IndexSet random_subset(std::size_t m, std::size_t ell, Rng& rng) {
  IndexSet pool(m);
  for (std::size_t k = 0; k < m; ++k) pool[k] = k;
  for (std::size_t k = 0; k < ell; ++k) std::swap(pool[k], pool[k + rng.below(m - k)]);
  pool.resize(ell);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::size_t intersection_size(const IndexSet& a, const IndexSet& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

/// Max number of family members inside some T with |T| = m/2, by enumeration.
std::size_t max_half_count(const std::vector<IndexSet>& family, std::size_t m) {
  std::vector<std::uint32_t> masks;
  for (const auto& s : family) {
    std::uint32_t mask = 0;
    for (Index e : s) mask |= 1U << e;
    masks.push_back(mask);
  }
  const std::size_t half = m / 2;
  std::size_t best = 0;
  // Gosper's hack over all half-size subsets of [m].
  std::uint32_t t = (1U << half) - 1;
  const std::uint32_t limit = 1U << m;
  while (t < limit) {
    std::size_t inside = 0;
    for (auto mask : masks) inside += (mask & ~t) == 0 ? 1 : 0;
    best = std::max(best, inside);
    if (t == 0) break;
    const std::uint32_t c = t & -t;
    const std::uint32_t r = t + c;
    t = (((r ^ t) >> 2) / c) | r;
  }
  return best;
}

}  // namespace

SetSystemConstruction gen_setsystem(double gamma, std::size_t m, std::uint64_t seed) {
  if (!std::isfinite(gamma) || gamma < 3.0) throw InputError("setsystem: gamma must be at least 3");
  const auto ell = static_cast<std::size_t>(std::floor(gamma - 1.0));
  if (ell < 2) throw InputError("setsystem: l = floor(gamma - 1) must be at least 2");
  if (m < ell) throw InputError("setsystem: m must be at least l");

  const double p = std::pow(static_cast<double>(m), 1.5 - static_cast<double>(ell));
  const double total = binomial_coefficient(m, ell);
  SetSystemConstruction out;
  out.gamma = gamma;
  out.ell = ell;
  out.m = m;

  std::size_t last_size = 0;
  std::size_t last_pruned = 0;
  for (std::size_t retry = 0; retry <= 16; ++retry) {
    const std::uint64_t used = seed + retry;
    Rng rng(derive_seed(used, 0x736574ULL));
    const std::size_t size = std::min<std::size_t>(binomial_draw(total, p, rng), static_cast<std::size_t>(total));
    std::set<IndexSet> chosen;
    while (chosen.size() < size) chosen.insert(random_subset(m, ell, rng));
    std::vector<IndexSet> family(chosen.begin(), chosen.end());  // lexicographic

    SetSystemDiagnostics diag;
    diag.expected_family = p * total;
    diag.family_size = family.size();
    std::vector<bool> removed(family.size(), false);
    for (std::size_t i = 0; i < family.size(); ++i) {
      for (std::size_t j = i + 1; j < family.size(); ++j) {
        const std::size_t common = intersection_size(family[i], family[j]);
        if (common >= 2) {
          ++diag.heavy_pairs;
          if (!removed[i] && !removed[j]) removed[j] = true;
        } else if (common == 1) {
          ++diag.light_pairs;
        }
      }
    }
    std::vector<IndexSet> pruned;
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (!removed[i]) pruned.push_back(family[i]);
    }
    last_size = family.size();
    last_pruned = pruned.size();
    if (pruned.size() < 2) continue;

    const std::size_t n = pruned.size() / 2;
    diag.family_event = static_cast<double>(diag.family_size) > diag.expected_family / 2.0;
    diag.heavy_event = static_cast<double>(diag.heavy_pairs) < 10.0 * static_cast<double>(m);
    diag.light_event = static_cast<double>(diag.light_pairs) < 10.0 * static_cast<double>(m) * static_cast<double>(m);
    diag.half_bound = 2.0 * p * binomial_coefficient(m / 2, ell);
    if (m <= 24) {
      diag.max_half_count = max_half_count(pruned, m);
      diag.half_event = static_cast<double>(*diag.max_half_count) <= diag.half_bound;
    }
    diag.allones_threshold =
        static_cast<std::size_t>(std::floor(8.0 * std::pow(2.0, -static_cast<double>(ell)) * static_cast<double>(n)));

    out.seed = used;
    out.retries = retry;
    out.family = pruned;
    out.a.assign(pruned.begin(), pruned.begin() + static_cast<long>(n));
    out.b.assign(pruned.begin() + static_cast<long>(n), pruned.begin() + static_cast<long>(2 * n));

    RealMatrix u(n, m);
    RealMatrix v(m, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (Index e : out.a[r]) u(r, e) = 1.0;
      for (Index e : out.b[r]) v(e, r) = 1.0;
    }
    std::vector<std::pair<Index, Index>> cells;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        const std::size_t common = intersection_size(out.a[r], out.b[c]);
        if (common > 1) throw InternalError("setsystem: pruned family has a pair meeting in two elements");
        if (common == 1) cells.emplace_back(r, c);
      }
    }
    out.m0 = BoolMatrix::from_coords(n, n, cells);
    out.matrix = complement(out.m0);
    out.cert = FactorizationCert{
        "setsystem",
        {{RealMatrix(n, 1, 1.0), RealMatrix(1, n, 1.0)}, {scale(u, -1.0), v}},
        0.0};
    out.cert.value = factorization_value(out.cert);

    if (n <= 20) {
      std::size_t t = 0;
      while (t < n && has_allones_submatrix(out.matrix, t + 1)) ++t;
      diag.largest_allones = t;
    }
    out.diagnostics = diag;
    if (auto err = check_setsystem(out); !err.empty()) throw InternalError("setsystem: " + err);
    return out;
  }
  throw GenerationError("setsystem: family degenerated after 16 retries (expected " + std::to_string(p * total) +
                        " sets, last draw " + std::to_string(last_size) + ", " + std::to_string(last_pruned) +
                        " after pruning)");
}

std::string check_setsystem(const SetSystemConstruction& c) {
  for (std::size_t i = 0; i < c.family.size(); ++i) {
    for (std::size_t j = i + 1; j < c.family.size(); ++j) {
      if (intersection_size(c.family[i], c.family[j]) > 1) return "two sets meet in more than one element";
    }
  }
  const std::size_t n = c.a.size();
  RealMatrix u(n, c.m);
  RealMatrix v(c.m, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (Index e : c.a[r]) u(r, e) = 1.0;
    for (Index e : c.b[r]) v(e, r) = 1.0;
  }
  const RealMatrix product = multiply(u, v);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t s = 0; s < n; ++s) {
      if (product(r, s) != (c.m0(r, s) ? 1.0 : 0.0)) return "M0 differs from U V or is not Boolean";
      if (c.matrix(r, s) == c.m0(r, s)) return "M is not J - M0";
    }
  }
  if (!verify_factorization(c.cert, lift(c.matrix))) return "certificate does not sum to M";
  if (factorization_value(c.cert) > static_cast<double>(c.ell) + 1.0 + 1e-9) return "certificate value exceeds l + 1";
  return {};
}

}  // namespace g2lab
