#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "g2lab/constructions.hpp"
#include "g2lab/discrepancy.hpp"
#include "oracles.hpp"

using namespace g2lab;

namespace {

BoolMatrix rows_of(const BoolMatrix& m, const IndexSet& order) { return m.submatrix(order, all_indices(m.cols())); }

}  // namespace

TEST_SUITE("discrepancy") {

TEST_CASE("disc examples") {
  CHECK(disc_exact(BoolMatrix::identity(2)).value == 1);
  const DiscResult j = disc_exact(BoolMatrix::ones(2, 2));
  CHECK(j.value == 0);
  CHECK(j.argmin.size() == 2);
  CHECK(j.argmin[0] == -j.argmin[1]);
  CHECK(disc_exact(BoolMatrix::from_rows({{1, 0}, {1, 1}})).value == 1);
  CHECK(disc_exact(BoolMatrix(3, 3)).value == 0);
}

TEST_CASE("signed_linf") {
  const BoolMatrix m = BoolMatrix::from_rows({{1, 1, 1}, {0, 1, 0}});
  CHECK(signed_linf(m, {1, 1, 1}) == 3);
  CHECK(signed_linf(m, {1, -1, -1}) == 1);
  CHECK_THROWS_AS(signed_linf(m, {1, 1}), InputError);
}

TEST_CASE("disc matches exhaustive search and its argmin attains it") {
  Rng rng(61);
  for (int k = 0; k < 150; ++k) {
    const BoolMatrix m = oracle::random(1 + rng.below(10), 1 + rng.below(11), 0.2 + 0.6 * rng.uniform(), rng);
    const DiscResult d = disc_exact(m);
    CHECK(d.value == oracle::disc(m));
    REQUIRE(d.argmin.size() == m.cols());
    for (int x : d.argmin) CHECK((x == 1 || x == -1));
    CHECK(signed_linf(m, d.argmin) == d.value);
  }
}

TEST_CASE("disc at the column limit") {
  Rng rng(62);
  const BoolMatrix m = oracle::random(30, 24, 0.5, rng);
  const DiscResult d = disc_exact(m);
  CHECK(signed_linf(m, d.argmin) == d.value);
  CHECK(disc_exact(BoolMatrix::identity(24)).value == 1);
  CHECK_THROWS_AS(disc_exact(BoolMatrix::identity(25)), CapabilityError);
}

TEST_CASE("disc ignores row order and duplicate rows") {
  Rng rng(63);
  for (int k = 0; k < 40; ++k) {
    const BoolMatrix m = oracle::random(2 + rng.below(8), 1 + rng.below(10), 0.5, rng);
    const std::size_t base = disc_exact(m).value;
    IndexSet perm = all_indices(m.rows());
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    CHECK(disc_exact(rows_of(m, perm)).value == base);
    IndexSet dup = all_indices(m.rows());
    dup.push_back(rng.below(m.rows()));
    std::sort(dup.begin(), dup.end());
    CHECK(disc_exact(rows_of(m, dup)).value == base);
  }
}

TEST_CASE("herdisc_lower examples") {
  CHECK(herdisc_lower(BoolMatrix::identity(4), 0, 1) == 1);
  CHECK(herdisc_lower(BoolMatrix::identity(4), 50, 1) == 1);
  const std::size_t j = herdisc_lower(BoolMatrix::ones(4, 4), 50, 2);
  CHECK(j <= 1);
  CHECK(j >= disc_exact(BoolMatrix::ones(4, 4)).value);
}

TEST_CASE("herdisc_lower dominates disc and is bounded by exhaustive herdisc") {
  Rng rng(64);
  for (int k = 0; k < 20; ++k) {
    const BoolMatrix m = oracle::random(2 + rng.below(4), 2 + rng.below(4), 0.5, rng);
    const std::size_t h = herdisc_lower(m, 30, k);
    CHECK(h >= disc_exact(m).value);
    std::size_t herdisc = 0;
    oracle::for_each_induced(m, [&](const IndexSet& r, const IndexSet& c) {
      herdisc = std::max(herdisc, oracle::disc(m.submatrix(r, c)));
    });
    CHECK(h <= herdisc);
    CHECK(herdisc_lower(m, 30, k) == h);
  }
}

TEST_CASE("mnt report on the identity") {
  const MntReport r = mnt_report(BoolMatrix::identity(8));
  CHECK(r.herdisc_lb == 1);
  CHECK(r.disc == 1);
  CHECK(r.samples == 64);
  REQUIRE(r.ratio_upper.has_value());
  REQUIRE(r.ratio_lower.has_value());
  CHECK(std::isfinite(*r.ratio_upper));
  CHECK(std::isfinite(*r.ratio_lower));
  CHECK(*r.ratio_upper == doctest::Approx(1.0 / (r.gamma2.upper * std::sqrt(3.0))));
  CHECK(*r.ratio_lower == doctest::Approx(r.gamma2.lower / 3.0));
}

TEST_CASE("mnt report on P_p(2, 3) and J") {
  const MntReport r = mnt_report(gen_P_modp(2, 3));
  CHECK(r.gamma2.lower > 0);
  CHECK(r.gamma2.upper >= r.gamma2.lower);
  CHECK(r.herdisc_lb >= r.disc);
  CHECK(r.herdisc_lb >= 1);
  CHECK(r.ratio_upper.has_value());
  CHECK(r.ratio_lower.has_value());

  const MntReport j = mnt_report(BoolMatrix::ones(4, 4));
  CHECK(j.gamma2.lower == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(j.gamma2.upper == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(j.herdisc_lb <= 1);
}

TEST_CASE("mnt report edge cases") {
  // One row: log2 m = 0, so both ratios are undefined.
  const MntReport one = mnt_report(BoolMatrix::ones(1, 3));
  CHECK_FALSE(one.ratio_upper.has_value());
  CHECK_FALSE(one.ratio_lower.has_value());
  CHECK_THROWS_AS(mnt_report(BoolMatrix::identity(25)), CapabilityError);
}

}  // TEST_SUITE
