#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "g2lab/blocky.hpp"
#include "g2lab/constructions.hpp"
#include "g2lab/gamma2.hpp"
#include "oracles.hpp"

using namespace g2lab;

namespace {

const double kTol = 1e-6;

BoolMatrix figure_blocky() {
  return BoolMatrix::from_rows({{1, 1, 1, 0, 0, 0, 0},
                                {1, 1, 1, 0, 0, 0, 0},
                                {0, 0, 0, 1, 1, 0, 0},
                                {0, 0, 0, 1, 1, 0, 0},
                                {0, 0, 0, 1, 1, 0, 0},
                                {0, 0, 0, 0, 0, 1, 0},
                                {0, 0, 0, 0, 0, 1, 0},
                                {0, 0, 0, 0, 0, 0, 1}});
}

double exact(const BoolMatrix& m) { return exact_gamma2(m, kTol); }

void check_cert(const FactorizationCert& c, const BoolMatrix& m) {
  CHECK(verify_factorization(c, lift(m)));
  CHECK(factorization_residual(c, lift(m)) <= 1e-9);
  CHECK(factorization_value(c) == doctest::Approx(c.value).epsilon(1e-12));
}

}  // namespace

TEST_SUITE("gamma2") {

TEST_CASE("upper_rowcol examples") {
  CHECK(upper_rowcol(BoolMatrix::identity(5)).value == doctest::Approx(1.0));
  CHECK(upper_rowcol(BoolMatrix::ones(3, 5)).value == doctest::Approx(std::sqrt(3.0)));
  const BoolMatrix p = gen_P_modp(3, 5);
  CHECK(upper_rowcol(p).value == doctest::Approx(std::sqrt(3.0)));
  check_cert(upper_rowcol(p), p);
  check_cert(upper_rowcol(BoolMatrix::ones(5, 3)), BoolMatrix::ones(5, 3));
}

TEST_CASE("upper_degeneracy examples") {
  const FactorizationCert i3 = upper_degeneracy(BoolMatrix::identity(3));
  CHECK(i3.value == doctest::Approx(1.0));
  CHECK(i3.parts.size() == 1);
  CHECK(upper_degeneracy(BoolMatrix::ones(4, 4)).value <= 4.0 + 1e-12);
  const BoolMatrix p = gen_P_modp(3, 5);
  CHECK(upper_degeneracy(p).value <= 2 * std::sqrt(3.0) + 1e-9);
  check_cert(upper_degeneracy(p), p);
}

TEST_CASE("upper certificates are valid on random matrices") {
  Rng rng(9);
  for (int k = 0; k < 60; ++k) {
    const BoolMatrix m = oracle::random(1 + rng.below(20), 1 + rng.below(20), rng.uniform(), rng);
    const double d = static_cast<double>(degeneracy(m).value);
    const FactorizationCert dg = upper_degeneracy(m);
    check_cert(dg, m);
    CHECK(dg.value <= 2 * std::sqrt(d) + 1e-9);
    check_cert(upper_rowcol(m), m);
    check_cert(upper_rectangle_cover(m), m);
  }
}

TEST_CASE("lower_avg examples") {
  CHECK(lower_avg(BoolMatrix::ones(4, 4)).value == doctest::Approx(1.0));
  CHECK(lower_avg(BoolMatrix::identity(6)).value == doctest::Approx(1.0));
  const BoolMatrix p = gen_P_modp(3, 5);
  const WitnessCert w = lower_avg(p);
  CHECK(w.value == doctest::Approx(oracle::trace_norm(oracle::to_eigen(p)) / 15.0).epsilon(1e-10));
  CHECK(verify_witness(w, lift(p)));
}

TEST_CASE("lower_degree_weighted examples") {
  CHECK(lower_degree_weighted(BoolMatrix::ones(3, 3)).value == doctest::Approx(1.0));
  CHECK(lower_degree_weighted(BoolMatrix::identity(4)).value == doctest::Approx(1.0));

  // u = (sqrt(2/3), sqrt(1/3)), v uniform.
  const BoolMatrix h = BoolMatrix::from_rows({{1, 1}, {1, 0}});
  Eigen::Matrix2d w;
  const double u0 = std::sqrt(2.0 / 3), u1 = std::sqrt(1.0 / 3), v = std::sqrt(0.5);
  w << u0 * v, u0 * v, u1 * v, 0.0;
  const WitnessCert c = lower_degree_weighted(h);
  CHECK(c.value == doctest::Approx(oracle::trace_norm(w)).epsilon(1e-12));
  CHECK(verify_witness(c, lift(h)));

  CHECK_THROWS_WITH_AS(lower_degree_weighted(BoolMatrix(2, 3)), doctest::Contains("no witness on zero matrix"),
                       InputError);
}

TEST_CASE("lower_schatten examples") {
  CHECK(lower_schatten(BoolMatrix::identity(7)) == doctest::Approx(1.0));
  CHECK(lower_schatten(BoolMatrix::ones(5, 5)) == doctest::Approx(1.0));
  const BoolMatrix p = gen_P_modp(3, 5);
  const double s4sq = std::sqrt(static_cast<double>(oracle::squares(p)));
  CHECK(lower_schatten(p) == doctest::Approx(std::pow(45.0, 1.5) / (15.0 * s4sq)));
  CHECK_THROWS_AS(lower_schatten(BoolMatrix(2, 2)), InputError);
}

TEST_CASE("witness_value rejects non-unit vectors") {
  const RealMatrix i2 = RealMatrix::identity(2);
  CHECK_THROWS_AS(witness_value(i2, {1.0, 1.0}, {1.0, 0.0}), InputError);
  CHECK_THROWS_AS(witness_value(i2, {1.0}, {1.0, 0.0}), InputError);
  CHECK(witness_value(i2, {1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(0.0));
}

TEST_CASE("tampered certificates fail verification") {
  const BoolMatrix p = gen_P_modp(2, 3);
  FactorizationCert c = upper_rowcol(p);
  c.parts[0].left(0, 0) += 0.5;
  CHECK_FALSE(verify_factorization(c, lift(p)));
  WitnessCert w = lower_avg(p);
  w.value *= 1.5;
  CHECK_FALSE(verify_witness(w, lift(p)));
}

TEST_CASE("exact value of blocky matrices is one") {
  CHECK(exact(figure_blocky()) == doctest::Approx(1.0).epsilon(kTol));
  CHECK(exact(kronecker(BoolMatrix::identity(4), BoolMatrix::ones(2, 2))) == doctest::Approx(1.0).epsilon(kTol));
  CHECK(exact(BoolMatrix::ones(3, 5)) == doctest::Approx(1.0).epsilon(kTol));
}

TEST_CASE("exact value on 2 x 2 matrices matches the grid oracle") {
  for (std::uint64_t mask = 1; mask < 16; ++mask) {
    const BoolMatrix m = oracle::from_mask(2, 2, mask);
    const double want = oracle::gamma2_2x2_grid(oracle::to_eigen(m));
    CHECK(exact(m) == doctest::Approx(want).epsilon(1e-5));
  }
  CHECK(exact(BoolMatrix::from_rows({{1, 1}, {1, 0}})) == doctest::Approx(2 / std::sqrt(3.0)).epsilon(1e-5));
}

TEST_CASE("exact solution carries checkable certificates") {
  Rng rng(12);
  for (int k = 0; k < 15; ++k) {
    const BoolMatrix m = oracle::random(2 + rng.below(6), 2 + rng.below(6), 0.5, rng);
    if (m.count_ones() == 0) continue;
    const ExactSolution s = solve_gamma2(m);
    CHECK(s.upper - s.lower <= kTol * (1 + s.value));
    CHECK(s.lower <= s.value);
    CHECK(s.value <= s.upper);
    CHECK(verify_witness(s.witness, lift(m)));
    CHECK(verify_factorization(s.factorization, lift(m)));
  }
}

TEST_CASE("exact solver closes the gap at degenerate optima") {
  // Each has a row and a column whose optimal weight is zero while the entry
  // they share is not.
  const std::vector<RealMatrix> hard = {
      RealMatrix::from_rows({{1, 1, 2}, {1, 0, 2}, {1, 0, 1}}),
      RealMatrix::from_rows({{1, 0, 0}, {1, 1, 2}, {2, 1, 0}}),
      RealMatrix::from_rows({{0, 1, 0}, {2, 2, 0}, {0, 2, 1}}),
  };
  for (const RealMatrix& m : hard) {
    ExactOptions o;
    o.tol = 1e-8;
    const ExactSolution s = solve_gamma2(m, o);
    CHECK(s.upper - s.lower <= 1e-8);
    CHECK(verify_witness(s.witness, m));
    CHECK(verify_factorization(s.factorization, m));
  }
  // Rank one x y^T has gamma2 = max|x| max|y|; rounding noise in the zero
  // singular values must not leak into the factors.
  for (const RealMatrix& m : {RealMatrix::from_rows({{2, 1}, {2, 1}}),
                              RealMatrix::from_rows({{0, 1, 1}, {0, 3, 3}, {0, 2, 2}}),
                              RealMatrix::from_rows({{1.5, -3}, {0.5, -1}})}) {
    const ExactSolution s = solve_gamma2(m);
    double want = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) want = std::max(want, std::abs(m(i, j)));
    CHECK(s.value == doctest::Approx(want).epsilon(1e-6));
    CHECK(verify_factorization(s.factorization, m));
  }
}

TEST_CASE("exact solver limits") {
  CHECK_THROWS_AS(exact_gamma2(BoolMatrix::identity(33), kTol), CapabilityError);
  CHECK(exact_gamma2(BoolMatrix::ones(33, 2), kTol) == doctest::Approx(1.0).epsilon(kTol));
  CHECK_THROWS_AS(exact_gamma2(BoolMatrix::identity(2), 1e-9), InputError);
  CHECK_THROWS_AS(exact_gamma2(BoolMatrix::identity(2), 0.1), InputError);
  RealMatrix bad(2, 2, 1.0);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(exact_gamma2(bad, kTol), InputError);
  CHECK(exact(BoolMatrix(3, 3)) == 0.0);

  ExactOptions tight;
  tight.max_iterations = 1;
  Rng rng(13);
  try {
    solve_gamma2(oracle::random(10, 10, 0.5, rng), tight);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.lower() <= e.upper());
    CHECK(e.gap() > 0);
  }
}

TEST_CASE("best_bounds examples") {
  for (std::size_t n : {1u, 4u, 9u}) {
    const Gamma2Bounds i = best_bounds(BoolMatrix::identity(n));
    CHECK(i.lower == doctest::Approx(1.0));
    CHECK(i.upper == doctest::Approx(1.0));
    const Gamma2Bounds j = best_bounds(BoolMatrix::ones(n, n));
    CHECK(j.lower == doctest::Approx(1.0));
    CHECK(j.upper == doctest::Approx(1.0));
    check_cert(j.upper_cert, BoolMatrix::ones(n, n));
  }
  BoundsOptions with;
  with.with_exact = true;
  const BoolMatrix p = gen_P_modp(3, 5);
  const Gamma2Bounds b = best_bounds(p, with);
  REQUIRE(b.exact.has_value());
  CHECK(b.lower >= 1.0);
  CHECK(b.upper <= 2 * std::sqrt(3.0) + 1e-9);
  CHECK(*b.exact >= b.lower - 1e-4);
  CHECK(*b.exact <= b.upper + 1e-4);
  check_cert(b.upper_cert, p);
  CHECK(lower_cert_value(b.lower_cert) == doctest::Approx(b.lower));
}

TEST_CASE("best_bounds skips exact above the size cap") {
  Rng rng(14);
  BoundsOptions with;
  with.with_exact = true;
  const Gamma2Bounds b = best_bounds(oracle::random(40, 40, 0.5, rng), with);
  CHECK_FALSE(b.exact.has_value());
  CHECK_FALSE(b.exact_skipped.empty());
  CHECK(b.lower <= b.upper + 1e-6);
}

TEST_CASE("bounds bracket the exact value on every 3 x 3 matrix") {
  BoundsOptions with;
  with.with_exact = true;
  for (std::uint64_t mask = 0; mask < 512; ++mask) {
    const BoolMatrix m = oracle::from_mask(3, 3, mask);
    const Gamma2Bounds b = best_bounds(m, with);
    REQUIRE(b.exact.has_value());
    for (const BoundEntry& e : b.lower_candidates) CHECK(e.value <= *b.exact + 1e-4);
    for (const BoundEntry& e : b.upper_candidates) CHECK(e.value >= *b.exact - 1e-4);
    CHECK(b.lower <= b.upper + 1e-6);
    check_cert(b.upper_cert, m);
    if (m.count_ones() > 0 && recognize_blocky(m)) CHECK(*b.exact == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("norm properties at tiny scale") {
  Rng rng(15);
  auto nonzero = [&](std::size_t r, std::size_t c) {
    BoolMatrix m(1, 1);
    do {
      m = oracle::random(r, c, 0.5, rng);
    } while (m.count_ones() == 0);
    return m;
  };
  for (int k = 0; k < 12; ++k) {
    const BoolMatrix a = nonzero(2 + rng.below(2), 2 + rng.below(2));
    const BoolMatrix b = nonzero(2 + rng.below(2), 2 + rng.below(2));
    const double ga = exact(a), gb = exact(b);

    CHECK(exact(kronecker(a, b)) == doctest::Approx(ga * gb).epsilon(2e-3));
    CHECK(exact(direct_sum(a, b)) == doctest::Approx(std::max(ga, gb)).epsilon(2 * kTol).scale(1.0));
    CHECK(ga <= std::sqrt(static_cast<double>(numerical_rank(lift(a)))) + 2 * kTol);

    IndexSet rows = all_indices(a.rows());
    rows.push_back(0);
    CHECK(exact(a.submatrix(rows, all_indices(a.cols()))) == doctest::Approx(ga).epsilon(2 * kTol).scale(1.0));
    const IndexSet sub_rows{0, 1};
    CHECK(exact(a.submatrix(sub_rows, IndexSet{0})) <= ga + 2 * kTol);
  }
}

}  // TEST_SUITE
