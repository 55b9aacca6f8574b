#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "g2lab/boolmat.hpp"

namespace g2lab {

using Point = std::vector<double>;

/// f(x, y) = <a, x> + <b, y> + c, split as g(x) = <a, x> + c and h(y) = <b, y>.
struct LinearForm {
  std::vector<double> a;
  std::vector<double> b;
  double c = 0.0;

  double g(const Point& x) const;
  double h(const Point& y) const;
  /// Evaluated as g(x) + h(y); the sign of the rounded sum agrees exactly with
  /// the comparison g(x) < -h(y) used by the dominance reduction.
  double eval(const Point& x, const Point& y) const { return g(x) + h(y); }
};

/// Edge (x, y) iff there is j in [u] with f_ij(x, y) < 0 for every i in [s].
struct SemilinearInstance {
  std::size_t d1 = 0;
  std::size_t d2 = 0;
  std::vector<Point> v1;
  std::vector<Point> v2;
  /// forms[i][j], i in [s], j in [u].
  std::vector<std::vector<LinearForm>> forms;

  std::size_t s() const noexcept { return forms.size(); }
  std::size_t u() const noexcept { return forms.empty() ? 0 : forms.front().size(); }
  /// Throws InputError on inconsistent dimensions or non-finite values.
  void validate() const;
};

/// Throws InputError for out-of-range indices.
bool edge(const SemilinearInstance& inst, std::size_t x, std::size_t y);
BoolMatrix biadjacency(const SemilinearInstance& inst);

struct DominanceInstance {
  std::size_t s = 0;
  std::vector<Point> u1;
  std::vector<Point> u2;

  void validate() const;
};

/// x strictly below y in every coordinate.
bool dominates(const Point& x, const Point& y);
BoolMatrix dominance_matrix(const DominanceInstance& inst);

/// x~ = (g_i(x))_i, y~ = (-h_i(y))_i. Throws CapabilityError unless u = 1.
DominanceInstance to_dominance(const SemilinearInstance& inst);

/// Number of strictly dominating pairs, by halving on the last coordinate and
/// recursing into an (s-1)-dimensional cross problem. Coordinate ties are
/// never split across the two halves.
std::uint64_t count_dominance_edges(const DominanceInstance& inst);

/// f_s(n) = n^2 if n <= t; 2tn if s = 1; else 2 f_s(ceil(n/2)) + f_{s-1}(n).
/// Throws InputError unless n, t, s >= 1.
std::uint64_t f_s_bound(std::size_t n, std::size_t t, std::size_t s);

/// n points in [0,1)^d against n boxes (lo, hi) stored as points of R^{2d};
/// 2d forms, u = 1.
SemilinearInstance gen_points_boxes(std::size_t n, std::size_t d, std::uint64_t seed);
/// n points against n corners {x : x < t}; d forms, u = 1.
SemilinearInstance gen_points_corners(std::size_t n, std::size_t d, std::uint64_t seed);

struct Halfspace {
  std::vector<double> normal;
  double offset = 0.0;
};

/// Incidences of points with polytopes in POL(H): polytope k is
/// { x : <a_h, x> < c_h + translates[k][h] for all h }. Throws InputError on
/// inconsistent dimensions.
BoolMatrix gen_pol_h(const std::vector<Point>& points, const std::vector<Halfspace>& halfspaces,
                     const std::vector<std::vector<double>>& translates);

/// The same incidence structure as a semilinear instance with d2 = |H| and u = 1.
SemilinearInstance pol_h_instance(const std::vector<Point>& points, const std::vector<Halfspace>& halfspaces,
                                  const std::vector<std::vector<double>>& translates);

struct PolHSample {
  std::vector<Point> points;
  std::vector<Halfspace> halfspaces;
  std::vector<std::vector<double>> translates;
};

/// n points in [0,1)^d, `count` random unit-normal halfspaces, n random translates.
PolHSample sample_pol_h(std::size_t n, std::size_t d, std::size_t count, std::uint64_t seed);

/// One piece of the sign-pattern decomposition: the pairs whose pattern
/// (bit i*u + j set iff f_ij < 0) equals `pattern`.
struct SignPiece {
  std::uint64_t pattern = 0;
  BoolMatrix matrix;
};

/// Splits biadjacency(inst) into the nonempty pieces whose pattern has a column
/// j with all s bits set. Pieces have disjoint supports and sum to M. Throws
/// CapabilityError when s * u > 20.
std::vector<SignPiece> sign_pattern_pieces(const SemilinearInstance& inst);

/// Random K_{t,t}-free dominance instance in [0,1)^s built by incremental
/// insertion: candidate points alternate between sides and are kept only if
/// no K_{t,t} appears. Stops at n per side or after 50 n candidates.
DominanceInstance gen_dominance_ktt_free(std::size_t n, std::size_t s, std::size_t t, std::uint64_t seed);

/// Random points in [0,1)^s on both sides.
DominanceInstance gen_dominance(std::size_t n, std::size_t s, std::uint64_t seed);

}  // namespace g2lab
