#include "g2lab/semilinear.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "g2lab/error.hpp"
#include "g2lab/rng.hpp"

namespace g2lab {

namespace {

double dot(const std::vector<double>& a, const Point& x) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * x[k];
  return sum;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_points(const std::vector<Point>& pts, std::size_t dim, const char* what) {
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (pts[k].size() != dim) {
      throw InputError(std::string(what) + " point " + std::to_string(k) + " has dimension " +
                       std::to_string(pts[k].size()) + ", expected " + std::to_string(dim));
    }
    if (!all_finite(pts[k])) throw InputError(std::string(what) + " point " + std::to_string(k) + " is not finite");
  }
}

}  // namespace

double LinearForm::g(const Point& x) const { return dot(a, x) + c; }
double LinearForm::h(const Point& y) const { return dot(b, y); }

void SemilinearInstance::validate() const {
  if (forms.empty() || forms.front().empty()) throw InputError("semilinear instance needs s, u >= 1");
  check_points(v1, d1, "V1");
  check_points(v2, d2, "V2");
  for (const auto& row : forms) {
    if (row.size() != forms.front().size()) throw InputError("semilinear instance: ragged form array");
    for (const auto& f : row) {
      if (f.a.size() != d1 || f.b.size() != d2) throw InputError("semilinear instance: form dimension mismatch");
      if (!all_finite(f.a) || !all_finite(f.b) || !std::isfinite(f.c)) {
        throw InputError("semilinear instance: non-finite form coefficient");
      }
    }
  }
}

bool edge(const SemilinearInstance& inst, std::size_t x, std::size_t y) {
  if (x >= inst.v1.size() || y >= inst.v2.size()) {
    throw InputError("edge: index (" + std::to_string(x) + ", " + std::to_string(y) + ") out of range");
  }
  for (std::size_t j = 0; j < inst.u(); ++j) {
    bool all = true;
    for (std::size_t i = 0; i < inst.s() && all; ++i) all = inst.forms[i][j].eval(inst.v1[x], inst.v2[y]) < 0.0;
    if (all) return true;
  }
  return false;
}

BoolMatrix biadjacency(const SemilinearInstance& inst) {
  inst.validate();
  return BoolMatrix::generate(inst.v1.size(), inst.v2.size(), [&](Index x, Index y) { return edge(inst, x, y); });
}

void DominanceInstance::validate() const {
  if (s == 0) throw InputError("dominance instance needs s >= 1");
  check_points(u1, s, "U1");
  check_points(u2, s, "U2");
}

bool dominates(const Point& x, const Point& y) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] < y[k])) return false;
  }
  return true;
}

BoolMatrix dominance_matrix(const DominanceInstance& inst) {
  inst.validate();
  return BoolMatrix::generate(inst.u1.size(), inst.u2.size(),
                              [&](Index i, Index j) { return dominates(inst.u1[i], inst.u2[j]); });
}

DominanceInstance to_dominance(const SemilinearInstance& inst) {
  inst.validate();
  if (inst.u() != 1) {
    throw CapabilityError("to_dominance needs u = 1; split the instance into its u sub-instances first");
  }
  DominanceInstance out{inst.s(), {}, {}};
  for (const auto& x : inst.v1) {
    Point p(inst.s());
    for (std::size_t i = 0; i < inst.s(); ++i) p[i] = inst.forms[i][0].g(x);
    out.u1.push_back(std::move(p));
  }
  for (const auto& y : inst.v2) {
    Point p(inst.s());
    for (std::size_t i = 0; i < inst.s(); ++i) p[i] = -inst.forms[i][0].h(y);
    out.u2.push_back(std::move(p));
  }
  return out;
}

namespace {

using PointRefs = std::vector<const Point*>;

std::uint64_t count_1d(const PointRefs& a, const PointRefs& b) {
  std::vector<double> ys;
  ys.reserve(b.size());
  for (const Point* y : b) ys.push_back((*y)[0]);
  std::sort(ys.begin(), ys.end());
  std::uint64_t total = 0;
  for (const Point* x : a) {
    total += static_cast<std::uint64_t>(ys.end() - std::upper_bound(ys.begin(), ys.end(), (*x)[0]));
  }
  return total;
}

bool dominates_prefix(const Point& x, const Point& y, std::size_t dims) {
  for (std::size_t k = 0; k < dims; ++k) {
    if (!(x[k] < y[k])) return false;
  }
  return true;
}

/// Pairs (x, y) in a x b with x < y in coordinates [0, dims).
std::uint64_t count_rec(const PointRefs& a, const PointRefs& b, std::size_t dims) {
  if (a.empty() || b.empty()) return 0;
  if (dims == 1) return count_1d(a, b);
  if (a.size() * b.size() <= 64) {
    std::uint64_t total = 0;
    for (const Point* x : a) {
      for (const Point* y : b) total += dominates_prefix(*x, *y, dims) ? 1 : 0;
    }
    return total;
  }

  // Split the combined set at a value of the last coordinate so that equal
  // values stay on one side: below = {< v}, above = {>= v}.
  const std::size_t last = dims - 1;
  std::vector<double> values;
  values.reserve(a.size() + b.size());
  for (const Point* x : a) values.push_back((*x)[last]);
  for (const Point* y : b) values.push_back((*y)[last]);
  std::sort(values.begin(), values.end());
  double pivot = values[values.size() / 2];
  if (pivot == values.front()) {
    const auto next = std::upper_bound(values.begin(), values.end(), pivot);
    if (next == values.end()) return 0;  // all equal: strictness rules out every pair
    pivot = *next;
  }

  PointRefs a_low;
  PointRefs a_high;
  PointRefs b_low;
  PointRefs b_high;
  for (const Point* x : a) ((*x)[last] < pivot ? a_low : a_high).push_back(x);
  for (const Point* y : b) ((*y)[last] < pivot ? b_low : b_high).push_back(y);
  // x in the low half and y in the high half already differ strictly in the last coordinate.
  return count_rec(a_low, b_low, dims) + count_rec(a_high, b_high, dims) + count_rec(a_low, b_high, dims - 1);
}

}  // namespace

std::uint64_t count_dominance_edges(const DominanceInstance& inst) {
  inst.validate();
  PointRefs a;
  PointRefs b;
  for (const auto& x : inst.u1) a.push_back(&x);
  for (const auto& y : inst.u2) b.push_back(&y);
  return count_rec(a, b, inst.s);
}

std::uint64_t f_s_bound(std::size_t n, std::size_t t, std::size_t s) {
  if (n == 0 || t == 0 || s == 0) throw InputError("f_s_bound: n, t, s must be at least 1");
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> memo;
  const auto rec = [&](const auto& self, std::size_t nn, std::size_t ss) -> std::uint64_t {
    if (nn <= t) return static_cast<std::uint64_t>(nn) * nn;
    if (ss == 1) return 2 * static_cast<std::uint64_t>(t) * nn;
    if (auto it = memo.find({nn, ss}); it != memo.end()) return it->second;
    const std::uint64_t v = 2 * self(self, (nn + 1) / 2, ss) + self(self, nn, ss - 1);
    memo[{nn, ss}] = v;
    return v;
  };
  return rec(rec, n, s);
}

namespace {

Point unit_point(Rng& rng, std::size_t d) {
  Point p(d);
  for (double& x : p) x = rng.uniform();
  return p;
}

std::vector<double> basis(std::size_t dim, std::size_t k, double value) {
  std::vector<double> v(dim, 0.0);
  v[k] = value;
  return v;
}

}  // namespace

SemilinearInstance gen_points_boxes(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || d == 0) throw InputError("gen_points_boxes: n and d must be positive");
  Rng rng(derive_seed(seed, 0x626f786573ULL));
  SemilinearInstance inst{d, 2 * d, {}, {}, {}};
  for (std::size_t k = 0; k < n; ++k) inst.v1.push_back(unit_point(rng, d));
  for (std::size_t k = 0; k < n; ++k) {
    Point box(2 * d);
    for (std::size_t c = 0; c < d; ++c) {
      double lo = rng.uniform();
      double hi = rng.uniform();
      while (lo == hi) hi = rng.uniform();
      if (lo > hi) std::swap(lo, hi);
      box[c] = lo;
      box[d + c] = hi;
    }
    inst.v2.push_back(std::move(box));
  }
  // lo_c - x_c < 0 and x_c - hi_c < 0.
  for (std::size_t c = 0; c < d; ++c) {
    inst.forms.push_back({LinearForm{basis(d, c, -1.0), basis(2 * d, c, 1.0), 0.0}});
    inst.forms.push_back({LinearForm{basis(d, c, 1.0), basis(2 * d, d + c, -1.0), 0.0}});
  }
  return inst;
}

SemilinearInstance gen_points_corners(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || d == 0) throw InputError("gen_points_corners: n and d must be positive");
  Rng rng(derive_seed(seed, 0x636f726e6572ULL));
  SemilinearInstance inst{d, d, {}, {}, {}};
  for (std::size_t k = 0; k < n; ++k) inst.v1.push_back(unit_point(rng, d));
  for (std::size_t k = 0; k < n; ++k) inst.v2.push_back(unit_point(rng, d));
  for (std::size_t c = 0; c < d; ++c) inst.forms.push_back({LinearForm{basis(d, c, 1.0), basis(d, c, -1.0), 0.0}});
  return inst;
}

namespace {

void check_pol_h(const std::vector<Point>& points, const std::vector<Halfspace>& halfspaces,
                 const std::vector<std::vector<double>>& translates) {
  if (points.empty() || halfspaces.empty() || translates.empty()) {
    throw InputError("gen_pol_h: points, halfspaces and translates must be nonempty");
  }
  const std::size_t d = halfspaces.front().normal.size();
  for (const auto& h : halfspaces) {
    if (h.normal.size() != d) throw InputError("gen_pol_h: halfspace normals differ in dimension");
  }
  check_points(points, d, "POL(H)");
  for (std::size_t k = 0; k < translates.size(); ++k) {
    if (translates[k].size() != halfspaces.size()) {
      throw InputError("gen_pol_h: polytope " + std::to_string(k) + " needs one shift per halfspace");
    }
  }
}

}  // namespace

BoolMatrix gen_pol_h(const std::vector<Point>& points, const std::vector<Halfspace>& halfspaces,
                     const std::vector<std::vector<double>>& translates) {
  check_pol_h(points, halfspaces, translates);
  return BoolMatrix::generate(points.size(), translates.size(), [&](Index i, Index k) {
    for (std::size_t h = 0; h < halfspaces.size(); ++h) {
      if (!(dot(halfspaces[h].normal, points[i]) < halfspaces[h].offset + translates[k][h])) return false;
    }
    return true;
  });
}

SemilinearInstance pol_h_instance(const std::vector<Point>& points, const std::vector<Halfspace>& halfspaces,
                                  const std::vector<std::vector<double>>& translates) {
  check_pol_h(points, halfspaces, translates);
  const std::size_t d = halfspaces.front().normal.size();
  const std::size_t count = halfspaces.size();
  SemilinearInstance inst{d, count, points, translates, {}};
  // <a_h, x> - c_h - shift_h < 0.
  for (std::size_t h = 0; h < count; ++h) {
    inst.forms.push_back({LinearForm{halfspaces[h].normal, basis(count, h, -1.0), -halfspaces[h].offset}});
  }
  return inst;
}

PolHSample sample_pol_h(std::size_t n, std::size_t d, std::size_t count, std::uint64_t seed) {
  if (n == 0 || d == 0 || count == 0) throw InputError("sample_pol_h: n, d and the halfspace count must be positive");
  Rng rng(derive_seed(seed, 0x706f6c68ULL));
  PolHSample out;
  for (std::size_t k = 0; k < n; ++k) out.points.push_back(unit_point(rng, d));
  for (std::size_t h = 0; h < count; ++h) {
    std::vector<double> normal(d);
    double norm = 0.0;
    while (norm < 1e-6) {
      norm = 0.0;
      for (double& x : normal) {
        x = 2.0 * rng.uniform() - 1.0;
        norm += x * x;
      }
      norm = std::sqrt(norm);
    }
    for (double& x : normal) x /= norm;
    out.halfspaces.push_back({std::move(normal), 0.0});
  }
  // Shifts place each boundary through a random point of the unit cube, so
  // polytopes have a spread of sizes.
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> shift(count);
    for (std::size_t h = 0; h < count; ++h) shift[h] = dot(out.halfspaces[h].normal, unit_point(rng, d));
    out.translates.push_back(std::move(shift));
  }
  return out;
}

std::vector<SignPiece> sign_pattern_pieces(const SemilinearInstance& inst) {
  inst.validate();
  const std::size_t s = inst.s();
  const std::size_t u = inst.u();
  if (s * u > 20) throw CapabilityError("sign_pattern_pieces: s * u must be at most 20");
  std::uint64_t column_mask = 0;
  for (std::size_t i = 0; i < s; ++i) column_mask |= std::uint64_t{1} << (i * u);
  const auto in_e = [&](std::uint64_t pattern) {
    for (std::size_t j = 0; j < u; ++j) {
      if ((pattern & (column_mask << j)) == (column_mask << j)) return true;
    }
    return false;
  };

  std::map<std::uint64_t, std::vector<std::pair<Index, Index>>> cells;
  for (std::size_t x = 0; x < inst.v1.size(); ++x) {
    for (std::size_t y = 0; y < inst.v2.size(); ++y) {
      std::uint64_t pattern = 0;
      for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < u; ++j) {
          if (inst.forms[i][j].eval(inst.v1[x], inst.v2[y]) < 0.0) pattern |= std::uint64_t{1} << (i * u + j);
        }
      }
      if (in_e(pattern)) cells[pattern].emplace_back(x, y);
    }
  }
  std::vector<SignPiece> out;
  for (const auto& [pattern, list] : cells) {
    out.push_back({pattern, BoolMatrix::from_coords(inst.v1.size(), inst.v2.size(), list)});
  }
  return out;
}

namespace {

/// Would a new vertex with neighbourhood `nbrs` on the other side complete a
/// K_{t,t}? `same(i, k)`: existing same-side vertex i is adjacent to other-side vertex k.
template <typename Same>
bool closes_ktt(std::size_t same_count, const IndexSet& nbrs, std::size_t t, Same same) {
  if (nbrs.size() < t) return false;
  if (t == 1) return true;
  if (same_count < t - 1) return false;
  const BoolMatrix sub =
      BoolMatrix::generate(same_count, nbrs.size(), [&](Index i, Index k) { return same(i, nbrs[k]); });
  return find_allones_rectangle(sub, t - 1, t).has_value();
}

}  // namespace

DominanceInstance gen_dominance_ktt_free(std::size_t n, std::size_t s, std::size_t t, std::uint64_t seed) {
  if (n == 0 || s == 0 || t == 0) throw InputError("gen_dominance_ktt_free: n, s, t must be positive");
  Rng rng(derive_seed(seed, 0x6b7474ULL));
  DominanceInstance inst{s, {}, {}};
  for (std::size_t attempt = 0; attempt < 50 * n && (inst.u1.size() < n || inst.u2.size() < n); ++attempt) {
    const bool left = inst.u2.size() >= n || (inst.u1.size() < n && attempt % 2 == 0);
    Point p = unit_point(rng, s);
    IndexSet nbrs;
    if (left) {
      for (std::size_t k = 0; k < inst.u2.size(); ++k) {
        if (dominates(p, inst.u2[k])) nbrs.push_back(k);
      }
      if (!closes_ktt(inst.u1.size(), nbrs, t,
                      [&](Index i, Index k) { return dominates(inst.u1[i], inst.u2[k]); })) {
        inst.u1.push_back(std::move(p));
      }
    } else {
      for (std::size_t k = 0; k < inst.u1.size(); ++k) {
        if (dominates(inst.u1[k], p)) nbrs.push_back(k);
      }
      if (!closes_ktt(inst.u2.size(), nbrs, t,
                      [&](Index i, Index k) { return dominates(inst.u1[k], inst.u2[i]); })) {
        inst.u2.push_back(std::move(p));
      }
    }
  }
  return inst;
}

DominanceInstance gen_dominance(std::size_t n, std::size_t s, std::uint64_t seed) {
  if (n == 0 || s == 0) throw InputError("gen_dominance: n and s must be positive");
  Rng rng(derive_seed(seed, 0x646f6dULL));
  DominanceInstance inst{s, {}, {}};
  for (std::size_t k = 0; k < n; ++k) inst.u1.push_back(unit_point(rng, s));
  for (std::size_t k = 0; k < n; ++k) inst.u2.push_back(unit_point(rng, s));
  return inst;
}

}  // namespace g2lab
