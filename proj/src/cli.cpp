#include "g2lab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "g2lab/blocky.hpp"
#include "g2lab/boolmat.hpp"
#include "g2lab/constructions.hpp"
#include "g2lab/discrepancy.hpp"
#include "g2lab/extraction.hpp"
#include "g2lab/gamma2.hpp"
#include "g2lab/rng.hpp"
#include "g2lab/semilinear.hpp"
#include "g2lab/serialize.hpp"

namespace g2lab {

std::size_t worker_count() {
  if (const char* env = std::getenv("GAMMA2LAB_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return v;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& f) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!first) first = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string g12(double x) { return format_g12(x); }

void ensure_known(const std::string& name, const std::vector<std::string>& known, const char* what) {
  if (std::find(known.begin(), known.end(), name) == known.end()) {
    std::string list;
    for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
    throw InputError(std::string("unknown ") + what + " '" + name + "' (expected one of " + list + ")");
  }
}

/// Writes `text` to `path`, or to `out` when the path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
  if (!f) throw InputError("write failed: " + path);
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string family;
  std::size_t q = 0, p = 0, m = 0, n = 0, d = 0, s = 0, t = 0, count = 0;
  double density = 0.5;
  double gamma = 4.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string certificate;
};

const std::vector<std::string> kFamilies = {"pmodp", "preal", "setsystem", "boxes", "corners", "polh", "dominance", "random"};

void need(std::size_t v, const char* flag, const std::string& family) {
  if (v == 0) throw InputError("gen " + family + " needs a positive " + flag);
}

int cmd_gen(const GenArgs& a, std::ostream& out, std::ostream& err) {
  ensure_known(a.family, kFamilies, "family");
  if (!a.certificate.empty() && a.family != "setsystem") throw InputError("--certificate applies to setsystem only");
  std::ostringstream body;
  std::ostringstream prov;
  prov << "# gen " << a.family;

  auto write_matrix = [&](const BoolMatrix& m) {
    write_bmx(body, m);
    prov << " -> " << m.rows() << "x" << m.cols() << ", " << m.count_ones() << " ones";
  };
  auto write_instance = [&](Json j, Json generator, std::size_t left, std::size_t right) {
    j["generator"] = std::move(generator);
    body << j.dump(1) << "\n";
    prov << " -> " << left << " + " << right << " points";
  };

  if (a.family == "pmodp" || a.family == "preal") {
    need(a.q, "--q", a.family);
    need(a.p, "--p", a.family);
    prov << " q=" << a.q << " p=" << a.p;
    write_matrix(a.family == "pmodp" ? gen_P_modp(a.q, a.p) : gen_P_real(a.q, a.p));
  } else if (a.family == "random") {
    need(a.m, "--m", a.family);
    need(a.n, "--n", a.family);
    if (!(a.density >= 0.0 && a.density <= 1.0)) throw InputError("--density must lie in [0, 1]");
    prov << " m=" << a.m << " n=" << a.n << " density=" << g12(a.density) << " seed=" << a.seed;
    write_matrix(gen_random(a.m, a.n, a.density, a.seed));
  } else if (a.family == "setsystem") {
    need(a.m, "--m", a.family);
    const SetSystemConstruction c = gen_setsystem(a.gamma, a.m, a.seed);
    prov << " gamma=" << g12(a.gamma) << " m=" << a.m << " seed=" << a.seed << " used_seed=" << c.seed
         << " cert=" << g12(c.cert.value);
    write_matrix(c.matrix);
    if (!a.certificate.empty()) {
      emit(a.certificate, to_json(c).dump(1) + "\n", out);
      prov << " certificate=" << a.certificate;
    }
  } else if (a.family == "boxes" || a.family == "corners") {
    need(a.n, "--n", a.family);
    need(a.d, "--d", a.family);
    prov << " n=" << a.n << " d=" << a.d << " seed=" << a.seed;
    const SemilinearInstance inst =
        a.family == "boxes" ? gen_points_boxes(a.n, a.d, a.seed) : gen_points_corners(a.n, a.d, a.seed);
    write_instance(to_json(inst), {{"family", a.family}, {"n", a.n}, {"d", a.d}, {"seed", a.seed}},
                   inst.v1.size(), inst.v2.size());
  } else if (a.family == "polh") {
    need(a.n, "--n", a.family);
    need(a.d, "--d", a.family);
    const std::size_t count = a.count == 0 ? a.d + 1 : a.count;
    prov << " n=" << a.n << " d=" << a.d << " count=" << count << " seed=" << a.seed;
    const PolHSample sample = sample_pol_h(a.n, a.d, count, a.seed);
    const SemilinearInstance inst = pol_h_instance(sample.points, sample.halfspaces, sample.translates);
    write_instance(to_json(inst), {{"family", a.family}, {"n", a.n}, {"d", a.d}, {"count", count}, {"seed", a.seed}},
                   inst.v1.size(), inst.v2.size());
  } else {  // dominance
    need(a.n, "--n", a.family);
    need(a.s, "--s", a.family);
    prov << " n=" << a.n << " s=" << a.s << " t=" << a.t << " seed=" << a.seed;
    const DominanceInstance inst =
        a.t == 0 ? gen_dominance(a.n, a.s, a.seed) : gen_dominance_ktt_free(a.n, a.s, a.t, a.seed);
    write_instance(to_json(inst), {{"family", a.family}, {"n", a.n}, {"s", a.s}, {"t", a.t}, {"seed", a.seed}},
                   inst.u1.size(), inst.u2.size());
  }

  emit(a.out, body.str(), out);
  if (!a.out.empty()) prov << " [" << a.out << "]";
  (a.out.empty() ? err : out) << prov.str() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- load

struct Loaded {
  BoolMatrix matrix{1, 1};
  Json source;
};

bool looks_like_json(const std::string& path) {
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return true;
  std::ifstream in(path);
  char c = 0;
  while (in.get(c) && std::isspace(static_cast<unsigned char>(c))) {
  }
  return in && c == '{';
}

Loaded load_matrix(const std::string& path) {
  Loaded l;
  l.source["path"] = path;
  if (!looks_like_json(path)) {
    l.source["kind"] = "bmx";
    l.matrix = read_bmx_file(path);
    return l;
  }
  const Json j = read_json_file(path);
  const std::string kind = j.value("kind", "");
  l.source["kind"] = kind;
  if (kind == "semilinear") {
    l.matrix = biadjacency(semilinear_from_json(j));
  } else if (kind == "dominance") {
    l.matrix = dominance_matrix(dominance_from_json(j));
  } else {
    throw InputError(path + ": expected a semilinear or dominance instance");
  }
  l.source["generator"] = j.contains("generator") ? j.at("generator") : Json(nullptr);
  return l;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string path;
  bool exact = false;
  bool disc = false;
  bool blocky = false;
  std::size_t max_exact_dim = 32;
  std::size_t samples = 64;
  std::uint64_t seed = 0;
  std::string format = "json";
  bool timings = true;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  ensure_known(a.format, {"json", "csv"}, "format");
  Json timings;
  auto start = Clock::now();
  const Loaded loaded = load_matrix(a.path);
  const BoolMatrix& m = loaded.matrix;
  timings["load"] = ms_since(start);

  Json report;
  report["source"] = loaded.source;
  report["rows"] = m.rows();
  report["cols"] = m.cols();
  report["ones"] = m.count_ones();
  report["avg_degree"] = g12(avg_degree(m));

  start = Clock::now();
  const std::size_t dgc = degeneracy(m).value;
  report["degeneracy"] = dgc;
  report["four_cycle_free"] = is_four_cycle_free(m);
  timings["structure"] = ms_since(start);

  start = Clock::now();
  BoundsOptions bo;
  bo.with_exact = a.exact;
  bo.exact.max_dim = a.max_exact_dim;
  const Gamma2Bounds bounds = best_bounds(m, bo);
  if (bounds.lower > bounds.upper + 1e-9) {
    throw InternalError("gamma2 lower bound " + g12(bounds.lower) + " exceeds upper bound " + g12(bounds.upper));
  }
  report["gamma2"] = to_json(bounds, false);
  timings["gamma2"] = ms_since(start);

  if (a.blocky) {
    start = Clock::now();
    const ThinBlockyDecomposition d = thin_decompose(m);
    if (!verify_decomposition(d)) throw InternalError("thin blocky decomposition does not sum to the matrix");
    const std::size_t k = d.terms.size();
    report["blocky"] = {{"terms", k}, {"verified", true}, {"within_dgc_sandwich", 2 * k >= dgc && k <= 2 * dgc}};
    timings["blocky"] = ms_since(start);
  } else {
    report["blocky"] = nullptr;
  }

  if (a.disc) {
    start = Clock::now();
    if (m.cols() > kMaxDiscColumns) {
      report["disc"] = "skipped: " + std::to_string(m.cols()) + " columns exceed the exhaustive limit of " +
                       std::to_string(kMaxDiscColumns);
    } else {
      Json disc = to_json(mnt_report(m, bounds, a.samples, a.seed));
      disc.erase("gamma2");
      report["disc"] = std::move(disc);
    }
    timings["disc"] = ms_since(start);
  } else {
    report["disc"] = nullptr;
  }

  if (a.timings) {
    Json t;
    for (auto& [k, v] : timings.items()) t[k] = g12(v.get<double>());
    report["timings_ms"] = t;
  }

  if (a.format == "json") {
    out << report.dump(2) << "\n";
  } else {
    out << "rows,cols,ones,avg_degree,degeneracy,four_cycle_free,gamma2_lower,gamma2_upper,gamma2_exact\n";
    const std::string exact = bounds.exact ? g12(*bounds.exact) : "";
    out << m.rows() << "," << m.cols() << "," << m.count_ones() << "," << g12(avg_degree(m)) << "," << dgc << ","
        << (is_four_cycle_free(m) ? "true" : "false") << "," << g12(bounds.lower) << "," << g12(bounds.upper) << ","
        << exact << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- extract

struct ExtractArgs {
  std::string path;
  std::size_t z = 2;
  std::uint64_t seed = 0;
  bool unenforced = false;
  bool greedy = false;
};

int cmd_extract(const ExtractArgs& a, std::ostream& out) {
  const Loaded loaded = load_matrix(a.path);
  DenseSubmatrixOptions opts;
  opts.seed = a.seed;
  opts.enforce_precondition = !a.unenforced;
  opts.mode = a.greedy ? DensityMode::Greedy : DensityMode::Exact;
  const DenseSubmatrix d = dense_submatrix(loaded.matrix, a.z, opts);
  Json j;
  j["source"] = loaded.source;
  j["z"] = a.z;
  j["rows"] = d.rows;
  j["cols"] = d.cols;
  j["ones"] = d.ones;
  j["density"] = g12(d.density);
  j["alpha"] = g12(d.alpha);
  j["gamma2_upper"] = g12(d.gamma2_upper);
  j["max_feasible_z"] = d.max_feasible_z;
  j["method"] = d.method;
  j["meets_bound"] = d.meets_bound;
  out << j.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- experiment

struct ExperimentArgs {
  std::string name;
  std::vector<std::size_t> primes{5, 7, 11, 13};
  std::size_t s = 2;
  std::size_t t = 2;
  std::vector<std::size_t> n_list{64, 128, 256, 512, 1024};
  std::size_t instances = 1;
  std::string family = "boxes";
  std::size_t d = 2;
  std::size_t n_min = 16;
  std::size_t n_max = 1024;
  double gamma = 4.0;
  std::vector<std::size_t> m_list{20, 40, 60, 80};
  std::size_t seeds = 5;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
};

const std::vector<std::string> kExperiments = {"c4sandwich", "zarabound", "gammagrowth", "construction"};

struct Table {
  std::vector<std::string> comments;
  std::string header;
  std::vector<std::string> rows;
  std::vector<std::string> footer;

  std::string csv() const {
    std::string s;
    for (const auto& c : comments) s += "# " + c + "\n";
    s += header + "\n";
    for (const auto& r : rows) s += r + "\n";
    for (const auto& f : footer) s += "# " + f + "\n";
    return s;
  }
};

std::string join(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) s += (s.empty() ? "" : ",") + c;
  return s;
}

std::string str(std::size_t v) { return std::to_string(v); }
std::string str(bool v) { return v ? "true" : "false"; }

Table exp_c4sandwich(const ExperimentArgs& a) {
  Table t;
  t.comments = {"experiment=c4sandwich seed=" + std::to_string(a.seed),
                "p: prime modulus; q: line-slope count (matrix is qp x qp); dgc: degeneracy",
                "lower/upper: best certified gamma2 bounds; ratio = upper / lower"};
  t.header = "p,q,dgc,lower,upper,ratio";
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t p : a.primes) {
    if (!is_prime(p)) throw InputError("--primes: " + std::to_string(p) + " is not prime");
    for (std::size_t q = 1; q + 1 <= p; ++q) jobs.emplace_back(p, q);
  }
  t.rows.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t k) {
    const auto [p, q] = jobs[k];
    const BoolMatrix m = gen_P_modp(q, p);
    const std::size_t dgc = degeneracy(m).value;
    if (!is_four_cycle_free(m) || dgc != q) throw InternalError("P_p(" + str(q) + "," + str(p) + ") structure check failed");
    const Gamma2Bounds b = best_bounds(m);
    if (b.upper > 2.0 * std::sqrt(static_cast<double>(q)) + 1e-9) {
      throw InternalError("upper bound " + g12(b.upper) + " exceeds 2 sqrt(q) at q=" + str(q) + " p=" + str(p));
    }
    t.rows[k] = join({str(p), str(q), str(dgc), g12(b.lower), g12(b.upper), g12(b.upper / b.lower)});
  });
  return t;
}

Table exp_zarabound(const ExperimentArgs& a) {
  Table t;
  t.comments = {"experiment=zarabound s=" + str(a.s) + " t=" + str(a.t) + " seed=" + std::to_string(a.seed),
                "n: requested points per side; n1/n2: points kept by K_{t,t}-free insertion",
                "edges: dominance pairs; f_s: recursion value at max(n1, n2); within: edges <= f_s"};
  t.header = "index,n,s,t,n1,n2,edges,f_s,within";
  std::vector<std::size_t> ns;
  for (std::size_t n : a.n_list) {
    for (std::size_t i = 0; i < a.instances; ++i) ns.push_back(n);
  }
  t.rows.resize(ns.size());
  parallel_for(ns.size(), [&](std::size_t k) {
    const DominanceInstance inst = gen_dominance_ktt_free(ns[k], a.s, a.t, derive_seed(a.seed, k));
    const std::size_t n1 = inst.u1.size();
    const std::size_t n2 = inst.u2.size();
    const std::uint64_t edges = count_dominance_edges(inst);
    const std::uint64_t bound = f_s_bound(std::max<std::size_t>({n1, n2, 1}), a.t, a.s);
    if (edges > bound) {
      throw InternalError("instance " + str(k) + ": " + std::to_string(edges) + " edges exceed f_s = " +
                          std::to_string(bound));
    }
    t.rows[k] = join({str(k), str(ns[k]), str(a.s), str(a.t), str(n1), str(n2), std::to_string(edges),
                      std::to_string(bound), str(edges <= bound)});
  });
  return t;
}

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

Table exp_gammagrowth(const ExperimentArgs& a, std::ostream& err) {
  ensure_known(a.family, {"boxes", "corners"}, "family");
  if (a.n_min == 0 || a.n_max < a.n_min) throw InputError("need 1 <= --n-min <= --n-max");
  Table t;
  t.comments = {"experiment=gammagrowth family=" + a.family + " d=" + str(a.d) + " seed=" + std::to_string(a.seed),
                "n: points and regions per side; ones: incidences; dgc: degeneracy",
                "lower/upper: best certified gamma2 bounds"};
  t.header = "n,d,ones,dgc,lower,upper";
  std::vector<std::size_t> ns;
  for (std::size_t n = a.n_min; n <= a.n_max; n *= 2) ns.push_back(n);
  t.rows.resize(ns.size());
  std::vector<double> uppers(ns.size());
  parallel_for(ns.size(), [&](std::size_t k) {
    const std::size_t n = ns[k];
    const std::uint64_t seed = derive_seed(a.seed, n);
    const SemilinearInstance inst = a.family == "boxes" ? gen_points_boxes(n, a.d, seed) : gen_points_corners(n, a.d, seed);
    const BoolMatrix m = biadjacency(inst);
    const std::size_t dgc = degeneracy(m).value;
    const Gamma2Bounds b = best_bounds(m);
    uppers[k] = b.upper;
    t.rows[k] = join({str(n), str(a.d), str(m.count_ones()), str(dgc), g12(b.lower), g12(b.upper)});
  });
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    if (uppers[k] > 0) {
      xs.push_back(static_cast<double>(ns[k]));
      ys.push_back(uppers[k]);
    }
  }
  if (xs.size() >= 2) {
    const double slope = loglog_slope(xs, ys);
    t.footer.push_back("fitted_exponent_upper=" + g12(slope));
    if (slope > 0.2) err << "warning: fitted exponent " << g12(slope) << " of the upper bound exceeds 0.2\n";
  }
  return t;
}

Table exp_construction(const ExperimentArgs& a) {
  Table t;
  t.comments = {"experiment=construction gamma=" + g12(a.gamma) + " seed=" + std::to_string(a.seed),
                "used_seed: seed after retries; n: sets per side; family/heavy/light: event counts before pruning",
                "cert: factorization value of M = J - M0; largest_allones: empty when not computed"};
  t.header = "m,seed,used_seed,ell,n,family,heavy,light,ones_m0,cert,allones_threshold,largest_allones";
  std::vector<std::pair<std::size_t, std::uint64_t>> jobs;
  for (std::size_t m : a.m_list) {
    for (std::size_t i = 0; i < a.seeds; ++i) jobs.emplace_back(m, a.seed + i);
  }
  t.rows.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t k) {
    const auto [m, seed] = jobs[k];
    const SetSystemConstruction c = gen_setsystem(a.gamma, m, seed);
    if (const std::string bad = check_setsystem(c); !bad.empty()) throw InternalError("construction m=" + str(m) + ": " + bad);
    const SetSystemDiagnostics& dg = c.diagnostics;
    t.rows[k] = join({str(m), std::to_string(seed), std::to_string(c.seed), str(c.ell), str(c.a.size()),
                      str(dg.family_size), str(dg.heavy_pairs), str(dg.light_pairs), str(c.m0.count_ones()),
                      g12(c.cert.value), str(dg.allones_threshold),
                      dg.largest_allones ? str(*dg.largest_allones) : std::string()});
  });
  return t;
}

int cmd_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  ensure_known(a.name, kExperiments, "experiment");
  ensure_known(a.format, {"csv"}, "format");
  Table t;
  if (a.name == "c4sandwich") {
    t = exp_c4sandwich(a);
  } else if (a.name == "zarabound") {
    t = exp_zarabound(a);
  } else if (a.name == "gammagrowth") {
    t = exp_gammagrowth(a, err);
  } else {
    t = exp_construction(a);
  }
  emit(a.out, t.csv(), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gamma2lab: certified gamma2 bounds for Boolean matrices"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a matrix (.bmx) or an instance (JSON)");
  g->add_option("family", gen.family, "pmodp, preal, setsystem, boxes, corners, polh, dominance, random")->required();
  g->add_option("--q", gen.q, "pmodp, preal: number of row blocks");
  g->add_option("--p", gen.p, "pmodp, preal: prime modulus");
  g->add_option("--m", gen.m, "random: rows; setsystem: ground set size");
  g->add_option("--n", gen.n, "points and regions per side, or columns for random");
  g->add_option("--d", gen.d, "dimension");
  g->add_option("--s", gen.s, "dominance: number of coordinates");
  g->add_option("--t", gen.t, "dominance: require K_{t,t}-freeness");
  g->add_option("--count", gen.count, "polh: number of halfspaces (default d + 1)");
  g->add_option("--density", gen.density, "random: probability of a one")->capture_default_str();
  g->add_option("--gamma", gen.gamma, "setsystem: target factorization value")->capture_default_str();
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out, "output path (default stdout)");
  g->add_option("--certificate", gen.certificate, "setsystem: also write the construction with its certificate as JSON");

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "Report structure and gamma2 bounds of a matrix");
  a->add_option("path", an.path, ".bmx matrix or instance JSON")->required();
  a->add_flag("--exact", an.exact, "also solve gamma2 to 1e-6");
  a->add_flag("--disc", an.disc, "exact discrepancy and a herdisc lower bound (at most 24 columns)");
  a->add_flag("--blocky", an.blocky, "thin blocky decomposition");
  a->add_option("--max-exact-dim", an.max_exact_dim, "skip --exact when min(m, n) is larger")->capture_default_str();
  a->add_option("--samples", an.samples, "submatrices sampled for the herdisc lower bound");
  a->add_option("--seed", an.seed);
  a->add_option("--format", an.format, "json or csv")->capture_default_str();
  a->add_flag_callback("--no-timings", [&an] { an.timings = false; }, "omit timings_ms so reports compare byte for byte");

  ExtractArgs ex;
  auto* e = app.add_subcommand("extract", "Find a dense z x z submatrix");
  e->add_option("path", ex.path, ".bmx matrix or instance JSON")->required();
  e->add_option("--z", ex.z, "side of the all-ones target");
  e->add_option("--seed", ex.seed);
  e->add_flag("--unenforced", ex.unenforced, "allow z beyond the guaranteed range");
  e->add_flag("--greedy", ex.greedy, "peeling instead of exact densest subgraph");

  ExperimentArgs xp;
  auto* x = app.add_subcommand("experiment", "Run a parameter sweep and write CSV");
  x->add_option("name", xp.name, "c4sandwich, zarabound, gammagrowth, construction")->required();
  x->add_option("--primes", xp.primes, "c4sandwich: comma-separated primes")->delimiter(',');
  x->add_option("--s", xp.s);
  x->add_option("--t", xp.t);
  x->add_option("--n-list", xp.n_list, "zarabound: comma-separated sizes")->delimiter(',');
  x->add_option("--instances", xp.instances);
  x->add_option("--family", xp.family, "gammagrowth: boxes or corners")->capture_default_str();
  x->add_option("--d", xp.d);
  x->add_option("--n-min", xp.n_min, "gammagrowth: sizes double from here")->capture_default_str();
  x->add_option("--n-max", xp.n_max);
  x->add_option("--gamma", xp.gamma);
  x->add_option("--m-list", xp.m_list, "construction: comma-separated ground set sizes")->delimiter(',');
  x->add_option("--seeds", xp.seeds, "construction: consecutive seeds per size")->capture_default_str();
  x->add_option("--seed", xp.seed);
  x->add_option("--out", xp.out, "output path (default stdout)");
  x->add_option("--format", xp.format);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen, out, err);
    if (*a) return cmd_analyze(an, out);
    if (*e) return cmd_extract(ex, out);
    return cmd_experiment(xp, out, err);
  } catch (const InternalError& ie) {
    err << "internal error: " << ie.what() << "\n";
    return kExitInternal;
  } catch (const Error& ue) {
    err << "error: " << ue.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& se) {
    err << "internal error: " << se.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace g2lab
