#include "g2lab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <type_traits>
#include <variant>

namespace g2lab {

std::string format_g12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (double x : m.row(i)) row.push_back(x);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed ") + what + ": " + e.what());
  }
}

Json point_list(const std::vector<Point>& pts) {
  Json out = Json::array();
  for (const Point& p : pts) out.push_back(p);
  return out;
}

std::vector<Point> points_from(const Json& j) {
  std::vector<Point> out;
  for (const Json& p : j) out.push_back(p.get<Point>());
  return out;
}

double parse_g12(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InputError("not a number: '" + s + "'");
  return x;
}

}  // namespace

RealMatrix real_matrix_from_json(const Json& j) {
  return guarded("matrix", [&] {
    if (!j.is_array()) throw InputError("matrix must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (const Json& r : j) rows.push_back(r.get<std::vector<double>>());
    return RealMatrix::from_rows(rows);
  });
}

Json to_json(const FactorizationCert& cert) {
  Json parts = Json::array();
  for (const FactorPart& p : cert.parts) {
    parts.push_back({{"left", to_json(p.left)}, {"right", to_json(p.right)}});
  }
  return {{"kind", "factorization"}, {"method", cert.method}, {"value", format_g12(cert.value)}, {"parts", parts}};
}

Json to_json(const WitnessCert& cert) {
  return {{"kind", "witness"}, {"method", cert.method}, {"value", format_g12(cert.value)},
          {"u", cert.u}, {"v", cert.v}};
}

Json to_json(const SchattenDatum& d) {
  return {{"kind", "schatten"},
          {"method", "schatten"},
          {"value", format_g12(d.value)},
          {"rows", d.rows},
          {"cols", d.cols},
          {"frobenius_sq", format_g12(d.frobenius_sq)},
          {"schatten4_pow4", format_g12(d.schatten4_pow4)}};
}

Json to_json(const LowerCert& cert) {
  return std::visit([](const auto& c) { return to_json(c); }, cert);
}

FactorizationCert factorization_from_json(const Json& j) {
  return guarded("factorization", [&] {
    FactorizationCert cert;
    cert.method = j.at("method").get<std::string>();
    for (const Json& p : j.at("parts")) {
      cert.parts.push_back({real_matrix_from_json(p.at("left")), real_matrix_from_json(p.at("right"))});
    }
    cert.value = factorization_value(cert);
    return cert;
  });
}

WitnessCert witness_from_json(const Json& j) {
  return guarded("witness", [&] {
    WitnessCert cert;
    cert.method = j.at("method").get<std::string>();
    cert.u = j.at("u").get<std::vector<double>>();
    cert.v = j.at("v").get<std::vector<double>>();
    cert.value = parse_g12(j.at("value").get<std::string>());
    return cert;
  });
}

Json to_json(const Gamma2Bounds& b, bool with_certs) {
  Json out;
  out["lower"] = format_g12(b.lower);
  out["upper"] = format_g12(b.upper);
  out["lower_method"] = std::visit([](const auto& c) -> std::string {
    if constexpr (std::is_same_v<std::decay_t<decltype(c)>, SchattenDatum>) {
      return "schatten";
    } else {
      return c.method;
    }
  }, b.lower_cert);
  out["upper_method"] = b.upper_cert.method;
  if (b.exact) {
    out["exact"] = format_g12(*b.exact);
  } else if (!b.exact_skipped.empty()) {
    out["exact"] = "skipped: " + b.exact_skipped;
  } else {
    out["exact"] = nullptr;
  }
  Json lows = Json::array();
  for (const BoundEntry& e : b.lower_candidates) lows.push_back({{"method", e.method}, {"value", format_g12(e.value)}});
  Json ups = Json::array();
  for (const BoundEntry& e : b.upper_candidates) ups.push_back({{"method", e.method}, {"value", format_g12(e.value)}});
  out["lower_candidates"] = lows;
  out["upper_candidates"] = ups;
  if (with_certs) {
    out["lower_cert"] = to_json(b.lower_cert);
    out["upper_cert"] = to_json(b.upper_cert);
  }
  return out;
}

Json to_json(const BlockyMatrix& t) {
  return {{"rows", t.rows}, {"cols", t.cols}, {"k", t.k}, {"row_label", t.row_label}, {"col_label", t.col_label}};
}

Json to_json(const ThinBlockyDecomposition& d) {
  Json terms = Json::array();
  for (const BlockyMatrix& t : d.terms) terms.push_back(to_json(t));
  return {{"rows", d.target.rows()}, {"cols", d.target.cols()}, {"count", d.terms.size()}, {"terms", terms}};
}

Json to_json(const MntReport& r) {
  auto opt = [](const std::optional<double>& x) -> Json {
    return x ? Json(format_g12(*x)) : Json(nullptr);
  };
  return {{"gamma2", to_json(r.gamma2, false)},
          {"disc", r.disc},
          {"herdisc_lb", r.herdisc_lb},
          {"samples", r.samples},
          {"ratio_upper", opt(r.ratio_upper)},
          {"ratio_lower", opt(r.ratio_lower)}};
}

Json to_json(const SetSystemConstruction& c) {
  const SetSystemDiagnostics& d = c.diagnostics;
  auto opt = [](const auto& x) -> Json { return x ? Json(*x) : Json(nullptr); };
  Json diag = {{"expected_family", format_g12(d.expected_family)},
               {"family_size", d.family_size},
               {"family_event", d.family_event},
               {"heavy_pairs", d.heavy_pairs},
               {"heavy_event", d.heavy_event},
               {"light_pairs", d.light_pairs},
               {"light_event", d.light_event},
               {"half_bound", format_g12(d.half_bound)},
               {"max_half_count", opt(d.max_half_count)},
               {"half_event", opt(d.half_event)},
               {"allones_threshold", d.allones_threshold},
               {"largest_allones", opt(d.largest_allones)}};
  return {{"kind", "setsystem"},
          {"gamma", format_g12(c.gamma)},
          {"ell", c.ell},
          {"m", c.m},
          {"seed", c.seed},
          {"retries", c.retries},
          {"n", c.a.size()},
          {"family", c.family},
          {"a", c.a},
          {"b", c.b},
          {"cert", to_json(c.cert)},
          {"diagnostics", diag}};
}

Json to_json(const SemilinearInstance& inst) {
  Json forms = Json::array();
  for (const auto& row : inst.forms) {
    Json fr = Json::array();
    for (const LinearForm& f : row) fr.push_back({{"a", f.a}, {"b", f.b}, {"c", f.c}});
    forms.push_back(std::move(fr));
  }
  return {{"kind", "semilinear"}, {"d1", inst.d1}, {"d2", inst.d2},
          {"v1", point_list(inst.v1)}, {"v2", point_list(inst.v2)}, {"forms", forms}};
}

Json to_json(const DominanceInstance& inst) {
  return {{"kind", "dominance"}, {"s", inst.s}, {"u1", point_list(inst.u1)}, {"u2", point_list(inst.u2)}};
}

SemilinearInstance semilinear_from_json(const Json& j) {
  SemilinearInstance inst = guarded("semilinear instance", [&] {
    if (j.at("kind").get<std::string>() != "semilinear") throw InputError("not a semilinear instance");
    SemilinearInstance out;
    out.d1 = j.at("d1").get<std::size_t>();
    out.d2 = j.at("d2").get<std::size_t>();
    out.v1 = points_from(j.at("v1"));
    out.v2 = points_from(j.at("v2"));
    for (const Json& row : j.at("forms")) {
      std::vector<LinearForm> fr;
      for (const Json& f : row) {
        fr.push_back({f.at("a").get<std::vector<double>>(), f.at("b").get<std::vector<double>>(),
                      f.at("c").get<double>()});
      }
      out.forms.push_back(std::move(fr));
    }
    return out;
  });
  inst.validate();
  return inst;
}

DominanceInstance dominance_from_json(const Json& j) {
  DominanceInstance inst = guarded("dominance instance", [&] {
    if (j.at("kind").get<std::string>() != "dominance") throw InputError("not a dominance instance");
    DominanceInstance out;
    out.s = j.at("s").get<std::size_t>();
    out.u1 = points_from(j.at("u1"));
    out.u2 = points_from(j.at("u2"));
    return out;
  });
  inst.validate();
  return inst;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace g2lab
