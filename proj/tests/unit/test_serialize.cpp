#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

#include "g2lab/constructions.hpp"
#include "g2lab/serialize.hpp"
#include "oracles.hpp"

using namespace g2lab;

namespace {

std::string temp_path(const std::string& name) {
  const char* env = std::getenv("G2LAB_TEST_TMP");
  const std::filesystem::path dir = env ? env : std::filesystem::temp_directory_path() / "g2lab_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_SUITE("serialize") {

TEST_CASE("format_g12") {
  CHECK(format_g12(1.0) == "1");
  CHECK(format_g12(0.1) == "0.1");
  CHECK(format_g12(1.0 / 3) == "0.333333333333");
  CHECK(format_g12(2e-20) == "2e-20");
  CHECK(format_g12(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_g12(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_g12(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("real matrices round trip exactly") {
  Rng rng(71);
  RealMatrix a(3, 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) a(i, j) = rng.uniform() - 0.5;
  const Json j = Json::parse(to_json(a).dump());
  CHECK(real_matrix_from_json(j) == a);
  CHECK_THROWS_AS(real_matrix_from_json(Json::parse("[[1, 2], [3]]")), InputError);
  CHECK_THROWS_AS(real_matrix_from_json(Json::parse("{\"a\": 1}")), InputError);
  CHECK_THROWS_AS(real_matrix_from_json(Json::parse("[[1, \"x\"]]")), InputError);
}

TEST_CASE("certificates round trip and still verify") {
  const BoolMatrix m = gen_P_modp(3, 5);
  const Gamma2Bounds b = best_bounds(m);
  const Json j = Json::parse(to_json(b, true).dump());
  CHECK(j.at("lower").get<std::string>() == format_g12(b.lower));
  CHECK(j.at("upper").get<std::string>() == format_g12(b.upper));

  const FactorizationCert up = factorization_from_json(j.at("upper_cert"));
  CHECK(verify_factorization(up, lift(m)));
  CHECK(up.value == doctest::Approx(b.upper).epsilon(1e-12));

  if (j.at("lower_cert").at("kind") == "witness") {
    const WitnessCert low = witness_from_json(j.at("lower_cert"));
    CHECK(verify_witness(low, lift(m)));
  }

  const WitnessCert w = lower_avg(m);
  const WitnessCert back = witness_from_json(Json::parse(to_json(w).dump()));
  CHECK(back.u == w.u);
  CHECK(back.v == w.v);
  CHECK(verify_witness(back, lift(m)));

  Json inflated = to_json(w);
  inflated["value"] = format_g12(w.value + 1.0);
  CHECK_FALSE(verify_witness(witness_from_json(inflated), lift(m)));
  inflated["value"] = "lots";
  CHECK_THROWS_AS(witness_from_json(inflated), InputError);
}

TEST_CASE("a stated value is never trusted") {
  const BoolMatrix m = BoolMatrix::identity(3);
  Json j = to_json(upper_rowcol(m));
  j["value"] = "0.001";
  const FactorizationCert c = factorization_from_json(j);
  CHECK(c.value == doctest::Approx(factorization_value(c)));
  CHECK(c.value > 0.5);
}

TEST_CASE("bounds json reports skipped and absent exact values") {
  const Gamma2Bounds none = best_bounds(BoolMatrix::identity(3));
  CHECK(to_json(none, false).at("exact").is_null());
  CHECK_FALSE(to_json(none, false).contains("upper_cert"));

  BoundsOptions o;
  o.with_exact = true;
  o.exact.max_dim = 2;
  const Json skipped = to_json(best_bounds(BoolMatrix::identity(3), o), false);
  CHECK(skipped.at("exact").get<std::string>().rfind("skipped: ", 0) == 0);

  o.exact.max_dim = 32;
  const Json exact = to_json(best_bounds(BoolMatrix::identity(3), o), false);
  CHECK(std::stod(exact.at("exact").get<std::string>()) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("semilinear and dominance instances round trip") {
  const SemilinearInstance inst = gen_points_boxes(12, 2, 3);
  const SemilinearInstance back = semilinear_from_json(Json::parse(to_json(inst).dump()));
  CHECK(back.v1 == inst.v1);
  CHECK(back.v2 == inst.v2);
  CHECK(biadjacency(back) == biadjacency(inst));

  const DominanceInstance d = gen_dominance(10, 3, 4);
  const DominanceInstance dback = dominance_from_json(Json::parse(to_json(d).dump()));
  CHECK(dback.u1 == d.u1);
  CHECK(dback.u2 == d.u2);
}

TEST_CASE("malformed instances are input errors") {
  CHECK_THROWS_AS(semilinear_from_json(Json::parse("{\"kind\": \"dominance\"}")), InputError);
  CHECK_THROWS_AS(semilinear_from_json(Json::parse("{\"kind\": \"semilinear\", \"d1\": 1}")), InputError);
  CHECK_THROWS_AS(dominance_from_json(Json::parse("{\"kind\": \"dominance\", \"s\": 2, \"u1\": [[1]], \"u2\": []}")),
                  InputError);
  CHECK_THROWS_AS(dominance_from_json(Json::parse("{\"kind\": \"dominance\", \"s\": \"two\", \"u1\": [], \"u2\": []}")),
                  InputError);
}

TEST_CASE("blocky decomposition and mnt reports") {
  const ThinBlockyDecomposition d = thin_decompose(gen_P_modp(2, 3));
  const Json j = to_json(d);
  CHECK(j.at("count") == d.terms.size());
  CHECK(j.at("terms").size() == d.terms.size());
  CHECK(j.at("terms")[0].at("row_label").size() == 6);

  const Json r = to_json(mnt_report(BoolMatrix::identity(4)));
  CHECK(r.at("herdisc_lb") == 1);
  CHECK(r.at("ratio_upper").is_string());
  CHECK(to_json(mnt_report(BoolMatrix::ones(1, 2))).at("ratio_upper").is_null());
}

TEST_CASE("setsystem construction carries its provenance") {
  const SetSystemConstruction c = gen_setsystem(4.0, 40, 5);
  const Json j = Json::parse(to_json(c).dump());
  CHECK(j.at("kind") == "setsystem");
  CHECK(j.at("ell") == 3);
  CHECK(j.at("m") == 40);
  CHECK(j.at("seed") == c.seed);
  CHECK(j.at("retries") == c.retries);
  CHECK(j.at("a").get<std::vector<IndexSet>>() == c.a);
  CHECK(j.at("diagnostics").at("family_size") == c.diagnostics.family_size);
  const FactorizationCert cert = factorization_from_json(j.at("cert"));
  CHECK(verify_factorization(cert, lift(c.matrix)));
  CHECK(cert.value <= 4.0 + 1e-9);
}

TEST_CASE("read_json_file") {
  const std::string good = temp_path("good.json");
  std::ofstream(good) << "{\"x\": [1, 2]}";
  CHECK(read_json_file(good).at("x").size() == 2);
  const std::string bad = temp_path("bad.json");
  std::ofstream(bad) << "{\"x\": ";
  CHECK_THROWS_AS(read_json_file(bad), InputError);
  CHECK_THROWS_AS(read_json_file(temp_path("missing.json")), InputError);
}

}  // TEST_SUITE
