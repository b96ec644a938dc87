#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "algent/expr.hpp"
#include "algent/mapping.hpp"
#include "algent/param_env.hpp"

using namespace algent;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> kPresetIds = {
    "zena",     "zoct",     "ddyo", "dhep", "doct",    "denn",    "ddek-sys",
    "vena-sys", "vtri-sys", "tena", "ttri-q1", "ttri-q2", "ttri-q3"};

MappingSource load_preset(const std::string& id) {
  return parse_mapping_source(read_file(std::string(ALGENT_DATA_DIR) + "/presets/" + id + ".map"));
}

MappingModel make_model(const std::string& id, std::uint64_t seed = 42) {
  MappingSource src = load_preset(id);
  ParamEnv env(src, seed);
  return MappingModel(std::move(src), std::move(env));
}

// Collates singular values into a printable multiset like "0^2, inf^4".
std::string describe_values(const std::vector<SingularValue>& vals) {
  std::vector<std::string> parts;
  for (const auto& sv : vals) {
    std::string p = to_string(sv.where);
    if (sv.order != 1) p += "^" + std::to_string(sv.order);
    parts.push_back(p);
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ", ";
    out += p;
  }
  return out;
}

bool contains_value(const std::vector<SingularValue>& vals, const PValue& w, long order) {
  for (const auto& sv : vals)
    if (sv.where == w && sv.order == order) return true;
  return false;
}

}  // namespace

TEST_CASE("every preset parses and round-trips through the printer") {
  for (const auto& id : kPresetIds) {
    MappingSource src = load_preset(id);
    CHECK(src.name == id);
    std::string printed = to_source(src);
    MappingSource again = parse_mapping_source(printed);
    CHECK(again.name == src.name);
    CHECK(to_source(again) == printed);
    CHECK(again.params.size() == src.params.size());
    CHECK(again.seqs == src.seqs);
    CHECK(again.excludes.size() == src.excludes.size());
    CHECK(again.equations.size() == src.equations.size());
  }
}

TEST_CASE("system flag matches preset structure") {
  std::set<std::string> systems = {"ddek-sys", "vena-sys", "vtri-sys"};
  for (const auto& id : kPresetIds) {
    MappingSource src = load_preset(id);
    CHECK(src.is_system() == (systems.count(id) > 0));
  }
}

TEST_CASE("parser rejects malformed sources") {
  auto bad = [](const std::string& body) {
    std::string text = "map t {\n" + body + "\n}\n";
    CHECK_THROWS_AS(parse_mapping_source(text), ParseError);
  };
  bad("x[n+1] = x[n+2];");
  bad("x[n+1] = y[n-1];");
  bad("x[n+1] = x[n] + q;");
  bad("param a; param a; x[n+1] = a*x[n];");
  bad("param x; x[n+1] = x[n];");
  bad("seq z; exclude z[n] != 0; x[n+1] = z[n]*x[n-1];");
  bad("x[n+1] = x[n]; x[n] = x[n-1]; y[n+1] = y[n];");
  bad("x[n+1] = x[n]^k;");
  bad("param a; exclude a^k != 1 for k <= 0; x[n+1] = a*x[n];");
  bad("x[n+1] = (x[n];");
  bad("x[n+1] = x[n]");
}

TEST_CASE("quantified exclusions accept and evaluate") {
  MappingSource src = parse_mapping_source(
      "map t {\n"
      "  param a = 2, b;\n"
      "  exclude a^k * b^m != 1 for k, m <= 3;\n"
      "  x[n+1] = a*b*x[n-1];\n"
      "}\n");
  REQUIRE(src.params.size() == 2);
  CHECK(src.params[0].value.has_value());
  CHECK(*src.params[0].value == 2);
  CHECK_FALSE(src.params[1].value.has_value());
  REQUIRE(src.excludes.size() == 1);
  CHECK(src.excludes[0].quantifiers == std::vector<std::string>{"k", "m"});
  CHECK(src.excludes[0].bound == 3);
  ParamEnv env(src, 7);
  CHECK(env.param("a") == 2);
  CHECK(env.param("b") != 0);
}

TEST_CASE("parameter environments are deterministic in the seed") {
  MappingSource src = load_preset("zena");
  ParamEnv e1(src, 12345), e2(src, 12345), e3(src, 54321);
  for (const auto& p : src.params) {
    CHECK(e1.param(p.name) == e2.param(p.name));
  }
  bool any_differs = false;
  for (const auto& p : src.params)
    if (e1.param(p.name) != e3.param(p.name)) any_differs = true;
  CHECK(any_differs);
  CHECK(e1.initial_point(0) == e2.initial_point(0));
  CHECK(e1.initial_point(0) != e1.initial_point(1));
}

TEST_CASE("sampled parameters stay within the generic magnitude band") {
  MappingSource src = load_preset("zena");
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    ParamEnv env(src, seed);
    for (const auto& p : src.params) {
      Rat v = env.param(p.name);
      CHECK(v != 0);
      CHECK(abs(num(v)) <= 1000000);
      CHECK(den(v) <= 1000000);
      Rat mag = abs(v);
      CHECK(mag >= Rat(1, 1000));
      CHECK(mag <= Rat(1000));
    }
  }
}

TEST_CASE("sequence values are pure functions of seed, name and index") {
  MappingSource src = load_preset("tena");
  ParamEnv e1(src, 9), e2(src, 9);
  for (long n = -5; n <= 5; ++n) CHECK(e1.seq("a", n) == e2.seq("a", n));
  CHECK(e1.seq("a", 0) != e1.seq("a", 1));
}

TEST_CASE("impossible exclusions are reported after resampling") {
  MappingSource src = parse_mapping_source(
      "map t {\n"
      "  param a;\n"
      "  exclude a != a;\n"
      "  x[n+1] = a*x[n-1];\n"
      "}\n");
  CHECK_THROWS_AS(ParamEnv(src, 3), std::runtime_error);
  MappingSource div = parse_mapping_source(
      "map t {\n"
      "  param a;\n"
      "  exclude 1/(a - a) != 1;\n"
      "  x[n+1] = a*x[n-1];\n"
      "}\n");
  CHECK_THROWS_AS(ParamEnv(div, 3), std::runtime_error);
}

TEST_CASE("declared parameter values are honored and checked") {
  MappingSource src = parse_mapping_source(
      "map t {\n"
      "  param a = -3/4;\n"
      "  x[n+1] = a*x[n-1];\n"
      "}\n");
  ParamEnv env(src, 11);
  CHECK(env.param("a") == Rat(-3, 4));
  MappingSource clash = parse_mapping_source(
      "map t {\n"
      "  param a = 1;\n"
      "  exclude a != 1;\n"
      "  x[n+1] = a*x[n-1];\n"
      "}\n");
  CHECK_THROWS_AS(ParamEnv(clash, 11), std::runtime_error);
}

TEST_CASE("zena extraction has pure cross-ratio shape") {
  MappingModel m = make_model("zena");
  Homography h = m.forward(0);
  CHECK(h.A.is_zero());
  CHECK(h.D.is_zero());
  CHECK(h.B.degree() == 2);
  CHECK(h.C.degree() == 2);
  auto vals = m.singular_values(0);
  REQUIRE(vals.size() == 4);
  const ParamEnv& env = m.env();
  for (const char* p : {"a", "b", "c", "d"})
    CHECK(contains_value(vals, PValue::finite(env.param(p)), 1));
}

TEST_CASE("zoct extraction exposes zero and infinity as singular") {
  MappingModel m = make_model("zoct");
  auto vals = m.singular_values(0);
  REQUIRE(vals.size() == 4);
  CHECK(contains_value(vals, PValue::finite(Rat(0)), 1));
  CHECK(contains_value(vals, PValue::infinity(), 1));
  CHECK(contains_value(vals, PValue::finite(m.env().param("a")), 1));
  CHECK(contains_value(vals, PValue::finite(m.env().param("b")), 1));
}

TEST_CASE("ddyo determinant degenerates only at zero, with order four") {
  MappingModel m = make_model("ddyo");
  auto vals = m.singular_values(0);
  CHECK(describe_values(vals) == "0^4");
  Homography h = m.forward(0);
  CHECK(h.C.is_zero());
  CHECK(h.D.degree() == 2);
  CHECK(h.D[0] == 0);
  CHECK(h.D[1] == 0);
}

TEST_CASE("dhep degenerates at one and at the multiplier") {
  MappingModel m = make_model("dhep");
  auto vals = m.singular_values(0);
  REQUIRE(vals.size() == 2);
  CHECK(contains_value(vals, PValue::finite(Rat(1)), 1));
  CHECK(contains_value(vals, PValue::finite(m.env().param("a")), 1));
}

TEST_CASE("doct degenerates at plus and minus one and doubly at infinity") {
  MappingModel m = make_model("doct");
  auto vals = m.singular_values(0);
  CHECK(describe_values(vals) == "-1, 1, inf^2");
}

TEST_CASE("denn degenerates doubly at zero and quadruply at infinity") {
  MappingModel m = make_model("denn");
  auto vals = m.singular_values(0);
  CHECK(describe_values(vals) == "0^2, inf^4");
  Homography h = m.forward(0);
  CHECK(h.coeff_degree() == 3);
}

TEST_CASE("tena singular values follow the sequence") {
  MappingModel m = make_model("tena");
  for (long n : {0L, 3L, 7L}) {
    Rat an = m.env().seq("a", n);
    auto vals = m.singular_values(n);
    REQUIRE(vals.size() == 4);
    CHECK(contains_value(vals, PValue::finite(Rat(0)), 1));
    CHECK(contains_value(vals, PValue::finite(an), 1));
    CHECK(contains_value(vals, PValue::finite(-an), 1));
    CHECK(contains_value(vals, PValue::infinity(), 1));
  }
}

TEST_CASE("ttri roots of unity appear per exponent") {
  CHECK(describe_values(make_model("ttri-q1").singular_values(0)) == "1, inf");
  CHECK(describe_values(make_model("ttri-q2").singular_values(0)) == "-1, 1, inf^2");
  CHECK(describe_values(make_model("ttri-q3").singular_values(0)) == "1, inf^3");
}

TEST_CASE("system half steps carry squared determinants") {
  auto is_negative_square = [](const PolyQ& det) {
    return det.degree() == 2 && det[0] == 0 && det[1] == 0 && det.leading() < 0;
  };
  for (const char* id : {"ddek-sys", "vena-sys", "vtri-sys"}) {
    MappingModel m = make_model(id);
    CHECK(m.is_system());
    CHECK(describe_values(m.singular_values(0, 'y')) == "0^2");
    CHECK(describe_values(m.singular_values(0, 'x')) == "0^2");
    CHECK(is_negative_square(m.forward_x(0).determinant()));
    CHECK(is_negative_square(m.forward_y(0).determinant()));
  }
}

TEST_CASE("doct pinned orbit value") {
  MappingModel m = make_model("doct");
  Homography h = m.forward(0);
  PValue next = apply_homography(h, PValue::finite(Rat(3)), PValue::finite(Rat(2)));
  REQUIRE_FALSE(next.inf);
  CHECK(next.v == Rat(-11, 2));
}

TEST_CASE("inverse homography undoes the forward step") {
  std::mt19937_64 rng(2024);
  auto rnd = [&rng]() {
    long n = static_cast<long>(rng() % 200) - 100;
    long d = static_cast<long>(rng() % 99) + 1;
    return make_rat(Int(n), Int(d));
  };
  for (const auto& id : kPresetIds) {
    MappingModel m = make_model(id);
    for (int rep = 0; rep < 20; ++rep) {
      Rat center = rnd(), lag = rnd();
      Homography h = m.is_system() ? m.forward_x(rep) : m.forward(rep);
      if (h.determinant().eval(center) == 0) continue;
      PValue out;
      try {
        out = apply_homography(h, PValue::finite(center), PValue::finite(lag));
      } catch (const IndeterminateValue&) {
        continue;
      }
      PValue back = apply_homography(h.inverse(), PValue::finite(center), out);
      REQUIRE_FALSE(back.inf);
      CHECK(back.v == lag);
    }
  }
}

TEST_CASE("inverse determinant equals forward determinant") {
  for (const auto& id : kPresetIds) {
    MappingModel m = make_model(id);
    Homography h = m.is_system() ? m.forward_y(1) : m.forward(1);
    CHECK(h.inverse().determinant() == h.determinant());
  }
}

TEST_CASE("infinite centers and lags evaluate projectively") {
  MappingModel m = make_model("dhep");
  Rat a = m.env().param("a");
  Homography h = m.forward(0);
  PValue at_inf = apply_homography(h, PValue::infinity(), PValue::finite(Rat(5)));
  REQUIRE_FALSE(at_inf.inf);
  CHECK(at_inf.v == a * Rat(5));
  CHECK(apply_homography(h, PValue::finite(Rat(4)), PValue::infinity()).inf);
  MappingModel d = make_model("doct");
  CHECK(apply_homography(d.forward(0), PValue::infinity(), PValue::finite(Rat(5))).inf);
}

TEST_CASE("non birational equations are rejected") {
  auto make = [](const std::string& body) {
    MappingSource src = parse_mapping_source("map t {\n" + body + "\n}\n");
    ParamEnv env(src, 5);
    return MappingModel(std::move(src), std::move(env));
  };
  CHECK_THROWS_AS(make("x[n+1] = x[n-1]^2 + x[n];"), std::domain_error);
  CHECK_THROWS_AS(make("x[n+1]^2 = x[n-1];"), std::domain_error);
  CHECK_THROWS_AS(make("x[n+1] = x[n];"), std::domain_error);
  CHECK_THROWS_AS(make("x[n+1]*0 = x[n-1];"), std::domain_error);
}

TEST_CASE("equation order in system files is free") {
  MappingSource src = parse_mapping_source(
      "map t {\n"
      "  param c;\n"
      "  y[n+1] = c/x[n+1] - y[n];\n"
      "  x[n+1] = c/y[n] - x[n];\n"
      "}\n");
  ParamEnv env(src, 13);
  MappingModel m(std::move(src), std::move(env));
  CHECK(m.is_system());
  PolyQ det = m.forward_x(0).determinant();
  CHECK(det.degree() == 2);
  CHECK(det[0] == 0);
  CHECK(det[1] == 0);
  CHECK(det.leading() < 0);
}
