#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "algent/degree_sequence.hpp"
#include "algent/expr.hpp"
#include "algent/rational.hpp"
#include "algent/recurrence_fit.hpp"

using namespace algent;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MappingSource load_preset(const std::string& id) {
  return parse_mapping_source(read_file(std::string(ALGENT_DATA_DIR) + "/presets/" + id + ".map"));
}

DegreeSequence degs(const std::string& id, long n_max, int trials) {
  DegreeOptions opt;
  opt.n_max = n_max;
  opt.trials = trials;
  return compute_degrees(load_preset(id), opt);
}

PolyZ zpoly(std::initializer_list<long> cs) {
  std::vector<Int> v;
  for (long c : cs) v.emplace_back(c);
  return PolyZ(std::move(v));
}

using LV = std::vector<long>;

}  // namespace

TEST_CASE("zena degrees grow quadratically, identically across trials") {
  DegreeSequence s = degs("zena", 11, 3);
  CHECK(s.x_degrees == LV{0, 1, 2, 5, 8, 13, 18, 25, 32, 41, 50, 61});
  CHECK(s.y_degrees.empty());
  CHECK_FALSE(s.is_system);
  CHECK_FALSE(s.truncated);
  REQUIRE(s.trial_seeds.size() == 3);
  CHECK(s.trial_seeds[0] == DegreeOptions{}.seed);
  CHECK(s.trial_seeds[1] != s.trial_seeds[2]);
}

TEST_CASE("dhep and doct degrees grow linearly") {
  CHECK(degs("dhep", 12, 3).x_degrees == LV{0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6});
  CHECK(degs("doct", 9, 3).x_degrees == LV{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("ttri degrees follow the branch selected by the parameter order") {
  CHECK(degs("ttri-q1", 11, 3).x_degrees == LV{0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89});
  CHECK(degs("ttri-q2", 11, 1).x_degrees ==
        LV{0, 1, 2, 5, 12, 29, 70, 169, 408, 985, 2378, 5741});
}

TEST_CASE("ttri-q3 stops at the degree cap with the truncated flag set") {
  DegreeSequence s = degs("ttri-q3", 11, 1);
  CHECK(s.truncated);
  CHECK(s.x_degrees == LV{0, 1, 3, 10, 33, 109, 360, 1189, 3927});
}

TEST_CASE("zoct degrees match the pinned table") {
  DegreeSequence s = degs("zoct", 11, 1);
  CHECK(s.x_degrees == LV{0, 1, 2, 4, 9, 19, 40, 84, 177, 372, 783, 1648});
  CHECK_FALSE(s.truncated);
}

TEST_CASE("ddyo degrees match the pinned table") {
  CHECK(degs("ddyo", 10, 1).x_degrees ==
        LV{0, 1, 2, 5, 12, 29, 68, 161, 380, 897, 2116});
}

TEST_CASE("denn degrees match the pinned table") {
  CHECK(degs("denn", 14, 1).x_degrees ==
        LV{0, 1, 3, 6, 11, 19, 32, 53, 87, 142, 231, 375, 608, 985, 1595});
}

TEST_CASE("tena degrees double each step") {
  DegreeSequence s = degs("tena", 11, 1);
  LV expect{0};
  for (long n = 1; n <= 11; ++n) expect.push_back(1L << (n - 1));
  CHECK(s.x_degrees == expect);
}

TEST_CASE("linear systems produce interlaced arithmetic sequences") {
  DegreeSequence dd = degs("ddek-sys", 12, 3);
  CHECK(dd.is_system);
  CHECK(dd.x_degrees == LV{0, 1, 3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23});
  CHECK(dd.y_degrees == LV{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13});

  DegreeSequence ve = degs("vena-sys", 12, 3);
  CHECK(ve.x_degrees == LV{0, 1, 3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23});
  CHECK(ve.y_degrees == LV{1, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24});
}

TEST_CASE("vtri-sys x degrees reproduce denn's scalar sequence") {
  DegreeSequence s = degs("vtri-sys", 12, 1);
  CHECK(s.is_system);
  CHECK(s.x_degrees == LV{0, 1, 3, 6, 11, 19, 32, 53, 87, 142, 231, 375, 608});
  CHECK(s.y_degrees == LV{1, 2, 4, 7, 12, 20, 33, 54, 88, 143, 232, 376, 609});
  double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK_THAT(entropy_estimate(s.x_degrees).log_slope,
             Catch::Matchers::WithinAbs(std::log(phi), 0.02));
}

TEST_CASE("a mapping given as literal text iterates without preset files") {
  MappingSource src = parse_mapping_source("map linear { x[n+1] = 2*x[n] - x[n-1]; }");
  DegreeOptions opt;
  opt.n_max = 8;
  opt.trials = 2;
  DegreeSequence s = compute_degrees(src, opt);
  CHECK(s.x_degrees == LV{0, 1, 1, 1, 1, 1, 1, 1, 1});
}

TEST_CASE("the degree cap halts iteration before the bound is exceeded") {
  DegreeOptions opt;
  opt.n_max = 11;
  opt.trials = 1;
  opt.degree_cap = 50;
  DegreeSequence s = compute_degrees(load_preset("zoct"), opt);
  CHECK(s.truncated);
  CHECK(s.x_degrees == LV{0, 1, 2, 4, 9, 19, 40});
}

TEST_CASE("degree sequences are independent of the seed") {
  DegreeOptions opt;
  opt.n_max = 7;
  opt.trials = 1;
  MappingSource src = load_preset("zena");
  LV first;
  for (std::uint64_t seed : {1ULL, 2ULL, 0xDEADULL}) {
    opt.seed = seed;
    LV got = compute_degrees(src, opt).x_degrees;
    if (first.empty()) first = got;
    CHECK(got == first);
  }
  CHECK(first == LV{0, 1, 2, 5, 8, 13, 18, 25});
}

TEST_CASE("degenerate iteration options are rejected") {
  MappingSource src = load_preset("zena");
  DegreeOptions opt;
  opt.n_max = 0;
  CHECK_THROWS_AS(compute_degrees(src, opt), std::invalid_argument);
  opt.n_max = 5;
  opt.trials = 0;
  CHECK_THROWS_AS(compute_degrees(src, opt), std::invalid_argument);
}

TEST_CASE("fitted recurrences recover minimal annihilators") {
  auto zena = fit_recurrence({0, 1, 2, 5, 8, 13, 18, 25, 32, 41, 50, 61});
  REQUIRE(zena);
  CHECK(zena->order == 4);
  CHECK(zena->start == 0);
  CHECK(zena->coeffs == std::vector<Rat>{Rat(2), Rat(0), Rat(-2), Rat(1)});
  CHECK(zena->char_poly == zpoly({-1, 2, 0, -2, 1}));

  auto dhep = fit_recurrence({0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6});
  REQUIRE(dhep);
  CHECK(dhep->order == 3);
  CHECK(dhep->coeffs == std::vector<Rat>{Rat(1), Rat(1), Rat(-1)});
  CHECK(dhep->char_poly == zpoly({1, -1, -1, 1}));

  auto doct = fit_recurrence({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  REQUIRE(doct);
  CHECK(doct->order == 2);
  CHECK(doct->char_poly == zpoly({1, -2, 1}));

  auto tena = fit_recurrence({0, 1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024});
  REQUIRE(tena);
  CHECK(tena->order == 1);
  CHECK(tena->start == 1);
  CHECK(tena->coeffs == std::vector<Rat>{Rat(2)});
  CHECK(tena->char_poly == zpoly({-2, 1}));

  auto denn = fit_recurrence(
      {0, 1, 3, 6, 11, 19, 32, 53, 87, 142, 231, 375, 608, 985, 1595});
  REQUIRE(denn);
  CHECK(denn->order == 3);
  CHECK(denn->char_poly == zpoly({1, 0, -2, 1}));

  auto zero = fit_recurrence({0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  REQUIRE(zero);
  CHECK(zero->order == 1);
  CHECK(zero->coeffs == std::vector<Rat>{Rat(0)});

  CHECK_FALSE(fit_recurrence({0, 1, 2, 5}).has_value());
}

TEST_CASE("cyclotomic polynomials match their closed forms") {
  CHECK(cyclotomic(1) == zpoly({-1, 1}));
  CHECK(cyclotomic(2) == zpoly({1, 1}));
  CHECK(cyclotomic(6) == zpoly({1, -1, 1}));
  CHECK(cyclotomic(12) == zpoly({1, 0, -1, 0, 1}));
  CHECK(cyclotomic(1) * cyclotomic(2) * cyclotomic(3) * cyclotomic(6) ==
        zpoly({-1, 0, 0, 0, 0, 0, 1}));
  CHECK_THROWS_AS(cyclotomic(0), std::invalid_argument);
}

TEST_CASE("unit circle certification separates cyclotomic from growing roots") {
  CHECK(all_roots_on_unit_circle(zpoly({-1, 2, 0, -2, 1})));  // (l-1)^3 (l+1)
  CHECK(all_roots_on_unit_circle(zpoly({1, -1, 1})));
  CHECK(all_roots_on_unit_circle(zpoly({1, 0, 1})));
  CHECK(all_roots_on_unit_circle(PolyZ(Int(5))));

  CHECK_FALSE(all_roots_on_unit_circle(zpoly({-2, 1})));
  CHECK_FALSE(all_roots_on_unit_circle(zpoly({-1, -1, 1})));
  CHECK_FALSE(all_roots_on_unit_circle(zpoly({2, 3, 2})));
  CHECK_FALSE(all_roots_on_unit_circle(zpoly({0, 0, 1})));
  CHECK_FALSE(all_roots_on_unit_circle(zpoly({2, -3, 1})));
  CHECK_FALSE(all_roots_on_unit_circle(PolyZ()));
}

TEST_CASE("entropy estimates track the dominant growth ratio") {
  LV tena{0};
  for (long n = 1; n <= 11; ++n) tena.push_back(1L << (n - 1));
  EntropyEstimate ge = entropy_estimate(tena);
  CHECK_THAT(ge.last_ratio, Catch::Matchers::WithinAbs(2.0, 1e-12));
  CHECK_THAT(ge.log_slope, Catch::Matchers::WithinAbs(std::log(2.0), 1e-9));

  EntropyEstimate le = entropy_estimate({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK_THAT(le.last_ratio, Catch::Matchers::WithinAbs(9.0 / 8.0, 1e-12));
  CHECK(le.log_slope < 0.2);
  CHECK(le.log_slope > 0.1);

  CHECK_THROWS_AS(entropy_estimate({0, 1, 2, 3, 4, 5}), std::runtime_error);
  CHECK_THROWS_AS(entropy_estimate({0, 1, 2}), std::runtime_error);
}
