#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "lipfree/lipfree.h"

using Json = nlohmann::json;

namespace {

const char* kM3 = R"({"points": ["0", "x", "y"], "dist": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]})";

// Owns a string returned by the library.
struct Text {
  char* p = nullptr;
  ~Text() { lf_string_free(p); }
  Json json() const { return Json::parse(p); }
};

}  // namespace

TEST_CASE("version and error state") {
  CHECK(std::string(lf_version()) == "0.1.0");
  lf_space* s = nullptr;
  CHECK(lf_space_from_json("{", &s) == LF_PARSE_ERROR);
  CHECK(s == nullptr);
  CHECK(std::string(lf_last_error()).size() > 0);
  CHECK(lf_space_from_json(kM3, &s) == LF_OK);
  CHECK(std::string(lf_last_error()).empty());
  lf_space_free(s);
  CHECK(lf_space_from_json(nullptr, &s) == LF_INVALID_ARGUMENT);
}

TEST_CASE("space handles") {
  const double d[] = {0, 1, 2, 1, 0, 1, 2, 1, 0};
  const char* labels[] = {"0", "x", "y"};
  lf_space* s = nullptr;
  REQUIRE(lf_space_create(3, d, labels, &s) == LF_OK);
  CHECK(lf_space_size(s) == 3);
  CHECK(lf_space_distance(s, 0, 2) == 2.0);
  CHECK(lf_space_is_integer(s) == 1);
  Text j;
  REQUIRE(lf_space_to_json(s, &j.p) == LF_OK);
  CHECK(j.json()["points"][1] == "x");

  const double bad[] = {0, 1, 3, 1, 0, 1, 3, 1, 0};
  lf_space* b = nullptr;
  CHECK(lf_space_create(3, bad, nullptr, &b) == LF_DOMAIN_FAILURE);
  CHECK(b == nullptr);

  lf_space* r = nullptr;
  REQUIRE(lf_round_metric(s, 2.5, &r) == LF_OK);
  CHECK(lf_space_distance(r, 0, 1) == 3.0);
  lf_space_free(r);
  lf_space* f = nullptr;
  CHECK(lf_snowflake(s, 2.0, &f) == LF_INVALID_ARGUMENT);
  REQUIRE(lf_snowflake(s, 0.5, &f) == LF_OK);
  CHECK(lf_space_distance(f, 0, 2) == doctest::Approx(std::sqrt(2.0)));
  lf_space_free(f);
  lf_space* u = nullptr;
  REQUIRE(lf_subdominant_ultrametric(s, &u) == LF_OK);
  CHECK(lf_space_distance(u, 0, 2) == 1.0);
  lf_space_free(u);
  lf_space_free(s);
}

TEST_CASE("norms through the C API") {
  lf_space* s = nullptr;
  REQUIRE(lf_space_from_json(kM3, &s) == LF_OK);
  const size_t pts[] = {1, 2};
  const double cs[] = {1, 1};
  double value = 0, pot[3] = {};
  REQUIRE(lf_free_norm(s, 2, pts, cs, &value, pot) == LF_OK);
  CHECK(value == 3.0);
  CHECK(pot[2] == 2.0);
  int64_t iv[3] = {};
  REQUIRE(lf_integer_potential(s, 2, pts, cs, iv) == LF_OK);
  CHECK(iv[1] == 1);
  CHECK(iv[2] == 2);
  const size_t out_of_range[] = {9};
  CHECK(lf_free_norm(s, 1, out_of_range, cs, &value, nullptr) == LF_INVALID_ARGUMENT);
  lf_space_free(s);

  lf_space* fl = nullptr;
  REQUIRE(lf_space_from_json(R"({"dist": [[0, 0.5], [0.5, 0]]})", &fl) == LF_OK);
  const size_t one[] = {1};
  CHECK(lf_integer_potential(fl, 1, one, cs, iv) == LF_DOMAIN_FAILURE);
  lf_space_free(fl);
}

TEST_CASE("trees through the C API") {
  lf_space* s = nullptr;
  REQUIRE(lf_space_from_json(kM3, &s) == LF_OK);
  lf_tree* t = nullptr;
  REQUIRE(lf_tree_embed(s, &t) == LF_OK);
  CHECK(lf_tree_node_count(t) == 3);
  CHECK(lf_tree_steiner_count(t) == 0);
  const size_t pts[] = {2};
  const double cs[] = {1};
  double v = 0;
  REQUIRE(lf_tree_cut_norm(t, 1, pts, cs, &v) == LF_OK);
  CHECK(v == 2.0);
  Text j;
  REQUIRE(lf_tree_to_json(t, &j.p) == LF_OK);
  lf_tree* back = nullptr;
  REQUIRE(lf_tree_from_json(j.p, &back) == LF_OK);
  CHECK(lf_tree_node_count(back) == 3);
  lf_tree_free(back);
  lf_tree_free(t);
  lf_space_free(s);

  lf_space* cycle = nullptr;
  REQUIRE(lf_space_from_json(R"({"dist": [[0,1,2,1],[1,0,1,2],[2,1,0,1],[1,2,1,0]]})", &cycle) == LF_OK);
  lf_tree* none = nullptr;
  CHECK(lf_tree_embed(cycle, &none) == LF_DOMAIN_FAILURE);
  lf_space_free(cycle);
}

TEST_CASE("JSON front ends") {
  Text v;
  CHECK(lf_validate_json(R"({"dist": [[0, 1, 3], [1, 0, 1], [3, 1, 0]]})", &v.p) == LF_DOMAIN_FAILURE);
  REQUIRE(v.p);
  CHECK(v.json()["ok"] == false);

  Text c;
  REQUIRE(lf_classify_json(R"({"dist": [[0, 2, 2], [2, 0, 2], [2, 2, 0]]})", &c.p) == LF_OK);
  CHECK(c.json()["ultrametric"] == true);
  CHECK(c.json()["four_point"] == true);

  Text n;
  REQUIRE(lf_norm_json(kM3, R"({"coeffs": {"x": 1, "y": 1}})", 1, &n.p) == LF_OK);
  CHECK(n.json()["value"] == 3.0);
  CHECK(n.json()["gap"].get<double>() <= 1e-9);

  Text z;
  REQUIRE(lf_norm_json(kM3, R"({"coeffs": {}})", 0, &z.p) == LF_OK);
  CHECK(z.json()["value"] == 0.0);

  Text fl;
  CHECK(lf_norm_json(R"({"dist": [[0, 0.5], [0.5, 0]]})", R"({"coeffs": {"1": 1}})", 1, &fl.p) == LF_DOMAIN_FAILURE);
  CHECK(std::string(lf_last_error()).find("requires integer metric") != std::string::npos);

  Text g1, g2;
  REQUIRE(lf_generate_json("ultrametric", R"({"points": 6})", 1, &g1.p) == LF_OK);
  REQUIRE(lf_generate_json("ultrametric", R"({"points": 6})", 1, &g2.p) == LF_OK);
  CHECK(std::string(g1.p) == std::string(g2.p));
  Text cls;
  REQUIRE(lf_classify_json(g1.p, &cls.p) == LF_OK);
  CHECK(cls.json()["ultrametric"] == true);
  Text bad;
  CHECK(lf_generate_json("nope", nullptr, 1, &bad.p) == LF_INVALID_ARGUMENT);
  CHECK(lf_generate_json("tree", R"({"points": 100000})", 1, &bad.p) == LF_INVALID_ARGUMENT);

  Text d;
  REQUIRE(lf_density_json(R"({"intervals": [[0, "1/3"], ["2/3", 1]]})", 0.25, &d.p) == LF_OK);
  CHECK(d.json()["b"] == "1/3");

  Text dp;
  REQUIRE(lf_distortion_json(R"({"sample": [0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1], "n": 10})", &dp.p) ==
          LF_OK);
  CHECK(dp.json()["ratio"] == "1/9");
}

TEST_CASE("witness through the C API") {
  Text gen;
  REQUIRE(lf_generate_json("conflict-block", R"({"blocks": 20, "support": 3})", 7, &gen.p) == LF_OK);
  lf_sequence* seq = nullptr;
  REQUIRE(lf_sequence_from_json(gen.p, &seq) == LF_OK);
  CHECK(lf_sequence_length(seq) == 20);
  double ca = 0;
  REQUIRE(lf_sequence_osc(seq, &ca) == LF_OK);
  CHECK(ca > 0);
  Text rep;
  REQUIRE(lf_schur_certificate(seq, 0.1, &rep.p) == LF_OK);
  Json j = rep.json();
  CHECK(j["success"] == true);
  lf_sequence_free(seq);
}

TEST_CASE("concurrent calls keep separate error state") {
  std::vector<std::thread> pool;
  std::vector<int> ok(8, 0);
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([t, &ok] {
      char* out = nullptr;
      if (t % 2) {
        ok[t] = lf_norm_json(kM3, R"({"coeffs": {"x": 1, "y": 1}})", 0, &out) == LF_OK &&
                std::string(lf_last_error()).empty();
      } else {
        ok[t] = lf_norm_json("not json", "{}", 0, &out) == LF_PARSE_ERROR && std::string(lf_last_error()).size() > 0;
      }
      lf_string_free(out);
    });
  }
  for (auto& th : pool) th.join();
  for (int v : ok) CHECK(v == 1);
}
