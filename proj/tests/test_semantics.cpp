#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "errors.hpp"
#include "fixture.hpp"
#include "pipeline.hpp"
#include "rng.hpp"
#include "semantics.hpp"

using namespace scf;

namespace {

WeightedDigraph pool3() {
  WeightedDigraph g;
  g.name = "pool3";
  g.units = {{"x", "x", 10.0, 10e6}, {"y", "y", 9.0, 4e6}, {"z", "z", 8.0, 5e6}};
  return g;
}

}  // namespace

TEST_CASE("bundled payload fixture") {
  WeightedDigraph g = load_sr_fixture(bundled_dir() + "/data/sr1.json");
  CHECK(g.name == "SR1");
  REQUIRE(g.units.size() == 14);
  REQUIRE(g.edges.size() == 7);
  CHECK_NOTHROW(validate(g));

  SemanticRepresentation all = extract_sr(g, 1e12);
  CHECK(all.units.size() == 14);
  CHECK(sr_volume(all) == 165e6);  // whole-Mbit payloads sum exactly
  CHECK(sr_accuracy(all) == doctest::Approx(12.83).epsilon(1e-12));

  // pool order is preserved regardless of pick order
  CHECK(all.units.front().id == "a");
  CHECK(all.units.back().id == "n");
  CHECK(all.units[3].label == "adjacent");
}

TEST_CASE("greedy selection under a binding budget") {
  WeightedDigraph g = load_sr_fixture(bundled_dir() + "/data/sr1.json");
  // 60 Mbit: d and g fit; j, f, c, b do not; a still does; i squeezes in last
  SemanticRepresentation sr = extract_sr(g, 60e6);
  std::vector<std::string> ids;
  for (const auto& u : sr.units) ids.push_back(u.id);
  CHECK(ids == std::vector<std::string>{"a", "d", "g", "i"});
  CHECK(sr_volume(sr) == 59e6);
  CHECK(sr_accuracy(sr) == doctest::Approx(4.6).epsilon(1e-12));
}

TEST_CASE("selection order: importance, then smaller payload, then id") {
  WeightedDigraph g;
  g.units = {{"big", "big", 1.0, 9e6},
             {"smallb", "smallb", 1.0, 2e6},
             {"smalla", "smalla", 1.0, 2e6},
             {"minor", "minor", 0.5, 1e6}};
  // room for exactly one of the 2 Mbit twins; the id breaks the tie
  SemanticRepresentation sr = extract_sr(g, 3e6);
  REQUIRE(sr.units.size() == 2);
  CHECK(sr.units[0].id == "smalla");
  CHECK(sr.units[1].id == "minor");

  // smaller payload outranks at equal importance
  sr = extract_sr(g, 2e6);
  REQUIRE(sr.units.size() == 1);
  CHECK(sr.units[0].id == "smalla");
}

TEST_CASE("a unit that does not fit never blocks smaller ones") {
  SemanticRepresentation sr = extract_sr(pool3(), 9.5e6);
  REQUIRE(sr.units.size() == 2);
  CHECK(sr.units[0].id == "y");
  CHECK(sr.units[1].id == "z");
  CHECK(sr_volume(sr) == 9e6);
}

TEST_CASE("budget edge cases") {
  CHECK_THROWS_WITH_AS(extract_sr(pool3(), 3.9e6),
                       "extract_sr: no unit fits within the budget", error);
  CHECK_THROWS_AS(extract_sr(pool3(), 0.0), error);
  CHECK_THROWS_AS(extract_sr(pool3(), -5.0), error);
  // exactly the smallest payload is enough
  CHECK(extract_sr(pool3(), 4e6).units.size() == 1);
}

TEST_CASE("selected volume never shrinks when the budget grows") {
  // (importance can: a bigger budget may admit one heavy unit that crowds
  // out two lighter ones scanned later)
  Rng rng(5150);
  for (int trial = 0; trial < 300; ++trial) {
    WeightedDigraph g;
    const int n = 2 + static_cast<int>(rng.below(7));
    for (int i = 0; i < n; ++i) {
      const std::string id(1, static_cast<char>('a' + i));
      g.units.push_back(
          {id, id, rng.uniform() * 2.0, (1.0 + rng.below(30)) * 1e6});
    }
    double prev = 0.0;
    for (double budget = 1e6; budget <= 40e6; budget += 1.3e6) {
      double vol = 0.0;
      try {
        vol = sr_volume(extract_sr(g, budget));
      } catch (const error&) {
        vol = 0.0;  // nothing fits yet
      }
      CHECK(vol >= prev);
      prev = vol;
    }
  }
}

TEST_CASE("digraph validation") {
  WeightedDigraph g = pool3();
  g.edges = {{"x", "y", "z"}};
  CHECK_NOTHROW(validate(g));

  SUBCASE("duplicate unit id") {
    g.units.push_back({"x", "x2", 0.1, 1e6});
    CHECK_THROWS_WITH_AS(validate(g), "duplicate unit id 'x'", error);
  }
  SUBCASE("empty id") {
    g.units.push_back({"", "", 0.1, 1e6});
    CHECK_THROWS_AS(validate(g), error);
  }
  SUBCASE("negative importance") {
    g.units[0].alpha = -0.01;
    CHECK_THROWS_WITH_AS(validate(g), "unit 'x': importance must be >= 0", error);
  }
  SUBCASE("zero importance is allowed") {
    g.units[0].alpha = 0.0;
    CHECK_NOTHROW(validate(g));
  }
  SUBCASE("nonpositive payload") {
    g.units[1].beta_bits = 0.0;
    CHECK_THROWS_AS(validate(g), error);
  }
  SUBCASE("edge endpoints and payload must exist") {
    g.edges = {{"x", "w", "z"}};
    CHECK_THROWS_WITH_AS(validate(g), "edge tail 'w' unknown", error);
    g.edges = {{"w", "x", "z"}};
    CHECK_THROWS_AS(validate(g), error);
    g.edges = {{"x", "y", "w"}};
    CHECK_THROWS_WITH_AS(validate(g), "edge payload unit 'w' unknown", error);
  }
  SUBCASE("duplicate head/tail pair") {
    g.edges = {{"x", "y", "z"}, {"x", "y", "x"}};
    CHECK_THROWS_WITH_AS(validate(g), "duplicate edge x -> y", error);
  }
  SUBCASE("parallel edges between different pairs are fine") {
    g.edges = {{"x", "y", "z"}, {"y", "x", "z"}};
    CHECK_NOTHROW(validate(g));
  }
}

TEST_CASE("reliability weighs direct and relayed importance differently") {
  SemanticRepresentation sr = testfix::sr1();
  std::vector<int> rows(14, 0);
  // everything direct: theta_t * total importance
  CHECK(semantic_reliability(rows, sr, 1.5, 0.5) ==
        doctest::Approx(1.5 * 12.83).epsilon(1e-12));
  // everything relayed
  std::vector<int> relayed(14, 3);
  CHECK(semantic_reliability(relayed, sr, 1.5, 0.5) ==
        doctest::Approx(0.5 * 12.83).epsilon(1e-12));

  // hand-built split: a, d direct; rest on various relays
  rows.assign(14, 2);
  rows[0] = 0;  // a: 0.86
  rows[3] = 0;  // d: 1.87
  const double direct = 0.86 + 1.87;
  CHECK(semantic_reliability(rows, sr, 1.5, 0.5) ==
        doctest::Approx(1.5 * direct + 0.5 * (12.83 - direct)).epsilon(1e-12));

  // which relay carries a unit does not matter, only direct vs not
  std::vector<int> relabeled = rows;
  for (auto& r : relabeled)
    if (r != 0) r = 7;
  CHECK(semantic_reliability(relabeled, sr, 1.5, 0.5) ==
        semantic_reliability(rows, sr, 1.5, 0.5));

  CHECK_THROWS_AS(semantic_reliability({0, 1}, sr, 1.5, 0.5), error);
  std::vector<int> bad(14, 0);
  bad[5] = -1;
  CHECK_THROWS_AS(semantic_reliability(bad, sr, 1.5, 0.5), error);
}

TEST_CASE("importance per joule") {
  CHECK(semantic_energy_efficiency(12.83, 2.0) == doctest::Approx(6.415));
  CHECK(semantic_energy_efficiency(0.0, 5.0) == 0.0);
  CHECK_THROWS_AS(semantic_energy_efficiency(1.0, 0.0), error);
  CHECK_THROWS_AS(semantic_energy_efficiency(1.0, -1.0), error);
}

TEST_CASE("unit lookup by id") {
  SemanticRepresentation sr = testfix::sr1();
  CHECK(unit_index(sr, "a") == 0);
  CHECK(unit_index(sr, "n") == 13);
  CHECK(unit_index(sr, "zz") == -1);
}
