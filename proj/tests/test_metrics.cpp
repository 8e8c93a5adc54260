#include <catch_amalgamated.hpp>

#include "fuzdyn/metrics.hpp"
#include "fuzdyn/random_instances.hpp"
#include "fuzdyn/suites.hpp"
#include "support/oracles.hpp"

using namespace fuzdyn;

namespace {
using U = TableUniverse<Rat>;
}

TEST_CASE("all four metrics vanish on equal arguments") {
  SeededRng rng(31);
  auto space = random_metric_universe(rng, 12, 0);
  auto u = random_step_fuzzy(rng, space);
  for (auto m : kAllMetrics) CHECK(fuzzy_distance(space, m, u, u) == 0);
}

TEST_CASE("metrics reject mixed universes") {
  SeededRng rng(32);
  auto s1 = random_metric_universe(rng, 6, 1);
  auto s2 = random_metric_universe(rng, 6, 2);
  auto u = random_step_fuzzy(rng, s1);
  auto v = random_step_fuzzy(rng, s2);
  CHECK_THROWS_AS(sup_distance(s1, u, v), domain_error);
  CHECK_THROWS_AS(endograph_distance(s1, u, v), domain_error);
}

TEST_CASE("identity and inequality suite stays clean") {
  auto rep = metric_identity_suite(250, 404);
  for (const auto& c : rep.claims) {
    INFO(c.id);
    CHECK(c.pass);
  }
}

TEST_CASE("key lemma suite stays clean") {
  auto rep = key_lemma_suite(250, 405);
  for (const auto& c : rep.claims) {
    INFO(c.id);
    CHECK(c.pass);
  }
}

TEST_CASE("metric axioms for every fuzzy metric") {
  SeededRng rng(37);
  for (int t = 0; t < 250; ++t) {
    auto space = random_metric_universe(rng, 10, t);
    auto u = random_step_fuzzy(rng, space, 4, 4);
    auto v = random_step_fuzzy(rng, space, 4, 4);
    auto w = random_step_fuzzy(rng, space, 4, 4);
    for (auto m : kAllMetrics) {
      Rat uv = fuzzy_distance(space, m, u, v);
      Rat vu = fuzzy_distance(space, m, v, u);
      CHECK(uv == vu);
      CHECK(uv >= 0);
      if (u == v) CHECK(uv == 0);
      CHECK(fuzzy_distance(space, m, u, w) <= uv + fuzzy_distance(space, m, v, w));
    }
  }
}

TEST_CASE("closed forms agree with the graph-cloud oracle") {
  SeededRng rng(41);
  for (int t = 0; t < 120; ++t) {
    auto space = random_metric_universe(rng, 8, t);
    auto u = random_step_fuzzy(rng, space, 4, 4);
    auto v = random_step_fuzzy(rng, space, 4, 4);
    for (unsigned res : {8u, 16u}) {
      Rat tol(Int(1), Int(res));
      Rat ds = sendograph_distance(space, u, v);
      Rat ds_cloud = oracles::cloud_sendograph(space, u, v, res);
      CHECK(abs(ds - ds_cloud) <= tol);
      Rat de = endograph_distance(space, u, v);
      Rat de_cloud = oracles::cloud_endograph(space, u, v, res);
      CHECK(abs(de - de_cloud) <= tol);
    }
  }
}

TEST_CASE("endograph saturates at 1") {
  // two singletons at distance 8
  std::vector<std::vector<Rat>> tab = {{Rat(0), Rat(8)}, {Rat(8), Rat(0)}};
  U space("far", tab);
  auto cu = characteristic(space, CompactSet<U>(space, {0u}));
  auto cv = characteristic(space, CompactSet<U>(space, {1u}));
  CHECK(endograph_distance(space, cu, cv) == 1);
  CHECK(sendograph_distance(space, cu, cv) == 8);
}

TEST_CASE("metric kind names round-trip") {
  for (auto m : kAllMetrics) CHECK(metric_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(metric_from_string("nonsense"), config_error);
}
