#include <catch_amalgamated.hpp>

#include "fuzdyn/chaos.hpp"
#include "fuzdyn/gallery.hpp"
#include "fuzdyn/random_instances.hpp"

using namespace fuzdyn;

namespace {
using TU = TableUniverse<Rat>;

TraceSource constant_source(const Rat& c, std::uint64_t horizon) {
  return {"base", "const", horizon, [c]() { return [c]() { return c; }; }};
}

TraceSource vector_source(std::vector<Rat> values) {
  auto shared = std::make_shared<std::vector<Rat>>(std::move(values));
  return {"base", "vec", shared->size(), [shared]() {
            std::size_t i = 0;
            return [shared, i]() mutable { return (*shared)[i++]; };
          }};
}
}  // namespace

TEST_CASE("base traces follow the example metrics") {
  auto e3 = build_example3();
  auto tr = base_trace(e3, BandPoint{0, Rat(0)}, BandPoint{0, Rat(1)}, 8);
  // doubling blocks: {1, 4, 5, 6, 7} on A below 8
  CHECK(tr.values == std::vector<Rat>{Rat(1), Rat(2), Rat(2), Rat(1), Rat(1), Rat(1), Rat(1), Rat(2)});

  auto e1 = build_example1();
  auto tr1 = base_trace(e1, GridPoint{0, 0}, GridPoint{0, 1}, 30);
  for (std::uint64_t j = 1; j <= 30; ++j) {
    Rat expect = e1.space.density_set().contains(j) ? Rat(Int(1), Int(j)) : Rat(1);
    CHECK(tr1.values[j - 1] == expect);
  }

  SeededRng rng(71);
  auto space = random_metric_universe(rng, 6, 0);
  DynSystem<TU> id{space, [](std::uint32_t p) { return p; }, "id"};
  auto tid = base_trace(id, 0u, 1u, 12);
  for (const auto& v : tid.values) CHECK(v == space.distance(0u, 1u));
}

TEST_CASE("density estimates are exact prefix counts") {
  auto all = DensitySet::custom([] {
    std::vector<std::uint64_t> v;
    for (std::uint64_t i = 1; i <= 100; ++i) v.push_back(i);
    return v;
  }());
  auto rep = density_estimate([&](std::uint64_t m) { return all.count_leq(m); }, 100, {10, 50, 100});
  for (const auto& r : rep.ratios) CHECK(r == 1);

  auto fact = DensitySet::factorial_blocks();
  auto frep = density_estimate([&](std::uint64_t m) { return fact.count_leq(m); }, 362879,
                               {5039, 40320, 362879});
  CHECK(frep.ratios[0] == Rat(4420, 5039));
  // 40320 = 8! starts a block, so the inclusive count picks it up
  CHECK(frep.ratios[1] == Rat(4421, 40320));
  CHECK(frep.ratios[2] == Rat(326980, 362879));

  auto dbl = DensitySet::doubling_blocks();
  // just before a block: exactly 1/3; at a block end: near 2/3
  auto drep = density_estimate([&](std::uint64_t m) { return dbl.count_leq(m); }, 16384,
                               {16383, 8191});
  CHECK(drep.ratios[1] == Rat(1, 3));
  CHECK(abs(drep.ratios[0] - Rat(2, 3)) <= Rat(1, 20));
}

TEST_CASE("profiles of constant traces are step functions in delta") {
  auto prof = distributional_profile(constant_source(Rat(2, 3), 512), default_delta_grid());
  for (std::size_t d = 0; d < prof.delta_grid.size(); ++d) {
    if (prof.delta_grid[d] > Rat(2, 3)) {
      CHECK(prof.phi_lower[d] == 1);
      CHECK(prof.phi_upper[d] == 1);
    } else {
      CHECK(prof.phi_upper[d] == 0);
    }
  }
  CHECK(prof.min_value == Rat(2, 3));
}

TEST_CASE("profile invariants on random traces") {
  SeededRng rng(73);
  for (int t = 0; t < 50; ++t) {
    std::vector<Rat> vals;
    std::uint64_t n = 256 + rng.next(512);
    for (std::uint64_t j = 0; j < n; ++j) vals.push_back(Rat(Int(rng.next(9)), Int(1 + rng.next(7))));
    auto prof = distributional_profile(vector_source(std::move(vals)), default_delta_grid());
    for (std::size_t d = 0; d < prof.delta_grid.size(); ++d) {
      CHECK(prof.phi_lower[d] <= prof.phi_upper[d]);
      if (d > 0) {
        CHECK(prof.phi_lower[d - 1] <= prof.phi_lower[d]);
        CHECK(prof.phi_upper[d - 1] <= prof.phi_upper[d]);
      }
      for (const auto& r : prof.below_ratios[d]) {
        CHECK(r >= 0);
        CHECK(r <= 1);
      }
    }
  }
}

TEST_CASE("classifier: example 1 base pair is D1 evidence at eps = 1/2") {
  auto e1 = build_example1();
  auto cps = checkpoint_schedule(362879, e1.space.density_set().block_edge_checkpoints(362879));
  auto prof = distributional_profile(base_trace_source(e1, GridPoint{0, 0}, GridPoint{0, 1}, 362879),
                                     default_delta_grid(), cps);
  ClassifierConfig cfg;
  cfg.eps = Rat(1, 2);
  cfg.min_horizon = 1024;
  auto v = classify_pair(prof, cfg);
  CHECK(v.d1);
  CHECK(v.d1half);
  CHECK(v.d2);
  CHECK(v.phi_at_eps <= Rat(12, 100));
  CHECK(v.phi_upper_floor >= Rat(85, 100));
}

TEST_CASE("classifier: constant traces carry no chaos evidence") {
  auto prof = distributional_profile(constant_source(Rat(3), 512), default_delta_grid());
  ClassifierConfig cfg;
  auto v = classify_pair(prof, cfg);
  CHECK_FALSE(v.proximal);
  CHECK_FALSE(v.ly);
  CHECK_FALSE(v.mly);
  CHECK_FALSE(v.d1);
  CHECK_FALSE(v.d1half);
  CHECK_FALSE(v.d2);
  CHECK_FALSE(v.d2half);
  CHECK_FALSE(v.d3);
}

TEST_CASE("classifier: collapsed orbits are proximal but not chaotic") {
  SeededRng rng(79);
  auto space = random_metric_universe(rng, 5, 0);
  DynSystem<TU> collapse{space, [](std::uint32_t) { return 0u; }, "collapse"};
  auto prof = distributional_profile(base_trace_source(collapse, 1u, 2u, 512), default_delta_grid());
  ClassifierConfig cfg;
  auto v = classify_pair(prof, cfg);
  CHECK(v.proximal);
  CHECK(v.min_value == 0);
  CHECK_FALSE(v.ly);
  CHECK_FALSE(v.mly);
  CHECK_FALSE(v.d3);
}

TEST_CASE("classifier: example 2 base pair shows MLY straddling") {
  auto e2 = build_example2();
  auto cps = checkpoint_schedule(65536, e2.space.density_set().block_edge_checkpoints(65536));
  auto prof = distributional_profile(
      base_trace_source(e2, BandPoint{0, Rat(0)}, BandPoint{0, Rat(1)}, 65536), default_delta_grid(),
      cps);
  ClassifierConfig cfg;
  cfg.eps = Rat(1);
  cfg.min_horizon = 1024;
  auto v = classify_pair(prof, cfg);
  CHECK(v.mly);
  CHECK(v.mean_max_approx >= 1.0);
  CHECK(v.mean_min_approx <= 0.01);
}

TEST_CASE("classifier horizon precondition") {
  auto prof = distributional_profile(constant_source(Rat(1), 16), default_delta_grid());
  ClassifierConfig cfg;
  cfg.min_horizon = 256;
  CHECK_THROWS_AS(classify_pair(prof, cfg), domain_error);
}

TEST_CASE("classifier monotonicity in the proximity tolerance") {
  SeededRng rng(83);
  for (int t = 0; t < 30; ++t) {
    std::vector<Rat> vals;
    for (int j = 0; j < 300; ++j) vals.push_back(Rat(Int(rng.next(20)), Int(1 + rng.next(50))));
    auto prof = distributional_profile(vector_source(std::move(vals)), default_delta_grid());
    ClassifierConfig tight, loose;
    tight.prox_tol = Rat(1, 1000);
    loose.prox_tol = Rat(1, 10);
    auto vt = classify_pair(prof, tight);
    auto vl = classify_pair(prof, loose);
    if (vt.proximal) CHECK(vl.proximal);
  }
}

TEST_CASE("bridge check holds on example traces and random traces") {
  auto e3 = build_example3();
  auto rep = bridge_check(base_trace_source(e3, BandPoint{0, Rat(0)}, BandPoint{0, Rat(1)}, 4096),
                          Rat(2), default_delta_grid());
  CHECK(rep.pass());

  // constant trace with delta at and below the value
  auto crep = bridge_check(constant_source(Rat(1, 3), 256), Rat(1, 3), {Rat(1, 6), Rat(1, 3), Rat(1)});
  CHECK(crep.pass());

  SeededRng rng(89);
  for (int t = 0; t < 20; ++t) {
    std::vector<Rat> vals;
    for (int j = 0; j < 400; ++j) vals.push_back(Rat(Int(rng.next(12)), Int(1 + rng.next(6))));
    auto r = bridge_check(vector_source(std::move(vals)), Rat(12), default_delta_grid());
    CHECK(r.pass());
  }
}

TEST_CASE("bridge check enforces its bound precondition") {
  CHECK_THROWS_AS(bridge_check(constant_source(Rat(3), 16), Rat(2), {Rat(1)}), domain_error);
}

TEST_CASE("u_alpha family: structure, pairwise sup distance, and errors") {
  auto e1 = build_example1();
  CompactSet<Example1Universe> k(e1.space, {GridPoint{0, 0}});
  CompactSet<Example1Universe> l(e1.space, {GridPoint{0, 0}, GridPoint{0, 1}});
  std::vector<Rat> alphas;
  for (int i = 1; i <= 5; ++i) alphas.push_back(Rat(i, 6));
  auto family = u_alpha_family(e1.space, k, l, alphas);
  REQUIRE(family.size() == 5);
  Rat h = hausdorff(e1.space, k, l);
  for (std::size_t i = 0; i < family.size(); ++i) {
    CHECK(level_set(e1.space, family[i], alphas[i]) == l);
    CHECK(level_set(e1.space, family[i], Rat(1)) == k);
    for (std::size_t j = i + 1; j < family.size(); ++j)
      CHECK(sup_distance(e1.space, family[i], family[j]) == h);
  }
  CHECK_THROWS_AS(u_alpha(e1.space, l, k, Rat(1, 2)), domain_error);  // K not strict subset
  CHECK_THROWS_AS(u_alpha(e1.space, k, k, Rat(1, 2)), domain_error);
  CHECK_THROWS_AS(u_alpha(e1.space, k, l, Rat(1)), domain_error);
}

TEST_CASE("xi map evaluates the 2-piece reparametrization") {
  XiMap xi(Rat(2, 3), Rat(1, 3));
  CHECK(xi(Rat(0)) == 0);
  CHECK(xi(Rat(1)) == 1);
  CHECK(xi(Rat(2, 3)) == Rat(1, 3));
  CHECK(xi.sup_deviation() == Rat(1, 3));
  // spot values on both linear pieces
  CHECK(xi(Rat(1, 3)) == Rat(1, 6));
  CHECK(xi(Rat(5, 6)) == Rat(2, 3));
  CHECK_THROWS_AS(XiMap(Rat(1, 3), Rat(2, 3)), domain_error);
  CHECK_THROWS_AS(XiMap(Rat(1, 2), Rat(1, 2)), domain_error);
}

TEST_CASE("transfer check is exact on example 1") {
  auto e1 = build_example1();
  CompactSet<Example1Universe> k(e1.space, {GridPoint{0, 0}});
  CompactSet<Example1Universe> l(e1.space, {GridPoint{0, 0}, GridPoint{0, 1}});
  auto rep = transfer_check(e1, k, l, Rat(3, 4), Rat(1, 4), 64);
  CHECK(rep.pass());
  CHECK(rep.rows_checked == 4 * 64);
}

TEST_CASE("transfer check under collapse and under tiny gaps") {
  SeededRng rng(97);
  auto space = random_metric_universe(rng, 6, 0);
  DynSystem<TU> collapse{space, [](std::uint32_t) { return 0u; }, "collapse"};
  CompactSet<TU> k(space, {0u});
  CompactSet<TU> l(space, {0u, 1u});
  auto rep = transfer_check(collapse, k, l, Rat(2, 3), Rat(1, 3), 8);
  CHECK(rep.pass());  // after one step both sets collapse: all metrics 0

  // alpha - beta below every hyper distance: the three capped metrics sit at the gap
  auto e3 = build_example3();
  CompactSet<Example3Universe> k3(e3.space, {BandPoint{0, Rat(0)}});
  CompactSet<Example3Universe> l3(e3.space, {BandPoint{0, Rat(0)}, BandPoint{0, Rat(1)}});
  Rat alpha(33, 64), beta(31, 64);
  auto ua = u_alpha(e3.space, k3, l3, alpha);
  auto ub = u_alpha(e3.space, k3, l3, beta);
  auto tr = fuzzy_trace(e3, MetricKind::endograph, ub, ua, 16);
  for (const auto& v : tr.values) CHECK(v == alpha - beta);  // hyper distance is 1 or 2 off the gap
  CHECK(transfer_check(e3, k3, l3, alpha, beta, 16).pass());
}

TEST_CASE("scrambled matrix over the example 2 base family") {
  auto e2 = build_example2();
  std::vector<BandPoint> family = {
      BandPoint{0, Rat(0)}, BandPoint{0, Rat(1, 3)}, BandPoint{0, Rat(2, 3)}, BandPoint{0, Rat(1)}};
  ClassifierConfig cfg;
  cfg.eps = Rat(1);
  cfg.min_horizon = 1024;
  auto cps = checkpoint_schedule(65536, e2.space.density_set().block_edge_checkpoints(65536));
  auto m = scrambled_matrix_base(e2, family, 65536, default_delta_grid(), cps, cfg);
  REQUIRE(m.entries.size() == 6);
  CHECK(m.all(&PairVerdict::mly));

  auto dup = family;
  dup[1] = dup[0];
  CHECK_THROWS_AS(scrambled_matrix_base(e2, dup, 1024, default_delta_grid(), cps, cfg), domain_error);
}

TEST_CASE("canonical embeddings are isometric where stated") {
  SeededRng rng(101);
  auto space = random_metric_universe(rng, 10, 0);
  for (int t = 0; t < 50; ++t) {
    std::uint32_t x = static_cast<std::uint32_t>(rng.next(space.size()));
    std::uint32_t y = static_cast<std::uint32_t>(rng.next(space.size()));
    CHECK(hausdorff(space, iota1(space, x), iota1(space, y)) == space.distance(x, y));
    auto k = random_compact_set(rng, space);
    auto l = random_compact_set(rng, space);
    Rat h = hausdorff(space, k, l);
    CHECK(sendograph_distance(space, iota2(space, k), iota2(space, l)) == h);
    CHECK(endograph_distance(space, iota2(space, k), iota2(space, l)) == std::min(h, Rat(1)));
  }
}

TEST_CASE("trace sources replay deterministically") {
  auto e1 = build_example1();
  auto src = base_trace_source(e1, GridPoint{0, 0}, GridPoint{0, 1}, 64);
  auto t1 = materialize(src);
  auto t2 = materialize(src);
  CHECK(t1.values == t2.values);
  CHECK(as_source(t1).horizon == 64);
}
