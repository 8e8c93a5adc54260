#include <catch_amalgamated.hpp>

#include "fuzdyn/gallery.hpp"
#include "fuzdyn/proxsens.hpp"
#include "fuzdyn/random_instances.hpp"
#include "fuzdyn/suites.hpp"

using namespace fuzdyn;

namespace {
using TU = TableUniverse<Rat>;
}

TEST_CASE("proximal_min finds the block minima of example 1") {
  auto e1 = build_example1();
  auto pm = proximal_min(base_trace_source(e1, GridPoint{0, 0}, GridPoint{0, 1}, 720));
  CHECK(pm.value <= Rat(1, 720));
  CHECK(e1.space.density_set().contains(pm.index));

  std::vector<std::vector<Rat>> tab = {
      {Rat(0), Rat(5), Rat(8)}, {Rat(5), Rat(0), Rat(3)}, {Rat(8), Rat(3), Rat(0)}};
  TU space("toy", tab);
  DynSystem<TU> id{space, [](std::uint32_t p) { return p; }, "id"};
  auto pid = proximal_min(base_trace_source(id, 0u, 1u, 64));
  CHECK(pid.value == space.distance(0u, 1u));

  DynSystem<TU> collapse{space, [](std::uint32_t) { return 2u; }, "collapse"};
  auto pc = proximal_min(base_trace_source(collapse, 0u, 1u, 8));
  CHECK(pc.value == 0);
  CHECK(pc.index == 1);
}

TEST_CASE("lift_proximal_tuple: singleton tuples reduce to characteristic pairs") {
  auto e1 = build_example1();
  CompactSet<Example1Universe> k(e1.space, {GridPoint{0, 0}});
  CompactSet<Example1Universe> l(e1.space, {GridPoint{0, 0}, GridPoint{0, 1}});
  auto rep = lift_proximal_tuple(e1, {k}, {l}, {Rat(1)}, 64);
  CHECK(rep.pass());
  CHECK(rep.equal_rows == 64);  // chi_K vs chi_L: sup distance equals the hausdorff distance
}

TEST_CASE("lift_proximal_tuple: example 1 tuples dominate with equality") {
  auto e1 = build_example1();
  CompactSet<Example1Universe> k(e1.space, {GridPoint{0, 0}});
  CompactSet<Example1Universe> l(e1.space, {GridPoint{0, 0}, GridPoint{0, 1}});
  auto rep = lift_proximal_tuple(e1, {k, k, k}, {l, l, l}, {Rat(1, 3), Rat(2, 3), Rat(1)}, 128);
  CHECK(rep.pass());
  CHECK(rep.equal_rows == 128);
}

TEST_CASE("lift_proximal_tuple bound on random instances") {
  SeededRng rng(11);
  auto e3 = build_example3();
  const std::vector<Rat> ts = {Rat(0), Rat(1, 2), Rat(1)};
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 1 + rng.next(3);
    std::vector<CompactSet<Example3Universe>> ks, ls;
    std::vector<Rat> bps;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<BandPoint> ka, la;
      for (std::size_t q = 0; q < 1 + rng.next(3); ++q) ka.push_back({rng.next(12), ts[rng.next(3)]});
      for (std::size_t q = 0; q < 1 + rng.next(3); ++q) la.push_back({rng.next(12), ts[rng.next(3)]});
      ks.emplace_back(e3.space, ka);
      ls.emplace_back(e3.space, la);
    }
    for (std::size_t i = 0; i < n; ++i) bps.push_back(Rat(Int(i + 1), Int(n)));
    auto rep = lift_proximal_tuple(e3, ks, ls, bps, 32);
    CHECK(rep.pass());
  }
}

TEST_CASE("sensitivity search on the shift finds basis witnesses") {
  auto sys = build_shift(Rat(2));
  Rat delta(1, 4);
  for (const Rat& eps : {Rat(1), Rat(8)}) {
    CandidateGen<SeqVec> gen = [&sys, delta](std::size_t idx) -> std::optional<SeqVec> {
      if (idx >= 64) return std::nullopt;
      return sys.space.scale(seq_unit(static_cast<std::uint32_t>(idx + 1)), delta / 2);
    };
    auto w = sensitivity_search_base(sys, sys.space.zero(), delta, eps, 64, gen);
    REQUIRE(w.has_value());
    CHECK(revalidate(sys, *w));
    // separation 2^(n-1) * delta
    Rat expect = delta / 2;
    for (std::uint64_t i = 0; i < w->time_n; ++i) expect *= 2;
    CHECK(w->separation == expect);
  }
}

TEST_CASE("sensitivity search respects generator exhaustion and contracts") {
  auto sys = build_shift(Rat(2));
  // eps larger than anything reachable in the window
  CandidateGen<SeqVec> gen = [&sys](std::size_t idx) -> std::optional<SeqVec> {
    if (idx >= 4) return std::nullopt;
    return sys.space.scale(seq_unit(static_cast<std::uint32_t>(idx + 1)), Rat(1, 8));
  };
  auto none = sensitivity_search_base(sys, sys.space.zero(), Rat(1, 4), Rat(1000000), 8, gen);
  CHECK_FALSE(none.has_value());

  CandidateGen<SeqVec> bad = [&sys](std::size_t) -> std::optional<SeqVec> {
    return seq_unit(0, Rat(100));  // way outside the delta ball
  };
  CHECK_THROWS_AS(sensitivity_search_base(sys, sys.space.zero(), Rat(1, 4), Rat(1), 8, bad),
                  contract_error);
}

TEST_CASE("example 3 endograph level admits no witness (isometry)") {
  auto sys = build_example3();
  StepFuzzySet<Example3Universe> center(sys.space, {{BandPoint{0, Rat(0)}, Rat(1)}});
  Rat delta(1, 4), eps(1, 3);
  CandidateGen<StepFuzzySet<Example3Universe>> gen =
      [&sys, delta](std::size_t idx) -> std::optional<StepFuzzySet<Example3Universe>> {
    if (idx >= 6) return std::nullopt;
    Rat lvl = delta / Rat(Int(2 + idx));
    return StepFuzzySet<Example3Universe>(
        sys.space, {{BandPoint{0, Rat(0)}, Rat(1)}, {BandPoint{0, Rat(1)}, lvl}});
  };
  auto w = sensitivity_search_fuzzy(sys, MetricKind::endograph, center, delta, eps, 64, gen);
  CHECK_FALSE(w.has_value());

  // eps beyond the endograph diameter bound can never be witnessed
  auto w2 = sensitivity_search_fuzzy(sys, MetricKind::endograph, center, delta, Rat(2), 64, gen);
  CHECK_FALSE(w2.has_value());
}

TEST_CASE("hyper-level sensitivity search works through the hausdorff metric") {
  auto sys = build_shift(Rat(2));
  CompactSet<SeqUniverse> center(sys.space, {sys.space.zero()});
  Rat delta(1, 4), eps(4);
  CandidateGen<CompactSet<SeqUniverse>> gen =
      [&sys, delta](std::size_t idx) -> std::optional<CompactSet<SeqUniverse>> {
    if (idx >= 32) return std::nullopt;
    return CompactSet<SeqUniverse>(
        sys.space, {sys.space.zero(),
                    sys.space.scale(seq_unit(static_cast<std::uint32_t>(idx + 1)), delta / 2)});
  };
  auto w = sensitivity_search_hyper(sys, center, delta, eps, 64, gen);
  REQUIRE(w.has_value());
  CHECK(revalidate(sys, *w));
}

TEST_CASE("collective witness construction on the shift") {
  auto sys = build_shift(Rat(2));
  Rat eps(1), delta(1, 2);
  // x_tilde = (delta/2) e_6: T^6 x_tilde = 32 * delta/2 = 8 > eps
  SeqVec tilde = sys.space.scale(seq_unit(6), delta / 2);
  std::vector<SeqVec> xs = {sys.space.zero(), seq_unit(1), seq_unit(2)};
  auto rep = collective_witness(sys, xs, tilde, 6, eps, delta);
  CHECK(rep.pass);
  CHECK(rep.min_separation > eps / 2);
  CHECK(rep.max_displacement < delta);

  // single point
  auto rep1 = collective_witness(sys, {sys.space.zero()}, tilde, 6, eps, delta);
  CHECK(rep1.pass);

  // points already separated at time n keep their identity
  std::vector<SeqVec> spread = {sys.space.zero(), seq_unit(7, Rat(5))};
  auto rep2 = collective_witness(sys, spread, tilde, 6, eps, delta);
  CHECK(rep2.pass);
  CHECK(rep2.ys[1] == spread[1]);
}

TEST_CASE("collective witness rejects bad perturbations") {
  auto sys = build_shift(Rat(2));
  SeqVec weak = sys.space.scale(seq_unit(1), Rat(1, 100));
  CHECK_THROWS_AS(collective_witness(sys, {sys.space.zero()}, weak, 1, Rat(100), Rat(1)),
                  domain_error);
}

TEST_CASE("level extraction instantiates all three metric cases") {
  auto e1 = build_example1();
  // 24 sits in A: chi at column 24 is 1/24-close to a two-point fuzzy set
  CompactSet<Example1Universe> k(e1.space, {GridPoint{24, 0}});
  StepFuzzySet<Example1Universe> v(e1.space,
                                   {{GridPoint{24, 0}, Rat(1)}, {GridPoint{24, 1}, Rat(2, 5)}});
  Rat delta(1, 10), eps(1, 3);
  std::uint64_t n = 100;  // 124 is off A: distance jumps to 1
  REQUIRE_FALSE(e1.space.density_set().contains(124));
  for (auto metric : kAllMetrics) {
    auto ex = sensitivity_extract_level(e1, metric, k, v, n, eps, delta);
    CHECK(ex.separation > eps);
    CHECK(ex.closeness < delta);
    if (metric == MetricKind::sendograph) CHECK(ex.alpha <= Rat(1) - eps);
    if (metric == MetricKind::endograph) {
      CHECK(ex.alpha > eps);
      CHECK(ex.alpha <= Rat(1) - eps);
    }
    // the extraction must reproduce by direct recomputation
    auto kn = hyper_iterate(e1, k, n);
    auto vn = zadeh_iterate(e1, v, n);
    CHECK(hausdorff(e1.space, kn, level_set(e1.space, vn, ex.alpha)) == ex.separation);
    CHECK(hausdorff(e1.space, k, level_set(e1.space, v, ex.alpha)) == ex.closeness);
  }
}

TEST_CASE("level extraction rejects unmet preconditions") {
  auto e1 = build_example1();
  CompactSet<Example1Universe> k(e1.space, {GridPoint{24, 0}});
  StepFuzzySet<Example1Universe> v(e1.space,
                                   {{GridPoint{24, 0}, Rat(1)}, {GridPoint{24, 1}, Rat(2, 5)}});
  CHECK_THROWS_AS(sensitivity_extract_level(e1, MetricKind::endograph, k, v, 100, Rat(2, 3), Rat(1, 10)),
                  domain_error);  // endograph eps must stay below 1/2
  CHECK_THROWS_AS(sensitivity_extract_level(e1, MetricKind::sup, k, v, 100, Rat(1, 3), Rat(1, 2)),
                  domain_error);  // delta must stay below eps
  // far-apart start: not delta-close
  StepFuzzySet<Example1Universe> far(e1.space, {{GridPoint{50, 0}, Rat(1)}});
  CHECK_THROWS_AS(sensitivity_extract_level(e1, MetricKind::sup, k, far, 100, Rat(1, 3), Rat(1, 10)),
                  domain_error);
}

TEST_CASE("extraction suite runs clean at a reduced size") {
  auto rep = sensitivity_extraction_suite(200, 2025);
  for (const auto& c : rep.claims) {
    INFO(c.id);
    CHECK(c.pass);
  }
}
