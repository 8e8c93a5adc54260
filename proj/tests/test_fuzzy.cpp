#include <catch_amalgamated.hpp>

#include "fuzdyn/fuzzy.hpp"
#include "fuzdyn/gallery.hpp"
#include "fuzdyn/random_instances.hpp"

using namespace fuzdyn;

namespace {
using U = TableUniverse<Rat>;
using Set = CompactSet<U>;
using FS = StepFuzzySet<U>;

U toy_space() {
  std::vector<std::vector<Rat>> tab = {
      {Rat(0), Rat(5), Rat(8)}, {Rat(5), Rat(0), Rat(3)}, {Rat(8), Rat(3), Rat(0)}};
  return U("toy", tab);
}
}  // namespace

TEST_CASE("from_levels: characteristic functions and the u^alpha shape") {
  auto space = toy_space();
  Set k(space, {0u});
  Set l(space, {0u, 1u});

  auto chi = from_levels(space, {{Rat(1), k}});
  CHECK(chi.value(0) == 1);
  CHECK(chi.value(1) == 0);

  Rat alpha(1, 3);
  auto ua = from_levels(space, {{alpha, l}, {Rat(1), k}});
  CHECK(ua.value(0) == 1);
  CHECK(ua.value(1) == alpha);
  CHECK(level_set(space, ua, alpha) == l);
  CHECK(level_set(space, ua, Rat(1, 2)) == k);

  // overlapping level sets take the max
  auto overlap = from_levels(space, {{Rat(1, 4), l}, {Rat(1), l}});
  CHECK(overlap.value(1) == 1);
}

TEST_CASE("from_levels validates its input") {
  auto space = toy_space();
  Set k(space, {0u});
  CHECK_THROWS_AS(from_levels(space, {{Rat(1, 2), k}}), domain_error);  // top level != 1
  CHECK_THROWS_AS(from_levels(space, {{Rat(1), k}, {Rat(1), k}}), domain_error);  // not increasing
  std::vector<std::pair<Rat, Set>> empty;
  CHECK_THROWS_AS(from_levels(space, empty), domain_error);
}

TEST_CASE("normality is enforced at construction") {
  auto space = toy_space();
  std::vector<FS::entry> bad = {{0u, Rat(1, 2)}};
  CHECK_THROWS_AS(FS(space, bad), domain_error);
  std::vector<FS::entry> zero_level = {{0u, Rat(0)}};
  CHECK_THROWS_AS(FS(space, zero_level), domain_error);
}

TEST_CASE("level sets never come back empty") {
  auto space = toy_space();
  FS u(space, {{0u, Rat(1)}, {1u, Rat(1, 4)}});
  CHECK(level_set(space, u, Rat(1)).size() == 1);
  CHECK(level_set(space, u, Rat(0)).size() == 2);
  CHECK(level_set(space, u, Rat(1, 4)).size() == 2);
  CHECK(level_set(space, u, Rat(3, 10)).size() == 1);
}

TEST_CASE("discretize_levels returns the exact jump grid") {
  auto space = toy_space();
  Set k(space, {0u});
  Set l(space, {0u, 1u});
  auto chi = characteristic(space, k);
  auto dec = discretize_levels(space, chi, Rat(1, 10));
  CHECK(dec.breakpoints == std::vector<Rat>{Rat(0), Rat(1)});

  auto uhalf = from_levels(space, {{Rat(1, 2), l}, {Rat(1), k}});
  auto dec2 = discretize_levels(space, uhalf, Rat(1, 10));
  CHECK(dec2.breakpoints == std::vector<Rat>{Rat(0), Rat(1, 2), Rat(1)});

  FS three(space, {{0u, Rat(1)}, {1u, Rat(1, 2)}, {2u, Rat(1, 4)}});
  auto dec3 = discretize_levels(space, three, Rat(1, 100));
  CHECK(dec3.breakpoints == std::vector<Rat>{Rat(0), Rat(1, 4), Rat(1, 2), Rat(1)});

  for (const auto* d : {&dec, &dec2, &dec3}) CHECK(d->breakpoints.back() == 1);
  CHECK(decomposition_satisfies(space, three, dec3, Rat(1, 1000000)));
  CHECK(decomposition_reconstructs(space, three, dec3));
  CHECK(decomposition_reconstructs(space, uhalf, dec2));
}

TEST_CASE("zadeh extension: characteristic functions and composition") {
  auto e1 = build_example1();
  CompactSet<Example1Universe> k(e1.space, {GridPoint{0, 0}, GridPoint{2, 1}});
  auto chi = characteristic(e1.space, k);
  auto img = zadeh_apply(e1, chi);
  CHECK(img == characteristic(e1.space, hyper_apply(e1, k)));

  // two single steps equal one double step
  DynSystem<Example1Universe> doubled{
      e1.space, [&e1](const GridPoint& p) { return e1.step(e1.step(p)); }, "f^2"};
  StepFuzzySet<Example1Universe> u(e1.space,
                                   {{GridPoint{0, 0}, Rat(1)}, {GridPoint{5, 1}, Rat(1, 3)}});
  CHECK(zadeh_apply(e1, zadeh_apply(e1, u)) == zadeh_apply(doubled, u));
}

TEST_CASE("zadeh extension takes the max over collapsing preimages") {
  auto space = toy_space();
  DynSystem<U> collapse{space, [](std::uint32_t) { return 2u; }, "const"};
  FS u(space, {{0u, Rat(1, 2)}, {1u, Rat(1)}});
  auto img = zadeh_apply(collapse, u);
  CHECK(img.support_size() == 1);
  CHECK(img.value(2) == 1);
}

TEST_CASE("zadeh commutes with level sets along orbits") {
  auto sys = build_example3();
  SeededRng rng(23);
  for (int t = 0; t < 100; ++t) {
    auto u = random_example3_fuzzy(sys.space, rng);
    auto ui = u;
    auto levels = u.jump_levels();
    for (int j = 0; j < 5; ++j) {
      ui = zadeh_apply(sys, ui);
      for (const auto& a : levels) {
        auto lhs = level_set(sys.space, ui, a);
        auto rhs = hyper_iterate(sys, level_set(sys.space, u, a), static_cast<std::uint64_t>(j + 1));
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("text serialization round-trips and validates") {
  auto e1 = build_example1();
  StepFuzzySet<Example1Universe> u(e1.space, {{GridPoint{0, 0}, Rat(1)},
                                              {GridPoint{3, 1}, Rat(2, 3)},
                                              {GridPoint{7, 0}, Rat(1, 64)}});
  auto text = to_text(e1.space, u);
  CHECK(fuzzy_from_text(e1.space, text) == u);

  // rejects non-normal payloads
  std::string bad = "(0,0)\t1/2\n";
  CHECK_THROWS_AS(fuzzy_from_text(e1.space, bad), domain_error);
  std::string garbled = "(0,0) 1/2\n";
  CHECK_THROWS_AS(fuzzy_from_text(e1.space, garbled), domain_error);

  SeqUniverse seq;
  StepFuzzySet<SeqUniverse> v(seq, {{seq.zero(), Rat(1)}, {seq_unit(2, Rat(5, 4)), Rat(1, 2)}});
  CHECK(fuzzy_from_text(seq, to_text(seq, v)) == v);
}

TEST_CASE("graph clouds sample the column structure") {
  auto space = toy_space();
  auto chi = characteristic(space, Set(space, {1u}));
  auto cloud = graph_cloud(space, chi, GraphKind::sendograph, 4);
  REQUIRE(cloud.points.size() == 5);
  for (unsigned k = 0; k <= 4; ++k) {
    bool found = false;
    for (const auto& [p, a] : cloud.points) found = found || (p == 1u && a == Rat(Int(k), Int(4)));
    CHECK(found);
  }

  // endograph clouds carry the shared floor
  FS u(space, {{0u, Rat(1)}});
  FS v(space, {{1u, Rat(1)}});
  auto cu = graph_cloud(space, u, GraphKind::endograph, 4, {0u, 1u});
  bool floor_there = false;
  for (const auto& [p, a] : cu.points) floor_there = floor_there || (p == 1u && a == 0);
  CHECK(floor_there);
}
