#include <catch_amalgamated.hpp>

#include "fuzdyn/gallery.hpp"
#include "fuzdyn/hyper.hpp"
#include "fuzdyn/random_instances.hpp"

using namespace fuzdyn;

namespace {
using U = TableUniverse<Rat>;
using Set = CompactSet<U>;
}  // namespace

TEST_CASE("hausdorff basics") {
  SeededRng rng(1);
  auto space = random_metric_universe(rng, 10, 0);
  auto k = random_compact_set(rng, space);
  CHECK(hausdorff(space, k, k) == 0);

  // singletons collapse to the point distance
  std::uint32_t x = 0, y = static_cast<std::uint32_t>(space.size() - 1);
  CHECK(hausdorff(space, iota1(space, x), iota1(space, y)) == space.distance(x, y));
}

TEST_CASE("hausdorff on the example 1 pair") {
  auto sys = build_example1();
  CompactSet<Example1Universe> k(sys.space, {GridPoint{0, 0}});
  CompactSet<Example1Universe> l(sys.space, {GridPoint{0, 0}, GridPoint{0, 1}});
  CHECK(hausdorff(sys.space, k, l) == 1);  // 0 is not in A
}

TEST_CASE("hausdorff rejects mixed universes") {
  auto a = build_example1();
  Example1Universe other(DensitySet::custom({2, 3}));
  CompactSet<Example1Universe> k(a.space, {GridPoint{0, 0}});
  CompactSet<Example1Universe> l(other, {GridPoint{0, 0}});
  CHECK_THROWS_AS(hausdorff(a.space, k, l), domain_error);
}

TEST_CASE("compact sets reject empty input and dedupe") {
  auto sys = build_example1();
  std::vector<GridPoint> empty;
  CHECK_THROWS_AS(CompactSet<Example1Universe>(sys.space, empty), domain_error);
  CompactSet<Example1Universe> k(sys.space, {GridPoint{1, 0}, GridPoint{1, 0}});
  CHECK(k.size() == 1);
}

TEST_CASE("within_dilation matches the hausdorff characterization") {
  SeededRng rng(7);
  for (int t = 0; t < 300; ++t) {
    auto space = random_metric_universe(rng, 10, t);
    auto k = random_compact_set(rng, space);
    auto l = random_compact_set(rng, space);
    Rat h = hausdorff(space, k, l);
    // equality threshold and a strictly smaller one
    CHECK(within_dilation(space, k, l, h));
    CHECK(within_dilation(space, l, k, h));
    if (h > 0) {
      Rat eps = h / 2;
      bool both = within_dilation(space, k, l, eps) && within_dilation(space, l, k, eps);
      CHECK_FALSE(both);
    }
    if (k.subset_of(l)) CHECK(within_dilation(space, k, l, Rat(0)));
  }
}

TEST_CASE("within_dilation on a separated example pair") {
  auto sys = build_example1();
  CompactSet<Example1Universe> k(sys.space, {GridPoint{0, 0}});
  CompactSet<Example1Universe> l(sys.space, {GridPoint{0, 1}});
  CHECK_FALSE(within_dilation(sys.space, k, l, Rat(1, 2)));
}

TEST_CASE("hyper_apply maps images pointwise") {
  auto sys = build_example1();
  CompactSet<Example1Universe> k(sys.space, {GridPoint{0, 0}, GridPoint{0, 1}, GridPoint{3, 0}});
  auto img = hyper_apply(sys, k);
  CompactSet<Example1Universe> expect(sys.space, {GridPoint{1, 0}, GridPoint{1, 1}, GridPoint{4, 0}});
  CHECK(img == expect);

  CompactSet<Example1Universe> single(sys.space, {GridPoint{9, 1}});
  CHECK(hyper_apply(sys, single) == CompactSet<Example1Universe>(sys.space, {GridPoint{10, 1}}));
}

TEST_CASE("non-injective maps collapse images") {
  SeededRng rng(3);
  auto space = random_metric_universe(rng, 6, 0);
  DynSystem<U> sys{space, [](std::uint32_t) { return 0u; }, "collapse"};
  Set k(space, {0u, 1u, 2u});
  auto img = hyper_apply(sys, k);
  CHECK(img.size() == 1);
  CHECK(hausdorff(space, img, img) == 0);
}

TEST_CASE("hausdorff metric axioms on random sets") {
  SeededRng rng(11);
  for (int t = 0; t < 1000; ++t) {
    auto space = random_metric_universe(rng, 10, t);
    auto a = random_compact_set(rng, space);
    auto b = random_compact_set(rng, space);
    auto c = random_compact_set(rng, space);
    Rat ab = hausdorff(space, a, b), ba = hausdorff(space, b, a);
    CHECK(ab == ba);
    CHECK(ab >= 0);
    CHECK((ab == 0) == (a == b));
    CHECK(hausdorff(space, a, c) <= ab + hausdorff(space, b, c));
  }
}

TEST_CASE("union bound and union decomposition") {
  SeededRng rng(13);
  for (int t = 0; t < 500; ++t) {
    auto space = random_metric_universe(rng, 10, t);
    auto k1 = random_compact_set(rng, space);
    auto k2 = random_compact_set(rng, space);
    auto k3 = random_compact_set(rng, space);
    auto k4 = random_compact_set(rng, space);
    CHECK(hausdorff(space, set_union(space, k1, k2), set_union(space, k3, k4)) <=
          std::max(hausdorff(space, k1, k3), hausdorff(space, k2, k4)));
    auto u12 = set_union(space, k1, k2);
    CHECK(hausdorff(space, k1, k2) ==
          std::max(hausdorff(space, u12, k2), hausdorff(space, k1, u12)));
  }
}

TEST_CASE("hyper_apply distributes over unions") {
  auto sys = build_example3();
  SeededRng rng(17);
  const std::vector<Rat> ts = {Rat(0), Rat(1, 2), Rat(1)};
  for (int t = 0; t < 200; ++t) {
    std::vector<BandPoint> pa, pb;
    for (std::size_t i = 0; i < 1 + rng.next(4); ++i) pa.push_back({rng.next(12), ts[rng.next(3)]});
    for (std::size_t i = 0; i < 1 + rng.next(4); ++i) pb.push_back({rng.next(12), ts[rng.next(3)]});
    CompactSet<Example3Universe> a(sys.space, pa), b(sys.space, pb);
    CHECK(hyper_apply(sys, set_union(sys.space, a, b)) ==
          set_union(sys.space, hyper_apply(sys, a), hyper_apply(sys, b)));
  }
}
