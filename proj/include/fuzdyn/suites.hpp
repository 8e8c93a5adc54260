#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fuzdyn/chaos.hpp"
#include "fuzdyn/gallery.hpp"
#include "fuzdyn/metrics.hpp"
#include "fuzdyn/proxsens.hpp"
#include "fuzdyn/random_instances.hpp"

namespace fuzdyn {

// Seeded randomized check suites over the metric layer. Each returns a claim
// report with exact violation counts; a violation count of zero is the pass
// condition. These back both the CLI and the acceptance criteria.

// Chain inequality, the characteristic-function identities, and the level-set
// lower bounds, on random step fuzzy pairs over random rational universes.
inline VerifyReport metric_identity_suite(std::uint64_t trials, std::uint64_t seed) {
  VerifyReport rep;
  rep.title = "metric-identities";
  SeededRng rng(seed);
  using U = TableUniverse<Rat>;
  std::uint64_t chain_bad = 0, singleton_bad = 0, char_bad = 0, char_pair_bad = 0, floor_bad = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    U space = random_metric_universe(rng, 20, t);
    auto u = random_step_fuzzy(rng, space);
    auto v = random_step_fuzzy(rng, space);
    Rat de = endograph_distance(space, u, v);
    Rat ds = sendograph_distance(space, u, v);
    Rat d0 = skorokhod_distance(space, u, v);
    Rat di = sup_distance(space, u, v);
    if (!(de <= ds && ds <= d0 && d0 <= di && de <= Rat(1))) ++chain_bad;

    // chi_{x} against u
    std::uint32_t x = static_cast<std::uint32_t>(rng.next(space.size()));
    auto chix = characteristic(space, iota1(space, x));
    Rat expect = hausdorff(space, iota1(space, x), support(space, u));
    if (!(sendograph_distance(space, chix, u) == expect &&
          skorokhod_distance(space, chix, u) == expect && sup_distance(space, chix, u) == expect))
      ++singleton_bad;

    // chi_K against u
    auto k = random_compact_set(rng, space);
    auto chik = characteristic(space, k);
    Rat both = std::max(hausdorff(space, k, support(space, u)),
                        hausdorff(space, k, level_set(space, u, Rat(1))));
    if (!(skorokhod_distance(space, chik, u) == both && sup_distance(space, chik, u) == both))
      ++char_bad;

    // chi_K against chi_L
    auto l = random_compact_set(rng, space);
    auto chil = characteristic(space, l);
    Rat h = hausdorff(space, k, l);
    Rat h1 = h < Rat(1) ? h : Rat(1);
    if (!(endograph_distance(space, chik, chil) == h1 &&
          sendograph_distance(space, chik, chil) == h &&
          skorokhod_distance(space, chik, chil) == h && sup_distance(space, chik, chil) == h))
      ++char_pair_bad;

    // level-set floors
    Rat h00 = hausdorff(space, support(space, u), support(space, v));
    Rat h11 = hausdorff(space, level_set(space, u, Rat(1)), level_set(space, v, Rat(1)));
    if (!(h00 <= ds && std::max(h00, h11) <= d0)) ++floor_bad;
  }
  auto claim = [&](const std::string& id, std::uint64_t bad) {
    Claim c{id, bad == 0, {}};
    gallery_detail::put(c, "violations", bad);
    gallery_detail::put(c, "trials", trials);
    rep.claims.push_back(std::move(c));
  };
  claim("metrics.chain", chain_bad);
  claim("metrics.singleton-identity", singleton_bad);
  claim("metrics.characteristic-identity", char_bad);
  claim("metrics.characteristic-pair", char_pair_bad);
  claim("metrics.level-floors", floor_bad);
  return rep;
}

// The key / key2 lemma implications, exactly, on random (K, u) instances.
inline VerifyReport key_lemma_suite(std::uint64_t trials, std::uint64_t seed) {
  VerifyReport rep;
  rep.title = "key-lemmas";
  SeededRng rng(seed);
  using U = TableUniverse<Rat>;
  std::uint64_t key_bad = 0, k2a_bad = 0, k2b_bad = 0, k2c_bad = 0;
  std::uint64_t key_hits = 0, k2a_hits = 0, k2b_hits = 0, k2c_hits = 0;
  const std::vector<Rat> fractions = {Rat(1, 4), Rat(1, 2), Rat(3, 4)};
  for (std::uint64_t t = 0; t < trials; ++t) {
    U space = random_metric_universe(rng, 14, t);
    auto k = random_compact_set(rng, space);
    // alternate far-flung and near-K fuzzy sets so both lemma windows and
    // their negations get exercised
    auto u = (t % 2 == 0) ? random_step_fuzzy(rng, space) : random_step_fuzzy_near(rng, space, k);
    auto chik = characteristic(space, k);
    Rat de = endograph_distance(space, chik, u);
    Rat ds = sendograph_distance(space, chik, u);

    if (de < Rat(1, 2)) {
      ++key_hits;
      for (const auto& a : level_representatives(u, de, true, Rat(1) - de))
        if (!(hausdorff(space, k, level_set(space, u, a)) <= de)) ++key_bad;
    }
    if (ds < Rat(1)) {
      ++k2a_hits;
      for (const auto& a : level_representatives(u, Rat(0), false, Rat(1) - ds))
        if (!(hausdorff(space, k, level_set(space, u, a)) <= ds)) ++k2a_bad;
    }
    Rat ds1 = ds < Rat(1) ? ds : Rat(1);
    if (ds1 > 0) {
      for (const auto& f : fractions) {
        Rat eps = f * ds1;  // 0 < eps < min(ds, 1)
        ++k2b_hits;
        bool found = false;
        for (const auto& a : level_representatives(u, Rat(0), false, Rat(1) - eps))
          if (hausdorff(space, k, level_set(space, u, a)) > eps) found = true;
        if (!found) ++k2b_bad;
      }
    }
    Rat de1 = de < Rat(1, 2) ? de : Rat(1, 2);
    if (de1 > 0) {
      for (const auto& f : fractions) {
        Rat eps = f * de1;  // 0 < eps < min(de, 1/2)
        ++k2c_hits;
        bool found = false;
        for (const auto& a : level_representatives(u, eps, true, Rat(1) - eps))
          if (hausdorff(space, k, level_set(space, u, a)) > eps) found = true;
        if (!found) ++k2c_bad;
      }
    }
  }
  auto claim = [&](const std::string& id, std::uint64_t bad, std::uint64_t hits) {
    Claim c{id, bad == 0 && hits > 0, {}};
    gallery_detail::put(c, "violations", bad);
    gallery_detail::put(c, "instances", hits);
    rep.claims.push_back(std::move(c));
  };
  claim("key.window", key_bad, key_hits);
  claim("key2.a", k2a_bad, k2a_hits);
  claim("key2.b", k2b_bad, k2b_hits);
  claim("key2.c", k2c_bad, k2c_hits);
  return rep;
}

// Exact transfer formulas for the u^alpha family over Example 1, Example 3
// and the weighted shift.
inline VerifyReport transfer_suite(std::uint64_t instances, std::uint64_t horizon,
                                   std::uint64_t seed) {
  VerifyReport rep;
  rep.title = "transfer";
  SeededRng rng(seed);
  std::uint64_t bad = 0, runs = 0;
  Rat worst(0);

  auto levels_pair = [&](Rat& alpha, Rat& beta) {
    // distinct dyadic levels in (0,1)
    do {
      alpha = Rat(Int(1 + rng.next(63)), Int(64));
      beta = Rat(Int(1 + rng.next(63)), Int(64));
    } while (alpha == beta);
    if (beta > alpha) std::swap(alpha, beta);
  };

  auto e1 = build_example1();
  auto e3 = build_example3();
  auto sh = build_shift(Rat(2));
  for (std::uint64_t t = 0; t < instances; ++t) {
    Rat alpha, beta;
    levels_pair(alpha, beta);
    Rat disc(-1);
    switch (t % 3) {
      case 0: {
        std::vector<GridPoint> lpts;
        std::size_t m = 2 + rng.next(4);
        for (std::size_t i = 0; i < m; ++i)
          lpts.push_back({rng.next(30), static_cast<std::uint8_t>(rng.flip() ? 1 : 0)});
        CompactSet<Example1Universe> l(e1.space, lpts);
        std::vector<GridPoint> kpts(l.points().begin(),
                                    l.points().begin() + 1 + rng.next(l.size() - 1));
        if (kpts.size() == l.size()) kpts.pop_back();
        CompactSet<Example1Universe> k(e1.space, kpts);
        disc = transfer_check(e1, k, l, alpha, beta, horizon).max_discrepancy;
        break;
      }
      case 1: {
        std::vector<BandPoint> lpts;
        std::size_t m = 2 + rng.next(4);
        std::vector<Rat> ts = {Rat(0), Rat(1, 2), Rat(1)};
        for (std::size_t i = 0; i < m; ++i) lpts.push_back({rng.next(30), ts[rng.next(3)]});
        CompactSet<Example3Universe> l(e3.space, lpts);
        std::vector<BandPoint> kpts(l.points().begin(),
                                    l.points().begin() + 1 + rng.next(l.size() - 1));
        if (kpts.size() == l.size()) kpts.pop_back();
        CompactSet<Example3Universe> k(e3.space, kpts);
        disc = transfer_check(e3, k, l, alpha, beta, horizon).max_discrepancy;
        break;
      }
      default: {
        std::vector<SeqVec> lpts = {sh.space.zero()};
        std::size_t m = 1 + rng.next(3);
        for (std::size_t i = 0; i < m; ++i) {
          Rat coeff(Int(1 + rng.next(8)), Int(1 + rng.next(4)));
          lpts.push_back(seq_unit(static_cast<std::uint32_t>(rng.next(8)), coeff));
        }
        CompactSet<SeqUniverse> l(sh.space, lpts);
        std::vector<SeqVec> kpts(l.points().begin(),
                                 l.points().begin() + 1 + rng.next(l.size() - 1));
        if (kpts.size() == l.size()) kpts.pop_back();
        CompactSet<SeqUniverse> k(sh.space, kpts);
        disc = transfer_check(sh, k, l, alpha, beta, horizon).max_discrepancy;
        break;
      }
    }
    ++runs;
    if (disc != 0) ++bad;
    if (disc > worst) worst = disc;
  }
  Claim c{"transfer.exact", bad == 0 && runs == instances, {}};
  gallery_detail::put(c, "instances", runs);
  gallery_detail::put(c, "horizon", horizon);
  gallery_detail::put(c, "violations", bad);
  gallery_detail::put(c, "max_discrepancy", worst);
  rep.claims.push_back(std::move(c));
  return rep;
}

// Forward-constructed sensitivity events on Example 1 and the shift, across
// all four metrics; level extraction must succeed on every one.
inline VerifyReport sensitivity_extraction_suite(std::uint64_t instances, std::uint64_t seed) {
  VerifyReport rep;
  rep.title = "sensitivity-extraction";
  SeededRng rng(seed);
  auto e1 = build_example1();
  auto sh = build_shift(Rat(2));
  std::uint64_t ok = 0, failed = 0, built = 0;

  for (std::uint64_t t = 0; t < instances; ++t) {
    MetricKind metric = kAllMetrics[t % 4];
    // eps < 1/2 keeps every metric case admissible
    Rat eps = Rat(Int(4 + rng.next(11)), Int(32));      // in [1/8, 7/16]
    Rat lambda = eps + Rat(Int(1 + rng.next(8)), Int(32));  // level above eps
    if (lambda > 1) lambda = Rat(31, 32);

    try {
      if (t % 2 == 0) {
        // Example 1: a block column starts close (1/b) and drifts to 1
        std::uint64_t b = 720 + rng.next(2000);
        while (!e1.space.density_set().contains(b)) ++b;
        std::uint64_t n = 1 + rng.next(64);
        while (e1.space.density_set().contains(b + n)) ++n;
        Rat delta = Rat(Int(2), Int(b));  // < eps since b >= 720 and eps >= 1/8
        CompactSet<Example1Universe> k(e1.space, {GridPoint{b, 0}});
        StepFuzzySet<Example1Universe> v(e1.space,
                                         {{GridPoint{b, 0}, Rat(1)}, {GridPoint{b, 1}, lambda}});
        ++built;
        auto ex = sensitivity_extract_level(e1, metric, k, v, n, eps, delta);
        bool good = ex.separation > eps && ex.closeness < delta;
        good = good && hausdorff(e1.space, hyper_iterate(e1, k, n),
                                 level_set(e1.space, zadeh_iterate(e1, v, n), ex.alpha)) ==
                           ex.separation;
        if (good) ++ok; else ++failed;
      } else {
        // shift: a small far coefficient explodes after m steps; m is large
        // enough that coeff * 2^m >= 1 > eps
        std::uint32_t m = 7 + static_cast<std::uint32_t>(rng.next(9));
        Rat coeff = Rat(Int(1), Int(64 + rng.next(64)));
        Rat delta = coeff * 2;
        CompactSet<SeqUniverse> k(sh.space, {sh.space.zero()});
        StepFuzzySet<SeqUniverse> v(sh.space,
                                    {{sh.space.zero(), Rat(1)}, {seq_unit(m, coeff), lambda}});
        ++built;
        auto ex = sensitivity_extract_level(sh, metric, k, v, m, eps, delta);
        bool good = ex.separation > eps && ex.closeness < delta;
        if (good) ++ok; else ++failed;
      }
    } catch (const domain_error&) {
      ++failed;  // the forward construction must always satisfy the preconditions
    }
  }
  Claim c{"sensitivity.extraction", failed == 0 && built == instances && ok == built, {}};
  gallery_detail::put(c, "instances_built", built);
  gallery_detail::put(c, "extractions_ok", ok);
  gallery_detail::put(c, "failures", failed);
  rep.claims.push_back(std::move(c));
  return rep;
}

}  // namespace fuzdyn
