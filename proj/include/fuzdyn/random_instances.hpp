#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fuzdyn/fuzzy.hpp"
#include "fuzdyn/hyper.hpp"
#include "fuzdyn/numeric.hpp"
#include "fuzdyn/spaces.hpp"

namespace fuzdyn {

// Deterministic helper around mt19937_64; all sampling goes through modulo so
// outputs are identical across standard libraries.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next(std::uint64_t bound) { return bound ? eng_() % bound : 0; }
  std::uint64_t raw() { return eng_(); }
  std::uint64_t operator()() { return eng_(); }
  bool flip() { return (eng_() & 1) != 0; }

  // level on the 1/64 grid, in (0,1]
  Rat level64() { return Rat(Int(1 + next(64)), Int(64)); }

 private:
  std::mt19937_64 eng_;
};

// Random finite metric space with exact rational distances: random integer
// edge weights closed under shortest paths, then a global 1/q scale.
inline TableUniverse<Rat> random_metric_universe(SeededRng& rng, std::size_t max_points = 20,
                                                 std::uint64_t tag = 0) {
  std::size_t n = 2 + rng.next(max_points - 1);
  std::vector<std::vector<std::uint64_t>> w(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) w[i][j] = w[j][i] = 1 + rng.next(32);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && w[i][k] + w[k][j] < w[i][j]) w[i][j] = w[i][k] + w[k][j];
  Int den(1 + rng.next(4));
  std::vector<std::vector<Rat>> table(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i][j] = Rat(Int(w[i][j]), den);
  return TableUniverse<Rat>("random-" + std::to_string(tag), std::move(table));
}

inline CompactSet<TableUniverse<Rat>> random_compact_set(SeededRng& rng,
                                                         const TableUniverse<Rat>& space,
                                                         std::size_t max_size = 6) {
  std::size_t n = space.size();
  std::size_t target = 1 + rng.next(std::min(max_size, n));
  std::vector<std::uint32_t> pts;
  for (std::size_t i = 0; i < target; ++i) pts.push_back(static_cast<std::uint32_t>(rng.next(n)));
  return CompactSet<TableUniverse<Rat>>(space, std::move(pts));
}

// Step fuzzy set with at most max_levels distinct levels drawn from the 1/64
// grid (always including 1) and random non-empty level sets.
inline StepFuzzySet<TableUniverse<Rat>> random_step_fuzzy(SeededRng& rng,
                                                          const TableUniverse<Rat>& space,
                                                          std::size_t max_levels = 5,
                                                          std::size_t max_set = 6) {
  std::size_t levels = 1 + rng.next(max_levels);
  std::vector<Rat> alphas;
  alphas.push_back(Rat(1));
  while (alphas.size() < levels) {
    Rat a = rng.level64();
    bool dup = false;
    for (const auto& b : alphas) dup = dup || a == b;
    if (!dup) alphas.push_back(a);
  }
  std::sort(alphas.begin(), alphas.end());
  std::vector<std::pair<Rat, CompactSet<TableUniverse<Rat>>>> spec;
  spec.reserve(alphas.size());
  for (const auto& a : alphas) spec.emplace_back(a, random_compact_set(rng, space, max_set));
  return from_levels(space, spec);
}

// Fuzzy set whose level sets mostly live on the points of K, so that the
// characteristic-vs-fuzzy distances land inside the key-lemma windows often.
inline StepFuzzySet<TableUniverse<Rat>> random_step_fuzzy_near(
    SeededRng& rng, const TableUniverse<Rat>& space, const CompactSet<TableUniverse<Rat>>& k,
    std::size_t max_levels = 4) {
  std::size_t levels = 1 + rng.next(max_levels);
  std::vector<Rat> alphas;
  alphas.push_back(Rat(1));
  while (alphas.size() < levels) {
    Rat a = rng.level64();
    bool dup = false;
    for (const auto& b : alphas) dup = dup || a == b;
    if (!dup) alphas.push_back(a);
  }
  std::sort(alphas.begin(), alphas.end());
  auto pick_near = [&]() {
    std::vector<std::uint32_t> pts;
    std::size_t m = 1 + rng.next(k.size());
    for (std::size_t i = 0; i < m; ++i)
      pts.push_back(k.points()[rng.next(k.size())]);
    if (rng.next(3) == 0) pts.push_back(static_cast<std::uint32_t>(rng.next(space.size())));
    return CompactSet<TableUniverse<Rat>>(space, std::move(pts));
  };
  std::vector<std::pair<Rat, CompactSet<TableUniverse<Rat>>>> spec;
  spec.reserve(alphas.size());
  for (const auto& a : alphas) spec.emplace_back(a, pick_near());
  return from_levels(space, spec);
}

}  // namespace fuzdyn
