#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzdyn/chaos.hpp"
#include "fuzdyn/errors.hpp"
#include "fuzdyn/fuzzy.hpp"
#include "fuzdyn/hyper.hpp"
#include "fuzdyn/metrics.hpp"

namespace fuzdyn {

// ---------------------------------------------------------------------------
// proximality

struct ProximalMin {
  Rat value;
  std::uint64_t index = 0;  // first attaining index, 1-based
};

inline ProximalMin proximal_min(const TraceSource& src) {
  if (src.horizon < 1) throw domain_error("proximal_min: horizon must be >= 1");
  auto next = src.open();
  ProximalMin out{next(), 1};
  for (std::uint64_t j = 2; j <= src.horizon; ++j) {
    Rat v = next();
    if (rat_less(v, out.value)) {
      out.value = v;
      out.index = j;
    }
  }
  return out;
}

inline ProximalMin proximal_min(const DistanceTrace& trace) { return proximal_min(as_source(trace)); }

// Lifts proximal tuples of compact sets to fuzzy sets u' = max_l alpha_l
// chi(K_l) and checks the domination inequality
//   d_inf(zadeh^n u', zadeh^n v') <= max_l d_H(hyper^n K_l, hyper^n L_l)
// for every n up to the horizon.
template <Universe U>
struct LiftProximalReport {
  StepFuzzySet<U> u_prime, v_prime;
  Rat max_excess;            // max over n of lhs - rhs, clamped at 0
  std::uint64_t equal_rows = 0;
  std::uint64_t horizon = 0;
  bool pass() const { return max_excess == 0; }
};

template <Universe U>
LiftProximalReport<U> lift_proximal_tuple(const DynSystem<U>& sys,
                                          const std::vector<CompactSet<U>>& ks,
                                          const std::vector<CompactSet<U>>& ls,
                                          const std::vector<Rat>& breakpoints,
                                          std::uint64_t horizon)
  requires std::same_as<scalar_t<U>, Rat>
{
  if (ks.empty() || ks.size() != ls.size() || ks.size() != breakpoints.size())
    throw domain_error("lift_proximal_tuple: tuples and breakpoints must have equal size >= 1");
  const U& space = sys.space;
  std::vector<std::pair<Rat, CompactSet<U>>> lu, lv;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    lu.emplace_back(breakpoints[i], ks[i]);
    lv.emplace_back(breakpoints[i], ls[i]);
  }
  LiftProximalReport<U> rep{from_levels(space, lu), from_levels(space, lv), Rat(0), 0, horizon};

  auto u = rep.u_prime;
  auto v = rep.v_prime;
  auto kimg = ks;
  auto limg = ls;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    u = zadeh_apply(sys, u);
    v = zadeh_apply(sys, v);
    for (std::size_t i = 0; i < kimg.size(); ++i) {
      kimg[i] = hyper_apply(sys, kimg[i]);
      limg[i] = hyper_apply(sys, limg[i]);
    }
    Rat lhs = sup_distance(space, u, v);
    Rat rhs = hausdorff(space, kimg[0], limg[0]);
    for (std::size_t i = 1; i < kimg.size(); ++i) {
      Rat h = hausdorff(space, kimg[i], limg[i]);
      if (h > rhs) rhs = h;
    }
    if (lhs == rhs) ++rep.equal_rows;
    if (lhs > rhs) {
      Rat excess = lhs - rhs;
      if (excess > rep.max_excess) rep.max_excess = excess;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// sensitivity

template <class Obj>
struct SensitivityWitness {
  Obj center;
  Obj neighbor;
  std::uint64_t time_n = 0;
  Rat delta, eps;
  Rat initial_distance;
  Rat separation;
};

// Deterministic candidate enumeration: index -> candidate, empty when
// exhausted. Candidates must lie strictly within delta of the center.
template <class Obj>
using CandidateGen = std::function<std::optional<Obj>(std::size_t)>;

namespace detail {
template <class Obj, class DistFn, class StepFn>
std::optional<SensitivityWitness<Obj>> sensitivity_search_impl(
    const Obj& center, const Rat& delta, const Rat& eps, std::uint64_t horizon,
    const CandidateGen<Obj>& gen, DistFn&& dist, StepFn&& step) {
  if (!(delta > 0) || !(eps > 0)) throw domain_error("sensitivity_search: delta, eps must be positive");
  for (std::size_t idx = 0;; ++idx) {
    auto cand = gen(idx);
    if (!cand) return std::nullopt;
    Rat d0 = dist(center, *cand);
    if (!(d0 < delta))
      throw contract_error("sensitivity_search: generator produced a candidate outside the delta-ball");
    Obj x = center, y = *cand;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
      x = step(x);
      y = step(y);
      Rat d = dist(x, y);
      if (d > eps)
        return SensitivityWitness<Obj>{center, *cand, n, delta, eps, d0, d};
    }
  }
}
}  // namespace detail

template <Universe U>
std::optional<SensitivityWitness<point_t<U>>> sensitivity_search_base(
    const DynSystem<U>& sys, const point_t<U>& center, const Rat& delta, const Rat& eps,
    std::uint64_t horizon, const CandidateGen<point_t<U>>& gen)
  requires std::same_as<scalar_t<U>, Rat>
{
  return detail::sensitivity_search_impl(
      center, delta, eps, horizon, gen,
      [&](const point_t<U>& a, const point_t<U>& b) { return sys.space.distance(a, b); },
      [&](const point_t<U>& p) { return sys.step(p); });
}

template <Universe U>
std::optional<SensitivityWitness<CompactSet<U>>> sensitivity_search_hyper(
    const DynSystem<U>& sys, const CompactSet<U>& center, const Rat& delta, const Rat& eps,
    std::uint64_t horizon, const CandidateGen<CompactSet<U>>& gen)
  requires std::same_as<scalar_t<U>, Rat>
{
  return detail::sensitivity_search_impl(
      center, delta, eps, horizon, gen,
      [&](const CompactSet<U>& a, const CompactSet<U>& b) { return hausdorff(sys.space, a, b); },
      [&](const CompactSet<U>& k) { return hyper_apply(sys, k); });
}

template <Universe U>
std::optional<SensitivityWitness<StepFuzzySet<U>>> sensitivity_search_fuzzy(
    const DynSystem<U>& sys, MetricKind metric, const StepFuzzySet<U>& center, const Rat& delta,
    const Rat& eps, std::uint64_t horizon, const CandidateGen<StepFuzzySet<U>>& gen)
  requires std::same_as<scalar_t<U>, Rat>
{
  return detail::sensitivity_search_impl(
      center, delta, eps, horizon, gen,
      [&](const StepFuzzySet<U>& a, const StepFuzzySet<U>& b) {
        return fuzzy_distance(sys.space, metric, a, b);
      },
      [&](const StepFuzzySet<U>& u) { return zadeh_apply(sys, u); });
}

// Direct recomputation of a witness's claims.
template <Universe U>
bool revalidate(const DynSystem<U>& sys, const SensitivityWitness<point_t<U>>& w) {
  if (!(sys.space.distance(w.center, w.neighbor) < w.delta)) return false;
  auto x = iterate(sys, w.center, w.time_n);
  auto y = iterate(sys, w.neighbor, w.time_n);
  return sys.space.distance(x, y) == w.separation && w.separation > w.eps;
}

template <Universe U>
bool revalidate(const DynSystem<U>& sys, const SensitivityWitness<CompactSet<U>>& w) {
  if (!(hausdorff(sys.space, w.center, w.neighbor) < w.delta)) return false;
  auto k = hyper_iterate(sys, w.center, w.time_n);
  auto l = hyper_iterate(sys, w.neighbor, w.time_n);
  return hausdorff(sys.space, k, l) == w.separation && w.separation > w.eps;
}

template <Universe U>
bool revalidate(const DynSystem<U>& sys, MetricKind metric, const SensitivityWitness<StepFuzzySet<U>>& w) {
  if (!(fuzzy_distance(sys.space, metric, w.center, w.neighbor) < w.delta)) return false;
  auto u = zadeh_iterate(sys, w.center, w.time_n);
  auto v = zadeh_iterate(sys, w.neighbor, w.time_n);
  return fuzzy_distance(sys.space, metric, u, v) == w.separation && w.separation > w.eps;
}

// ---------------------------------------------------------------------------
// collective sensitivity on linear (sequence) universes

template <class U>
concept LinearUniverse = Universe<U> && requires(const U& u, const typename U::point_type& p) {
  { u.add(p, p) } -> std::convertible_to<typename U::point_type>;
  { u.zero() } -> std::convertible_to<typename U::point_type>;
};

template <Universe U>
struct CollectiveWitnessReport {
  std::vector<point_t<U>> ys;
  std::uint64_t time_n = 0;
  Rat eps;
  Rat min_separation;   // min over j of d(T^n x_1, T^n y_j), must exceed eps/2
  Rat max_displacement; // max over j of d(x_j, y_j), must stay below delta
  bool pass = false;
};

// Lemma-style construction: perturb by x_tilde exactly those points whose
// time-n image stays within eps/2 of the first one.
template <LinearUniverse U>
CollectiveWitnessReport<U> collective_witness(const DynSystem<U>& sys,
                                              const std::vector<point_t<U>>& xs,
                                              const point_t<U>& x_tilde, std::uint64_t n,
                                              const Rat& eps, const Rat& delta)
  requires std::same_as<scalar_t<U>, Rat>
{
  if (xs.empty()) throw domain_error("collective_witness: empty point list");
  const U& space = sys.space;
  if (!(space.distance(x_tilde, space.zero()) < delta))
    throw domain_error("collective_witness: perturbation not inside the delta-ball");
  auto tn = iterate(sys, x_tilde, n);
  if (!(space.distance(tn, space.zero()) > eps))
    throw domain_error("collective_witness: perturbation does not separate by eps at time n");

  const Rat half = eps / 2;
  std::vector<point_t<U>> images;
  images.reserve(xs.size());
  for (const auto& x : xs) images.push_back(iterate(sys, x, n));

  CollectiveWitnessReport<U> rep;
  rep.time_n = n;
  rep.eps = eps;
  bool first = true;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    bool close = space.distance(images[0], images[j]) <= half;
    point_t<U> y = close ? space.add(xs[j], x_tilde) : xs[j];
    rep.ys.push_back(y);
    Rat disp = space.distance(xs[j], y);
    Rat sep = space.distance(images[0], iterate(sys, y, n));
    if (first || disp > rep.max_displacement) rep.max_displacement = disp;
    if (first || sep < rep.min_separation) rep.min_separation = sep;
    first = false;
  }
  rep.pass = rep.max_displacement < delta && rep.min_separation > half;
  return rep;
}

// ---------------------------------------------------------------------------
// level extraction: turning a fuzzy sensitivity witness into a hyper one

template <Universe U>
struct LevelExtraction {
  Rat alpha;
  CompactSet<U> level_before;  // v_alpha
  CompactSet<U> level_after;   // [zadeh^n v]_alpha
  Rat closeness;               // d_H(K, v_alpha) < delta
  Rat separation;              // d_H(hyper^n K, [zadeh^n v]_alpha) > eps
};

// Representative levels of the constancy intervals of alpha -> v_alpha that
// intersect the window; endpoints are handled exactly.
template <Universe U>
std::vector<Rat> level_representatives(const StepFuzzySet<U>& v, const Rat& lo, bool lo_open,
                                       const Rat& hi)
  requires std::same_as<scalar_t<U>, Rat>
{
  std::vector<Rat> reps;
  auto in_window = [&](const Rat& a) { return (lo_open ? a > lo : a >= lo) && a <= hi; };
  if (in_window(Rat(0))) reps.push_back(Rat(0));
  Rat prev(0);
  for (const auto& l : v.jump_levels()) {
    // constancy interval (prev, l]
    if (in_window(l)) {
      reps.push_back(l);
    } else if (l > hi && prev < hi && in_window(hi)) {
      reps.push_back(hi);  // window top lies strictly inside the interval
    }
    prev = l;
  }
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  return reps;
}

// Given a fuzzy-level sensitivity event (chi_K close to v at time 0, far at
// time n under the chosen metric) produce a level alpha at which the compact
// sets reproduce the event. The window per metric follows the key lemmas:
// any level for sup/skorokhod, [0, 1-eps] for the sendograph, (eps, 1-eps]
// for the endograph. Failure to extract falsifies the lemma implementations
// and is reported as an invariant violation.
template <Universe U>
LevelExtraction<U> sensitivity_extract_level(const DynSystem<U>& sys, MetricKind metric,
                                             const CompactSet<U>& k, const StepFuzzySet<U>& v,
                                             std::uint64_t n, const Rat& eps, const Rat& delta)
  requires std::same_as<scalar_t<U>, Rat>
{
  const U& space = sys.space;
  if (!(delta > 0) || !(eps > delta))
    throw domain_error("sensitivity_extract_level: need 0 < delta < eps");
  if (metric == MetricKind::endograph && !(eps < Rat(1, 2)))
    throw domain_error("sensitivity_extract_level: endograph case needs eps < 1/2");
  if (metric == MetricKind::sendograph && !(eps < 1))
    throw domain_error("sensitivity_extract_level: sendograph case needs eps < 1");

  auto chi = characteristic(space, k);
  if (!(fuzzy_distance(space, metric, chi, v) < delta))
    throw domain_error("sensitivity_extract_level: chi_K and v are not delta-close");
  auto kn = hyper_iterate(sys, k, n);
  auto vn = zadeh_iterate(sys, v, n);
  if (!(fuzzy_distance(space, metric, characteristic(space, kn), vn) > eps))
    throw domain_error("sensitivity_extract_level: images are not eps-separated");

  Rat lo(0);
  bool lo_open = false;
  Rat hi(1);
  if (metric == MetricKind::sendograph) hi = Rat(1) - eps;
  if (metric == MetricKind::endograph) {
    lo = eps;
    lo_open = true;
    hi = Rat(1) - eps;
  }
  for (const auto& alpha : level_representatives(v, lo, lo_open, hi)) {
    auto before = level_set(space, v, alpha);
    auto after = level_set(space, vn, alpha);
    Rat sep = hausdorff(space, kn, after);
    if (!(sep > eps)) continue;
    Rat close = hausdorff(space, k, before);
    if (!(close < delta)) continue;
    return LevelExtraction<U>{alpha, before, after, close, sep};
  }
  throw invariant_error("sensitivity_extract_level: no level found; key lemma implementation broken");
}

}  // namespace fuzdyn
