#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fuzdyn/errors.hpp"
#include "fuzdyn/hyper.hpp"
#include "fuzdyn/numeric.hpp"
#include "fuzdyn/spaces.hpp"

namespace fuzdyn {

// Normal step fuzzy set: finitely many support points, each with a membership
// level in (0,1], at least one level exactly 1. Points outside the map have
// membership 0; the support doubles as the closed 0-level.
template <Universe U>
class StepFuzzySet {
 public:
  using point_type = point_t<U>;
  using scalar_type = scalar_t<U>;
  using entry = std::pair<point_type, scalar_type>;

  StepFuzzySet(const U& space, std::vector<entry> membership) : universe_id_(space.id()) {
    if (membership.empty()) throw domain_error("StepFuzzySet: empty support");
    std::sort(membership.begin(), membership.end(),
              [](const entry& a, const entry& b) { return a.first < b.first; });
    for (std::size_t i = 0; i + 1 < membership.size(); ++i)
      if (membership[i].first == membership[i + 1].first)
        throw domain_error("StepFuzzySet: duplicate support point");
    using T = scalar_traits<scalar_type>;
    bool has_one = false;
    for (const auto& [p, lvl] : membership) {
      if (!space.contains(p)) throw domain_error("StepFuzzySet: point not in universe");
      if (!(lvl > T::zero()) || lvl > scalar_type(1))
        throw domain_error("StepFuzzySet: membership level outside (0,1]");
      if (T::eq(lvl, scalar_type(1))) has_one = true;
    }
    if (!has_one)
      throw domain_error("StepFuzzySet: not normal (no point with membership 1)");
    membership_ = std::move(membership);
  }

  const std::vector<entry>& membership() const { return membership_; }
  const std::string& universe_id() const { return universe_id_; }
  std::size_t support_size() const { return membership_.size(); }

  scalar_type value(const point_type& p) const {
    auto it = std::lower_bound(membership_.begin(), membership_.end(), p,
                               [](const entry& e, const point_type& q) { return e.first < q; });
    if (it != membership_.end() && it->first == p) return it->second;
    return scalar_traits<scalar_type>::zero();
  }

  // Distinct membership levels, ascending; the last one is 1.
  std::vector<scalar_type> jump_levels() const {
    std::vector<scalar_type> lv;
    lv.reserve(membership_.size());
    for (const auto& [p, l] : membership_) lv.push_back(l);
    std::sort(lv.begin(), lv.end());
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
    return lv;
  }

  friend bool operator==(const StepFuzzySet& a, const StepFuzzySet& b) {
    return a.universe_id_ == b.universe_id_ && a.membership_ == b.membership_;
  }

 private:
  std::string universe_id_;
  std::vector<entry> membership_;
};

namespace detail {
template <Universe U>
void require_same_universe(const StepFuzzySet<U>& a, const StepFuzzySet<U>& b) {
  if (a.universe_id() != b.universe_id())
    throw domain_error("fuzzy sets live in different universes: " + a.universe_id() + " vs " +
                       b.universe_id());
}
}  // namespace detail

// u := max over l of alpha_l * chi(K_l). Levels must be strictly increasing
// and end at 1.
template <Universe U>
StepFuzzySet<U> from_levels(const U& space,
                            const std::vector<std::pair<scalar_t<U>, CompactSet<U>>>& levels) {
  using S = scalar_t<U>;
  using T = scalar_traits<S>;
  if (levels.empty()) throw domain_error("from_levels: no levels");
  for (std::size_t i = 0; i + 1 < levels.size(); ++i)
    if (!(levels[i].first < levels[i + 1].first))
      throw domain_error("from_levels: levels not strictly increasing");
  if (!(levels.front().first > T::zero()))
    throw domain_error("from_levels: levels must be positive");
  if (!T::eq(levels.back().first, S(1)))
    throw domain_error("from_levels: top level must be 1 (normality)");

  std::map<point_t<U>, S> acc;
  for (const auto& [alpha, set] : levels)
    for (const auto& p : set.points()) {
      auto it = acc.find(p);
      if (it == acc.end() || it->second < alpha) acc[p] = alpha;
    }
  std::vector<typename StepFuzzySet<U>::entry> entries(acc.begin(), acc.end());
  return StepFuzzySet<U>(space, std::move(entries));
}

// chi_K as a fuzzy set; also the canonical embedding iota2.
template <Universe U>
StepFuzzySet<U> characteristic(const U& space, const CompactSet<U>& k) {
  std::vector<typename StepFuzzySet<U>::entry> entries;
  entries.reserve(k.size());
  for (const auto& p : k.points()) entries.emplace_back(p, scalar_t<U>(1));
  return StepFuzzySet<U>(space, std::move(entries));
}

// alpha-level: {x : u(x) >= alpha} for alpha > 0, the support for alpha = 0.
// Never empty thanks to normality.
template <Universe U>
CompactSet<U> level_set(const U& space, const StepFuzzySet<U>& u, const scalar_t<U>& alpha) {
  using T = scalar_traits<scalar_t<U>>;
  if (T::less(alpha, T::zero()) || T::less(scalar_t<U>(1), alpha))
    throw domain_error("level_set: alpha outside [0,1]");
  std::vector<point_t<U>> pts;
  for (const auto& [p, lvl] : u.membership())
    if (!(alpha > T::zero()) || !(lvl < alpha)) pts.push_back(p);
  return CompactSet<U>(space, std::move(pts));
}

template <Universe U>
CompactSet<U> support(const U& space, const StepFuzzySet<U>& u) {
  return level_set(space, u, scalar_traits<scalar_t<U>>::zero());
}

// Breakpoints 0 = a_0 < a_1 < ... < a_N = 1 with the level set attached to
// each interval (a_{l-1}, a_l].
template <Universe U>
struct LevelDecomposition {
  std::vector<scalar_t<U>> breakpoints;  // includes leading 0 and trailing 1
  std::vector<CompactSet<U>> level_sets; // level_sets[l] is constant on (breakpoints[l], breakpoints[l+1]]
};

// For step fuzzy sets the exact jump levels satisfy the epsilon-staircase
// conditions with distance 0, for every epsilon.
template <Universe U>
LevelDecomposition<U> discretize_levels(const U& space, const StepFuzzySet<U>& u,
                                        const scalar_t<U>& eps) {
  using T = scalar_traits<scalar_t<U>>;
  if (!(eps > T::zero())) throw domain_error("discretize_levels: eps must be positive");
  LevelDecomposition<U> out;
  out.breakpoints.push_back(T::zero());
  for (const auto& lvl : u.jump_levels()) out.breakpoints.push_back(lvl);
  for (std::size_t l = 0; l + 1 < out.breakpoints.size(); ++l)
    out.level_sets.push_back(level_set(space, u, out.breakpoints[l + 1]));
  return out;
}

// Staircase conditions of the decomposition w.r.t. u: d_H(u_0, u_{a_1}) < eps
// and d_H(u_alpha, u_{a_{l+1}}) < eps on every (a_l, a_{l+1}].
template <Universe U>
bool decomposition_satisfies(const U& space, const StepFuzzySet<U>& u,
                             const LevelDecomposition<U>& dec, const scalar_t<U>& eps) {
  using T = scalar_traits<scalar_t<U>>;
  if (dec.breakpoints.size() < 2 || !T::eq(dec.breakpoints.back(), scalar_t<U>(1))) return false;
  auto u0 = support(space, u);
  if (!T::less(hausdorff(space, u0, level_set(space, u, dec.breakpoints[1])), eps)) return false;
  auto reps = u.jump_levels();
  for (std::size_t l = 0; l + 1 < dec.breakpoints.size(); ++l) {
    const auto& lo = dec.breakpoints[l];
    const auto& hi = dec.breakpoints[l + 1];
    auto target = level_set(space, u, hi);
    // check every constancy representative of u inside (lo, hi]
    for (const auto& a : reps) {
      if (a > lo && !(a > hi)) {
        if (!T::less(hausdorff(space, level_set(space, u, a), target), eps)) return false;
      }
    }
    if (!T::less(hausdorff(space, target, target), eps)) return false;
  }
  return true;
}

// Reconstruction max over l of a_l * chi(K_l) reproduces u.
template <Universe U>
bool decomposition_reconstructs(const U& space, const StepFuzzySet<U>& u,
                                const LevelDecomposition<U>& dec) {
  std::vector<std::pair<scalar_t<U>, CompactSet<U>>> levels;
  for (std::size_t l = 0; l + 1 < dec.breakpoints.size(); ++l)
    levels.emplace_back(dec.breakpoints[l + 1], dec.level_sets[l]);
  return from_levels(space, levels) == u;
}

// Zadeh extension: membership of x' is the max of u over the preimage of x'.
// On step sets this is a pushforward of the support with max-merging, and it
// commutes with level sets: level_set(zadeh, a) = hyper image of level_set(u, a).
template <Universe U>
StepFuzzySet<U> zadeh_apply(const DynSystem<U>& sys, const StepFuzzySet<U>& u) {
  std::map<point_t<U>, scalar_t<U>> acc;
  for (const auto& [p, lvl] : u.membership()) {
    auto q = sys.step(p);
    auto it = acc.find(q);
    if (it == acc.end() || it->second < lvl) acc[q] = lvl;
  }
  std::vector<typename StepFuzzySet<U>::entry> entries(acc.begin(), acc.end());
  return StepFuzzySet<U>(sys.space, std::move(entries));
}

template <Universe U>
StepFuzzySet<U> zadeh_iterate(const DynSystem<U>& sys, StepFuzzySet<U> u, std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) u = zadeh_apply(sys, u);
  return u;
}

// ---------------------------------------------------------------------------
// line-oriented text format: one support point per line, "point-id \t level"

template <class U>
concept ParsableUniverse = Universe<U> && requires(const U& u, const std::string& s) {
  { u.point_from_string(s) } -> std::convertible_to<typename U::point_type>;
};

template <Universe U>
std::string to_text(const U& space, const StepFuzzySet<U>& u) {
  std::string out;
  for (const auto& [p, lvl] : u.membership()) {
    out += space.point_to_string(p);
    out += '\t';
    out += scalar_traits<scalar_t<U>>::str(lvl);
    out += '\n';
  }
  return out;
}

template <ParsableUniverse U>
StepFuzzySet<U> fuzzy_from_text(const U& space, const std::string& text)
  requires std::same_as<scalar_t<U>, Rat>
{
  std::vector<typename StepFuzzySet<U>::entry> entries;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw domain_error("fuzzy_from_text: missing tab in: " + line);
    auto p = space.point_from_string(line.substr(0, tab));
    auto lvl = rat_from_string(line.substr(tab + 1));
    entries.emplace_back(p, lvl);
  }
  return StepFuzzySet<U>(space, std::move(entries));  // validates normality
}

// ---------------------------------------------------------------------------
// graph clouds: finite samples of the (s)endograph in X x [0,1], the
// brute-force backstop for the closed-form metrics.

enum class GraphKind { sendograph, endograph };

template <Universe U>
struct GraphCloud {
  std::vector<std::pair<point_t<U>, Rat>> points;
};

// {(x, k/res) : x in support, k/res <= u(x)}; for endographs the caller
// supplies the base points of both operands so the shared floor is present.
template <Universe U>
GraphCloud<U> graph_cloud(const U& space, const StepFuzzySet<U>& u, GraphKind which,
                          unsigned resolution, const std::vector<point_t<U>>& extra_base = {})
  requires std::same_as<scalar_t<U>, Rat>
{
  if (resolution < 1) throw domain_error("graph_cloud: resolution must be >= 1");
  GraphCloud<U> cloud;
  for (const auto& [p, lvl] : u.membership()) {
    for (unsigned k = 0;; ++k) {
      Rat a{Int(k), Int(resolution)};
      if (a > lvl) break;
      cloud.points.emplace_back(p, a);
      if (a == lvl) break;
    }
    // the exact top of each column keeps the vertical error one-sided
    Rat scaled = Rat(lvl) * resolution;
    if (denominator(scaled) != 1) cloud.points.emplace_back(p, lvl);
  }
  if (which == GraphKind::endograph)
    for (const auto& p : extra_base) cloud.points.emplace_back(p, Rat(0));
  return cloud;
}

// Hausdorff distance between clouds under max(d(x,y), |a-b|).
template <Universe U>
Rat cloud_hausdorff(const U& space, const GraphCloud<U>& a, const GraphCloud<U>& b)
  requires std::same_as<scalar_t<U>, Rat>
{
  auto directed = [&](const GraphCloud<U>& from, const GraphCloud<U>& to) {
    Rat worst = 0;
    for (const auto& [x, al] : from.points) {
      bool first = true;
      Rat best = 0;
      for (const auto& [y, be] : to.points) {
        Rat vert = al > be ? al - be : be - al;
        Rat d = space.distance(x, y);
        Rat m = d > vert ? d : vert;
        if (first || m < best) best = m;
        first = false;
        if (best == 0) break;
      }
      if (best > worst) worst = best;
    }
    return worst;
  };
  Rat ab = directed(a, b);
  Rat ba = directed(b, a);
  return ab > ba ? ab : ba;
}

}  // namespace fuzdyn
