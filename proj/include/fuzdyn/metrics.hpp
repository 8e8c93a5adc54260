#pragma once

#include <string>
#include <vector>

#include "fuzdyn/fuzzy.hpp"
#include "fuzdyn/hyper.hpp"
#include "fuzdyn/skorokhod.hpp"

namespace fuzdyn {

enum class MetricKind { sup, skorokhod, sendograph, endograph };

inline std::string to_string(MetricKind m) {
  switch (m) {
    case MetricKind::sup: return "sup";
    case MetricKind::skorokhod: return "skorokhod";
    case MetricKind::sendograph: return "sendograph";
    case MetricKind::endograph: return "endograph";
  }
  return "?";
}

inline MetricKind metric_from_string(const std::string& s) {
  if (s == "sup" || s == "dinf") return MetricKind::sup;
  if (s == "skorokhod" || s == "d0") return MetricKind::skorokhod;
  if (s == "sendograph" || s == "ds") return MetricKind::sendograph;
  if (s == "endograph" || s == "de") return MetricKind::endograph;
  throw config_error("unknown metric kind: " + s);
}

// Merged jump levels of two step sets; both level maps are constant between
// consecutive entries, so the supremum over all levels is a max over these.
template <Universe U>
std::vector<scalar_t<U>> merged_levels(const StepFuzzySet<U>& u, const StepFuzzySet<U>& v) {
  auto a = u.jump_levels();
  auto b = v.jump_levels();
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// d_inf: sup over levels of the Hausdorff distance of the level sets.
template <Universe U>
scalar_t<U> sup_distance(const U& space, const StepFuzzySet<U>& u, const StepFuzzySet<U>& v) {
  detail::require_same_universe(u, v);
  scalar_t<U> worst = scalar_traits<scalar_t<U>>::zero();
  for (const auto& g : merged_levels(u, v)) {
    auto d = hausdorff(space, level_set(space, u, g), level_set(space, v, g));
    if (value_less(worst, d)) worst = d;
  }
  return worst;
}

namespace detail {
// min over support points y of max(d(x,y), (alpha - v(y))^+): the cheapest way
// to cover the sendograph column over x up to height alpha by columns of v.
template <Universe U>
scalar_t<U> column_cover(const U& space, const point_t<U>& x, const scalar_t<U>& alpha,
                         const StepFuzzySet<U>& v) {
  using S = scalar_t<U>;
  bool first = true;
  S best{};
  for (const auto& [y, lvl] : v.membership()) {
    S vert = alpha > lvl ? S(alpha - lvl) : scalar_traits<S>::zero();
    S d = space.distance(x, y);
    S m = value_less(d, vert) ? vert : d;
    if (first || value_less(m, best)) best = m;
    first = false;
  }
  return best;
}
}  // namespace detail

// Sendograph metric, in closed form over the support columns.
template <Universe U>
scalar_t<U> sendograph_distance(const U& space, const StepFuzzySet<U>& u, const StepFuzzySet<U>& v) {
  detail::require_same_universe(u, v);
  using S = scalar_t<U>;
  auto directed = [&](const StepFuzzySet<U>& from, const StepFuzzySet<U>& to) {
    S worst = scalar_traits<S>::zero();
    for (const auto& [x, lvl] : from.membership()) {
      S c = detail::column_cover(space, x, lvl, to);
      if (value_less(worst, c)) worst = c;
    }
    return worst;
  };
  S ab = directed(u, v);
  S ba = directed(v, u);
  return value_less(ab, ba) ? ba : ab;
}

// Endograph metric. The endographs share the floor X x {0}, so every column
// can always fall back to its own base point; the result never exceeds 1.
template <Universe U>
scalar_t<U> endograph_distance(const U& space, const StepFuzzySet<U>& u, const StepFuzzySet<U>& v) {
  detail::require_same_universe(u, v);
  using S = scalar_t<U>;
  auto directed = [&](const StepFuzzySet<U>& from, const StepFuzzySet<U>& to) {
    S worst = scalar_traits<S>::zero();
    for (const auto& [x, lvl] : from.membership()) {
      S c = detail::column_cover(space, x, lvl, to);
      if (value_less(lvl, c)) c = lvl;  // drop to (x, 0), which both endographs contain
      if (value_less(worst, c)) worst = c;
    }
    return worst;
  };
  S ab = directed(u, v);
  S ba = directed(v, u);
  return value_less(ab, ba) ? ba : ab;
}

template <Universe U>
scalar_t<U> fuzzy_distance(const U& space, MetricKind kind, const StepFuzzySet<U>& u,
                           const StepFuzzySet<U>& v) {
  switch (kind) {
    case MetricKind::sup: return sup_distance(space, u, v);
    case MetricKind::sendograph: return sendograph_distance(space, u, v);
    case MetricKind::endograph: return endograph_distance(space, u, v);
    case MetricKind::skorokhod:
      if constexpr (std::same_as<scalar_t<U>, Rat>) {
        return skorokhod_distance(space, u, v);
      } else {
        throw domain_error("skorokhod distance requires an exact-rational universe");
      }
  }
  throw domain_error("unknown metric kind");
}

constexpr MetricKind kAllMetrics[] = {MetricKind::sup, MetricKind::skorokhod,
                                      MetricKind::sendograph, MetricKind::endograph};

}  // namespace fuzdyn
