#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fuzdyn/errors.hpp"
#include "fuzdyn/spaces.hpp"

namespace fuzdyn {

// Non-empty finite set of points of one universe. Points are kept sorted and
// deduplicated; values are immutable after construction.
template <Universe U>
class CompactSet {
 public:
  using point_type = point_t<U>;

  CompactSet(const U& space, std::vector<point_type> points) : universe_id_(space.id()) {
    if (points.empty()) throw domain_error("CompactSet: empty set");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    for (const auto& p : points)
      if (!space.contains(p)) throw domain_error("CompactSet: point not in universe " + universe_id_);
    points_ = std::move(points);
  }

  const std::vector<point_type>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const std::string& universe_id() const { return universe_id_; }

  bool contains(const point_type& p) const {
    return std::binary_search(points_.begin(), points_.end(), p);
  }
  bool subset_of(const CompactSet& other) const {
    for (const auto& p : points_)
      if (!other.contains(p)) return false;
    return true;
  }

  friend bool operator==(const CompactSet& a, const CompactSet& b) {
    return a.universe_id_ == b.universe_id_ && a.points_ == b.points_;
  }

 private:
  std::string universe_id_;
  std::vector<point_type> points_;
};

namespace detail {
template <Universe U>
void require_same_universe(const CompactSet<U>& a, const CompactSet<U>& b) {
  if (a.universe_id() != b.universe_id())
    throw domain_error("sets live in different universes: " + a.universe_id() + " vs " +
                       b.universe_id());
}
}  // namespace detail

template <Universe U>
CompactSet<U> set_union(const U& space, const CompactSet<U>& a, const CompactSet<U>& b) {
  detail::require_same_universe(a, b);
  std::vector<point_t<U>> pts = a.points();
  pts.insert(pts.end(), b.points().begin(), b.points().end());
  return CompactSet<U>(space, std::move(pts));
}

// max over a of min over b of d(a, b)
template <Universe U>
scalar_t<U> directed_hausdorff(const U& space, const CompactSet<U>& from, const CompactSet<U>& to) {
  scalar_t<U> worst = scalar_traits<scalar_t<U>>::zero();
  bool first = true;
  for (const auto& a : from.points()) {
    scalar_t<U> best = space.distance(a, to.points().front());
    for (std::size_t i = 1; i < to.size(); ++i) {
      auto d = space.distance(a, to.points()[i]);
      if (value_less(d, best)) best = d;
    }
    if (first || value_less(worst, best)) worst = best;
    first = false;
  }
  return worst;
}

template <Universe U>
scalar_t<U> hausdorff(const U& space, const CompactSet<U>& a, const CompactSet<U>& b) {
  detail::require_same_universe(a, b);
  auto ab = directed_hausdorff(space, a, b);
  auto ba = directed_hausdorff(space, b, a);
  return value_less(ab, ba) ? ba : ab;
}

// Every point of `a` within eps (inclusive) of some point of `b`, i.e. a c b+eps.
template <Universe U>
bool within_dilation(const U& space, const CompactSet<U>& a, const CompactSet<U>& b,
                     const scalar_t<U>& eps) {
  detail::require_same_universe(a, b);
  using T = scalar_traits<scalar_t<U>>;
  for (const auto& p : a.points()) {
    bool covered = false;
    for (const auto& q : b.points())
      if (T::leq(space.distance(p, q), eps)) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

// Hyperextension of the point map: image of the set, deduplicated.
template <Universe U>
CompactSet<U> hyper_apply(const DynSystem<U>& sys, const CompactSet<U>& k) {
  std::vector<point_t<U>> image;
  image.reserve(k.size());
  for (const auto& p : k.points()) image.push_back(sys.step(p));
  return CompactSet<U>(sys.space, std::move(image));
}

template <Universe U>
CompactSet<U> hyper_iterate(const DynSystem<U>& sys, CompactSet<U> k, std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) k = hyper_apply(sys, k);
  return k;
}

}  // namespace fuzdyn
