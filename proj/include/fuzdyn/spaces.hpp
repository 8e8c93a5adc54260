#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fuzdyn/errors.hpp"
#include "fuzdyn/numeric.hpp"

namespace fuzdyn {

// A point universe: a (possibly infinite) point set given by oracles. Only
// finitely many points are ever materialized; the distance oracle must be
// pure and deterministic.
template <class U>
concept Universe = requires(const U& u, const typename U::point_type& p,
                            const typename U::point_type& q) {
  typename U::point_type;
  typename U::scalar_type;
  { u.distance(p, q) } -> std::convertible_to<typename U::scalar_type>;
  { u.contains(p) } -> std::convertible_to<bool>;
  { u.id() } -> std::convertible_to<std::string>;
  { u.point_to_string(p) } -> std::convertible_to<std::string>;
  { p < q } -> std::convertible_to<bool>;
  { p == q } -> std::convertible_to<bool>;
};

template <Universe U>
using point_t = typename U::point_type;

template <Universe U>
using scalar_t = typename U::scalar_type;

template <Universe U>
typename U::scalar_type distance(const U& space, const point_t<U>& p, const point_t<U>& q) {
  if (!space.contains(p) || !space.contains(q))
    throw domain_error("distance: point not in universe " + space.id());
  return space.distance(p, q);
}

// A dynamical system: a universe together with its point map.
template <Universe U>
struct DynSystem {
  U space;
  std::function<point_t<U>(const point_t<U>&)> step;
  std::string name;

  point_t<U> apply(const point_t<U>& p) const { return step(p); }
};

template <Universe U>
point_t<U> iterate(const DynSystem<U>& sys, point_t<U> p, std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) p = sys.step(p);
  return p;
}

struct MetricViolation {
  std::string kind;  // "identity" | "symmetry" | "non-negative" | "triangle" | "indiscernible"
  std::string detail;
};

struct MetricReport {
  std::vector<MetricViolation> violations;
  std::size_t pairs_checked = 0;
  std::size_t triples_checked = 0;
  bool pass() const { return violations.empty(); }
};

// Exhaustive metric-axiom check over a finite sample of points.
template <Universe U>
MetricReport validate_metric(const U& space, const std::vector<point_t<U>>& sample) {
  using T = scalar_traits<scalar_t<U>>;
  if (sample.empty()) throw domain_error("validate_metric: empty sample");
  for (const auto& p : sample)
    if (!space.contains(p)) throw domain_error("validate_metric: point not in universe");

  MetricReport report;
  const auto zero = T::zero();
  for (std::size_t i = 0; i < sample.size(); ++i) {
    auto dii = space.distance(sample[i], sample[i]);
    if (!T::eq(dii, zero))
      report.violations.push_back({"identity", "d(p,p) != 0 at " + space.point_to_string(sample[i])});
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      ++report.pairs_checked;
      auto dij = space.distance(sample[i], sample[j]);
      auto dji = space.distance(sample[j], sample[i]);
      if (!T::eq(dij, dji))
        report.violations.push_back({"symmetry", space.point_to_string(sample[i]) + " vs " +
                                                     space.point_to_string(sample[j])});
      if (T::less(dij, zero))
        report.violations.push_back({"non-negative", space.point_to_string(sample[i]) + " vs " +
                                                          space.point_to_string(sample[j])});
      if (!(sample[i] == sample[j]) && T::eq(dij, zero))
        report.violations.push_back({"indiscernible", space.point_to_string(sample[i]) + " vs " +
                                                          space.point_to_string(sample[j])});
    }
  }
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = 0; j < sample.size(); ++j) {
      if (j == i) continue;
      auto dij = space.distance(sample[i], sample[j]);
      for (std::size_t k = 0; k < sample.size(); ++k) {
        if (k == i || k == j) continue;
        ++report.triples_checked;
        auto via = space.distance(sample[i], sample[k]) + space.distance(sample[k], sample[j]);
        if (!T::leq(dij, via))
          report.violations.push_back(
              {"triangle", space.point_to_string(sample[i]) + " -> " + space.point_to_string(sample[k]) +
                               " -> " + space.point_to_string(sample[j])});
      }
    }
  return report;
}

// Finite universe with a stored distance table; the workhorse of the random
// property-test instances.
template <class S = Rat>
class TableUniverse {
 public:
  using point_type = std::uint32_t;
  using scalar_type = S;

  TableUniverse(std::string id, std::vector<std::vector<S>> table)
      : id_(std::move(id)), table_(std::move(table)) {}

  S distance(point_type p, point_type q) const { return table_[p][q]; }
  bool contains(point_type p) const { return p < table_.size(); }
  std::string id() const { return id_; }
  std::string point_to_string(point_type p) const { return std::to_string(p); }
  std::size_t size() const { return table_.size(); }

 private:
  std::string id_;
  std::vector<std::vector<S>> table_;
};

}  // namespace fuzdyn
