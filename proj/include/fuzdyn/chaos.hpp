#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzdyn/errors.hpp"
#include "fuzdyn/fuzzy.hpp"
#include "fuzdyn/hyper.hpp"
#include "fuzdyn/metrics.hpp"
#include "fuzdyn/numeric.hpp"
#include "fuzdyn/spaces.hpp"

namespace fuzdyn {

// ---------------------------------------------------------------------------
// distance traces

// d_j = dist(F^j a, F^j b) for j = 1..horizon at one of the system levels.
struct DistanceTrace {
  std::string level;       // "base" | "hyper" | "fuzzy:<metric>"
  std::string pair_label;
  std::uint64_t horizon = 0;
  std::vector<Rat> values;
};

// Replayable sequential reader of a trace; open() yields a generator that
// returns d_1, d_2, ... on successive calls. Giant-horizon traces are never
// materialized, they are recomputed per pass.
struct TraceSource {
  std::string level;
  std::string pair_label;
  std::uint64_t horizon = 0;
  std::function<std::function<Rat()>()> open;
};

inline TraceSource as_source(const DistanceTrace& trace) {
  auto values = std::make_shared<std::vector<Rat>>(trace.values);
  return {trace.level, trace.pair_label, trace.horizon, [values]() {
            std::size_t i = 0;
            return [values, i]() mutable { return (*values)[i++]; };
          }};
}

inline DistanceTrace materialize(const TraceSource& src) {
  DistanceTrace t{src.level, src.pair_label, src.horizon, {}};
  t.values.reserve(src.horizon);
  auto next = src.open();
  for (std::uint64_t j = 1; j <= src.horizon; ++j) t.values.push_back(next());
  return t;
}

template <Universe U>
DistanceTrace base_trace(const DynSystem<U>& sys, const point_t<U>& a, const point_t<U>& b,
                         std::uint64_t horizon)
  requires std::same_as<scalar_t<U>, Rat>
{
  if (horizon < 1) throw domain_error("base_trace: horizon must be >= 1");
  DistanceTrace t{"base", sys.space.point_to_string(a) + " | " + sys.space.point_to_string(b),
                  horizon, {}};
  t.values.reserve(horizon);
  auto x = a, y = b;
  for (std::uint64_t j = 1; j <= horizon; ++j) {
    x = sys.step(x);
    y = sys.step(y);
    t.values.push_back(sys.space.distance(x, y));
  }
  return t;
}

template <Universe U>
TraceSource base_trace_source(const DynSystem<U>& sys, point_t<U> a, point_t<U> b,
                              std::uint64_t horizon)
  requires std::same_as<scalar_t<U>, Rat>
{
  if (horizon < 1) throw domain_error("base_trace_source: horizon must be >= 1");
  std::string label = sys.space.point_to_string(a) + " | " + sys.space.point_to_string(b);
  return {"base", label, horizon, [sys, a, b]() {
            auto x = a;
            auto y = b;
            return [sys, x, y]() mutable {
              x = sys.step(x);
              y = sys.step(y);
              return Rat(sys.space.distance(x, y));
            };
          }};
}

template <Universe U>
DistanceTrace hyper_trace(const DynSystem<U>& sys, const CompactSet<U>& a, const CompactSet<U>& b,
                          std::uint64_t horizon)
  requires std::same_as<scalar_t<U>, Rat>
{
  if (horizon < 1) throw domain_error("hyper_trace: horizon must be >= 1");
  DistanceTrace t{"hyper", "", horizon, {}};
  t.values.reserve(horizon);
  auto k = a, l = b;
  for (std::uint64_t j = 1; j <= horizon; ++j) {
    k = hyper_apply(sys, k);
    l = hyper_apply(sys, l);
    t.values.push_back(hausdorff(sys.space, k, l));
  }
  return t;
}

template <Universe U>
DistanceTrace fuzzy_trace(const DynSystem<U>& sys, MetricKind metric, const StepFuzzySet<U>& a,
                          const StepFuzzySet<U>& b, std::uint64_t horizon)
  requires std::same_as<scalar_t<U>, Rat>
{
  if (horizon < 1) throw domain_error("fuzzy_trace: horizon must be >= 1");
  DistanceTrace t{"fuzzy:" + to_string(metric), "", horizon, {}};
  t.values.reserve(horizon);
  auto u = a, v = b;
  for (std::uint64_t j = 1; j <= horizon; ++j) {
    u = zadeh_apply(sys, u);
    v = zadeh_apply(sys, v);
    t.values.push_back(fuzzy_distance(sys.space, metric, u, v));
  }
  return t;
}

template <Universe U>
TraceSource fuzzy_trace_source(const DynSystem<U>& sys, MetricKind metric, StepFuzzySet<U> a,
                               StepFuzzySet<U> b, std::uint64_t horizon)
  requires std::same_as<scalar_t<U>, Rat>
{
  if (horizon < 1) throw domain_error("fuzzy_trace_source: horizon must be >= 1");
  return {"fuzzy:" + to_string(metric), "", horizon, [sys, metric, a, b]() {
            auto u = a;
            auto v = b;
            return [sys, metric, u, v]() mutable {
              u = zadeh_apply(sys, u);
              v = zadeh_apply(sys, v);
              return fuzzy_distance(sys.space, metric, u, v);
            };
          }};
}

// ---------------------------------------------------------------------------
// checkpoint schedules and density estimation

// Geometric schedule {ceil(n/2^i)} plus structural checkpoints (block edges),
// clipped to [1, n]. Asymptotic liminf/limsup are replaced by inf/sup over
// these; block-structured examples need their edges present to show the
// oscillation.
inline std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t horizon,
                                                      std::vector<std::uint64_t> structural = {}) {
  std::vector<std::uint64_t> cps;
  for (std::uint64_t m = horizon; m >= 1;) {
    cps.push_back(m);
    if (m == 1) break;
    m = (m + 1) / 2;
  }
  for (auto m : structural)
    if (m >= 1 && m <= horizon) cps.push_back(m);
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  return cps;
}

struct DensityReport {
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::uint64_t> counts;  // |A intersect [1, m]|
  std::vector<Rat> ratios;
  Rat inf_ratio, sup_ratio;
};

// Exact prefix-density ratios of a set A given by its counting oracle.
inline DensityReport density_estimate(const std::function<std::uint64_t(std::uint64_t)>& count_leq,
                                      std::uint64_t horizon,
                                      std::vector<std::uint64_t> checkpoints) {
  DensityReport rep;
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  for (auto m : checkpoints) {
    if (m < 1 || m > horizon) throw domain_error("density_estimate: checkpoint outside [1, horizon]");
    std::uint64_t c = count_leq(m);
    rep.checkpoints.push_back(m);
    rep.counts.push_back(c);
    rep.ratios.push_back(Rat(Int(c), Int(m)));
  }
  if (rep.ratios.empty()) throw domain_error("density_estimate: no checkpoints");
  rep.inf_ratio = rep.ratios.front();
  rep.sup_ratio = rep.ratios.front();
  for (const auto& r : rep.ratios) {
    if (r < rep.inf_ratio) rep.inf_ratio = r;
    if (r > rep.sup_ratio) rep.sup_ratio = r;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// distributional profiles

struct DistributionalProfile {
  std::vector<Rat> delta_grid;            // ascending
  std::vector<std::uint64_t> checkpoints; // ascending
  // below_ratios[d][c] = |{j <= m_c : d_j < delta_d}| / m_c, exact
  std::vector<std::vector<Rat>> below_ratios;
  // inf/sup of ratios per delta over the statistics window (the liminf and
  // limsup surrogates); tiny checkpoints are recorded but excluded here
  std::vector<Rat> phi_lower, phi_upper;
  std::size_t stats_from = 0;  // first checkpoint index inside the window
  std::vector<SumSnapshot> sum_at_checkpoint;  // S_m = sum of d_j, j <= m
  std::vector<double> mean_approx;             // S_m / m midpoints
  Rat min_value;
  std::uint64_t min_index = 0;
  Rat tail_max_value;
  std::uint64_t tail_start = 0;  // tail = j >= tail_start
  std::uint64_t horizon = 0;
  std::string level, pair_label;

  Rat mean_exact(std::size_t checkpoint_idx) const {
    return sum_at_checkpoint[checkpoint_idx].exact() / Rat(Int(checkpoints[checkpoint_idx]));
  }
  // -1/0/+1 comparing the exact mean at a checkpoint with a threshold
  int mean_compare(std::size_t checkpoint_idx, const Rat& threshold) const {
    return sum_at_checkpoint[checkpoint_idx].compare(threshold * Rat(Int(checkpoints[checkpoint_idx])));
  }
};

// Count d_j < delta with the double bracket first, exact compare only on
// overlap.
namespace detail {
inline bool less_than(const Rat& v, const DoubleBracket& vb, const Rat& t,
                      const DoubleBracket& tb) {
  if (vb.hi < tb.lo) return true;
  if (vb.lo > tb.hi) return false;
  return fast_compare(v, t) < 0;
}
}  // namespace detail

// Checkpoints below warmup_checkpoint still get ratios and sums recorded but
// stay out of the liminf/limsup surrogates; a ratio over a handful of early
// indices says nothing about densities.
inline DistributionalProfile distributional_profile(const TraceSource& src,
                                                    std::vector<Rat> delta_grid,
                                                    std::vector<std::uint64_t> checkpoints = {},
                                                    std::uint64_t warmup_checkpoint = 64) {
  if (delta_grid.empty()) throw domain_error("distributional_profile: empty delta grid");
  std::sort(delta_grid.begin(), delta_grid.end());
  delta_grid.erase(std::unique(delta_grid.begin(), delta_grid.end()), delta_grid.end());
  if (!(delta_grid.front() > 0)) throw domain_error("distributional_profile: grid must be positive");
  if (checkpoints.empty()) checkpoints = checkpoint_schedule(src.horizon);

  DistributionalProfile prof;
  prof.delta_grid = delta_grid;
  prof.checkpoints = checkpoints;
  prof.level = src.level;
  prof.pair_label = src.pair_label;
  prof.horizon = src.horizon;
  prof.tail_start = src.horizon / 2 + 1;

  std::vector<DoubleBracket> grid_brackets;
  grid_brackets.reserve(delta_grid.size());
  for (const auto& d : delta_grid) grid_brackets.push_back(bracket(d));

  std::vector<std::uint64_t> below(delta_grid.size(), 0);
  prof.below_ratios.assign(delta_grid.size(), {});
  SumAccumulator sum;
  auto next = src.open();
  std::size_t cp = 0;
  bool have_min = false, have_tail = false;
  for (std::uint64_t j = 1; j <= src.horizon; ++j) {
    Rat v = next();
    DoubleBracket vb = bracket(v);
    for (std::size_t d = 0; d < delta_grid.size(); ++d)
      if (detail::less_than(v, vb, delta_grid[d], grid_brackets[d])) ++below[d];
    sum.add(v);
    if (!have_min || rat_less(v, prof.min_value)) {
      prof.min_value = v;
      prof.min_index = j;
      have_min = true;
    }
    if (j >= prof.tail_start && (!have_tail || rat_less(prof.tail_max_value, v))) {
      prof.tail_max_value = v;
      have_tail = true;
    }
    while (cp < checkpoints.size() && checkpoints[cp] == j) {
      for (std::size_t d = 0; d < delta_grid.size(); ++d)
        prof.below_ratios[d].push_back(Rat(Int(below[d]), Int(j)));
      prof.sum_at_checkpoint.push_back(sum.snapshot());
      prof.mean_approx.push_back(sum.approx() / static_cast<double>(j));
      ++cp;
    }
  }
  if (cp != checkpoints.size())
    throw domain_error("distributional_profile: checkpoint beyond horizon");
  if (!have_tail) prof.tail_max_value = prof.min_value;

  prof.stats_from = 0;
  while (prof.stats_from + 1 < checkpoints.size() && checkpoints[prof.stats_from] < warmup_checkpoint)
    ++prof.stats_from;
  for (std::size_t d = 0; d < delta_grid.size(); ++d) {
    Rat lo = prof.below_ratios[d][prof.stats_from], hi = lo;
    for (std::size_t c = prof.stats_from; c < checkpoints.size(); ++c) {
      const Rat& r = prof.below_ratios[d][c];
      if (r < lo) lo = r;
      if (r > hi) hi = r;
    }
    prof.phi_lower.push_back(lo);
    prof.phi_upper.push_back(hi);
  }
  return prof;
}

inline DistributionalProfile distributional_profile(const DistanceTrace& trace,
                                                    std::vector<Rat> delta_grid,
                                                    std::vector<std::uint64_t> checkpoints = {}) {
  return distributional_profile(as_source(trace), std::move(delta_grid), std::move(checkpoints));
}

// The default grid: dyadics 2^-k down to 2^-10 plus the example thresholds.
inline std::vector<Rat> default_delta_grid() {
  std::vector<Rat> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(Rat(Int(1), pow2(k)));
  grid.push_back(Rat(3, 2));
  grid.push_back(Rat(2));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// ---------------------------------------------------------------------------
// finite-horizon pair classification

struct ClassifierConfig {
  Rat eps{1, 2};            // epsilon for the LY / MLY / D1 / D2 flags
  Rat d2half_eps{1, 2};     // delta-window bound for D2-and-a-half
  Rat d3_a{0};              // D3 window (a, b)
  Rat d3_b{1};
  Rat prox_tol{1, 1000000};
  Rat zero_tol{3, 20};
  Rat one_tol{3, 20};
  Rat sep_margin{1, 10};
  Rat mean_tol{1, 100};     // MLY "liminf of means is 0" surrogate
  std::uint64_t min_horizon = 256;
};

// Finite-horizon EVIDENCE, never asymptotic truth. Every flag derives
// deterministically from the profile and the thresholds; the numbers the
// decision was based on ride along.
struct PairVerdict {
  bool proximal = false;
  Rat min_value;
  std::uint64_t min_index = 0;

  bool ly = false;
  Rat tail_max_value;

  bool mly = false;
  double mean_min_approx = 0, mean_max_approx = 0;

  bool d1 = false, d1half = false, d2 = false, d2half = false, d3 = false;
  bool d2half_insufficient_grid = false, d3_insufficient_grid = false;
  Rat phi_at_eps;          // lower distributional estimate at eps
  Rat phi_upper_floor;     // min over grid deltas of the upper estimate
  Rat phi_lower_at_min_delta;
  Rat d2half_c;            // separating constant when d2half holds
  Rat d3_min_gap;

  std::uint64_t horizon = 0;
  ClassifierConfig config;
};

inline PairVerdict classify_pair(const DistributionalProfile& prof, const ClassifierConfig& cfg) {
  if (prof.horizon < cfg.min_horizon)
    throw domain_error("classify_pair: horizon below config.min_horizon");
  PairVerdict v;
  v.horizon = prof.horizon;
  v.config = cfg;

  v.min_value = prof.min_value;
  v.min_index = prof.min_index;
  v.proximal = prof.min_value <= cfg.prox_tol;

  v.tail_max_value = prof.tail_max_value;
  v.ly = v.proximal && prof.tail_max_value >= cfg.eps;

  // means: exact comparisons at checkpoints through the snapshots
  bool mean_high = false, mean_low = false;
  double lo_seen = 0, hi_seen = 0;
  bool first = true;
  for (std::size_t c = prof.stats_from; c < prof.checkpoints.size(); ++c) {
    double approx = prof.mean_approx[c];
    if (first || approx < lo_seen) lo_seen = approx;
    if (first || approx > hi_seen) hi_seen = approx;
    first = false;
    if (!mean_high && prof.mean_compare(c, cfg.eps) >= 0) mean_high = true;
    if (!mean_low && prof.mean_compare(c, cfg.mean_tol) <= 0) mean_low = true;
  }
  v.mean_min_approx = lo_seen;
  v.mean_max_approx = hi_seen;
  v.mly = mean_high && mean_low;

  const auto& grid = prof.delta_grid;
  auto grid_index_of = [&](const Rat& x) -> std::optional<std::size_t> {
    for (std::size_t d = 0; d < grid.size(); ++d)
      if (grid[d] == x) return d;
    return std::nullopt;
  };

  // upper distributional estimate must sit near 1 on the whole grid for the
  // D1 / D1half / D2 family
  Rat upper_floor = prof.phi_upper.front();
  for (const auto& r : prof.phi_upper)
    if (r < upper_floor) upper_floor = r;
  v.phi_upper_floor = upper_floor;
  bool upper_near_one = upper_floor >= Rat(1) - cfg.one_tol;

  v.phi_lower_at_min_delta = prof.phi_lower.front();
  auto eps_idx = grid_index_of(cfg.eps);
  if (eps_idx) {
    v.phi_at_eps = prof.phi_lower[*eps_idx];
    v.d1 = (v.phi_at_eps <= cfg.zero_tol) && upper_near_one;
    v.d2 = (v.phi_at_eps <= Rat(1) - cfg.eps) && upper_near_one && cfg.eps <= Rat(1);
  }
  v.d1half = (v.phi_lower_at_min_delta <= cfg.zero_tol) && upper_near_one;

  // D2half: phi_lower < c < phi_upper uniformly over grid deltas <= eps
  {
    bool any = false;
    Rat lo_max, hi_min;
    for (std::size_t d = 0; d < grid.size(); ++d) {
      if (grid[d] > cfg.d2half_eps) break;
      if (!any) {
        lo_max = prof.phi_lower[d];
        hi_min = prof.phi_upper[d];
      } else {
        if (prof.phi_lower[d] > lo_max) lo_max = prof.phi_lower[d];
        if (prof.phi_upper[d] < hi_min) hi_min = prof.phi_upper[d];
      }
      any = true;
    }
    if (!any) {
      v.d2half_insufficient_grid = true;
    } else if (lo_max + cfg.sep_margin <= hi_min) {
      v.d2half = true;
      v.d2half_c = (lo_max + hi_min) / 2;
    }
  }

  // D3: separation with margin on every grid delta inside (a, b)
  {
    bool any = false;
    Rat min_gap;
    for (std::size_t d = 0; d < grid.size(); ++d) {
      if (!(grid[d] > cfg.d3_a) || !(grid[d] < cfg.d3_b)) continue;
      Rat gap = prof.phi_upper[d] - prof.phi_lower[d];
      if (!any || gap < min_gap) min_gap = gap;
      any = true;
    }
    if (!any) {
      v.d3_insufficient_grid = true;
    } else {
      v.d3_min_gap = min_gap;
      v.d3 = min_gap >= cfg.sep_margin;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// bridge lemma check: for every n and grid delta,
//   delta * |{j<=n : d_j >= delta}| <= sum_{j<=n} d_j
//                                   <= n*delta + r * |{j<=n : d_j >= delta}|

struct BridgeViolation {
  std::uint64_t n;
  Rat delta;
  int which;  // 1 = lower inequality, 2 = upper inequality
};

struct BridgeReport {
  std::vector<BridgeViolation> violations;
  std::uint64_t exact_escalations = 0;
  std::uint64_t steps = 0;
  bool pass() const { return violations.empty(); }
};

inline BridgeReport bridge_check(const TraceSource& src, const Rat& bound_r,
                                 std::vector<Rat> delta_grid) {
  if (delta_grid.empty()) throw domain_error("bridge_check: empty delta grid");
  std::sort(delta_grid.begin(), delta_grid.end());
  delta_grid.erase(std::unique(delta_grid.begin(), delta_grid.end()), delta_grid.end());

  BridgeReport rep;
  const std::size_t D = delta_grid.size();
  std::vector<DoubleBracket> db(D);
  for (std::size_t d = 0; d < D; ++d) db[d] = bracket(delta_grid[d]);
  DoubleBracket rb = bracket(bound_r);

  std::vector<std::uint64_t> at_least(D, 0);
  SumAccumulator sum;
  auto next = src.open();

  auto exact_sum_prefix = [&](std::uint64_t n) {
    auto reader = src.open();
    SumAccumulator acc;
    for (std::uint64_t j = 1; j <= n; ++j) acc.add(reader());
    return acc.exact();
  };

  const double inf = std::numeric_limits<double>::infinity();
  for (std::uint64_t n = 1; n <= src.horizon; ++n) {
    Rat v = next();
    if (v > bound_r) throw domain_error("bridge_check: trace value exceeds the stated bound r");
    DoubleBracket vb = bracket(v);
    for (std::size_t d = 0; d < D; ++d)
      if (!detail::less_than(v, vb, delta_grid[d], db[d])) ++at_least[d];
    sum.add(v);
    ++rep.steps;

    for (std::size_t d = 0; d < D; ++d) {
      const double cnt = static_cast<double>(at_least[d]);
      // (1)  delta * cnt <= S_n
      double lhs_hi = std::nextafter(db[d].hi * cnt, inf);
      double lhs_lo = std::nextafter(db[d].lo * cnt, -inf);
      bool ok1;
      if (sum.lower() >= lhs_hi) {
        ok1 = true;
      } else if (sum.upper() < lhs_lo) {
        ok1 = false;
      } else {
        ++rep.exact_escalations;
        ok1 = delta_grid[d] * Int(at_least[d]) <= exact_sum_prefix(n);
      }
      if (!ok1) rep.violations.push_back({n, delta_grid[d], 1});
      // (2)  S_n <= n*delta + r*cnt
      double rhs_lo = std::nextafter(db[d].lo * static_cast<double>(n), -inf);
      rhs_lo = std::nextafter(rhs_lo + std::nextafter(rb.lo * cnt, -inf), -inf);
      double rhs_hi = std::nextafter(db[d].hi * static_cast<double>(n), inf);
      rhs_hi = std::nextafter(rhs_hi + std::nextafter(rb.hi * cnt, inf), inf);
      bool ok2;
      if (sum.upper() <= rhs_lo) {
        ok2 = true;
      } else if (sum.lower() > rhs_hi) {
        ok2 = false;
      } else {
        ++rep.exact_escalations;
        ok2 = exact_sum_prefix(n) <= delta_grid[d] * Int(n) + bound_r * Int(at_least[d]);
      }
      if (!ok2) rep.violations.push_back({n, delta_grid[d], 2});
    }
  }
  return rep;
}

inline BridgeReport bridge_check(const DistanceTrace& trace, const Rat& bound_r,
                                 std::vector<Rat> delta_grid) {
  return bridge_check(as_source(trace), bound_r, std::move(delta_grid));
}

// ---------------------------------------------------------------------------
// the u^alpha transfer family and its exact distance formulas

// u^alpha := max(chi_K, alpha * chi_L) for K strictly inside L.
template <Universe U>
StepFuzzySet<U> u_alpha(const U& space, const CompactSet<U>& k, const CompactSet<U>& l,
                        const scalar_t<U>& alpha) {
  using T = scalar_traits<scalar_t<U>>;
  if (!(alpha > T::zero()) || !(alpha < scalar_t<U>(1)))
    throw domain_error("u_alpha: alpha must lie strictly inside (0,1)");
  if (!k.subset_of(l) || k.points().size() == l.points().size())
    throw domain_error("u_alpha: K must be a strict subset of L");
  return from_levels(space, {{alpha, l}, {scalar_t<U>(1), k}});
}

template <Universe U>
std::vector<StepFuzzySet<U>> u_alpha_family(const U& space, const CompactSet<U>& k,
                                            const CompactSet<U>& l,
                                            std::vector<scalar_t<U>> alphas) {
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  std::vector<StepFuzzySet<U>> family;
  family.reserve(alphas.size());
  for (const auto& a : alphas) family.push_back(u_alpha(space, k, l, a));
  return family;
}

// Increasing 2-piece-linear reparametrization of [0,1] with xi(alpha) = beta.
struct XiMap {
  Rat alpha, beta;

  XiMap(Rat a, Rat b) : alpha(std::move(a)), beta(std::move(b)) {
    if (!(beta < alpha) || !(Rat(0) < beta) || !(alpha < Rat(1)))
      throw domain_error("XiMap: need 0 < beta < alpha < 1");
  }
  Rat operator()(const Rat& g) const {
    if (g < 0 || g > 1) throw domain_error("XiMap: argument outside [0,1]");
    if (g <= alpha) return beta / alpha * g;
    return (Rat(1) - beta) / (Rat(1) - alpha) * g + (beta - alpha) / (Rat(1) - alpha);
  }
  // sup over [0,1] of |xi - id|, attained at alpha
  Rat sup_deviation() const { return alpha - beta; }
};

struct TransferReport {
  Rat max_discrepancy;
  std::uint64_t horizon = 0;
  std::uint64_t rows_checked = 0;
  bool pass() const { return max_discrepancy == 0; }
};

// Verifies along the orbit that the sup metric of the u^alpha pair equals the
// hyper distance of (K, L) and the other three metrics equal
// min(hyper distance, alpha - beta). The fuzzy side is computed by honestly
// iterating the Zadeh extension and evaluating each metric.
template <Universe U>
TransferReport transfer_check(const DynSystem<U>& sys, const CompactSet<U>& k,
                              const CompactSet<U>& l, const Rat& alpha, const Rat& beta,
                              std::uint64_t horizon)
  requires std::same_as<scalar_t<U>, Rat>
{
  if (!(beta < alpha)) throw domain_error("transfer_check: need beta < alpha");
  const U& space = sys.space;
  auto ua = u_alpha(space, k, l, alpha);
  auto ub = u_alpha(space, k, l, beta);
  auto kj = k, lj = l;
  TransferReport rep{Rat(0), horizon, 0};
  const Rat gap = alpha - beta;
  auto track = [&rep](const Rat& x, const Rat& y) {
    Rat d = x > y ? x - y : y - x;
    if (d > rep.max_discrepancy) rep.max_discrepancy = d;
  };
  for (std::uint64_t j = 1; j <= horizon; ++j) {
    kj = hyper_apply(sys, kj);
    lj = hyper_apply(sys, lj);
    ua = zadeh_apply(sys, ua);
    ub = zadeh_apply(sys, ub);
    Rat h = hausdorff(space, kj, lj);
    Rat capped = h < gap ? h : gap;
    track(sup_distance(space, ub, ua), h);
    track(skorokhod_distance(space, ub, ua), capped);
    track(sendograph_distance(space, ub, ua), capped);
    track(endograph_distance(space, ub, ua), capped);
    rep.rows_checked += 4;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// scrambled matrices: pairwise verdicts over a finite family

struct MatrixEntry {
  std::size_t i = 0, j = 0;
  PairVerdict verdict;
};

struct ScrambledMatrix {
  std::vector<MatrixEntry> entries;

  std::size_t count(bool PairVerdict::* flag) const {
    std::size_t c = 0;
    for (const auto& e : entries)
      if (e.verdict.*flag) ++c;
    return c;
  }
  bool all(bool PairVerdict::* flag) const { return count(flag) == entries.size(); }
};

// Generic engine: verdict for every unordered pair of a family, traces
// supplied per pair.
inline ScrambledMatrix scrambled_matrix(std::size_t family_size,
                                        const std::function<TraceSource(std::size_t, std::size_t)>& pair_trace,
                                        const std::vector<Rat>& delta_grid,
                                        const std::vector<std::uint64_t>& checkpoints,
                                        const ClassifierConfig& cfg) {
  if (family_size < 2) throw domain_error("scrambled_matrix: family must have at least 2 elements");
  ScrambledMatrix m;
  for (std::size_t i = 0; i < family_size; ++i)
    for (std::size_t j = i + 1; j < family_size; ++j) {
      auto prof = distributional_profile(pair_trace(i, j), delta_grid, checkpoints);
      m.entries.push_back({i, j, classify_pair(prof, cfg)});
    }
  return m;
}

template <Universe U>
ScrambledMatrix scrambled_matrix_base(const DynSystem<U>& sys, const std::vector<point_t<U>>& family,
                                      std::uint64_t horizon, const std::vector<Rat>& grid,
                                      const std::vector<std::uint64_t>& checkpoints,
                                      const ClassifierConfig& cfg)
  requires std::same_as<scalar_t<U>, Rat>
{
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j)
      if (family[i] == family[j]) throw domain_error("scrambled_matrix: duplicate family element");
  return scrambled_matrix(
      family.size(),
      [&](std::size_t i, std::size_t j) { return base_trace_source(sys, family[i], family[j], horizon); },
      grid, checkpoints, cfg);
}

template <Universe U>
ScrambledMatrix scrambled_matrix_fuzzy(const DynSystem<U>& sys, MetricKind metric,
                                       const std::vector<StepFuzzySet<U>>& family,
                                       std::uint64_t horizon, const std::vector<Rat>& grid,
                                       const std::vector<std::uint64_t>& checkpoints,
                                       const ClassifierConfig& cfg)
  requires std::same_as<scalar_t<U>, Rat>
{
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j)
      if (family[i] == family[j]) throw domain_error("scrambled_matrix: duplicate family element");
  return scrambled_matrix(
      family.size(),
      [&](std::size_t i, std::size_t j) {
        return fuzzy_trace_source(sys, metric, family[i], family[j], horizon);
      },
      grid, checkpoints, cfg);
}

// ---------------------------------------------------------------------------
// canonical embeddings

template <Universe U>
CompactSet<U> iota1(const U& space, const point_t<U>& x) {
  return CompactSet<U>(space, {x});
}

template <Universe U>
StepFuzzySet<U> iota2(const U& space, const CompactSet<U>& k) {
  return characteristic(space, k);
}

}  // namespace fuzdyn
