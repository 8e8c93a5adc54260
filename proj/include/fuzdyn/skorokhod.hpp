#pragma once

#include <algorithm>
#include <vector>

#include "fuzdyn/fuzzy.hpp"
#include "fuzdyn/hyper.hpp"
#include "fuzdyn/numeric.hpp"

namespace fuzdyn {
namespace skorokhod_detail {

// Position on the level axis: a rational plus an integer multiple of a formal
// infinitesimal. Lexicographic order. This makes the closure semantics of the
// Skorokhod infimum exact: a reparametrization knot may sit "just above" or
// "just below" a jump without committing to a concrete rational offset.
struct LexPos {
  Rat r;
  int eps = 0;

  friend bool operator==(const LexPos& a, const LexPos& b) { return a.r == b.r && a.eps == b.eps; }
  friend bool operator<(const LexPos& a, const LexPos& b) {
    if (a.r != b.r) return a.r < b.r;
    return a.eps < b.eps;
  }
  friend bool operator<=(const LexPos& a, const LexPos& b) { return a == b || a < b; }
};

inline LexPos lex_max(const LexPos& a, const LexPos& b) { return a < b ? b : a; }
inline LexPos lex_min(const LexPos& a, const LexPos& b) { return a < b ? a : b; }

struct Interval {
  LexPos lo, hi;  // closed; empty when hi < lo
  bool empty() const { return hi < lo; }
};

// Disjoint sorted union of closed intervals.
struct IntervalSet {
  std::vector<Interval> parts;

  void insert(Interval iv) {
    if (iv.empty()) return;
    parts.push_back(iv);
  }
  void normalize() {
    if (parts.empty()) return;
    std::sort(parts.begin(), parts.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& iv : parts) {
      if (!merged.empty() && iv.lo <= merged.back().hi) {
        merged.back().hi = lex_max(merged.back().hi, iv.hi);
      } else {
        merged.push_back(iv);
      }
    }
    parts = std::move(merged);
  }
  bool empty() const { return parts.empty(); }
};

constexpr int kEpsInf = 1 << 20;  // stands in for +/- infinity on the eps axis

}  // namespace skorokhod_detail

// Exact Skorokhod distance between step fuzzy sets.
//
// The distance is a bisection over a finite candidate set: level-set Hausdorff
// values and jump-level differences. Feasibility of a candidate c asks for an
// increasing homeomorphism xi with sup|xi-id| <= c whose warp of v matches u
// levelwise within c. For step sets xi is determined by the images t_j of v's
// jump levels, and the pairs of level sets seen while sweeping the level axis
// form a monotone staircase over the merged jumps. The staircase is walked by
// a small DP whose state is the set of achievable entry positions per cell; a
// cell crossed with zero length (its entry equals its exit, which happens
// exactly when a t_j lands on a jump of u) contributes no constraint, which is
// what lets d0 drop below the supremum metric.
template <Universe U>
  requires std::same_as<scalar_t<U>, Rat>
Rat skorokhod_distance(const U& space, const StepFuzzySet<U>& u, const StepFuzzySet<U>& v) {
  namespace sd = skorokhod_detail;
  detail::require_same_universe(u, v);

  std::vector<Rat> a = u.jump_levels();  // a_1 < ... < a_P = 1
  std::vector<Rat> b = v.jump_levels();
  const std::size_t P = a.size(), Q = b.size();

  std::vector<CompactSet<U>> us, vs;
  us.reserve(P);
  vs.reserve(Q);
  for (const auto& lvl : a) us.push_back(level_set(space, u, lvl));
  for (const auto& lvl : b) vs.push_back(level_set(space, v, lvl));

  std::vector<std::vector<Rat>> H(P, std::vector<Rat>(Q));
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = 0; j < Q; ++j) H[i][j] = hausdorff(space, us[i], vs[j]);

  // candidate thresholds
  std::vector<Rat> cand;
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = 0; j < Q; ++j) cand.push_back(H[i][j]);
  std::vector<Rat> ea = a, eb = b;
  ea.insert(ea.begin(), Rat(0));
  eb.insert(eb.begin(), Rat(0));
  for (const auto& x : ea)
    for (const auto& y : eb) cand.push_back(x > y ? x - y : y - x);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  const Rat floor_val = std::max(H[0][0], H[P - 1][Q - 1]);  // d_H(u0,v0), d_H(u1,v1)
  cand.erase(std::remove_if(cand.begin(), cand.end(), [&](const Rat& c) { return c < floor_val; }),
             cand.end());

  auto feasible = [&](const Rat& c) -> bool {
    if (H[0][0] > c || H[P - 1][Q - 1] > c) return false;
    // state[pinned][i][j]: achievable entry positions of cell (i,j).
    // pinned = 1 means the most recent v-knot sits exactly at the entry
    // position, so the next knot must be strictly later; a u-jump landing on
    // the same position (zero-length crossing) keeps the pin.
    std::vector<std::vector<sd::IntervalSet>> state[2];
    for (int k = 0; k < 2; ++k)
      state[k].assign(P, std::vector<sd::IntervalSet>(Q));
    state[0][0][0].insert({{Rat(0), 0}, {Rat(0), 0}});

    for (std::size_t s = 0; s < P + Q - 1; ++s) {
      for (std::size_t i = 0; i < P; ++i) {
        std::size_t j = s >= i ? s - i : Q;  // cells with i + j == s
        if (j >= Q) continue;
        for (int pinned = 0; pinned < 2; ++pinned) {
          auto& cur = state[pinned][i][j];
          cur.normalize();
          if (cur.empty()) continue;
          const bool cell_ok = !(H[i][j] > c);
          // departure by the next u-jump at a_i (only if i+1 < P)
          if (i + 1 < P) {
            sd::LexPos A{a[i], 0};
            for (const auto& iv : cur.parts) {
              if (cell_ok && iv.lo <= A) {
                // entry strictly below a_i: the pin dissolves
                if (iv.lo < A) state[0][i + 1][j].insert({A, A});
                // entry exactly at a_i: zero-length crossing, pin survives
                if (A <= iv.hi) state[pinned][i + 1][j].insert({A, A});
              } else if (!cell_ok && iv.lo <= A && A <= iv.hi) {
                // zero length is the only way through a blocked cell
                state[pinned][i + 1][j].insert({A, A});
              }
            }
          }
          // departure by the image t_j of v's jump b_j (only if j+1 < Q)
          if (j + 1 < Q) {
            sd::LexPos win_lo{b[j] - c, -sd::kEpsInf};
            sd::LexPos win_hi{b[j] + c, sd::kEpsInf};
            sd::LexPos top{Rat(1), -1};    // t < 1 strictly
            sd::LexPos bottom{Rat(0), 1};  // t > 0 strictly
            // within u-interval i the knot may reach a_i inclusively (corner)
            sd::LexPos cap = i + 1 < P ? sd::LexPos{a[i], 0} : top;
            sd::LexPos ub = sd::lex_min(sd::lex_min(win_hi, cap), top);
            for (const auto& iv : cur.parts) {
              if (cell_ok) {
                sd::LexPos start = iv.lo;
                if (pinned == 1) start.eps += 1;  // strictly after the last knot
                sd::LexPos lb = sd::lex_max(sd::lex_max(start, win_lo), bottom);
                state[1][i][j + 1].insert({lb, ub});
              } else if (pinned == 0) {
                // zero length: t_j == entry; the entry must satisfy the window
                sd::LexPos lb = sd::lex_max(sd::lex_max(iv.lo, win_lo), bottom);
                sd::LexPos hb = sd::lex_min(iv.hi, ub);
                state[1][i][j + 1].insert({lb, hb});
              }
            }
          }
        }
      }
    }
    state[0][P - 1][Q - 1].normalize();
    state[1][P - 1][Q - 1].normalize();
    return !state[0][P - 1][Q - 1].empty() || !state[1][P - 1][Q - 1].empty();
  };

  // smallest feasible candidate (feasibility is monotone in c)
  std::size_t lo = 0, hi = cand.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (feasible(cand[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return cand[lo];
}

}  // namespace fuzdyn
