#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "fuzdyn/errors.hpp"

namespace fuzdyn {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat make_rat(std::int64_t num, std::int64_t den) { return Rat(Int(num), Int(den)); }

inline Int pow2(unsigned long k) { return Int(1) << k; }

inline bool is_power_of_two(const Int& n) { return n > 0 && (n & (n - 1)) == 0; }

// Canonical text form: "p" for integers, "p/q" otherwise.
inline std::string rat_to_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "p", "p/q" and plain decimals like "0.25" or "-1.5".
inline Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw domain_error("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw domain_error("zero denominator in rational literal: " + s);
    return Rat(num, den);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rat(Int(s));
  std::string head = s.substr(0, dot);
  std::string tail = s.substr(dot + 1);
  if (tail.empty()) return Rat(Int(head));
  bool neg = !head.empty() && head[0] == '-';
  if (head == "-" || head == "+") head += "0";
  Int scale = 1;
  for (std::size_t i = 0; i < tail.size(); ++i) scale *= 10;
  Int whole(head);
  Int frac(tail);
  Int num = whole * scale + (neg ? -frac : frac);
  return Rat(num, scale);
}

// Conservative double bracket: lo <= r <= hi always.
struct DoubleBracket {
  double lo = 0.0;
  double hi = 0.0;
};

inline DoubleBracket bracket(const Rat& r) {
  const double inf = std::numeric_limits<double>::infinity();
  const Int& p = numerator(r);
  const Int& q = denominator(r);
  int sign = p.sign();
  if (sign == 0) return {0.0, 0.0};
  long ep = static_cast<long>(msb(abs(p)));
  long eq = static_cast<long>(msb(q));
  if (ep < 62 && eq < 62) {
    double mid = static_cast<double>(p.convert_to<long long>()) /
                 static_cast<double>(q.convert_to<long long>());
    return {std::nextafter(mid, -inf), std::nextafter(mid, inf)};
  }
  long e = ep - eq;  // |r| lies in (2^(e-1), 2^(e+1))
  if (e < -1080) {
    double tiny = std::numeric_limits<double>::denorm_min();
    return sign > 0 ? DoubleBracket{0.0, tiny} : DoubleBracket{-tiny, 0.0};
  }
  if (e > 1030) {
    double big = std::numeric_limits<double>::max();
    return sign > 0 ? DoubleBracket{big, inf} : DoubleBracket{-inf, -big};
  }
  double mid = r.convert_to<double>();
  if (!std::isfinite(mid)) {
    double big = std::numeric_limits<double>::max();
    return sign > 0 ? DoubleBracket{big, inf} : DoubleBracket{-inf, -big};
  }
  return {std::nextafter(mid, -inf), std::nextafter(mid, inf)};
}

// -1 / 0 / +1 for a <=> b; coarse magnitude windows first, exact
// cross-multiplication only when the windows overlap. Matters for traces
// whose values span thousands of binary orders of magnitude.
inline int fast_compare(const Rat& a, const Rat& b) {
  const Int& na = numerator(a);
  const Int& nb = numerator(b);
  int sa = na.sign(), sb = nb.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  long ea = static_cast<long>(msb(abs(na))) - static_cast<long>(msb(denominator(a)));
  long eb = static_cast<long>(msb(abs(nb))) - static_cast<long>(msb(denominator(b)));
  if (ea + 2 <= eb) return -sa;  // |a| < |b| for certain
  if (eb + 2 <= ea) return sa;
  return a < b ? -1 : (b < a ? 1 : 0);
}

inline bool rat_less(const Rat& a, const Rat& b) { return fast_compare(a, b) < 0; }

// scalar-generic ordering helpers for metric kernels (distances are always
// comparable exactly; the Rat overload routes through the window shortcut)
inline bool value_less(const Rat& a, const Rat& b) { return fast_compare(a, b) < 0; }
inline bool value_less(double a, double b) { return a < b; }

// Balanced pairwise sum; keeps intermediate gcd work subquadratic when the
// denominators do not share structure.
inline Rat tree_sum(const std::vector<Rat>& xs, std::size_t lo, std::size_t hi) {
  if (hi <= lo) return Rat(0);
  if (hi - lo == 1) return xs[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  return tree_sum(xs, lo, mid) + tree_sum(xs, mid, hi);
}

class SumAccumulator;

// Frozen view of a running sum: exact value on demand, certified double
// interval for cheap comparisons.
class SumSnapshot {
 public:
  SumSnapshot() : slow_(std::make_shared<std::vector<Rat>>()) {}
  SumSnapshot(Int dy_num, unsigned long dy_exp, std::shared_ptr<const std::vector<Rat>> slow,
              std::size_t slow_count, double lo, double hi)
      : dy_num_(std::move(dy_num)), dy_exp_(dy_exp), slow_(std::move(slow)),
        slow_count_(slow_count), lo_(lo), hi_(hi) {}

  Rat exact() const {
    Rat dy(dy_num_, pow2(dy_exp_));
    return dy + tree_sum(*slow_, 0, slow_count_);
  }

  // -1 / 0 / +1 for sum <=> t; exact arithmetic only when the interval is
  // inconclusive.
  int compare(const Rat& t) const {
    DoubleBracket b = bracket(t);
    if (hi_ < b.lo) return -1;
    if (lo_ > b.hi) return 1;
    Rat s = exact();
    return s < t ? -1 : (s > t ? 1 : 0);
  }

  double lower() const { return lo_; }
  double upper() const { return hi_; }
  double approx() const { return 0.5 * (lo_ + hi_); }

 private:
  Int dy_num_ = 0;
  unsigned long dy_exp_ = 0;
  std::shared_ptr<const std::vector<Rat>> slow_;
  std::size_t slow_count_ = 0;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

// Exact running sum of rationals. Power-of-two denominators (the bulk of the
// gallery traces) are folded with shifts into num/2^exp with no gcd cost;
// other values are queued and summed pairwise only when an exact value is
// demanded. A directed double interval rides along so most threshold
// comparisons never touch the exact representation.
class SumAccumulator {
 public:
  SumAccumulator() : slow_(std::make_shared<std::vector<Rat>>()) {}

  void add(const Rat& v) {
    const Int& den = denominator(v);
    if (is_power_of_two(den)) {
      unsigned long k = den == 1 ? 0 : static_cast<unsigned long>(lsb(den));
      if (k > dy_exp_) {
        dy_num_ <<= (k - dy_exp_);
        dy_exp_ = k;
        dy_num_ += numerator(v);
      } else {
        dy_num_ += numerator(v) << (dy_exp_ - k);
      }
    } else {
      slow_->push_back(v);
    }
    DoubleBracket b = bracket(v);
    lo_ = std::nextafter(lo_ + b.lo, -std::numeric_limits<double>::infinity());
    hi_ = std::nextafter(hi_ + b.hi, std::numeric_limits<double>::infinity());
  }

  SumSnapshot snapshot() const {
    return SumSnapshot(dy_num_, dy_exp_, slow_, slow_->size(), lo_, hi_);
  }

  Rat exact() const { return snapshot().exact(); }
  int compare(const Rat& t) const { return snapshot().compare(t); }
  double lower() const { return lo_; }
  double upper() const { return hi_; }
  double approx() const { return 0.5 * (lo_ + hi_); }

 private:
  Int dy_num_ = 0;
  unsigned long dy_exp_ = 0;
  std::shared_ptr<std::vector<Rat>> slow_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

// Comparison policy per scalar. Rationals compare exactly; doubles get the
// 1e-9 tolerance the float universes use.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
  static constexpr bool exact = true;
  static bool eq(const Rat& a, const Rat& b) { return a == b; }
  static bool leq(const Rat& a, const Rat& b) { return a <= b; }
  static bool less(const Rat& a, const Rat& b) { return a < b; }
  static Rat zero() { return Rat(0); }
  static double to_double(const Rat& a) { return a.convert_to<double>(); }
  static std::string str(const Rat& a) { return rat_to_string(a); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr double tol = 1e-9;
  static bool eq(double a, double b) { return std::fabs(a - b) <= tol; }
  static bool leq(double a, double b) { return a <= b + tol; }
  static bool less(double a, double b) { return a < b - tol; }
  static double zero() { return 0.0; }
  static double to_double(double a) { return a; }
  static std::string str(double a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", a);
    return buf;
  }
};

}  // namespace fuzdyn
