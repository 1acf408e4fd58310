// Interval arithmetic on double endpoints with outward rounding.
//
// Basic operations (+, -, *, /, sqrt) are rounded exactly in the outward
// direction using error-free transforms, so an exact result stays a point.
// Elementary functions come from libm and are widened by a fixed number of
// ulps; see docs/numerics.md for the margins and how they are tested.
#pragma once

#include <bit>
#include <cfloat>
#include <cstdint>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tightgap {

struct IntervalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DivisionByIntervalContainingZero : IntervalError {
  DivisionByIntervalContainingZero() : IntervalError("division by interval containing zero") {}
};
struct DomainError : IntervalError {
  using IntervalError::IntervalError;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr int kPrecisionBits = 53;

namespace rnd {

inline double next_up(double x) {
  if (!(x < kInf)) return x;  // +inf and NaN
  if (x == 0) return DBL_TRUE_MIN;
  auto u = std::bit_cast<std::uint64_t>(x);
  return std::bit_cast<double>(x > 0 ? u + 1 : u - 1);
}
inline double next_down(double x) { return -next_up(-x); }

// Below this magnitude the fma residual may itself underflow.
inline constexpr double kTiny = 0x1p-960;

inline double add_down(double a, double b) {
  double s = a + b;
  if (std::isnan(s)) return -kInf;
  if (std::isinf(s)) {
    if (std::isinf(a) || std::isinf(b)) return s;
    return s > 0 ? DBL_MAX : s;
  }
  double bb = s - a;
  double e = (a - (s - bb)) + (b - bb);
  return e < 0 ? next_down(s) : s;
}

inline double add_up(double a, double b) {
  double s = a + b;
  if (std::isnan(s)) return kInf;
  if (std::isinf(s)) {
    if (std::isinf(a) || std::isinf(b)) return s;
    return s < 0 ? -DBL_MAX : s;
  }
  double bb = s - a;
  double e = (a - (s - bb)) + (b - bb);
  return e > 0 ? next_up(s) : s;
}

inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

// 0 * inf is taken as 0: endpoints stand for limits of real numbers.
inline double mul_down(double a, double b) {
  if (a == 0 || b == 0) return 0.0;
  double p = a * b;
  if (std::isinf(p)) {
    if (std::isinf(a) || std::isinf(b)) return p;
    return p > 0 ? DBL_MAX : p;
  }
  if (std::fabs(p) < kTiny) return next_down(p);
#ifdef __FMA__
  double e = std::fma(a, b, -p);
  return e < 0 ? next_down(p) : p;
#else
  return next_down(p);
#endif
}

inline double mul_up(double a, double b) {
  if (a == 0 || b == 0) return 0.0;
  double p = a * b;
  if (std::isinf(p)) {
    if (std::isinf(a) || std::isinf(b)) return p;
    return p < 0 ? -DBL_MAX : p;
  }
  if (std::fabs(p) < kTiny) return next_up(p);
#ifdef __FMA__
  double e = std::fma(a, b, -p);
  return e > 0 ? next_up(p) : p;
#else
  return next_up(p);
#endif
}

// b != 0 is guaranteed by the caller.
inline double div_down(double a, double b) {
  if (a == 0) return 0.0;
  if (std::isinf(a) && std::isinf(b)) return ((a > 0) == (b > 0)) ? 0.0 : -kInf;
  double q = a / b;
  if (std::isinf(q)) {
    if (std::isinf(a)) return q;
    return q > 0 ? DBL_MAX : q;
  }
  if (std::isinf(b)) return (a > 0) == (b > 0) ? 0.0 : -DBL_TRUE_MIN;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_down(q);
#ifdef __FMA__
  double r = std::fma(-q, b, a);  // a - q*b
  bool below = (r > 0) == (b > 0);
  return (r != 0 && !below) ? next_down(q) : q;
#else
  return next_down(q);
#endif
}

inline double div_up(double a, double b) {
  if (a == 0) return 0.0;
  if (std::isinf(a) && std::isinf(b)) return ((a > 0) == (b > 0)) ? kInf : 0.0;
  double q = a / b;
  if (std::isinf(q)) {
    if (std::isinf(a)) return q;
    return q < 0 ? -DBL_MAX : q;
  }
  if (std::isinf(b)) return (a > 0) == (b > 0) ? DBL_TRUE_MIN : 0.0;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_up(q);
#ifdef __FMA__
  double r = std::fma(-q, b, a);
  bool below = (r > 0) == (b > 0);
  return (r != 0 && below) ? next_up(q) : q;
#else
  return next_up(q);
#endif
}

inline double sqrt_down(double a) {
  if (a <= 0) return 0.0;
  double r = std::sqrt(a);
  if (std::isinf(r)) return r;
#ifdef __FMA__
  double e = std::fma(-r, r, a);
  return e < 0 ? next_down(r) : r;
#else
  return next_down(r);
#endif
}

inline double sqrt_up(double a) {
  if (a <= 0) return 0.0;
  double r = std::sqrt(a);
  if (std::isinf(r)) return r;
#ifdef __FMA__
  double e = std::fma(-r, r, a);
  return e > 0 ? next_up(r) : r;
#else
  return next_up(r);
#endif
}

// Widen a libm result by k ulps (plus k denormal steps near zero).
inline double widen_down(double x, int k) {
  if (!std::isfinite(x)) return x;
  double m = std::fabs(x) * ((k + 1) * DBL_EPSILON) + k * DBL_TRUE_MIN;
  return x - m;
}
inline double widen_up(double x, int k) {
  if (!std::isfinite(x)) return x;
  double m = std::fabs(x) * ((k + 1) * DBL_EPSILON) + k * DBL_TRUE_MIN;
  return x + m;
}

}  // namespace rnd

// ulp margins applied to libm results.
namespace ulps {
inline constexpr int kExp = 2;
inline constexpr int kLog = 2;
inline constexpr int kTrig = 2;
inline constexpr int kAsin = 2;
inline constexpr int kErfc = 8;
}  // namespace ulps

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double v) : lo(v), hi(v) {}  // NOLINT: point intervals convert implicitly
  Interval(double l, double h) : lo(l), hi(h) {
    if (std::isnan(l) || std::isnan(h) || l > h)
      throw DomainError("malformed interval [" + std::to_string(l) + ", " + std::to_string(h) + "]");
  }

  static Interval entire() { return {-kInf, kInf}; }
  // Encloses the decimal that `v` was parsed from (strtod rounds to nearest).
  static Interval around(double v) { return {rnd::next_down(v), rnd::next_up(v)}; }
  static Interval unchecked(double l, double h) {
    Interval r;
    r.lo = l;
    r.hi = h;
    return r;
  }

  double width() const { return rnd::sub_up(hi, lo); }
  double mid() const {
    if (std::isinf(lo) && std::isinf(hi)) return 0.0;
    if (std::isinf(lo)) return hi > 0 ? 0.0 : 2 * hi - 1.0;
    if (std::isinf(hi)) return lo < 0 ? 0.0 : 2 * lo + 1.0;
    double m = lo + 0.5 * (hi - lo);
    if (m < lo) m = lo;
    if (m > hi) m = hi;
    return m;
  }
  double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
  double mig() const { return (lo <= 0 && hi >= 0) ? 0.0 : std::min(std::fabs(lo), std::fabs(hi)); }
  bool is_point() const { return lo == hi; }
  bool is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool contains_zero() const { return lo <= 0 && 0 <= hi; }
  bool interior_contains(const Interval& o) const { return lo < o.lo && o.hi < hi; }

  // Certain comparisons: true only if every point satisfies the relation.
  bool lt(double c) const { return hi < c; }
  bool gt(double c) const { return lo > c; }
  bool le(double c) const { return hi <= c; }
  bool ge(double c) const { return lo >= c; }
  bool lt(const Interval& o) const { return hi < o.lo; }
  bool gt(const Interval& o) const { return lo > o.hi; }
};

inline bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }

inline Interval hull(const Interval& a, const Interval& b) {
  return Interval::unchecked(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}
inline bool overlaps(const Interval& a, const Interval& b) { return a.lo <= b.hi && b.lo <= a.hi; }
// Throws DomainError when the intersection is empty.
Interval intersect(const Interval& a, const Interval& b);

inline Interval operator+(const Interval& a, const Interval& b) {
  return Interval::unchecked(rnd::add_down(a.lo, b.lo), rnd::add_up(a.hi, b.hi));
}
inline Interval operator-(const Interval& a) { return Interval::unchecked(-a.hi, -a.lo); }
inline Interval operator-(const Interval& a, const Interval& b) {
  return Interval::unchecked(rnd::sub_down(a.lo, b.hi), rnd::sub_up(a.hi, b.lo));
}
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);

inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
inline Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }
inline Interval& operator/=(Interval& a, const Interval& b) { return a = a / b; }

enum class ArithKind { add, sub, mul, div };
enum class ElemKind { exp, sqrt, abs, neg };

Interval arith(const Interval& a, const Interval& b, ArithKind kind);
Interval elem(const Interval& a, ElemKind kind);

Interval sqr(const Interval& a);
Interval sqrt(const Interval& a);  // clamps to [0, inf); DomainError if a < 0 entirely
Interval abs(const Interval& a);
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);
Interval exp(const Interval& a);
Interval log(const Interval& a);
Interval sin(const Interval& a);
Interval cos(const Interval& a);
Interval asin(const Interval& a);
Interval acos(const Interval& a);
Interval erfc(const Interval& a);
Interval pow(const Interval& a, int n);
Interval recip(const Interval& a);

namespace consts {
Interval pi();
Interval two_pi();
Interval sqrt2();
Interval inv_sqrt2();
Interval inv_sqrt_2pi();
Interval inv_2pi();
}  // namespace consts

std::string to_string(const Interval& x, int digits = 17);

// A product of named intervals. Names are shared between a box and its
// descendants.
class Box {
 public:
  Box() = default;
  Box(std::vector<std::string> names, std::vector<Interval> ranges);
  Box(std::initializer_list<std::pair<std::string, Interval>> dims);

  std::size_t size() const { return ranges_.size(); }
  const std::string& name(std::size_t i) const { return (*names_)[i]; }
  const std::vector<std::string>& names() const { return *names_; }
  const Interval& operator[](std::size_t i) const { return ranges_[i]; }
  Interval& operator[](std::size_t i) { return ranges_[i]; }
  const Interval& at(const std::string& name) const { return ranges_[index(name)]; }
  std::size_t index(const std::string& name) const;  // throws std::out_of_range
  const std::vector<Interval>& ranges() const { return ranges_; }
  Box with(std::size_t i, const Interval& r) const {
    Box b = *this;
    b.ranges_[i] = r;
    return b;
  }
  bool contains(const Box& o) const;

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
  std::vector<Interval> ranges_;
};

struct ZeroWidthDimension : IntervalError {
  using IntervalError::IntervalError;
};
struct AllDimensionsDegenerate : IntervalError {
  AllDimensionsDegenerate() : IntervalError("all dimensions are degenerate") {}
};

enum class SplitHeuristic { widest, shortest_nonzero };

std::pair<Box, Box> split(const Box& box, std::size_t dim);
std::pair<Box, Box> split(const Box& box, const std::string& dim);
std::size_t pick_split_dim(const Box& box, SplitHeuristic heuristic);
const char* to_string(SplitHeuristic h);
SplitHeuristic parse_heuristic(const std::string& s);

}  // namespace tightgap
