#include "tightgap/interval.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>

namespace tightgap {

using rnd::widen_down;
using rnd::widen_up;

Interval intersect(const Interval& a, const Interval& b) {
  double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
  if (lo > hi) throw DomainError("empty intersection");
  return Interval::unchecked(lo, hi);
}

Interval operator*(const Interval& a, const Interval& b) {
  // Sign-case split keeps the common all-positive case at two products.
  if (a.lo >= 0 && b.lo >= 0)
    return Interval::unchecked(rnd::mul_down(a.lo, b.lo), rnd::mul_up(a.hi, b.hi));
  if (a.hi <= 0 && b.hi <= 0)
    return Interval::unchecked(rnd::mul_down(a.hi, b.hi), rnd::mul_up(a.lo, b.lo));
  if (a.lo >= 0 && b.hi <= 0)
    return Interval::unchecked(rnd::mul_down(a.hi, b.lo), rnd::mul_up(a.lo, b.hi));
  if (a.hi <= 0 && b.lo >= 0)
    return Interval::unchecked(rnd::mul_down(a.lo, b.hi), rnd::mul_up(a.hi, b.lo));
  double lo = std::min({rnd::mul_down(a.lo, b.lo), rnd::mul_down(a.lo, b.hi), rnd::mul_down(a.hi, b.lo),
                        rnd::mul_down(a.hi, b.hi)});
  double hi = std::max({rnd::mul_up(a.lo, b.lo), rnd::mul_up(a.lo, b.hi), rnd::mul_up(a.hi, b.lo),
                        rnd::mul_up(a.hi, b.hi)});
  return Interval::unchecked(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw DivisionByIntervalContainingZero();
  if (b.lo > 0) {
    if (a.lo >= 0) return Interval::unchecked(rnd::div_down(a.lo, b.hi), rnd::div_up(a.hi, b.lo));
    if (a.hi <= 0) return Interval::unchecked(rnd::div_down(a.lo, b.lo), rnd::div_up(a.hi, b.hi));
    return Interval::unchecked(rnd::div_down(a.lo, b.lo), rnd::div_up(a.hi, b.lo));
  }
  if (a.lo >= 0) return Interval::unchecked(rnd::div_down(a.hi, b.hi), rnd::div_up(a.lo, b.lo));
  if (a.hi <= 0) return Interval::unchecked(rnd::div_down(a.hi, b.lo), rnd::div_up(a.lo, b.hi));
  return Interval::unchecked(rnd::div_down(a.hi, b.hi), rnd::div_up(a.lo, b.hi));
}

Interval arith(const Interval& a, const Interval& b, ArithKind kind) {
  switch (kind) {
    case ArithKind::add: return a + b;
    case ArithKind::sub: return a - b;
    case ArithKind::mul: return a * b;
    case ArithKind::div: return a / b;
  }
  throw std::logic_error("bad ArithKind");
}

Interval elem(const Interval& a, ElemKind kind) {
  switch (kind) {
    case ElemKind::exp: return exp(a);
    case ElemKind::sqrt: return sqrt(a);
    case ElemKind::abs: return abs(a);
    case ElemKind::neg: return -a;
  }
  throw std::logic_error("bad ElemKind");
}

Interval sqr(const Interval& a) {
  if (a.lo >= 0) return Interval::unchecked(rnd::mul_down(a.lo, a.lo), rnd::mul_up(a.hi, a.hi));
  if (a.hi <= 0) return Interval::unchecked(rnd::mul_down(a.hi, a.hi), rnd::mul_up(a.lo, a.lo));
  double m = std::max(-a.lo, a.hi);
  return Interval::unchecked(0.0, rnd::mul_up(m, m));
}

Interval sqrt(const Interval& a) {
  if (a.hi < 0) throw DomainError("sqrt of negative interval");
  return Interval::unchecked(rnd::sqrt_down(a.lo), rnd::sqrt_up(a.hi));
}

Interval abs(const Interval& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return -a;
  return Interval::unchecked(0.0, std::max(-a.lo, a.hi));
}

Interval min(const Interval& a, const Interval& b) {
  return Interval::unchecked(std::min(a.lo, b.lo), std::min(a.hi, b.hi));
}

Interval max(const Interval& a, const Interval& b) {
  return Interval::unchecked(std::max(a.lo, b.lo), std::max(a.hi, b.hi));
}

namespace {

double exp_down(double x) {
  if (x == 0) return 1.0;
  if (x == -kInf) return 0.0;
  return std::max(0.0, widen_down(std::exp(x), ulps::kExp));
}

double exp_up(double x) {
  if (x == 0) return 1.0;
  if (x == -kInf) return 0.0;
  double e = std::exp(x);
  if (std::isinf(e)) return e;
  return widen_up(e, ulps::kExp);
}

}  // namespace

Interval exp(const Interval& a) { return Interval::unchecked(exp_down(a.lo), exp_up(a.hi)); }

Interval log(const Interval& a) {
  if (a.hi <= 0) throw DomainError("log of nonpositive interval");
  auto lg_down = [](double x) {
    if (x <= 0) return -kInf;
    if (x == 1) return 0.0;
    return widen_down(std::log(x), ulps::kLog);
  };
  auto lg_up = [](double x) {
    if (x == 1) return 0.0;
    return widen_up(std::log(x), ulps::kLog);
  };
  return Interval::unchecked(lg_down(a.lo), lg_up(a.hi));
}

namespace {

// Does some integer m (with m ≡ parity mod 2 when parity >= 0) possibly lie in q?
bool may_contain_integer(const Interval& q, int parity) {
  if (!q.is_finite()) return true;
  double m = std::ceil(q.lo);
  if (m > q.hi) return false;
  if (parity < 0) return true;
  if (std::fmod(std::fabs(m), 2.0) == parity) return true;
  return m + 1 <= q.hi;
}

// Enclosure of cos over `a`, using extremes at multiples of pi.
Interval cos_impl(const Interval& a, double shift_half_pi) {
  if (!a.is_finite() || a.width() >= 7.0) return {-1.0, 1.0};
  // q encloses a/pi - shift; cos-like extremes at integer q (even: max, odd: min).
  Interval q = a / consts::pi() - Interval(shift_half_pi);
  auto f = [&](double x) { return shift_half_pi == 0 ? std::cos(x) : std::sin(x); };
  double c0 = f(a.lo), c1 = f(a.hi);
  double lo = widen_down(std::min(c0, c1), ulps::kTrig);
  double hi = widen_up(std::max(c0, c1), ulps::kTrig);
  if (may_contain_integer(q, 0)) hi = 1.0;
  if (may_contain_integer(q, 1)) lo = -1.0;
  return Interval::unchecked(std::max(lo, -1.0), std::min(hi, 1.0));
}

}  // namespace

Interval cos(const Interval& a) {
  if (a.is_point() && a.lo == 0) return Interval(1.0);
  return cos_impl(a, 0.0);
}

// sin(x) = cos(x - pi/2): maxima at x/pi - 1/2 even, minima odd.
Interval sin(const Interval& a) {
  if (a.is_point() && a.lo == 0) return Interval(0.0);
  return cos_impl(a, 0.5);
}

Interval asin(const Interval& a) {
  if (a.hi < -1 || a.lo > 1) throw DomainError("asin outside [-1,1]");
  double lo = std::max(a.lo, -1.0), hi = std::min(a.hi, 1.0);
  Interval half_pi = consts::pi() * Interval(0.5);
  auto down = [&](double x) {
    if (x == 0) return 0.0;
    if (x == -1) return -half_pi.hi;
    return widen_down(std::asin(x), ulps::kAsin);
  };
  auto up = [&](double x) {
    if (x == 0) return 0.0;
    if (x == 1) return half_pi.hi;
    return widen_up(std::asin(x), ulps::kAsin);
  };
  return Interval::unchecked(std::max(down(lo), -half_pi.hi), std::min(up(hi), half_pi.hi));
}

Interval acos(const Interval& a) {
  if (a.hi < -1 || a.lo > 1) throw DomainError("acos outside [-1,1]");
  double lo = std::max(a.lo, -1.0), hi = std::min(a.hi, 1.0);
  Interval pi = consts::pi();
  auto down = [&](double x) {
    if (x == 1) return 0.0;
    return std::max(0.0, widen_down(std::acos(x), ulps::kAsin));
  };
  auto up = [&](double x) {
    if (x == 1) return 0.0;
    if (x == -1) return pi.hi;
    return widen_up(std::acos(x), ulps::kAsin);
  };
  return Interval::unchecked(down(hi), std::min(up(lo), pi.hi));
}

Interval erfc(const Interval& a) {
  auto down = [](double x) {
    if (x == kInf) return 0.0;
    if (x == -kInf) return 2.0;
    if (x == 0) return 1.0;
    return std::max(0.0, widen_down(std::erfc(x), ulps::kErfc));
  };
  auto up = [](double x) {
    if (x == kInf) return 0.0;
    if (x == -kInf) return 2.0;
    if (x == 0) return 1.0;
    return std::min(2.0, widen_up(std::erfc(x), ulps::kErfc));
  };
  return Interval::unchecked(down(a.hi), up(a.lo));
}

Interval pow(const Interval& a, int n) {
  if (n < 0) return recip(pow(a, -n));
  if (n == 0) return Interval(1.0);
  Interval base = (n % 2 == 0) ? abs(a) : a;
  Interval r(1.0);
  // Monotone in base on each sign region; square-and-multiply stays inclusion-sound.
  Interval p = base;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      r = first ? p : r * p;
      first = false;
    }
    n >>= 1;
    if (n) p = sqr(p);
  }
  return r;
}

Interval recip(const Interval& a) { return Interval(1.0) / a; }

namespace consts {

Interval pi() {
  // M_PI is the double just below pi.
  static const Interval v = Interval::unchecked(M_PI, rnd::next_up(M_PI));
  return v;
}
Interval two_pi() {
  static const Interval v = pi() * Interval(2.0);
  return v;
}
Interval sqrt2() {
  static const Interval v = sqrt(Interval(2.0));
  return v;
}
Interval inv_sqrt2() {
  static const Interval v = recip(sqrt2());
  return v;
}
Interval inv_sqrt_2pi() {
  static const Interval v = recip(sqrt(two_pi()));
  return v;
}
Interval inv_2pi() {
  static const Interval v = recip(two_pi());
  return v;
}

}  // namespace consts

std::string to_string(const Interval& x, int digits) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%.*g, %.*g]", digits, x.lo, digits, x.hi);
  return buf;
}

Box::Box(std::vector<std::string> names, std::vector<Interval> ranges)
    : names_(std::make_shared<const std::vector<std::string>>(std::move(names))), ranges_(std::move(ranges)) {
  if (names_->size() != ranges_.size()) throw std::invalid_argument("box: names and ranges differ in length");
  std::unordered_set<std::string> seen;
  for (const auto& n : *names_)
    if (!seen.insert(n).second) throw std::invalid_argument("box: duplicate dimension " + n);
}

namespace {
std::vector<std::string> names_of(std::initializer_list<std::pair<std::string, Interval>> dims) {
  std::vector<std::string> v;
  for (const auto& d : dims) v.push_back(d.first);
  return v;
}
std::vector<Interval> ranges_of(std::initializer_list<std::pair<std::string, Interval>> dims) {
  std::vector<Interval> v;
  for (const auto& d : dims) v.push_back(d.second);
  return v;
}
}  // namespace

Box::Box(std::initializer_list<std::pair<std::string, Interval>> dims) : Box(names_of(dims), ranges_of(dims)) {}

std::size_t Box::index(const std::string& name) const {
  for (std::size_t i = 0; i < names_->size(); ++i)
    if ((*names_)[i] == name) return i;
  throw std::out_of_range("box has no dimension " + name);
}

bool Box::contains(const Box& o) const {
  if (o.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (name(i) != o.name(i) || !ranges_[i].contains(o.ranges_[i])) return false;
  return true;
}

std::pair<Box, Box> split(const Box& box, std::size_t dim) {
  const Interval& r = box[dim];
  double m = r.mid();
  if (!(m > r.lo && m < r.hi)) throw ZeroWidthDimension("cannot split dimension " + box.name(dim));
  return {box.with(dim, Interval::unchecked(r.lo, m)), box.with(dim, Interval::unchecked(m, r.hi))};
}

std::pair<Box, Box> split(const Box& box, const std::string& dim) { return split(box, box.index(dim)); }

std::size_t pick_split_dim(const Box& box, SplitHeuristic heuristic) {
  std::size_t best = box.size();
  double bw = 0;
  for (std::size_t i = 0; i < box.size(); ++i) {
    double w = box[i].hi - box[i].lo;
    if (!(w > 0)) continue;
    bool better = best == box.size() || (heuristic == SplitHeuristic::widest ? w > bw : w < bw);
    if (better) {
      best = i;
      bw = w;
    }
  }
  if (best == box.size()) throw AllDimensionsDegenerate();
  return best;
}

const char* to_string(SplitHeuristic h) { return h == SplitHeuristic::widest ? "widest" : "shortest_nonzero"; }

SplitHeuristic parse_heuristic(const std::string& s) {
  if (s == "widest") return SplitHeuristic::widest;
  if (s == "shortest_nonzero") return SplitHeuristic::shortest_nonzero;
  throw std::invalid_argument("unknown split heuristic: " + s);
}

}  // namespace tightgap
