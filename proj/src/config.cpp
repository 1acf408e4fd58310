#include "tightgap/config.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>

namespace tightgap {

bool is_unary(Pred p) { return p == Pred::UnaryPos || p == Pred::UnaryNeg; }

const char* pred_name(Pred p) {
  switch (p) {
    case Pred::Or: return "OR";
    case Pred::ImpOr: return "IMPOR";
    case Pred::Nand: return "NAND";
    case Pred::UnaryPos: return "POS";
    case Pred::UnaryNeg: return "NEG";
  }
  return "?";
}

Pred parse_pred(const std::string& s) {
  std::string u;
  for (char ch : s) u += char(std::toupper(static_cast<unsigned char>(ch)));
  if (u == "OR") return Pred::Or;
  if (u == "IMPOR") return Pred::ImpOr;
  if (u == "NAND") return Pred::Nand;
  if (u == "POS") return Pred::UnaryPos;
  if (u == "NEG") return Pred::UnaryNeg;
  throw ParseError("unknown predicate: " + s);
}

std::array<int, 4> fourier_quarters(Pred p) {
  switch (p) {
    case Pred::Or: return {3, -1, -1, -1};
    case Pred::ImpOr: return {3, 1, -1, 1};
    case Pred::Nand: return {3, 1, 1, -1};
    case Pred::UnaryPos: return {2, -2, 0, 0};
    case Pred::UnaryNeg: return {2, 2, 0, 0};
  }
  return {0, 0, 0, 0};
}

bool satisfied(Pred p, int xi, int xj) {
  bool ti = xi == -1, tj = xj == -1;
  switch (p) {
    case Pred::Or: return ti || tj;
    case Pred::ImpOr: return !ti || tj;
    case Pred::Nand: return !ti || !tj;
    case Pred::UnaryPos: return ti;
    case Pred::UnaryNeg: return !ti;
  }
  return false;
}

const char* to_string(Tri t) { return t == Tri::yes ? "yes" : t == Tri::no ? "no" : "unknown"; }

Configuration Configuration::binary(Pred p, Interval bi, Interval bj, Interval bij) {
  if (is_unary(p)) throw std::invalid_argument("binary configuration needs a binary predicate");
  return {p, bi, bj, bij, false};
}

Configuration Configuration::unary(Pred p, Interval b) {
  if (!is_unary(p)) throw std::invalid_argument("unary configuration needs a unary predicate");
  return {p, b, Interval(0.0), Interval(0.0), false};
}

Configuration Configuration::simple(Pred p, Interval b) {
  Configuration c = binary(p, b, b, Interval(2.0) * abs(b) - Interval(1.0));
  c.feasible_asserted = true;
  return c;
}

Interval parse_decimal(const std::string& s) {
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || std::isnan(v)) throw ParseError("bad number: " + s);
  if (std::isinf(v)) return Interval(v);
  if (s.find("0x") != std::string::npos || s.find("0X") != std::string::npos) return Interval(v);
  // Exact iff the decimal M * 10^e is a dyadic rational with a short odd part.
  std::uint64_t m = 0;
  int digits = 0, e = 0;
  bool frac = false, ok = true;
  const char* q = begin;
  if (*q == '+' || *q == '-') ++q;
  for (; *q && *q != 'e' && *q != 'E'; ++q) {
    if (*q == '.') {
      frac = true;
      continue;
    }
    if (m == 0 && *q == '0') {
      if (frac) --e;
      continue;
    }
    if (++digits > 18) {
      ok = false;
      break;
    }
    m = m * 10 + std::uint64_t(*q - '0');
    if (frac) --e;
  }
  if (ok && (*q == 'e' || *q == 'E')) e += std::atoi(q + 1);
  if (ok && m != 0) {
    while (m % 10 == 0) {
      m /= 10;
      ++e;
    }
    if (e < 0) {
      for (int k = 0; k < -e && ok; ++k) {
        if (m % 5 != 0) ok = false;
        m /= 5;
      }
    } else {
      for (int k = 0; k < e && ok; ++k) {
        if (m > (std::uint64_t(1) << 53)) ok = false;
        m *= 5;
      }
    }
    ok = ok && m < (std::uint64_t(1) << 53) && e > -1000 && e < 300;
  }
  return ok ? Interval(v) : Interval::around(v);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

Interval parse_value(const std::string& tok) {
  std::string t = trim(tok);
  if (!t.empty() && t.front() == '[') {
    std::size_t comma = t.find(',');
    if (t.back() != ']' || comma == std::string::npos) throw ParseError("bad interval: " + t);
    Interval lo = parse_decimal(trim(t.substr(1, comma - 1)));
    Interval hi = parse_decimal(trim(t.substr(comma + 1, t.size() - comma - 2)));
    if (lo.lo > hi.hi) throw ParseError("empty interval: " + t);
    return Interval::unchecked(lo.lo, hi.hi);
  }
  return parse_decimal(t);
}

// Shortest decimal that parses back to exactly v, else a hex float.
std::string format_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) {
      Interval back = parse_decimal(buf);
      if (back.is_point()) return buf;
      break;
    }
  }
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string format_value(const Interval& v) {
  if (v.is_point()) return format_double(v.lo);
  return "[" + format_double(v.lo) + "," + format_double(v.hi) + "]";
}

}  // namespace

Configuration parse_configuration(const std::string& text) {
  std::string s = trim(text);
  std::size_t open = s.find('(');
  if (open == std::string::npos || s.back() != ')') throw ParseError("bad configuration literal: " + s);
  Pred p = parse_pred(trim(s.substr(0, open)));
  std::string body = s.substr(open + 1, s.size() - open - 2);
  // Split on top-level ',' and ';' (commas inside [..] belong to intervals).
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  char sep_seen = 0;
  for (char ch : body) {
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (depth == 0 && (ch == ',' || ch == ';')) {
      if (ch == ';') sep_seen = ';';
      parts.push_back(cur);
      cur.clear();
      continue;
    }
    cur += ch;
  }
  parts.push_back(cur);
  if (is_unary(p)) {
    if (parts.size() != 1) throw ParseError("unary literal takes one bias: " + s);
    return Configuration::unary(p, parse_value(parts[0]));
  }
  if (parts.size() != 3) throw ParseError("binary literal takes (b_i,b_j;b_ij): " + s);
  (void)sep_seen;
  return Configuration::binary(p, parse_value(parts[0]), parse_value(parts[1]), parse_value(parts[2]));
}

std::string format_configuration(const Configuration& c) {
  std::string s = pred_name(c.pred);
  if (is_unary(c.pred)) return s + "(" + format_value(c.bi) + ")";
  return s + "(" + format_value(c.bi) + "," + format_value(c.bj) + ";" + format_value(c.bij) + ")";
}

Tri feasible(const Configuration& c) {
  Interval one(1.0);
  auto in_unit = [](const Interval& b) {
    if (b.lo >= -1 && b.hi <= 1) return Tri::yes;
    if (b.hi < -1 || b.lo > 1) return Tri::no;
    return Tri::unknown;
  };
  Tri r = in_unit(c.bi);
  if (is_unary(c.pred) || r == Tri::no) return r;
  Tri rj = in_unit(c.bj);
  if (rj == Tri::no) return Tri::no;
  if (rj == Tri::unknown) r = Tri::unknown;
  // b_ij >= -1 + |b_i + b_j| and b_ij <= 1 - |b_i - b_j|
  Interval lower = c.bij - (abs(c.bi + c.bj) - one);
  Interval upper = (one - abs(c.bi - c.bj)) - c.bij;
  for (const Interval& m : {lower, upper}) {
    if (m.hi < 0) return Tri::no;
    if (m.lo < 0) r = Tri::unknown;
  }
  return r;
}

Interval rho_of(const Configuration& c) {
  if (is_unary(c.pred)) throw std::invalid_argument("rho_of needs a binary configuration");
  Interval one(1.0);
  Interval d = (one - sqr(c.bi)) * (one - sqr(c.bj));
  if (d.hi <= 0) return Interval(0.0);
  Interval r = d.lo <= 0 ? Interval::entire() : (c.bij - c.bi * c.bj) / sqrt(d);
  if (c.feasible_asserted) r = overlaps(r, Interval(-1, 1)) ? intersect(r, Interval(-1, 1)) : r;
  if (d.lo <= 0) r = hull(r, Interval(0.0));
  return r;
}

Interval value(const Configuration& c) {
  auto q = fourier_quarters(c.pred);
  Interval v = Interval(double(q[0])) + Interval(double(q[1])) * c.bi;
  if (!is_unary(c.pred)) v = v + Interval(double(q[2])) * c.bj + Interval(double(q[3])) * c.bij;
  return v * Interval(0.25);
}

Tri positivity(const Configuration& c) {
  Interval prod = Interval(double(fourier_quarters(c.pred)[3])) * rho_of(c);
  if (prod.lo >= 0) return Tri::yes;
  if (prod.hi < 0) return Tri::no;
  return Tri::unknown;
}

Interval prob_thresh(const Configuration& c, const Interval& ti, const Interval& tj, const Correlation& rho,
                     double tol) {
  Interval one(1.0);
  Interval p;
  switch (c.pred) {
    case Pred::UnaryNeg: return Phi(ti);
    case Pred::UnaryPos: return Phi(-ti);
    case Pred::Or: p = one - biv_Phi(ti, tj, rho, tol); break;
    case Pred::ImpOr: p = one - biv_Phi(-ti, tj, Correlation(-rho.rho), tol); break;
    case Pred::Nand: p = one - biv_Phi(-ti, -tj, rho, tol); break;
  }
  return intersect(p, Interval(0, 1));
}

Interval prob_thresh(const Configuration& c, const Interval& ti, const Interval& tj, double tol) {
  if (is_unary(c.pred)) return prob_thresh(c, ti, tj, Correlation(0.0), tol);
  return prob_thresh(c, ti, tj, Correlation::clamped(rho_of(c)), tol);
}

Interval Scheme::false_prob(const Interval& b) const {
  Interval p = kind == SchemeKind::llz ? (Interval(1.0) + param * b) * Interval(0.5)
                                       : param * (Interval(1.0) + b) * Interval(0.5);
  return intersect(p, Interval(0, 1));
}

Interval Scheme::threshold(const Interval& b) const { return Phi_inv(false_prob(b)); }

Interval Scheme::f(const Interval& b) const {
  return kind == SchemeKind::llz ? param * b : param * (Interval(1.0) + b) - Interval(1.0);
}

Interval prob_scheme(const Configuration& c, const Scheme& s, double tol) {
  Interval ti = s.threshold(c.bi);
  Interval tj = is_unary(c.pred) ? Interval(0.0) : s.threshold(c.bj);
  return prob_thresh(c, ti, tj, tol);
}

Interval prob_beta(const Configuration& c, const Interval& beta, double tol) {
  return prob_scheme(c, Scheme{SchemeKind::llz, beta}, tol);
}

Interval f_beta(const Configuration& c, const Interval& beta, double tol) {
  return prob_beta(c, beta, tol) - beta * value(c);
}

Interval h_gamma(const Configuration& c, const Interval& gamma, double tol) {
  return prob_scheme(c, Scheme{SchemeKind::gamma, gamma}, tol) - gamma * value(c);
}

namespace step3 {

namespace {
Interval P(const Interval& b, const Interval& t) {
  Interval one(1.0);
  return sqr(one - (sqr(b) + sqr(t))) - Interval(4.0) * sqr(b) * sqr(t);
}
}  // namespace

Interval rho(const Interval& b, const Interval& t) {
  Interval ab = abs(b);
  Interval num = sqr(t) - sqr(Interval(1.0) - ab);
  Interval p = P(ab, t);
  if (p.lo <= 0) throw BoundaryBias();
  return num / sqrt(p);
}

Interval drho_dt_factor(const Interval& b, const Interval& t) {
  Interval ab = abs(b);
  Interval p = P(ab, t);
  if (p.lo <= 0) throw BoundaryBias();
  Interval num = Interval(4.0) * ab * (sqr(Interval(1.0) - ab) - sqr(t));
  return num / (p * sqrt(p));
}

bool certify_drho_bound(const Interval& b, const Interval& t) {
  Interval k = drho_dt_factor(b, t);
  return k.lo >= 0 && k.lt(Interval(2.0) / Interval(3.0));
}

bool certify_lhs_bound(const Interval& b, const Interval& t, double beta_min) {
  // rho is nondecreasing in t >= 0 (K >= 0 on [0, t.hi]) and rho(b, 0) = -(1-b)/(1+b)
  // is increasing in b, so the lower corner (b.lo, 0) bounds 1 + rho from below.
  if (t.lo < 0 || b.lo <= 0) return false;
  if (drho_dt_factor(b, Interval(0.0, t.hi)).lo < 0) return false;
  Interval rho0 = -(Interval(1.0) - Interval(b.lo)) / (Interval(1.0) + Interval(b.lo));
  Interval beta(beta_min);
  Interval lhs = sqr(beta) * consts::pi() * (Interval(1.0) + rho0);
  return lhs.ge(Interval::around(0.681).hi);
}

}  // namespace step3

Interval g_b_beta(const Interval& b, const Interval& beta, const Interval& t, double tol) {
  Scheme s{SchemeKind::llz, beta};
  Interval t1 = s.threshold(b + t), t2 = s.threshold(b - t);
  Correlation rho = Correlation::clamped(step3::rho(b, t));
  return intersect(Interval(1.0) - biv_Phi(t1, t2, rho, tol), Interval(0, 1));
}

Interval g_b_beta_dt(const Interval& b, const Interval& beta, const Interval& t) {
  Scheme s{SchemeKind::llz, beta};
  Interval t1 = s.threshold(b + t), t2 = s.threshold(b - t);
  Interval rho = step3::rho(b, t);
  Interval drho = t * step3::drho_dt_factor(b, t);
  Interval half_beta = beta * Interval(0.5);
  return -(biv_phi(t1, t2, rho) * drho + half_beta * (cond_Phi(t1, t2, rho) - cond_Phi(t2, t1, rho)));
}

const char* to_string(Functional f) { return f == Functional::f_beta ? "f_beta" : "h_gamma"; }

Scheme scheme_of(Functional fn, const Interval& param) {
  return {fn == Functional::f_beta ? SchemeKind::llz : SchemeKind::gamma, param};
}

namespace {

void require_interior(const Interval& b) {
  if (!(b.lo > -1 && b.hi < 1)) throw BoundaryBias();
}

Interval interior_rho(const Interval& r) {
  Interval c = overlaps(r, Interval(-1, 1)) ? intersect(r, Interval(-1, 1)) : r;
  if (!(c.lo > -1 && c.hi < 1)) throw DegenerateCorrelation();
  return c;
}

}  // namespace

Grad3 grad_functional(Functional fn, const Configuration& c, const Interval& param, const Interval& rho_in) {
  if (c.pred != Pred::Or) throw std::invalid_argument("gradient defined for OR configurations");
  require_interior(c.bi);
  require_interior(c.bj);
  Scheme s = scheme_of(fn, param);
  Interval one(1.0), sigma = param * Interval(0.5), quarter = param * Interval(0.25);
  Interval t1 = s.threshold(c.bi), t2 = s.threshold(c.bj);
  if (!t1.is_finite() || !t2.is_finite()) throw BoundaryBias();
  Interval u1 = one - sqr(c.bi), u2 = one - sqr(c.bj);
  Interval D = sqrt(u1 * u2);
  Interval rho = interior_rho(rho_in);
  Interval dens = biv_phi(t1, t2, rho);
  Interval drho1 = -(c.bj / D) + rho * c.bi / u1;
  Interval drho2 = -(c.bi / D) + rho * c.bj / u2;
  return {-(sigma * cond_Phi(t1, t2, rho)) - dens * drho1 + quarter,
          -(sigma * cond_Phi(t2, t1, rho)) - dens * drho2 + quarter, -(dens / D) + quarter};
}

Grad3 grad_functional(Functional fn, const Configuration& c, const Interval& param) {
  require_interior(c.bi);
  require_interior(c.bj);
  Interval one(1.0);
  return grad_functional(fn, c, param, (c.bij - c.bi * c.bj) / sqrt((one - sqr(c.bi)) * (one - sqr(c.bj))));
}

Interval dparam_functional(Functional fn, const Configuration& c, const Interval& param, const Interval& rho_in) {
  Scheme s = scheme_of(fn, param);
  Interval t1 = s.threshold(c.bi), t2 = s.threshold(c.bj);
  if (!t1.is_finite() || !t2.is_finite()) throw BoundaryBias();
  Interval rho = interior_rho(rho_in);
  // d t_i / d param = c_i / (2 phi(t_i)) with c_i = b_i (LLZ) or 1 + b_i (gamma).
  Interval c1 = fn == Functional::f_beta ? c.bi : Interval(1.0) + c.bi;
  Interval c2 = fn == Functional::f_beta ? c.bj : Interval(1.0) + c.bj;
  Interval dprob = -((c1 * cond_Phi(t1, t2, rho) + c2 * cond_Phi(t2, t1, rho)) * Interval(0.5));
  return dprob - value(c);
}

Grad3 grad_f_beta(const Configuration& c, const Interval& beta) {
  return grad_functional(Functional::f_beta, c, beta);
}

Grad3 grad_h_gamma(const Configuration& c, const Interval& gamma) {
  return grad_functional(Functional::h_gamma, c, gamma);
}

Interval b12_of(const Interval& b1, const Interval& b2, const Interval& rho) {
  Interval one(1.0);
  Interval d = (one - sqr(b1)) * (one - sqr(b2));
  return b1 * b2 + rho * sqrt(d);
}

Interval value_param_rho(Functional fn, const Interval& b1, const Interval& b2, const Interval& rho,
                         const Interval& param, double tol) {
  Scheme s = scheme_of(fn, param);
  Interval b12 = b12_of(b1, b2, rho);
  Interval prob = Interval(1.0) - biv_Phi(s.threshold(b1), s.threshold(b2), Correlation::clamped(rho), tol);
  Interval val = (Interval(3.0) - b1 - b2 - b12) * Interval(0.25);
  return prob - param * val;
}

Grad3 grad_param_rho(Functional fn, const Interval& b1, const Interval& b2, const Interval& rho,
                     const Interval& param) {
  require_interior(b1);
  require_interior(b2);
  Interval r = interior_rho(rho);
  Scheme s = scheme_of(fn, param);
  Interval one(1.0), sigma = param * Interval(0.5), quarter = param * Interval(0.25);
  Interval t1 = s.threshold(b1), t2 = s.threshold(b2);
  if (!t1.is_finite() || !t2.is_finite()) throw BoundaryBias();
  Interval u1 = one - sqr(b1), u2 = one - sqr(b2);
  Interval q = sqrt(u2 / u1);  // sqrt((1 - b2^2) / (1 - b1^2))
  Interval d1 = -(sigma * cond_Phi(t1, t2, r)) + quarter * (one + b2 - r * b1 * q);
  Interval d2 = -(sigma * cond_Phi(t2, t1, r)) + quarter * (one + b1 - r * b2 / q);
  Interval dr = -biv_phi(t1, t2, r) + quarter * sqrt(u1 * u2);
  return {d1, d2, dr};
}

}  // namespace tightgap
