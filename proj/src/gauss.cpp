#include "tightgap/gauss.hpp"

#include <array>
#include <boost/math/distributions/normal.hpp>

namespace tightgap {

Correlation::Correlation(const Interval& r) : rho(r) {
  if (!(r.lo >= -1 && r.hi <= 1)) throw DomainError("correlation outside [-1,1]: " + to_string(r));
  touches_minus_one = r.lo == -1;
  touches_plus_one = r.hi == 1;
}

Correlation Correlation::clamped(const Interval& r) { return Correlation(intersect(r, Interval(-1, 1))); }

Interval phi(const Interval& x) {
  Interval m = abs(x);
  if (m.lo == kInf) return Interval(0.0);
  return consts::inv_sqrt_2pi() * exp(-sqr(m) * Interval(0.5));
}

namespace {

Interval Phi_point(double x) {
  if (x == -kInf) return Interval(0.0);
  if (x == kInf) return Interval(1.0);
  if (x == 0) return Interval(0.5);
  return Interval(0.5) * erfc(-(Interval(x) * consts::inv_sqrt2()));
}

}  // namespace

Interval Phi(const Interval& x) {
  double lo = Phi_point(x.lo).lo, hi = Phi_point(x.hi).hi;
  return Interval::unchecked(std::max(lo, 0.0), std::min(hi, 1.0));
}

namespace detail {

Interval Phi_inv_point(double p) {
  if (!(p >= 0 && p <= 1)) throw DomainError("Phi_inv argument outside [0,1]");
  if (p == 0) return Interval(-kInf);
  if (p == 1) return Interval(kInf);
  if (p == 0.5) return Interval(0.0);
  // The quantile is only a starting guess; the bracket is checked against Phi.
  boost::math::normal_distribution<double> nd;
  double seed = boost::math::quantile(nd, p);
  double lo = seed, hi = seed;
  double d = 1e-15 * (1 + std::fabs(seed));
  for (int i = 0; Phi_point(lo).hi > p; ++i, d *= 2) {
    if (i > 200) return Interval(-kInf, hi);
    lo = seed - d;
  }
  d = 1e-15 * (1 + std::fabs(seed));
  for (int i = 0; Phi_point(hi).lo < p; ++i, d *= 2) {
    if (i > 200) return Interval(lo, kInf);
    hi = seed + d;
  }
  return {lo, hi};
}

}  // namespace detail

Interval Phi_inv(const Interval& p) {
  if (!(p.lo >= 0 && p.hi <= 1)) throw DomainError("Phi_inv argument outside [0,1]: " + to_string(p));
  return Interval::unchecked(detail::Phi_inv_point(p.lo).lo, detail::Phi_inv_point(p.hi).hi);
}

namespace {

constexpr int kOrder = 16;  // 2n for the n = 8 point rule

struct Node {
  Interval x, w;
};

const std::array<Node, 8>& gl_nodes() {
  static const std::array<Node, 8> nodes = [] {
    const double x[4] = {0.183434642495649804939476142360184, 0.5255324099163289858177390491892463,
                         0.7966664774136267395915539364758304, 0.960289856497536231683560868569473};
    const double w[4] = {0.3626837833783619829651504492771956, 0.3137066458778872873379622019866013,
                         0.2223810344533744705443559944262409, 0.1012285362903762591525313543099622};
    std::array<Node, 8> n;
    for (int i = 0; i < 4; ++i) {
      n[2 * i] = {Interval::around(x[i]), Interval::around(w[i])};
      n[2 * i + 1] = {-Interval::around(x[i]), Interval::around(w[i])};
    }
    return n;
  }();
  return nodes;
}

// (8!)^4 / (17 (16!)^2): error constant of the 8-point rule in terms of
// the 16th Taylor coefficient.
const Interval& gl_error_const() {
  static const Interval k = [] {
    Interval f8 = 40320.0, f16(20922789888000.0);
    return sqr(sqr(f8)) / (Interval(17.0) * sqr(f16));
  }();
  return k;
}

// Integrand of the rho-integral after rho = sin(theta):
//   g(theta) = exp(E(theta)) / (2 pi),
//   theta >= 0: E = -(x-y)^2 / (2 cos^2) - x y / (1 + sin)
//   theta <  0: E = -(x+y)^2 / (2 cos^2) + x y / (1 - sin)
// Both forms keep every term sign-definite.
struct Integrand {
  Interval a;  // coefficient of 1/cos^2
  Interval b;  // coefficient of 1/(1 +- sin)
  bool upper;  // theta >= 0

  Integrand(double x, double y, bool up) : upper(up) {
    Interval d = up ? Interval(x) - Interval(y) : Interval(x) + Interval(y);
    a = -(sqr(d) * Interval(0.5));
    Interval xy = Interval(x) * Interval(y);
    b = up ? -xy : xy;
  }

  Interval eval(const Interval& t) const {
    Interval c = cos(t);
    Interval c2 = sqr(c);
    Interval den = upper ? Interval(1.0) + sin(t) : Interval(1.0) - sin(t);
    if (c2.lo <= 0 || den.lo <= 0) return Interval(0.0, consts::inv_2pi().hi);
    Interval e = a / c2 + b / den;
    e.hi = std::min(e.hi, 0.0);
    e.lo = std::min(e.lo, e.hi);
    return exp(e) * consts::inv_2pi();
  }

  // Cauchy bound on g^(16)(xi)/16! for xi in t: g is analytic on the
  // rectangle t + [-R, R] + i[-R, R], so |c16| <= max|g| / R^16 there.
  Interval coeff16(const Interval& t, double R) const {
    Interval th = t + Interval(-R, R);
    Interval eR = exp(Interval(R)), emR = exp(Interval(-R));
    Interval ch = Interval::unchecked(1.0, ((eR + emR) * Interval(0.5)).hi);
    double shm = ((eR - emR) * Interval(0.5)).hi;
    Interval sh(-shm, shm);
    Interval s = sin(th), c = cos(th);
    // cos z = c ch - i s sh, sin z = s ch + i c sh
    Interval cr = c * ch, ci = -(s * sh);
    Interval wr = sqr(cr) - sqr(ci), wi = Interval(2.0) * cr * ci;
    Interval dr = (upper ? Interval(1.0) + s * ch : Interval(1.0) - s * ch), di = c * sh;
    if (!upper) di = -di;
    Interval n1 = sqr(wr) + sqr(wi), n2 = sqr(dr) + sqr(di);
    if (n1.lo <= 0 || n2.lo <= 0) return Interval::entire();
    Interval re = a * (wr / n1) + b * (dr / n2);
    if (re.hi > 700) return Interval::entire();
    double m = (exp(Interval(re.hi)) * consts::inv_2pi()).hi;
    double bound = (Interval(m) / pow(Interval(R), kOrder)).hi;
    return Interval(-bound, bound);
  }
};

struct Quadrature {
  const Integrand& f;
  double tol_density;  // allowed width per unit of theta
  static constexpr int kMaxDepth = 40;
  static constexpr double kRadius = 2.5;

  Interval piece(double u, double v, int depth) const {
    Interval t(u, v);
    Interval w = Interval(v) - Interval(u);
    double allowed = tol_density * (v - u);
    Interval crude = w * f.eval(t);
    if (crude.width() <= allowed) return crude;

    Interval m = (Interval(u) + Interval(v)) * Interval(0.5);
    Interval r = w * Interval(0.5);
    Interval sum(0.0);
    for (const auto& n : gl_nodes()) sum += n.w * f.eval(m + r * n.x);
    sum = sum * r;
    Interval h17 = pow(w, 17);
    Interval rem = gl_error_const() * h17 * f.coeff16(t, kRadius * (v - u));
    Interval gl = sum + rem;
    Interval est = overlaps(crude, gl) ? intersect(crude, gl) : gl;
    if (est.width() <= allowed || depth >= kMaxDepth) return est;
    // Rounding noise dominates: halving cannot help.
    if (rem.width() < 0.05 * sum.width()) return est;
    double mid = u + 0.5 * (v - u);
    if (!(mid > u && mid < v)) return est;
    return piece(u, mid, depth + 1) + piece(mid, v, depth + 1);
  }
};

// Signed integral of g from 0 to a.
Interval integrate_theta(double x, double y, double a, double tol) {
  if (a == 0) return Interval(0.0);
  Integrand f(x, y, a > 0);
  double len = std::fabs(a);
  Quadrature q{f, tol / len};
  return a > 0 ? q.piece(0.0, a, 0) : -q.piece(a, 0.0, 0);
}

Interval frechet_clamp(const Interval& v, const Interval& px, const Interval& py) {
  double lo = std::max(0.0, rnd::sub_down(rnd::add_down(px.lo, py.lo), 1.0));
  double hi = std::min({px.hi, py.hi, 1.0});
  Interval bound = Interval::unchecked(lo, std::max(lo, hi));
  return overlaps(v, bound) ? intersect(v, bound) : bound;
}

}  // namespace

namespace detail {

Interval biv_point(double x, double y, double rho, double tol) {
  if (x == -kInf || y == -kInf) return Interval(0.0);
  if (x == kInf) return Phi_point(y);
  if (y == kInf) return Phi_point(x);
  Interval px = Phi_point(x), py = Phi_point(y);
  if (rho >= 1) return Phi_point(std::min(x, y));
  if (rho <= -1) return max(Interval(0.0), px + py - Interval(1.0));
  Interval base = px * py;
  if (rho == 0) return base;
  Interval alpha = asin(Interval(rho));
  Interval integral = integrate_theta(x, y, alpha.lo, tol);
  Interval tail(0.0, rnd::mul_up(rnd::sub_up(alpha.hi, alpha.lo), consts::inv_2pi().hi));
  return frechet_clamp(base + integral + tail, px, py);
}

}  // namespace detail

Interval biv_Phi(const Interval& x, const Interval& y, const Correlation& rho, double tol) {
  // Nondecreasing in each of x, y and rho.
  Interval lo = detail::biv_point(x.lo, y.lo, rho.rho.lo, tol);
  if (x.is_point() && y.is_point() && rho.rho.is_point()) return lo;
  Interval hi = detail::biv_point(x.hi, y.hi, rho.rho.hi, tol);
  return Interval::unchecked(lo.lo, hi.hi);
}

Interval cond_Phi(const Interval& x, const Interval& y, const Interval& rho) {
  Interval s2 = Interval(1.0) - sqr(rho);
  if (s2.lo <= 0) throw DegenerateCorrelation();
  return Phi((y - rho * x) / sqrt(s2));
}

Interval biv_phi(const Interval& x, const Interval& y, const Interval& rho) {
  Interval s2 = Interval(1.0) - sqr(rho);
  if (s2.lo <= 0) throw DegenerateCorrelation();
  Interval s = sqrt(s2);
  // x^2 - 2 rho x y + y^2 = (1 - rho^2) x^2 + (y - rho x)^2
  return phi(x) * phi((y - rho * x) / s) / s;
}

BivPartials biv_Phi_partials(const Interval& x, const Interval& y, const Correlation& rho) {
  if (!x.is_finite() || !y.is_finite()) throw DomainError("partials need finite arguments");
  const Interval& r = rho.rho;
  return {phi(x) * cond_Phi(x, y, r), phi(y) * cond_Phi(y, x, r), biv_phi(x, y, r)};
}

}  // namespace tightgap
