#include "tightgap/constants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tightgap/lemmas.hpp"

namespace tightgap {

using lemma_detail::Line;

bool ConstantReport::residuals_ok() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const Residual& r) { return r.value.contains_zero(); });
}

namespace {

Interval one() { return Interval(1.0); }

// Widens [lo, hi] by `factor` around its centre.
Interval widened(const std::string& lo, const std::string& hi, double factor) {
  Interval l = parse_decimal(lo), h = parse_decimal(hi);
  Interval c = (l + h) * Interval(0.5), r = (h - l) * Interval(0.5 * factor);
  return Interval::unchecked((c - r).lo, (c + r).hi);
}

// e^{-(1+b) t^2 / (2b)} / (2 pi sqrt(b) (1 + b)), which is also d Phi_rho(t,t) / db.
Interval a_term(const Interval& b, const Interval& t) {
  Interval e = exp(-(one() + b) * sqr(t) / (Interval(2.0) * b));
  return e / (consts::two_pi() * sqrt(b) * (one() + b));
}

Interval g_term(const Interval& b, const Interval& t) { return (one() - Interval(2.0) * Phi(t)) / b; }

Correlation llz_rho(const Interval& b) { return Correlation(intersect((b - one()) / (b + one()), Interval(-1, 1))); }

}  // namespace

BetaSystem beta_system(const Interval& b, const Interval& t) {
  Interval g = g_term(b, t);
  Interval f1 = one() - biv_Phi(t, t, llz_rho(b)) - g;
  Interval f2 = g - a_term(b, t) / Phi(t / sqrt(b));
  return {f1, f2};
}

Jacobian2 beta_system_jacobian(const Interval& b, const Interval& t) {
  Interval sb = sqrt(b), u = t / sb;
  Interval g = g_term(b, t), a = a_term(b, t);
  Interval two(2.0), ph = phi(t), Pu = Phi(u);
  Interval g_t = -two * ph / b, g_b = -g / b;
  Jacobian2 j;
  j.a11 = -a - g_b;
  j.a12 = -two * ph * Pu - g_t;
  Interval q = a / Pu, ratio = phi(u) / Pu;
  Interval la_t = -(one() + b) * t / b;
  Interval la_b = sqr(t) / (two * sqr(b)) - one() / (two * b) - one() / (one() + b);
  Interval u_t = one() / sb, u_b = -u / (two * b);
  j.a21 = g_b - q * (la_b - ratio * u_b);
  j.a22 = g_t - q * (la_t - ratio * u_t);
  return j;
}

ConstantReport solve_beta_llz(double tol) {
  // Seeds: the beta and b intervals of the 2-SAT lemmas, widened tenfold.
  Interval beta0 = widened("0.9401653", "0.9401658", 10);
  Interval B = widened("0.16247734", "0.16247934", 10);
  Interval T = Phi_inv(intersect((one() - beta0 * B) * Interval(0.5), Interval(0, 1)));
  bool certified = false;
  for (int it = 0; it < 200; ++it) {
    double mb = B.mid(), mt = T.mid();
    BetaSystem fm = beta_system(Interval(mb), Interval(mt));
    Jacobian2 jx = beta_system_jacobian(B, T);
    double j11 = jx.a11.mid(), j12 = jx.a12.mid(), j21 = jx.a21.mid(), j22 = jx.a22.mid();
    double det = j11 * j22 - j12 * j21;
    if (!std::isfinite(det) || det == 0) throw NoRootInSeedBox("beta_llz: singular Jacobian");
    Interval y11(j22 / det), y12(-j12 / det), y21(-j21 / det), y22(j11 / det);
    Interval m11 = one() - (y11 * jx.a11 + y12 * jx.a21), m12 = -(y11 * jx.a12 + y12 * jx.a22);
    Interval m21 = -(y21 * jx.a11 + y22 * jx.a21), m22 = one() - (y21 * jx.a12 + y22 * jx.a22);
    Interval db = B - Interval(mb), dt = T - Interval(mt);
    Interval kb = Interval(mb) - (y11 * fm.f1 + y12 * fm.f2) + m11 * db + m12 * dt;
    Interval kt = Interval(mt) - (y21 * fm.f1 + y22 * fm.f2) + m21 * db + m22 * dt;
    if (!overlaps(kb, B) || !overlaps(kt, T)) {
      if (certified) break;  // rounding noise after convergence
      throw NoRootInSeedBox("beta_llz: Krawczyk image misses the seed box");
    }
    // K(X) inside the interior of X: exactly one root in X.
    if (B.interior_contains(kb) && T.interior_contains(kt)) certified = true;
    Interval nb = intersect(kb, B), nt = intersect(kt, T);
    bool shrunk = nb.width() < 0.9 * B.width() || nt.width() < 0.9 * T.width();
    B = nb;
    T = nt;
    if (certified && !shrunk) break;
  }
  if (!certified) throw NoRootInSeedBox("beta_llz: Krawczyk test did not succeed");

  Interval beta = intersect(g_term(B, T), one() - biv_Phi(T, T, llz_rho(B)));
  if (!(beta.width() <= tol) || !(B.width() <= tol)) {
    std::ostringstream os;
    os << "beta_llz: enclosure width " << std::max(beta.width(), B.width()) << " exceeds tolerance " << tol
       << " at " << kPrecisionBits << "-bit precision";
    throw ToleranceUnreachable(os.str());
  }
  ConstantReport r;
  r.name = "beta_llz";
  r.enclosure = beta;
  r.hardest_bias = B;
  r.method = "Krawczyk operator on the (b, t) system, seed box from the lemma intervals widened tenfold";
  BetaSystem f = beta_system(B, T);
  r.residuals.push_back({"F1(b, t)", f.f1});
  r.residuals.push_back({"F2(b, t)", f.f2});
  // Redundant checks in the (b, beta) form.
  Interval t_bb = Phi_inv(intersect((one() - beta * B) * Interval(0.5), Interval(0, 1)));
  r.residuals.push_back({"P_beta(-b) - beta", one() - biv_Phi(t_bb, t_bb, llz_rho(B)) - beta});
  r.residuals.push_back({"P'_beta(-b)", -a_term(B, t_bb) + beta * Phi(t_bb / sqrt(B))});
  return r;
}

// ---- line minimization ----

namespace {

struct LineEval {
  Functional fn;
  Interval param;
  std::uint64_t count = 0;

  static Line line_of(const Interval& b) { return b.lo >= 0 ? Line::plus : Line::minus; }

  Interval value(const Interval& b) {
    ++count;
    return lemma_detail::line_value(fn, line_of(b), b, b, param);
  }
  // Derivative along the diagonal; empty optional when not computable.
  std::optional<Interval> slope(const Interval& b) {
    try {
      auto g = lemma_detail::line_grad(fn, line_of(b), b, b, param);
      return g.d1 + g.d2;
    } catch (const IntervalError&) {
      return std::nullopt;
    }
  }
};

struct Piece {
  Interval b;
  double lower;
};

}  // namespace

LineMin minimize_simple_line(Functional fn, const Interval& param, const Interval& b_range, double tol) {
  if (b_range.lo < -1 || b_range.hi > 1) throw std::invalid_argument("minimize_simple_line: range outside [-1, 1]");
  LineEval ev{fn, param};
  double upper = kInf;
  auto probe = [&](double x) { upper = std::min(upper, ev.value(Interval(x)).hi); };

  std::vector<Interval> work;
  if (b_range.lo < 0 && b_range.hi > 0) {
    work = {Interval(b_range.lo, 0.0), Interval(0.0, b_range.hi)};
  } else {
    work = {b_range};
  }
  for (int i = 0; i <= 64; ++i) probe(b_range.lo + (b_range.hi - b_range.lo) * i / 64.0);

  std::vector<Piece> done;
  const std::uint64_t kMaxPieces = 2'000'000;
  std::uint64_t processed = 0;
  while (!work.empty()) {
    if (++processed > kMaxPieces) throw ToleranceUnreachable("minimize_simple_line: too many pieces");
    Interval b = work.back();
    work.pop_back();
    Interval v = ev.value(b);
    if (v.lo > upper) continue;
    double m = b.mid();
    bool splittable = m > b.lo && m < b.hi;
    if (b.width() <= tol || !splittable) {
      done.push_back({b, v.lo});
      continue;
    }
    if (auto s = ev.slope(b); s && !s->contains_zero()) {
      // Monotone: the minimum is at one end. Interior ends belong to a neighbour.
      double end = s->lo > 0 ? b.lo : b.hi;
      if (end == b_range.lo || end == b_range.hi) {
        Interval e(end);
        Interval ve = ev.value(e);
        upper = std::min(upper, ve.hi);
        done.push_back({e, ve.lo});
      }
      continue;
    }
    probe(m);
    work.push_back(Interval(m, b.hi));
    work.push_back(Interval(b.lo, m));
  }

  LineMin out;
  double lower = kInf;
  std::vector<Interval> keep;
  for (const auto& p : done) {
    if (p.lower > upper) continue;
    lower = std::min(lower, p.lower);
    keep.push_back(p.b);
  }
  if (keep.empty()) throw ToleranceUnreachable("minimize_simple_line: no surviving piece");
  std::sort(keep.begin(), keep.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& k : keep) {
    if (!out.argmins.empty() && k.lo <= out.argmins.back().hi)
      out.argmins.back() = hull(out.argmins.back(), k);
    else
      out.argmins.push_back(k);
  }
  out.min_value = Interval::unchecked(lower, upper);
  out.evaluations = ev.count;
  return out;
}

namespace {

Interval hull_all(const std::vector<Interval>& v) {
  Interval h = v.front();
  for (const auto& x : v) h = hull(h, x);
  return h;
}

}  // namespace

ConstantReport solve_gamma_star(double tol) {
  Interval seed = widened("0.9539798", "0.95398", 10);
  Interval range(-1, 1);
  const double line_tol = 1e-12;
  auto min_at = [&](double g) { return minimize_simple_line(Functional::h_gamma, Interval(g), range, line_tol); };
  // min h_gamma decreases in gamma: positive below gamma*, negative above.
  double lo = seed.lo, hi = seed.hi;
  LineMin at_lo = min_at(lo), at_hi = min_at(hi);
  if (!(at_lo.min_value.lo > 0) || !(at_hi.min_value.hi < 0))
    throw NoRootInSeedBox("gamma*: sign of min h_gamma not certified at the seed endpoints");
  while (hi - lo > tol) {
    double m = lo + (hi - lo) / 2;
    if (m <= lo || m >= hi) break;
    LineMin at = min_at(m);
    if (at.min_value.lo > 0)
      lo = m;
    else if (at.min_value.hi < 0)
      hi = m;
    else
      break;
  }
  Interval g = Interval(lo, hi);
  if (!(g.width() <= tol)) {
    std::ostringstream os;
    os << "gamma*: sign of min h_gamma unresolved at width " << g.width() << " > " << tol;
    throw ToleranceUnreachable(os.str());
  }
  LineMin over = minimize_simple_line(Functional::h_gamma, g, range, line_tol);
  ConstantReport r;
  r.name = "gamma_star";
  r.enclosure = g;
  r.hardest_bias = hull_all(over.argmins);
  r.method = "bisection on the certified sign of min_b h_gamma(b, b, -1 + 2|b|)";
  r.residuals.push_back({"min_b h_gamma over the enclosure", over.min_value});
  Configuration c = Configuration::simple(Pred::Or, r.hardest_bias);
  r.residuals.push_back({"h_gamma at the hardest bias", h_gamma(c, g)});
  return r;
}

ConstantReport solve_alpha_star(double tol) {
  // f at beta = 1 is invariant under negating both biases, so b >= 0 suffices.
  LineMin lm = minimize_simple_line(Functional::f_beta, Interval(1.0), Interval(0, 1), std::min(tol, 1e-12));
  Interval alpha = one() / (one() - lm.min_value);
  if (!(alpha.width() <= tol)) {
    std::ostringstream os;
    os << "alpha*: enclosure width " << alpha.width() << " exceeds tolerance " << tol;
    throw ToleranceUnreachable(os.str());
  }
  ConstantReport r;
  r.name = "alpha_star";
  r.enclosure = alpha;
  r.hardest_bias = hull_all(lm.argmins);
  r.method = "alpha* = 1 / (1 - min f), min f by branch and bound on the simple line at beta = 1";
  Configuration c = Configuration::simple(Pred::Or, r.hardest_bias);
  r.residuals.push_back({"f(b*, b*, -1 + 2b*) - (1 - 1/alpha*)", f_beta(c, one()) - (one() - one() / alpha)});
  return r;
}

nlohmann::json to_json(const ConstantReport& r) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["name"] = r.name;
  j["lo"] = r.enclosure.lo;
  j["hi"] = r.enclosure.hi;
  j["hardest_bias_lo"] = r.hardest_bias.lo;
  j["hardest_bias_hi"] = r.hardest_bias.hi;
  j["method"] = r.method;
  nlohmann::json res = nlohmann::json::array();
  for (const auto& x : r.residuals) res.push_back({{"name", x.name}, {"lo", x.value.lo}, {"hi", x.value.hi}});
  j["residuals"] = res;
  return j;
}

}  // namespace tightgap
