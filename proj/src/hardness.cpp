#include "tightgap/hardness.hpp"

namespace tightgap {

Interval WeightedDistribution::weight_sum() const {
  Interval s(0.0);
  for (const auto& e : entries) s = s + e.weight;
  return s;
}

Interval WeightedDistribution::value() const {
  Interval s(0.0);
  for (const auto& e : entries) s = s + e.weight * tightgap::value(e.config);
  return s;
}

namespace {

const Interval& pick(const Interval& b, const ThresholdPoint& t) {
  if (b.hi < 0) return t.t1;
  if (b.lo > 0) return t.t2;
  throw UnmappedBias("bias interval contains 0");
}

Interval one() { return Interval(1.0); }

SideCheck premise(std::string id, std::string statement, bool passed, Interval value) {
  SideCheck s;
  s.id = std::move(id);
  s.statement = std::move(statement);
  s.passed = passed;
  s.value = value;
  return s;
}

Interval nonneg_sum_residual(const WeightedDistribution& d) { return d.weight_sum() - one(); }

bool all_positive(const WeightedDistribution& d) {
  for (const auto& e : d.entries)
    if (!is_unary(e.config.pred) && positivity(e.config) != Tri::yes) return false;
  return true;
}

bool weights_nonneg(const WeightedDistribution& d) {
  for (const auto& e : d.entries)
    if (e.weight.lo < 0) return false;
  return true;
}

}  // namespace

Interval prob_theta(const WeightedDistribution& d, const ThresholdPoint& t) {
  Interval s(0.0);
  for (const auto& e : d.entries) {
    const Configuration& c = e.config;
    Interval p = is_unary(c.pred)
                     ? prob_thresh(c, pick(c.bi, t))
                     : prob_thresh(c, pick(c.bi, t), pick(c.bj, t), Correlation::clamped(rho_of(c)));
    s = s + e.weight * p;
  }
  return s;
}

bool Certificate::verified() const { return first_failure().empty(); }

std::string Certificate::first_failure() const {
  for (const auto& p : premises)
    if (!p.passed) return p.id;
  return "";
}

void Certificate::require() const {
  std::string f = first_failure();
  if (!f.empty()) throw PremiseFailed(name + ": premise " + f + " failed");
}

// ---- Theta1 ----

Theta1 build_theta1(const Interval& gamma_star, const Interval& b_star) {
  if (!(b_star.hi < 0)) throw std::invalid_argument("build_theta1: b* must be negative");
  Theta1 th;
  th.gamma = gamma_star;
  th.b = b_star;
  const Interval& b = b_star;
  th.rho = -(one() + b) / (one() - b);
  th.k = sqrt((one() - th.rho) / (one() + th.rho));
  th.t_gamma = Phi_inv(intersect(gamma_star * (one() + b) * Interval(0.5), Interval(0, 1)));
  // Stationarity at t_gamma: Phi(k t) = p2 / (2 p1).
  Interval ratio = Interval(2.0) * Phi(th.k * th.t_gamma);
  th.p1 = one() / (one() + ratio);
  th.p2 = ratio / (one() + ratio);
  th.t_star = Phi_inv(intersect(th.p2 / (Interval(2.0) * th.p1), Interval(0, 1))) / th.k;
  Configuration c1 = Configuration::binary(Pred::Or, b, b, Interval(-1.0) - Interval(2.0) * b);
  c1.feasible_asserted = true;
  th.dist.entries = {{c1, th.p1}, {Configuration::unary(Pred::UnaryNeg, b), th.p2}};
  if (!all_positive(th.dist)) throw PositivityUnverifiable("Theta1: 2-configuration not certified positive");
  return th;
}

Interval theta1_prob(const Theta1& th, const Interval& t) { return prob_theta(th.dist, {t, t}); }

Interval theta1_derivative(const Theta1& th, const Interval& t) {
  return phi(t) * (th.p2 - Interval(2.0) * th.p1 * Phi(th.k * t));
}

Certificate theta1_optimal_certificate(const Theta1& th) {
  Certificate c;
  c.name = "theta1";
  const auto& d = th.dist;
  c.premises.push_back(premise("weights", "p1, p2 >= 0 and p1 + p2 = 1", weights_nonneg(d) &&
                                                                            nonneg_sum_residual(d).contains_zero(),
                               nonneg_sum_residual(d)));
  c.premises.push_back(premise("positivity", "the 2-configuration is positive", all_positive(d), rho_of(d.entries[0].config)));
  Interval coincide = th.t_star - th.t_gamma;
  c.premises.push_back(premise("coincidence", "t* equals the gamma-scheme threshold at b*", coincide.contains_zero(), coincide));
  c.premises.push_back(premise("decreasing", "p2 - 2 p1 Phi(k t) is strictly decreasing in t (k > 0, p1 > 0)",
                               th.k.lo > 0 && th.p1.lo > 0, th.k));
  Interval delta(0.1);
  Interval left = theta1_derivative(th, Interval(th.t_star.lo) - delta);
  Interval right = theta1_derivative(th, Interval(th.t_star.hi) + delta);
  c.premises.push_back(premise("sign-left", "dProb/dt > 0 at t* - 0.1", left.lo > 0, left));
  c.premises.push_back(premise("sign-right", "dProb/dt < 0 at t* + 0.1", right.hi < 0, right));
  Scheme s{SchemeKind::gamma, th.gamma};
  for (std::size_t i = 0; i < d.entries.size(); ++i) {
    const Configuration& e = d.entries[i].config;
    Interval r = prob_scheme(e, s) / value(e) - th.gamma;
    c.premises.push_back(premise("entry-ratio-" + std::to_string(i + 1), "gamma-scheme ratio on the entry equals gamma*",
                                 r.contains_zero(), r));
  }
  Interval r = theta1_prob(th, th.t_gamma) / d.value() - th.gamma;
  c.premises.push_back(premise("ratio", "Prob(Theta1, t_gamma) / Value(Theta1) equals gamma*", r.contains_zero(), r));
  return c;
}

// ---- Theta2 ----

Theta2 theta2_weights(const Interval& b) {
  Theta2 th;
  th.b = b;
  th.rho = -(one() - b) / (one() + b);
  th.k = one() / sqrt(b);  // sqrt((1 - rho) / (1 + rho))
  th.t_star = Phi_inv(intersect((one() - b) * Interval(0.5), Interval(0, 1)));
  th.r = Phi(th.k * th.t_star);
  Correlation rho(intersect(th.rho, Interval(-1, 1)));
  th.r_prime = one() - (one() - th.r) * (one() - biv_Phi(th.t_star, th.t_star, rho)) -
               th.r * (one() - biv_Phi(-th.t_star, -th.t_star, rho));
  th.p = th.r_prime / (one() + Interval(2.0) * th.r_prime);
  Interval rest = one() - Interval(2.0) * th.p;
  th.p3 = th.r * rest - th.p;
  th.p4 = (one() - th.r) * rest - th.p;

  Interval nb = -b, pair = Interval(-1.0) + Interval(2.0) * b, cross = one() - Interval(2.0) * b;
  auto bin = [](Pred p, Interval x, Interval y, Interval z) {
    Configuration c = Configuration::binary(p, x, y, z);
    c.feasible_asserted = true;
    return c;
  };
  th.dist.entries = {
      {bin(Pred::Or, nb, nb, pair), th.p},
      {bin(Pred::Or, b, b, pair), th.p},
      {bin(Pred::ImpOr, nb, b, cross), th.p3},
      {bin(Pred::ImpOr, b, nb, cross), th.p4},
      {Configuration::unary(Pred::UnaryNeg, nb), th.p},
      {Configuration::unary(Pred::UnaryNeg, b), th.p},
  };
  return th;
}

Theta2 build_theta2(const Interval& b_star) {
  if (!(b_star.lo > 0)) throw std::invalid_argument("build_theta2: b* must be positive");
  Theta2 th = theta2_weights(b_star);
  if (!weights_nonneg(th.dist)) throw NegativeWeight("Theta2: a weight may be negative (wrong b*?)");
  if (!all_positive(th.dist)) throw PositivityUnverifiable("Theta2: a 2-configuration is not certified positive");
  return th;
}

Interval theta2_prob(const Theta2& th, const Interval& t1, const Interval& t2) {
  Correlation rho(intersect(th.rho, Interval(-1, 1)));
  Interval s = th.p * (one() - biv_Phi(t1, t1, rho)) + th.p * (one() - biv_Phi(t2, t2, rho)) +
               th.p3 * (one() - biv_Phi(-t1, t2, rho)) + th.p4 * (one() - biv_Phi(-t2, t1, rho)) +
               th.p * (Phi(t1) + Phi(t2));
  return s;
}

namespace {

struct Aux {
  Interval sq, u1, u2;
};

Aux aux(const Theta2& th, const Interval& t1, const Interval& t2) {
  Interval sq = Interval(2.0) * sqrt(th.b) / (one() + th.b);  // sqrt(1 - rho^2)
  return {sq, (t2 + th.rho * t1) / sq, (t1 + th.rho * t2) / sq};
}

}  // namespace

Pair theta2_brackets(const Theta2& th, const Interval& t1, const Interval& t2) {
  Aux a = aux(th, t1, t2);
  Interval two_p = Interval(2.0) * th.p;
  Interval d1 = -two_p * Phi(th.k * t1) + th.p3 * Phi(a.u1) - th.p4 * Phi(-a.u1) + th.p;
  Interval d2 = -two_p * Phi(th.k * t2) - th.p3 * Phi(-a.u2) + th.p4 * Phi(a.u2) + th.p;
  return {d1, d2};
}

Pair theta2_grad(const Theta2& th, const Interval& t1, const Interval& t2) {
  Pair b = theta2_brackets(th, t1, t2);
  return {phi(t1) * b.d1, phi(t2) * b.d2};
}

Hessian2 theta2_hessian(const Theta2& th, const Interval& t1, const Interval& t2) {
  Aux a = aux(th, t1, t2);
  Pair br = theta2_brackets(th, t1, t2);
  Interval two_p = Interval(2.0) * th.p, w = th.p3 + th.p4;
  Interval f1 = phi(t1), f2 = phi(t2);
  Interval cross = w * th.rho / a.sq;
  Hessian2 h;
  h.h11 = -t1 * f1 * br.d1 + f1 * (-two_p * th.k * phi(th.k * t1) + cross * phi(a.u1));
  h.h22 = -t2 * f2 * br.d2 + f2 * (-two_p * th.k * phi(th.k * t2) + cross * phi(a.u2));
  h.h12 = w / a.sq * f1 * phi(a.u1);
  return h;
}

std::vector<SideCheck> theta2_boundary_certificate(const Theta2& th) {
  std::vector<SideCheck> out;
  Interval c = parse_decimal("0.12"), w = th.p3 + th.p4;
  Interval lo1 = w * c - th.p4 + th.p, lo2 = w * c - th.p3 + th.p;
  out.push_back(premise("boundary-low-1", "(p3 + p4) 0.12 - p4 + p < 0", lo1.hi < 0, lo1));
  out.push_back(premise("boundary-low-2", "(p3 + p4) 0.12 - p3 + p < 0", lo2.hi < 0, lo2));
  Interval scale = sqrt(one() + th.rho) / (Interval(2.0) * sqrt(one() - th.rho));
  Interval q = Phi_inv(parse_decimal("0.0001"));
  Interval corner = Phi(Interval(2.0) * Interval(q.hi) * scale);
  out.push_back(premise("boundary-low-phi", "Phi(2 Phi^-1(0.0001) sqrt(1 + rho) / (2 sqrt(1 - rho))) < 0.12",
                        corner.hi < c.lo, corner));
  // Mirror image for t1, t2 >= Phi^-1(0.9999).
  Interval hi1 = w * (one() - c) - th.p4 - th.p, hi2 = w * (one() - c) - th.p3 - th.p;
  out.push_back(premise("boundary-high-1", "(p3 + p4) 0.88 - p4 - p > 0", hi1.lo > 0, hi1));
  out.push_back(premise("boundary-high-2", "(p3 + p4) 0.88 - p3 - p > 0", hi2.lo > 0, hi2));
  Interval qh = Phi_inv(parse_decimal("0.9999"));
  Interval corner_hi = Phi(Interval(2.0) * Interval(qh.lo) * scale);
  out.push_back(premise("boundary-high-phi", "Phi(2 Phi^-1(0.9999) sqrt(1 + rho) / (2 sqrt(1 - rho))) > 0.88",
                        corner_hi.lo > (one() - c).hi, corner_hi));
  return out;
}

Interval horn_hard_bias_box() {
  Interval b0 = parse_decimal("0.1489442419"), eps = parse_decimal("1e-6");
  return Interval::unchecked((b0 - eps).lo, (b0 + eps).hi);
}

Certificate theta2_global_certificate(const Theta2& th, const Interval& alpha_star, const CheckOptions& opt) {
  Certificate c;
  c.name = "theta2";
  const auto& d = th.dist;
  Interval res = nonneg_sum_residual(d);
  c.premises.push_back(premise("weights", "all weights >= 0 and they sum to 1", weights_nonneg(d) && res.contains_zero(), res));
  c.premises.push_back(premise("positivity", "every 2-configuration is positive", all_positive(d), th.rho));

  const double inf = std::numeric_limits<double>::infinity();
  Interval ninf(-inf), pinf(inf);
  Interval at_opt = theta2_prob(th, th.t_star, -th.t_star);
  Interval at_low = prob_theta(d, {ninf, ninf}), at_high = prob_theta(d, {pinf, pinf});
  Interval two = at_opt - at_low;
  c.premises.push_back(premise("two-scheme", "Prob(t*, -t*) = Prob(-inf, -inf)", two.contains_zero(), two));
  Interval corners = at_low - at_high;
  c.premises.push_back(premise("corner-equality", "Prob(-inf, -inf) = Prob(inf, inf)", corners.contains_zero(), corners));

  Pair g = theta2_grad(th, th.t_star, -th.t_star);
  c.premises.push_back(premise("stationary", "both partials vanish at (t*, -t*)",
                               g.d1.contains_zero() && g.d2.contains_zero(), hull(g.d1, g.d2)));
  Hessian2 h = theta2_hessian(th, th.t_star, -th.t_star);
  c.premises.push_back(premise("hessian-at-optimum", "Hessian negative definite at (t*, -t*)", h.negative_definite(), h.det()));

  for (auto& p : theta2_boundary_certificate(th)) c.premises.push_back(std::move(p));

  Interval d35 = th.p3 - th.p, d46 = th.p4 - th.p;
  c.premises.push_back(premise("infinity-p3", "p3 > p5 (t1 = -inf forces t2 = -inf, t2 = inf forces t1 = inf)",
                               d35.lo > 0, d35));
  c.premises.push_back(premise("infinity-p4", "p4 > p6 (t2 = -inf forces t1 = -inf, t1 = inf forces t2 = inf)",
                               d46.lo > 0, d46));

  Interval box = horn_hard_bias_box();
  c.premises.push_back(premise("bias-in-box", "b* lies in the bias interval of the horn-hard check",
                               th.b.lo >= box.lo && th.b.hi <= box.hi, th.b));

  LemmaResult hard = run_lemma(lemma_horn_hard(), opt);
  SideCheck hs;
  hs.id = "horn-hard";
  hs.statement = hard.task.statement;
  hs.sub_check = hard.report;
  hs.passed = hard.report.verified();
  c.premises.push_back(hs);
  for (auto& s : hard.side) c.premises.push_back(std::move(s));

  Interval ratio = at_opt / d.value();
  c.premises.push_back(premise("ratio", "Prob(Theta2, t*, -t*) / Value(Theta2) agrees with alpha*",
                               overlaps(ratio, alpha_star), ratio));
  return c;
}

nlohmann::json to_json(const WeightedDistribution& d) {
  nlohmann::json entries = nlohmann::json::array();
  auto iv = [](const Interval& x) { return nlohmann::json::array({x.lo, x.hi}); };
  for (const auto& e : d.entries) {
    nlohmann::json j;
    j["pred"] = pred_name(e.config.pred);
    j["b_i"] = iv(e.config.bi);
    if (!is_unary(e.config.pred)) {
      j["b_j"] = iv(e.config.bj);
      j["b_ij"] = iv(e.config.bij);
    }
    j["weight_lo"] = e.weight.lo;
    j["weight_hi"] = e.weight.hi;
    entries.push_back(j);
  }
  return {{"entries", entries}};
}

nlohmann::json to_json(const Certificate& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["verified"] = c.verified();
  if (!c.verified()) j["failed_premise"] = c.first_failure();
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& p : c.premises) ps.push_back(to_json(p));
  j["premises"] = ps;
  return j;
}

}  // namespace tightgap
