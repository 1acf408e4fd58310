#include "tightgap/lemmas.hpp"

#include <map>
#include <stdexcept>

#include "tightgap/hardness.hpp"

namespace tightgap {

namespace lemma_detail {

Interval line_rho(Line line, const Interval& b1, const Interval& b2) {
  Interval one(1.0);
  // The criteria only speak about feasible points, where |rho| <= 1.
  Interval r = Interval(-1, 1);
  try {
    Interval q = line == Line::plus ? (one - b1) * (one - b2) / ((one + b1) * (one + b2))
                                    : (one + b1) * (one + b2) / ((one - b1) * (one - b2));
    r = -sqrt(q);
  } catch (const IntervalError&) {
  }
  if (r.lo > 1 || r.hi < -1) throw DomainError("line_rho: no feasible point in box");
  return intersect(r, Interval(-1, 1));
}

Configuration line_config(Line line, const Interval& b1, const Interval& b2) {
  Interval b12 = line == Line::plus ? Interval(-1.0) + b1 + b2 : Interval(-1.0) - b1 - b2;
  Configuration c = Configuration::binary(Pred::Or, b1, b2, b12);
  c.feasible_asserted = true;
  return c;
}

namespace {

Interval point(const Interval& x) { return Interval(x.mid()); }

Interval rho_form_naive(Functional fn, const Interval& b1, const Interval& b2, const Interval& rho,
                        const Interval& param) {
  Scheme s = scheme_of(fn, param);
  Interval prob = Interval(1.0) - biv_Phi(s.threshold(b1), s.threshold(b2), Correlation::clamped(rho));
  Interval val = (Interval(3.0) - b1 - b2 - b12_of(b1, b2, rho)) * Interval(0.25);
  return intersect(prob, Interval(0, 1)) - param * val;
}

Interval line_naive(Functional fn, Line line, const Interval& b1, const Interval& b2, const Interval& param) {
  Configuration c = line_config(line, b1, b2);
  Scheme s = scheme_of(fn, param);
  Interval prob = prob_thresh(c, s.threshold(b1), s.threshold(b2), Correlation(line_rho(line, b1, b2)));
  return prob - param * value(c);
}

Interval meet(const Interval& a, const Interval& b) { return overlaps(a, b) ? intersect(a, b) : a; }

}  // namespace

Interval rho_form_value(Functional fn, const Interval& b1, const Interval& b2, const Interval& rho,
                        const Interval& param) {
  Interval naive = rho_form_naive(fn, b1, b2, rho, param);
  try {
    Grad3 g = grad_param_rho(fn, b1, b2, rho, param);
    Configuration c = Configuration::binary(Pred::Or, b1, b2, b12_of(b1, b2, rho));
    Interval dp = dparam_functional(fn, c, param, rho);
    Interval m1 = point(b1), m2 = point(b2), m3 = point(rho), mp = point(param);
    Interval mv = value_param_rho(fn, m1, m2, m3, mp) + g.d1 * (b1 - m1) + g.d2 * (b2 - m2) +
                  g.d3 * (rho - m3) + dp * (param - mp);
    return meet(naive, mv);
  } catch (const IntervalError&) {
    return naive;
  }
}

LineGrad line_grad(Functional fn, Line line, const Interval& b1, const Interval& b2, const Interval& param) {
  Configuration c = line_config(line, b1, b2);
  Interval rho = line_rho(line, b1, b2);
  Grad3 g = grad_functional(fn, c, param, rho);
  Interval dp = dparam_functional(fn, c, param, rho);
  if (line == Line::plus) return {g.d1 + g.d3, g.d2 + g.d3, dp};
  return {g.d1 - g.d3, g.d2 - g.d3, dp};
}

Interval line_value(Functional fn, Line line, const Interval& b1, const Interval& b2, const Interval& param) {
  Interval naive = line_naive(fn, line, b1, b2, param);
  try {
    LineGrad g = line_grad(fn, line, b1, b2, param);
    Interval m1 = point(b1), m2 = point(b2), mp = point(param);
    Interval mv = line_naive(fn, line, m1, m2, mp) + g.d1 * (b1 - m1) + g.d2 * (b2 - m2) + g.dparam * (param - mp);
    return meet(naive, mv);
  } catch (const IntervalError&) {
    return naive;
  }
}

}  // namespace lemma_detail

using namespace lemma_detail;

namespace {

bool nonzero(const Interval& x) { return !x.contains_zero(); }

// Reads the scheme parameter from the box, or uses the fixed value.
struct Param {
  std::string name;  // empty when fixed
  Interval fixed;
  Interval of(const Box& b) const { return name.empty() ? fixed : b.at(name); }
};

Box make_root(std::vector<std::string> names, std::vector<Interval> ranges, const Param& p) {
  if (!p.name.empty()) {
    names.push_back(p.name);
    ranges.push_back(p.fixed);
  }
  return Box(std::move(names), std::move(ranges));
}

// Strict lower bound: x > c for every point of the box.
bool above(const Interval& x, const Interval& c) { return x.lo > c.hi; }

// The three-criterion task in (b1, b2, rho): triangle violation, large value,
// or interior point with nonzero gradient.
LemmaTask rho_form_task(std::string id, std::string statement, Functional fn, Param param, Interval threshold) {
  LemmaTask t;
  t.id = std::move(id);
  t.statement = std::move(statement);
  t.root = make_root({"b1", "b2", "rho"}, {Interval(-1, 1), Interval(-1, 1), Interval(-1, 1)}, param);
  Interval one(1.0);
  t.criteria.push_back({"C1", [](const Box& b) {
                          Interval b12 = b12_of(b[0], b[1], b[2]);
                          return b12.hi < (abs(b[0] + b[1]) - Interval(1.0)).lo;
                        }});
  t.criteria.push_back({"C3", [fn, param](const Box& b) {
                          Interval b12 = b12_of(b[0], b[1], b[2]);
                          if (!(b12.hi < (Interval(1.0) - abs(b[0] - b[1])).lo)) return false;
                          Grad3 g = grad_param_rho(fn, b[0], b[1], b[2], param.of(b));
                          return nonzero(g.d1) || nonzero(g.d2) || nonzero(g.d3);
                        }});
  t.criteria.push_back({"C2", [fn, param, threshold](const Box& b) {
                          return above(rho_form_value(fn, b[0], b[1], b[2], param.of(b)), threshold);
                        }});
  return t;
}

bool inside(const Interval& x, const Interval& lo_edge, const Interval& hi_edge) {
  return x.lo >= lo_edge.hi && x.hi <= hi_edge.lo;
}

struct EpsBox {
  Interval b0, eps;
  bool contains(const Box& b) const {
    Interval lo = b0 - eps, hi = b0 + eps;
    return inside(b[0], lo, hi) && inside(b[1], lo, hi);
  }
  Box box(const Box& root) const {
    Interval r = Interval::unchecked((b0 - eps).lo, (b0 + eps).hi);
    Box out = root;
    out[0] = r;
    out[1] = r;
    return out;
  }
};

// Value criterion on the triangle boundary -1 + |b1 + b2|, restricted to the
// part of the box where that branch applies.
bool boundary_value_above(Functional fn, const Box& b, const Interval& param, const Interval& thr, bool plus_only) {
  Interval s = b[0] + b[1];
  if (s.lo >= 0 || plus_only) {
    if (s.hi < 0) return true;  // vacuous
    return above(line_value(fn, Line::plus, b[0], b[1], param), thr);
  }
  if (s.hi <= 0) return above(line_value(fn, Line::minus, b[0], b[1], param), thr);
  return above(line_value(fn, Line::plus, b[0], b[1], param), thr) &&
         above(line_value(fn, Line::minus, b[0], b[1], param), thr);
}

SideCheck direct_below(std::string id, std::string statement, const Interval& v, const Interval& bound) {
  SideCheck s;
  s.id = std::move(id);
  s.statement = std::move(statement);
  s.value = v;
  s.passed = v.hi < bound.lo;
  return s;
}

SideCheck box_check(std::string id, std::string statement, const Box& root, std::vector<Criterion> criteria,
                    const CheckOptions& opt) {
  SideCheck s;
  s.id = std::move(id);
  s.statement = std::move(statement);
  CheckOptions o = opt;
  o.record_leaves = false;
  s.sub_check = check(root, criteria, o);
  s.sub_check->lemma_id = s.id;
  s.passed = s.sub_check->verified();
  return s;
}

}  // namespace

LemmaTask lemma_2sat_step1() {
  LemmaTask t = rho_form_task(
      "2sat-step1",
      "for b1, b2, rho in [-1,1] and beta in [0.94, 0.9405]: b12 < -1 + |b1+b2|, or f_beta > 0.001, or "
      "b12 < 1 - |b1-b2| and grad g_beta != 0",
      Functional::f_beta, {"beta", Interval(0.94, 0.9405)}, parse_decimal("0.001"));
  t.notes.push_back("beta range is the wider [0.94, 0.9405], which contains the lemma's [0.9401653, 0.9401658]");
  t.notes.push_back("lemma text '9401658' read as 0.9401658");
  return t;
}

LemmaTask lemma_ornot_step1() {
  return rho_form_task("ornot-step1",
                       "for b1, b2, rho in [-1,1] and gamma in [0.95, 0.96]: b12 < -1 + |b1+b2|, or h_gamma > 0.001, "
                       "or b12 < 1 - |b1-b2| and grad l_gamma != 0",
                       Functional::h_gamma, {"gamma", Interval(0.95, 0.96)}, parse_decimal("0.001"));
}

LemmaTask lemma_horn_step1() {
  Interval thr = Interval(1.0) - Interval(1.0) / parse_decimal("0.95");
  return rho_form_task("horn-step1",
                       "for b1, b2, rho in [-1,1] at beta = 1: b12 < -1 + |b1+b2|, or f > 1 - 1/0.95, or "
                       "b12 < 1 - |b1-b2| and grad g != 0",
                       Functional::f_beta, {"", Interval(1.0)}, thr);
}

namespace {

// Step-2 tasks in (b1, b2) on the boundary b12 = -1 + b1 + b2 (b1 + b2 >= 0).
LemmaTask plus_line_task(std::string id, std::string statement, Param param, Interval thr, EpsBox eps) {
  LemmaTask t;
  t.id = std::move(id);
  t.statement = std::move(statement);
  t.root = make_root({"b1", "b2"}, {Interval(-1, 1), Interval(-1, 1)}, param);
  Functional fn = Functional::f_beta;
  t.criteria.push_back({"C2", [](const Box& b) { return (b[0] + b[1]).hi < 0; }});
  t.criteria.push_back({"C4", [eps](const Box& b) { return eps.contains(b); }});
  t.criteria.push_back({"C3", [fn, param](const Box& b) {
                          if (!((b[0] + b[1]).lo > 0)) return false;
                          LineGrad g = line_grad(fn, Line::plus, b[0], b[1], param.of(b));
                          return nonzero(g.d1) || nonzero(g.d2);
                        }});
  t.criteria.push_back({"C1", [fn, param, thr](const Box& b) {
                          return boundary_value_above(fn, b, param.of(b), thr, true);
                        }});
  return t;
}

}  // namespace

LemmaTask lemma_2sat_step2() {
  EpsBox eps{parse_decimal("0.16247834"), parse_decimal("1e-6")};
  LemmaTask t = plus_line_task("2sat-step2",
                               "for b1, b2 in [-1,1], b1 + b2 >= 0, beta in [0.9401653, 0.9401658]: f_beta(b1,b2,-1+b1+b2) "
                               "> 0.001, or b1 + b2 > 0 and grad != 0, or b1, b2 within 1e-6 of b0 = 0.16247834",
                               {"beta", Interval::unchecked(parse_decimal("0.9401653").lo, parse_decimal("0.9401658").hi)},
                               parse_decimal("0.001"), eps);
  t.notes.push_back("lemma text '9401658' read as 0.9401658");
  Box root = t.root;
  t.side_checks = [eps, root](const CheckOptions& opt) {
    std::vector<SideCheck> out;
    Interval b0 = eps.b0;
    Configuration c = Configuration::simple(Pred::Or, b0);
    out.push_back(direct_below("f-at-b0", "f_0.9401658(b0, b0, -1 + 2 b0) < 0",
                               f_beta(c, parse_decimal("0.9401658")), Interval(0.0)));
    Interval beta_lo = parse_decimal("0.9401653");
    Box sub({"b1", "b2"}, {eps.box(root)[0], eps.box(root)[1]});
    out.push_back(box_check("eps-box", "f_0.9401653(b1, b2, -1 + b1 + b2) > 0 on the eps-box", sub,
                            {{"C5", [beta_lo](const Box& b) {
                                return above(line_value(Functional::f_beta, Line::plus, b[0], b[1], beta_lo),
                                             Interval(0.0));
                              }}},
                            opt));
    return out;
  };
  return t;
}

LemmaTask lemma_horn_step2() {
  EpsBox eps{parse_decimal("0.1489442419"), parse_decimal("1e-6")};
  Interval thr = Interval(1.0) - Interval(1.0) / parse_decimal("0.95");
  LemmaTask t = plus_line_task("horn-step2",
                               "for b1, b2 in [-1,1], b1 + b2 >= 0, beta = 1: f(b1,b2,-1+b1+b2) > 1 - 1/0.95, or "
                               "b1 + b2 > 0 and grad != 0, or b1, b2 within 1e-6 of b0 = 0.1489442419",
                               {"", Interval(1.0)}, thr, eps);
  t.notes.push_back("value threshold 1 - 1/0.95 as in the lemma statement");
  t.side_checks = [eps](const CheckOptions&) {
    Configuration c = Configuration::simple(Pred::Or, eps.b0);
    Interval bound = Interval(1.0) - Interval(1.0) / parse_decimal("0.9462");
    return std::vector<SideCheck>{
        direct_below("f-at-b0", "f(b0, b0, -1 + 2 b0) < 1 - 1/0.9462", f_beta(c, Interval(1.0)), bound)};
  };
  return t;
}

LemmaTask lemma_ornot_step2() {
  EpsBox eps{parse_decimal("-0.1824167935"), parse_decimal("1e-6")};
  Param param{"gamma", Interval::unchecked(parse_decimal("0.9539798").lo, parse_decimal("0.95398").hi)};
  Interval thr = parse_decimal("0.001");
  LemmaTask t;
  t.id = "ornot-step2";
  t.statement =
      "for b1, b2 in [-1,1], gamma in [0.9539798, 0.95398]: h_gamma(b1,b2,-1+|b1+b2|) > 0.001, or b1 + b2 < 0 and "
      "grad h_gamma(b1,b2,-1-b1-b2) != 0, or b1, b2 within 1e-6 of b0 = -0.1824167935";
  t.root = make_root({"b1", "b2"}, {Interval(-1, 1), Interval(-1, 1)}, param);
  Functional fn = Functional::h_gamma;
  t.criteria.push_back({"C3", [eps](const Box& b) { return eps.contains(b); }});
  t.criteria.push_back({"C2", [fn, param](const Box& b) {
                          if (!((b[0] + b[1]).hi < 0)) return false;
                          LineGrad g = line_grad(fn, Line::minus, b[0], b[1], param.of(b));
                          return nonzero(g.d1) || nonzero(g.d2);
                        }});
  t.criteria.push_back({"C1", [fn, param, thr](const Box& b) {
                          return boundary_value_above(fn, b, param.of(b), thr, false);
                        }});
  Box root = t.root;
  t.side_checks = [eps, root](const CheckOptions& opt) {
    std::vector<SideCheck> out;
    Configuration c = line_config(Line::minus, eps.b0, eps.b0);
    out.push_back(direct_below("h-at-b0", "h_0.95398(b0, b0, -1 - 2 b0) < 0", h_gamma(c, parse_decimal("0.95398")),
                               Interval(0.0)));
    Interval g_lo = parse_decimal("0.9539798");
    Box sub({"b1", "b2"}, {eps.box(root)[0], eps.box(root)[1]});
    out.push_back(box_check("eps-box", "h_0.9539798(b1, b2, -1 - b1 - b2) > 0 on the eps-box", sub,
                            {{"C4", [g_lo](const Box& b) {
                                return above(line_value(Functional::h_gamma, Line::minus, b[0], b[1], g_lo),
                                             Interval(0.0));
                              }}},
                            opt));
    return out;
  };
  return t;
}

namespace {

// Theta2 weights for the b-interval of a box; b is rarely split, so a small
// per-thread cache removes nearly all recomputation.
const Theta2& cached_theta2(const Interval& b) {
  thread_local std::map<std::pair<double, double>, Theta2> cache;
  auto key = std::make_pair(b.lo, b.hi);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() > 256) cache.clear();
  return cache.emplace(key, theta2_weights(b)).first->second;
}

bool near_optimum(const Box& bx, const Interval& radius) {
  Interval half(0.5);
  Interval c1 = (Interval(1.0) - bx[2]) * half, c2 = (Interval(1.0) + bx[2]) * half;
  return inside(bx[0], c1 - radius, c1 + radius) && inside(bx[1], c2 - radius, c2 + radius);
}

bool concave(const Box& bx) {
  const Theta2& th = cached_theta2(bx[2]);
  return theta2_hessian(th, Phi_inv(bx[0]), Phi_inv(bx[1])).negative_definite();
}

}  // namespace

LemmaTask lemma_horn_hard() {
  LemmaTask t;
  t.id = "horn-hard";
  t.statement =
      "for tau1, tau2 in [0,1], b in [b0 - 1e-6, b0 + 1e-6], t_i = Phi^-1(tau_i): s_b(t1,t2) < s_b(t*, -t*), or "
      "tau1, tau2 < 1e-4 or both > 1 - 1e-4, or (tau1, tau2) within 0.01 of ((1-b)/2, (1+b)/2) with negative "
      "definite Hessian, or grad s_b != 0";
  Interval bias = horn_hard_bias_box();
  t.root = Box({"tau1", "tau2", "b"}, {Interval(0, 1), Interval(0, 1), bias});
  Interval edge = parse_decimal("1e-4"), radius = parse_decimal("0.01");
  t.criteria.push_back({"C2", [edge](const Box& bx) {
                          Interval top = Interval(1.0) - edge;
                          return (bx[0].hi < edge.lo && bx[1].hi < edge.lo) || (bx[0].lo > top.hi && bx[1].lo > top.hi);
                        }});
  t.criteria.push_back({"C4", [](const Box& bx) {
                          const Theta2& th = cached_theta2(bx[2]);
                          Pair g = theta2_brackets(th, Phi_inv(bx[0]), Phi_inv(bx[1]));
                          return nonzero(g.d1) || nonzero(g.d2);
                        }});
  t.criteria.push_back({"C3", [radius](const Box& bx) { return near_optimum(bx, radius) && concave(bx); }});
  t.criteria.push_back({"C1", [](const Box& bx) {
                          // Mean-value form in tau: ds/dtau_i is the bounded bracket.
                          const Theta2& th = cached_theta2(bx[2]);
                          Interval m1(bx[0].mid()), m2(bx[1].mid());
                          Interval sm = theta2_prob(th, Phi_inv(m1), Phi_inv(m2));
                          Pair g = theta2_brackets(th, Phi_inv(bx[0]), Phi_inv(bx[1]));
                          Interval ub = sm + g.d1 * (bx[0] - m1) + g.d2 * (bx[1] - m2);
                          // s_b(t*, -t*) = 1 - 2p by the choice of p.
                          return ub.hi < (Interval(1.0) - Interval(2.0) * th.p).lo;
                        }});
  t.notes.push_back("tau radius 0.01 around the optimum");
  t.notes.push_back("s_b(t*, -t*) is evaluated as 1 - 2p(b), which holds by construction of the weights");
  Box root = t.root;
  t.side_checks = [root, radius](const CheckOptions& opt) {
    // Concavity on the whole neighbourhood, so the stationary point is its maximum.
    Interval half(0.5), b = root[2];
    Interval c1 = (Interval(1.0) - b) * half, c2 = (Interval(1.0) + b) * half;
    Box nb({"tau1", "tau2", "b"}, {Interval::unchecked((c1 - radius).lo, (c1 + radius).hi),
                                   Interval::unchecked((c2 - radius).lo, (c2 + radius).hi), b});
    return std::vector<SideCheck>{box_check("concave-neighbourhood",
                                            "Hessian negative definite on the 0.01-neighbourhood for every b", nb,
                                            {{"C5", concave}}, opt)};
  };
  return t;
}

const std::vector<std::string>& lemma_ids() {
  static const std::vector<std::string> ids = {"2sat-step1", "2sat-step2", "ornot-step1", "ornot-step2",
                                               "horn-step1", "horn-step2", "horn-hard"};
  return ids;
}

LemmaTask lemma_task(const std::string& id) {
  if (id == "2sat-step1") return lemma_2sat_step1();
  if (id == "2sat-step2") return lemma_2sat_step2();
  if (id == "ornot-step1") return lemma_ornot_step1();
  if (id == "ornot-step2") return lemma_ornot_step2();
  if (id == "horn-step1") return lemma_horn_step1();
  if (id == "horn-step2") return lemma_horn_step2();
  if (id == "horn-hard") return lemma_horn_hard();
  throw std::invalid_argument("unknown lemma id: " + id);
}

bool LemmaResult::verified() const {
  if (!report.verified()) return false;
  for (const auto& s : side)
    if (!s.passed) return false;
  return true;
}

LemmaResult run_lemma(const LemmaTask& task, const CheckOptions& opt, bool serial) {
  LemmaResult r;
  r.task = task;
  r.report = serial ? check_serial(task.root, task.criteria, opt) : check(task.root, task.criteria, opt);
  r.report.lemma_id = task.id;
  if (task.side_checks) r.side = task.side_checks(opt);
  return r;
}

nlohmann::json to_json(const SideCheck& s) {
  nlohmann::json j;
  j["id"] = s.id;
  j["statement"] = s.statement;
  j["passed"] = s.passed;
  if (s.sub_check)
    j["check"] = to_json(*s.sub_check);
  else
    j["value"] = {s.value.lo, s.value.hi};
  return j;
}

nlohmann::json to_json(const LemmaResult& r) {
  nlohmann::json j = to_json(r.report);
  j["statement"] = r.task.statement;
  j["verified"] = r.verified();
  j["root"] = to_json(r.task.root);
  j["notes"] = r.task.notes;
  nlohmann::json side = nlohmann::json::array();
  for (const auto& s : r.side) side.push_back(to_json(s));
  j["side_checks"] = side;
  return j;
}

}  // namespace tightgap
