#include "doctest.h"
#include "tightgap/hardness.hpp"
#include "tightgap/lemmas.hpp"

using namespace tightgap;
using namespace tightgap::lemma_detail;

namespace {

// Id of the first criterion that certifies the box, or "" if none does.
std::string certifier(const LemmaTask& t, const Box& b) {
  for (const auto& c : t.criteria) {
    try {
      if (c.certify(b)) return c.id;
    } catch (const IntervalError&) {
    }
  }
  return "";
}

Box sub(const LemmaTask& t, std::initializer_list<std::pair<std::string, Interval>> dims) {
  Box b = t.root;
  for (const auto& [name, r] : dims) b[b.index(name)] = r;
  return b;
}

LemmaTask without(LemmaTask t, const std::string& id) {
  std::erase_if(t.criteria, [&](const Criterion& c) { return c.id == id; });
  return t;
}

const SideCheck& side(const LemmaResult& r, const std::string& id) {
  for (const auto& s : r.side)
    if (s.id == id) return s;
  throw std::out_of_range(id);
}

}  // namespace

TEST_CASE("line helpers") {
  // Plus line at b1 = b2 = b: rho = -(1 - b) / (1 + b).
  Interval b(0.3);
  CHECK(line_rho(Line::plus, b, b).contains(-0.7 / 1.3));
  CHECK(line_rho(Line::minus, -b, -b).contains(-0.7 / 1.3));
  Configuration c = line_config(Line::plus, Interval(0.2), Interval(0.4));
  CHECK(c.bij.contains(-0.4));
  CHECK(feasible(c) != Tri::no);
  // Off the feasible region the line has no valid rho.
  CHECK_THROWS_AS(line_rho(Line::plus, Interval(-0.9), Interval(-0.9)), DomainError);

  auto v = line_value(Functional::f_beta, Line::plus, Interval(0.16, 0.17), Interval(0.16, 0.17), Interval(0.94));
  CHECK(v.contains(f_beta(line_config(Line::plus, Interval(0.165), Interval(0.165)), Interval(0.94)).mid()));
  auto g = line_grad(Functional::f_beta, Line::plus, Interval(0.5), Interval(0.5), Interval(0.94));
  CHECK(overlaps(g.d1, g.d2));
}

TEST_CASE("2sat-step1") {
  auto t = lemma_2sat_step1();
  CHECK(t.root.at("beta") == Interval(0.94, 0.9405));
  // Large biases with strongly negative rho break the triangle inequality.
  auto corner = check(sub(t, {{"b1", Interval(0.9, 1)}, {"b2", Interval(0.9, 1)}, {"rho", Interval(-1, -0.9)}}),
                      t.criteria);
  CHECK(corner.verified());
  CHECK(t.criteria[0].id == "C1");
  CHECK(corner.certified_by[0] > 0);
  // Near the hardest simple configuration f is ~0, so the threshold
  // criterion cannot apply.
  Interval b0(0.162, 0.163);
  Interval r0 = line_rho(Line::plus, Interval(0.1624783), Interval(0.1624783));
  Box near = sub(t, {{"b1", b0}, {"b2", b0}, {"rho", Interval(r0.lo - 0.001, r0.hi + 0.001)}});
  CHECK(certifier(t, near) != "C2");
  auto r = run_lemma(t);
  CHECK(r.verified());
  CHECK(r.report.certified_by.size() == 3);
}

TEST_CASE("2sat-step2") {
  auto r = run_lemma(lemma_2sat_step2());
  CHECK(r.verified());
  const auto& f0 = side(r, "f-at-b0");
  CHECK(f0.passed);
  CHECK(f0.value.hi < 0);
  const auto& eps = side(r, "eps-box");
  CHECK(eps.passed);
  REQUIRE(eps.sub_check);
  CHECK(eps.sub_check->verified());
}

TEST_CASE("2sat-step2 needs the eps criterion") {
  CheckOptions opt;
  opt.max_boxes = 200'000;
  auto r = run_lemma(without(lemma_2sat_step2(), "C4"), opt);
  CHECK(!r.report.verified());
  if (r.report.witness) {
    // The uncovered point is the hardest simple configuration.
    CHECK(overlaps((*r.report.witness)[0], Interval(0.16247, 0.16249)));
  }
}

TEST_CASE("ornot-step1 and step2") {
  auto t1 = lemma_ornot_step1();
  CHECK(t1.root.at("gamma") == Interval(0.95, 0.96));
  CHECK(run_lemma(t1).verified());

  auto t2 = lemma_ornot_step2();
  // Strictly negative bias sum, far from the hardest bias: h clears the
  // threshold on both branches.
  CHECK(certifier(t2, sub(t2, {{"b1", Interval(-0.5, -0.4)}, {"b2", Interval(-0.5, -0.4)}})) == "C1");
  auto r = run_lemma(t2);
  CHECK(r.verified());
  const auto& h0 = side(r, "h-at-b0");
  CHECK(h0.passed);
  CHECK(h0.value.hi < 0);
  CHECK(side(r, "eps-box").passed);
}

TEST_CASE("horn-step1 and step2") {
  CHECK(run_lemma(lemma_horn_step1()).verified());
  auto r = run_lemma(lemma_horn_step2());
  CHECK(r.verified());
  for (const auto& s : r.side) CHECK_MESSAGE(s.passed, s.id);
  CHECK(side(r, "f-at-b0").value.hi < 1 - 1 / 0.9462);
}

TEST_CASE("horn-hard") {
  auto t = lemma_horn_hard();
  Interval b = t.root.at("b");
  Interval w(-1e-5, 1e-5);
  Box opt_box = sub(t, {{"tau1", (1 - b) / 2 + w}, {"tau2", (1 + b) / 2 + w}});
  CHECK(certifier(t, opt_box) == "C3");
  Box centre = sub(t, {{"tau1", Interval(0.5 - 1e-4, 0.5 + 1e-4)}, {"tau2", Interval(0.5 - 1e-4, 0.5 + 1e-4)}});
  std::string who = certifier(t, centre);
  CHECK((who == "C1" || who == "C4"));
  CHECK(certifier(t, sub(t, {{"tau1", Interval(0, 1e-5)}, {"tau2", Interval(0, 1e-5)}})) == "C2");

  auto r = run_lemma(t);
  CHECK(r.verified());
  for (const auto& s : r.side) CHECK_MESSAGE(s.passed, s.id);

  auto bare = run_lemma(without(t, "C3"));
  CHECK(!bare.verified());
}

TEST_CASE("serial and parallel checks agree on a lemma") {
  auto t = lemma_horn_hard();
  auto a = run_lemma(t, {}, false), s = run_lemma(t, {}, true);
  CHECK(a.verified());
  CHECK(s.verified());
  CHECK(a.report.boxes_examined == s.report.boxes_examined);
  CHECK(a.report.certified_by == s.report.certified_by);
}

TEST_CASE("cover replay on a lemma") {
  auto t = lemma_horn_step2();
  CheckOptions opt;
  opt.record_leaves = true;
  auto r = run_lemma(t, opt);
  REQUIRE(r.verified());
  CHECK(replay_leaves(t.root, t.criteria, r.report));
}

TEST_CASE("lemma json") {
  auto r = run_lemma(lemma_horn_hard());
  auto j = to_json(r);
  CHECK(j["lemma_id"] == "horn-hard");
  CHECK(j["status"] == "Verified");
  CHECK(j["verified"] == true);
  CHECK(j["side_checks"].is_array());
  CHECK(j["root"].is_object());
}
