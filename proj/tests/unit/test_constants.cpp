#include <cmath>

#include "doctest.h"
#include "tightgap/constants.hpp"

using namespace tightgap;

namespace {

// Printed digits.
constexpr double kBetaPaper = 0.9401656724814047;
constexpr double kBPaper = 0.1624783228980763;
// mpmath references, see tests/oracle/oracle_values.py.
constexpr double kBetaLLZ = 0.9401656724814047324615850917696020973304;
constexpr double kBLLZ = 0.1624783228980762946610658853055298253056;
constexpr double kGammaStar = 0.95397990055882547219125799471;
constexpr double kBGamma = -0.182416793460729449671791996006;
constexpr double kAlphaStar = 0.946159810483605066720093186316;
constexpr double kBAlpha = 0.148944241891090964961836519466;
constexpr double kMinF1 = -0.0569039066337809420542215040086;

bool to_8_digits(const Interval& x, double printed) { return x.lo >= printed - 5e-9 && x.hi <= printed + 5e-9; }

const ConstantReport& beta() {
  static const ConstantReport r = solve_beta_llz();
  return r;
}
const ConstantReport& gamma() {
  static const ConstantReport r = solve_gamma_star();
  return r;
}
const ConstantReport& alpha() {
  static const ConstantReport r = solve_alpha_star();
  return r;
}

Configuration simple(const Interval& b) { return Configuration::binary(Pred::Or, b, b, -1 + 2 * abs(b)); }

}  // namespace

TEST_CASE("beta_llz") {
  const auto& r = beta();
  CHECK(r.enclosure.width() <= 1e-12);
  CHECK(r.hardest_bias.width() <= 1e-12);
  CHECK(r.enclosure.contains(kBetaPaper));
  CHECK(r.enclosure.contains(kBetaLLZ));
  CHECK(r.hardest_bias.contains(kBPaper));
  CHECK(r.hardest_bias.contains(kBLLZ));
  CHECK(r.residuals_ok());
  CHECK(r.residuals.size() >= 3);
  CHECK(to_8_digits(r.enclosure, 0.94016567));
  CHECK_THROWS_AS(solve_beta_llz(1e-30), ToleranceUnreachable);
}

TEST_CASE("beta system") {
  Interval b(kBLLZ), t = Phi_inv(Interval((1 - kBetaLLZ * kBLLZ) / 2));
  BetaSystem s = beta_system(b, t);
  CHECK(std::fabs(s.f1.mid()) < 1e-13);
  CHECK(std::fabs(s.f2.mid()) < 1e-13);
  // Jacobian against central differences.
  double h = 1e-6, b0 = 0.17, t0 = -0.2;
  Jacobian2 J = beta_system_jacobian(Interval(b0), Interval(t0));
  auto F = [](double bb, double tt) { return beta_system(Interval(bb), Interval(tt)); };
  double a11 = (F(b0 + h, t0).f1.mid() - F(b0 - h, t0).f1.mid()) / (2 * h);
  double a12 = (F(b0, t0 + h).f1.mid() - F(b0, t0 - h).f1.mid()) / (2 * h);
  double a21 = (F(b0 + h, t0).f2.mid() - F(b0 - h, t0).f2.mid()) / (2 * h);
  double a22 = (F(b0, t0 + h).f2.mid() - F(b0, t0 - h).f2.mid()) / (2 * h);
  CHECK(J.a11.mid() == doctest::Approx(a11).epsilon(1e-6));
  CHECK(J.a12.mid() == doctest::Approx(a12).epsilon(1e-6));
  CHECK(J.a21.mid() == doctest::Approx(a21).epsilon(1e-6));
  CHECK(J.a22.mid() == doctest::Approx(a22).epsilon(1e-6));
}

TEST_CASE("gamma_star") {
  const auto& r = gamma();
  CHECK(r.enclosure.lo >= 0.9539798);
  CHECK(r.enclosure.hi <= 0.95398);
  CHECK(r.enclosure.width() <= 1e-9);
  CHECK(to_8_digits(r.enclosure, 0.95397990));
  CHECK(r.enclosure.contains(kGammaStar));
  CHECK(r.hardest_bias.contains(kBGamma));
  CHECK(std::fabs(r.hardest_bias.mid() + 0.1824) < 5e-5);
  CHECK(r.residuals_ok());
}

TEST_CASE("alpha_star") {
  const auto& r = alpha();
  CHECK(r.enclosure.width() <= 1e-9);
  CHECK(to_8_digits(r.enclosure, 0.94615981));
  CHECK(r.enclosure.contains(kAlphaStar));
  CHECK(r.hardest_bias.contains(kBAlpha));
  CHECK(std::fabs(r.hardest_bias.mid() - 0.1489442) <= 1e-6);
  CHECK(r.residuals_ok());
  // f(b*, b*, -1 + 2b*) = 1 - 1/alpha*.
  Interval f = f_beta(simple(r.hardest_bias), Interval(1.0));
  CHECK(overlaps(f, 1 - 1 / r.enclosure));
  CHECK(f.contains(kMinF1));
}

TEST_CASE("table ratios") {
  CHECK(to_8_digits(beta().enclosure, 0.94016567));
  CHECK(to_8_digits(alpha().enclosure, 0.94615981));
  CHECK(to_8_digits(gamma().enclosure, 0.95397990));
  auto j = to_json(gamma());
  CHECK(j["schema_version"] == 1);
  CHECK(j["name"] == "gamma_star");
  CHECK(j["lo"].get<double>() <= j["hi"].get<double>());
  CHECK(j["residuals"].is_array());
}

TEST_CASE("minimize_simple_line") {
  LineMin m = minimize_simple_line(Functional::f_beta, beta().enclosure, Interval(-1, 1), 1e-9);
  CHECK(m.min_value.contains(0.0));
  REQUIRE(m.argmins.size() >= 2);
  bool neg = false, pos = false;
  for (const auto& a : m.argmins) {
    neg = neg || overlaps(a, Interval(-0.1624784, -0.1624782));
    pos = pos || overlaps(a, Interval(0.1624782, 0.1624784));
  }
  CHECK(neg);
  CHECK(pos);

  LineMin h = minimize_simple_line(Functional::f_beta, Interval(1.0), Interval(0, 1), 1e-9);
  CHECK(h.min_value.contains(kMinF1));
  REQUIRE(!h.argmins.empty());
  CHECK(std::fabs(h.argmins.front().mid() - 0.1489442) < 1e-6);

  // min h decreases as gamma grows.
  LineMin lo = minimize_simple_line(Functional::h_gamma, Interval(0.953), Interval(-1, 0), 1e-9);
  LineMin hi = minimize_simple_line(Functional::h_gamma, Interval(0.954), Interval(-1, 0), 1e-9);
  CHECK(hi.min_value.hi < lo.min_value.lo);
  CHECK(lo.min_value.lo > 0);
  CHECK(hi.min_value.hi < 0);
}

TEST_CASE("fixed point of the LLZ ratio") {
  const auto& r = beta();
  Configuration c = simple(r.hardest_bias);
  Interval ratio = prob_beta(c, r.enclosure) / value(c);
  CHECK(overlaps(ratio, r.enclosure));
  CHECK(std::fabs(ratio.mid() - kBetaLLZ) < 1e-11);
}

TEST_CASE("symmetric minimizers") {
  const auto& r = beta();
  Interval fp = f_beta(simple(r.hardest_bias), r.enclosure);
  Interval fm = f_beta(simple(-r.hardest_bias), r.enclosure);
  CHECK(overlaps(fp, fm));
  CHECK(fp.contains(0.0));
}

TEST_CASE("gamma-scheme on unary constraints") {
  Interval g = gamma().enclosure;
  Scheme s{SchemeKind::gamma, g};
  for (double b : {-0.9, -0.5, -0.1824, 0.0, 0.3, 0.7}) {
    Configuration neg = Configuration::unary(Pred::UnaryNeg, Interval(b));
    Configuration pos = Configuration::unary(Pred::UnaryPos, Interval(b));
    CHECK(overlaps(prob_scheme(neg, s) / value(neg), g));
    CHECK((prob_scheme(pos, s) / value(pos)).lo >= g.lo);
  }
}
