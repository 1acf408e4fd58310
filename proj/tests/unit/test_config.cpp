#include <cmath>
#include <random>

#include "doctest.h"
#include "tightgap/config.hpp"

using namespace tightgap;

namespace {

// mpmath references, see tests/oracle/oracle_values.py.
constexpr double kBetaLLZ = 0.9401656724814047324615850917696020973304;
constexpr double kBLLZ = 0.1624783228980762946610658853055298253056;
constexpr double kBAlpha = 0.148944241891090964961836519466;
constexpr long double kProbBeta = 0.7150267483270495991718417L;   // OR(0.3,-0.2;0.1), beta 0.94
constexpr long double kImpOr = 0.7598243861210500392672158L;      // IMPOR(-b*,b*;1-2b*), t = (-0.3, 0.2)
constexpr double kGrad[3] = {0.011601041941983458601, -0.022169904317774131723, 0.076674367015955899575};

bool encloses(const Interval& r, long double v) { return (long double)r.lo <= v && v <= (long double)r.hi; }

Configuration random_feasible(std::mt19937_64& g, double lim = 0.95) {
  std::uniform_real_distribution<double> ub(-lim, lim), u01(0, 1);
  double b1 = ub(g), b2 = ub(g);
  double lo = -1 + std::fabs(b1 + b2), hi = 1 - std::fabs(b1 - b2);
  double b12 = lo + (hi - lo) * (0.02 + 0.96 * u01(g));
  return Configuration::binary(Pred::Or, b1, b2, b12);
}

}  // namespace

TEST_CASE("fourier coefficients reproduce truth tables") {
  for (Pred p : {Pred::Or, Pred::ImpOr, Pred::Nand, Pred::UnaryPos, Pred::UnaryNeg}) {
    auto q = fourier_quarters(p);
    for (int xi : {-1, 1})
      for (int xj : {-1, 1}) {
        int v = q[0] + q[1] * xi + q[2] * xj + q[3] * xi * xj;
        CHECK(v == (satisfied(p, xi, xj) ? 4 : 0));
      }
  }
  CHECK(encloses(value(Configuration::unary(Pred::UnaryNeg, 0.2)), 0.6L));
  CHECK(encloses(value(Configuration::unary(Pred::UnaryPos, 0.2)), 0.4L));
}

TEST_CASE("parse and format") {
  Configuration c = parse_configuration("OR(0.3,-0.2;0.1)");
  CHECK(c.pred == Pred::Or);
  CHECK(c.bi.contains(0.3));
  CHECK(encloses(c.bi, 0.3L));
  CHECK(!c.bi.is_point());
  CHECK(parse_decimal("-0.25").is_point());
  CHECK(parse_decimal("1e-3").contains(1e-3));
  Configuration n = parse_configuration("NEG(0.16)");
  CHECK(n.pred == Pred::UnaryNeg);
  CHECK(parse_configuration(format_configuration(c)).bij == c.bij);
  CHECK(parse_configuration(format_configuration(n)).bi == n.bi);
  CHECK(parse_configuration("impor(0.5, [0.25,0.5] ; -0.5)").bj == Interval(0.25, 0.5));
  CHECK_THROWS_AS(parse_configuration("XOR(0.1,0.2;0.3)"), ParseError);
  CHECK_THROWS_AS(parse_configuration("OR(0.1)"), ParseError);
  CHECK_THROWS_AS(parse_decimal("0.1x"), ParseError);
}

TEST_CASE("rho_of, value, positivity") {
  CHECK(rho_of(Configuration::binary(Pred::Or, 0, 0, -1)).contains(-1.0));
  Interval r = rho_of(Configuration::simple(Pred::Or, 0.2));
  CHECK(encloses(r, -2.0L / 3));
  CHECK(r.width() < 1e-15);
  CHECK(rho_of(Configuration::binary(Pred::Or, 1, 0.5, 0.5)) == Interval(0.0));

  CHECK(value(Configuration::binary(Pred::Or, 0, 0, -1)) == Interval(1.0));
  Interval bs(kBAlpha);
  Interval v = value(Configuration::binary(Pred::ImpOr, -bs, bs, Interval(1.0) - Interval(2.0) * bs));
  CHECK(v.contains(1 - kBAlpha));
  CHECK(v.width() < 1e-15);

  CHECK(positivity(Configuration::simple(Pred::Or, 0.3)) == Tri::yes);
  CHECK(positivity(Configuration::simple(Pred::Or, -0.3)) == Tri::yes);
  CHECK(positivity(Configuration::binary(Pred::Or, 0, 0, 0.5)) == Tri::no);
  CHECK(positivity(Configuration::binary(Pred::Or, 0, 0, 0)) == Tri::yes);
}

TEST_CASE("feasibility") {
  CHECK(feasible(Configuration::binary(Pred::Or, 0.3, -0.2, 0.1)) == Tri::yes);
  CHECK(feasible(Configuration::binary(Pred::Or, 0.5, 0.5, -0.5)) == Tri::no);
  CHECK(feasible(Configuration::binary(Pred::Or, 0.5, -0.5, 0.5)) == Tri::no);
  CHECK(feasible(Configuration::binary(Pred::Or, Interval(0.4, 0.6), 0.5, -0.05)) == Tri::unknown);
  CHECK(feasible(Configuration::unary(Pred::UnaryNeg, 1.5)) == Tri::no);
}

TEST_CASE("property: feasibility of unit-vector triples") {
  std::mt19937_64 g(31);
  std::normal_distribution<double> n;
  for (int i = 0; i < 1000; ++i) {
    double v[3][3];
    for (auto& row : v) {
      double s = 0;
      for (double& x : row) {
        x = n(g);
        s += x * x;
      }
      for (double& x : row) x /= std::sqrt(s);
    }
    auto dot = [&](int a, int b) {
      return Interval::around(v[a][0] * v[b][0] + v[a][1] * v[b][1] + v[a][2] * v[b][2]) + Interval(-1e-14, 1e-14);
    };
    Configuration c = Configuration::binary(Pred::Or, dot(0, 1), dot(0, 2), dot(1, 2));
    // Gram matrices are PSD, so rho is a correlation; the triangle bounds are extra.
    REQUIRE(overlaps(rho_of(c), Interval(-1, 1)));
    double bi = c.bi.mid(), bj = c.bj.mid(), bij = c.bij.mid();
    double slack = std::min(bij - (-1 + std::fabs(bi + bj)), 1 - std::fabs(bi - bj) - bij);
    if (slack > 1e-12) REQUIRE(feasible(c) == Tri::yes);
    if (slack < -1e-12) REQUIRE(feasible(c) == Tri::no);
  }
  // Pushing b_ij past either triangle bound is detected.
  for (int i = 0; i < 1000; ++i) {
    Configuration c = random_feasible(g);
    double lo = -1 + std::fabs(c.bi.lo + c.bj.lo), hi = 1 - std::fabs(c.bi.lo - c.bj.lo);
    REQUIRE(feasible(Configuration::binary(Pred::Or, c.bi, c.bj, lo - 1e-6)) == Tri::no);
    REQUIRE(feasible(Configuration::binary(Pred::Or, c.bi, c.bj, hi + 1e-6)) == Tri::no);
    REQUIRE(rho_of(c).lo >= -1);
    REQUIRE(rho_of(c).hi <= 1);
  }
}

TEST_CASE("prob_thresh examples") {
  CHECK(prob_thresh(Configuration::binary(Pred::Or, 0, 0, -1), 0.0, 0.0) == Interval(1.0));
  Interval b(0.3);
  Configuration neg = Configuration::unary(Pred::UnaryNeg, b);
  Interval p = prob_thresh(neg, Phi_inv((Interval(1.0) + b) * Interval(0.5)));
  CHECK(p.contains(0.65));
  CHECK(p.width() < 1e-14);
  Interval bs(kBAlpha);
  Configuration c3 = Configuration::binary(Pred::ImpOr, -bs, bs, Interval(1.0) - Interval(2.0) * bs);
  Interval q = prob_thresh(c3, -0.3, 0.2);
  CHECK(std::fabs((long double)q.mid() - kImpOr) < 1e-14);
  CHECK(q.width() < 1e-13);
  // The other predicates through the reflection of one input.
  Configuration o = Configuration::binary(Pred::Or, 0.3, -0.2, 0.1);
  Configuration i = Configuration::binary(Pred::ImpOr, -0.3, -0.2, -0.1);
  CHECK(overlaps(prob_thresh(o, 0.4, -0.1), prob_thresh(i, -0.4, -0.1)));
  Configuration nd = Configuration::binary(Pred::Nand, -0.3, 0.2, 0.1);
  CHECK(overlaps(prob_thresh(o, 0.4, -0.1), prob_thresh(nd, -0.4, 0.1)));
}

TEST_CASE("prob_beta and f_beta examples") {
  Configuration top = Configuration::binary(Pred::Or, 0, 0, -1);
  CHECK(prob_beta(top, 0.9).contains(1.0));
  CHECK(f_beta(top, 0.9) == Interval(1.0) - Interval(0.9) * Interval(1.0));

  Configuration c = parse_configuration("OR(0.3,-0.2;0.1)");
  Interval pb = prob_beta(c, parse_decimal("0.94"));
  CHECK(encloses(pb, kProbBeta));
  CHECK(pb.width() < 1e-13);

  Interval f = f_beta(Configuration::simple(Pred::Or, kBLLZ), kBetaLLZ);
  CHECK(std::fabs(f.mid()) < 1e-14);

  Interval fh = f_beta(Configuration::simple(Pred::Or, 0.1489442419), 1.0);
  CHECK(fh.hi < (Interval(1.0) - Interval(1.0) / parse_decimal("0.9462")).lo);
}

TEST_CASE("h_gamma examples") {
  Interval b0 = parse_decimal("-0.1824167935");
  Configuration c = Configuration::binary(Pred::Or, b0, b0, Interval(-1.0) - Interval(2.0) * b0);
  CHECK(h_gamma(c, parse_decimal("0.95398")).hi < 0);
  CHECK(h_gamma(c, parse_decimal("0.9539798")).lo > 0);
  CHECK(h_gamma(Configuration::binary(Pred::Or, 1, 1, 1), 0.9).lo >= 0);
}

TEST_CASE("property: negation symmetry of f_beta") {
  std::mt19937_64 g(32);
  for (double beta : {0.9, 0.94, 1.0})
    for (int i = 0; i < 1000; ++i) {
      Configuration c = random_feasible(g);
      Configuration m = Configuration::binary(Pred::Or, -c.bi, -c.bj, c.bij);
      Interval d = f_beta(c, beta) - f_beta(m, beta);
      REQUIRE(d.contains(0.0));
    }
}

TEST_CASE("property: prob_beta is prob_thresh at the LLZ thresholds") {
  std::mt19937_64 g(33);
  for (int i = 0; i < 300; ++i) {
    Configuration c = random_feasible(g);
    Interval beta(0.94);
    Interval ti = Phi_inv((Interval(1.0) + beta * c.bi) * Interval(0.5));
    Interval tj = Phi_inv((Interval(1.0) + beta * c.bj) * Interval(0.5));
    REQUIRE(prob_beta(c, beta) == prob_thresh(c, ti, tj));
  }
}

TEST_CASE("property: h_gamma decreases in gamma") {
  std::mt19937_64 g(34);
  std::uniform_real_distribution<double> ug(0.5, 1.0);
  for (int i = 0; i < 1000; ++i) {
    Configuration c = random_feasible(g);
    double a = ug(g), b = ug(g);
    if (a > b) std::swap(a, b);
    Interval ha = h_gamma(c, a), hb = h_gamma(c, b);
    REQUIRE(hb.hi <= ha.hi + ha.width() + hb.width());
  }
}

TEST_CASE("g_b_beta") {
  Interval beta(0.94);
  for (double b : {0.16, -0.3, 0.05}) {
    Interval g0 = g_b_beta(b, beta, 0.0);
    Interval ps = prob_beta(Configuration::simple(Pred::Or, b), beta);
    CHECK(overlaps(g0, ps));
    CHECK(std::fabs(g0.mid() - ps.mid()) < 1e-14);
  }
  CHECK(g_b_beta_dt(0.16, beta, 0.05).lo > 0);

  std::mt19937_64 gen(35);
  std::uniform_real_distribution<double> ub(0.02, 0.6), ut(0.0, 0.3);
  for (int i = 0; i < 200; ++i) {
    double b = ub(gen), t = ut(gen);
    Interval d = g_b_beta(b, beta, t) - g_b_beta(-b, beta, t) + beta * Interval(b);
    REQUIRE(d.contains(0.0));
    double h = 1e-5;
    double fd = (g_b_beta(b, beta, t + h).mid() - g_b_beta(b, beta, t - h).mid()) / (2 * h);
    REQUIRE(std::fabs(g_b_beta_dt(b, beta, t).mid() - fd) <= 1e-7 * std::max(1.0, std::fabs(fd)));
  }
}

TEST_CASE("grad_f_beta") {
  Configuration c = Configuration::binary(Pred::Or, 0.3, -0.1, 0.2);
  Grad3 d = grad_f_beta(c, 0.94);
  CHECK(std::fabs(d.d1.mid() - kGrad[0]) <= 1e-6 * std::fabs(kGrad[0]));
  CHECK(std::fabs(d.d2.mid() - kGrad[1]) <= 1e-6 * std::fabs(kGrad[1]));
  CHECK(std::fabs(d.d3.mid() - kGrad[2]) <= 1e-6 * std::fabs(kGrad[2]));
  CHECK(d.d1.contains(kGrad[0]));
  CHECK(d.d3.contains(kGrad[2]));

  // Central differences on f_beta itself.
  double h = 1e-5, p[3] = {0.3, -0.1, 0.2};
  Interval got[3] = {d.d1, d.d2, d.d3};
  for (int k = 0; k < 3; ++k) {
    double a[3] = {p[0], p[1], p[2]}, b[3] = {p[0], p[1], p[2]};
    a[k] += h;
    b[k] -= h;
    double fd = (f_beta(Configuration::binary(Pred::Or, a[0], a[1], a[2]), 0.94).mid() -
                 f_beta(Configuration::binary(Pred::Or, b[0], b[1], b[2]), 0.94).mid()) /
                (2 * h);
    CHECK(std::fabs(got[k].mid() - fd) <= 1e-6 * std::fabs(fd));
  }

  Grad3 s = grad_f_beta(Configuration::binary(Pred::Or, 0.2, 0.2, -0.3), 0.94);
  CHECK(s.d1 == s.d2);

  // Stationary along b12 = -1 + b1 + b2 at the LLZ minimizer.
  Grad3 m = grad_f_beta(Configuration::binary(Pred::Or, kBLLZ, kBLLZ, -1 + 2 * kBLLZ), kBetaLLZ);
  CHECK(std::fabs((m.d1 + m.d3).mid()) < 1e-9);

  CHECK_THROWS_AS(grad_f_beta(Configuration::binary(Pred::Or, 0.3, 0.3, 1.0), 0.94), DegenerateCorrelation);
  CHECK_THROWS_AS(grad_f_beta(Configuration::binary(Pred::Or, 1.0, 0.3, 0.3), 0.94), BoundaryBias);
}

TEST_CASE("grad_param_rho") {
  Grad3 o = grad_param_rho(Functional::f_beta, 0.0, 0.0, 0.0, 0.94);
  CHECK(o.d3.contains((-consts::inv_2pi() + Interval(0.94) * Interval(0.25)).mid()));
  CHECK(o.d3.width() < 1e-15);

  Grad3 box = grad_param_rho(Functional::f_beta, Interval(0.5, 0.6), Interval(0.5, 0.6), Interval(-0.1, 0.0), 0.94);
  CHECK((!box.d1.contains_zero() || !box.d2.contains_zero() || !box.d3.contains_zero()));

  std::mt19937_64 g(36);
  std::uniform_real_distribution<double> ub(-0.9, 0.9), ur(-0.9, 0.9), ul(0.8, 1.0);
  for (Functional fn : {Functional::f_beta, Functional::h_gamma})
    for (int i = 0; i < 100; ++i) {
      double b1 = ub(g), b2 = ub(g), r = ur(g), lam = ul(g);
      Grad3 pr = grad_param_rho(fn, b1, b2, r, lam);
      Interval b12 = b12_of(b1, b2, r);
      Configuration c = Configuration::binary(Pred::Or, b1, b2, b12);
      Grad3 gb = grad_functional(fn, c, lam);
      double q1 = std::sqrt((1 - b2 * b2) / (1 - b1 * b1)), q2 = 1 / q1;
      double D = std::sqrt((1 - b1 * b1) * (1 - b2 * b2));
      double e1 = gb.d1.mid() + gb.d3.mid() * (b2 - r * b1 * q1);
      double e2 = gb.d2.mid() + gb.d3.mid() * (b1 - r * b2 * q2);
      double e3 = gb.d3.mid() * D;
      auto close = [](double a, double b) { return std::fabs(a - b) <= 1e-8 * std::max(std::fabs(b), 1e-3); };
      REQUIRE(close(pr.d1.mid(), e1));
      REQUIRE(close(pr.d2.mid(), e2));
      REQUIRE(close(pr.d3.mid(), e3));
      double h = 1e-6;
      double fd = (value_param_rho(fn, b1, b2, r + h, lam).mid() - value_param_rho(fn, b1, b2, r - h, lam).mid()) /
                  (2 * h);
      REQUIRE(std::fabs(pr.d3.mid() - fd) <= 1e-6 * std::max(std::fabs(fd), 1e-3));
    }
}

TEST_CASE("step-3 inequalities on a 40x25 cover") {
  const int nb = 40, nt = 25;
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nt; ++j) {
      Interval b(0.14 + 0.05 * i / nb, 0.14 + 0.05 * (i + 1) / nb);
      Interval t(0.1 * j / nt, 0.1 * (j + 1) / nt);
      REQUIRE(step3::certify_drho_bound(b, t));
      REQUIRE(step3::certify_lhs_bound(b, t, 0.94));
    }
  CHECK(step3::rho(0.2, 0.0).contains(-2.0 / 3));
}
