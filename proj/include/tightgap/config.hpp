// Configurations (biases and pairwise bias of one constraint), their SDP
// value, relative pairwise bias, rounding probabilities and the analysis
// functionals f_beta, h_gamma with first derivatives.
//
// Sign convention: -1 is true. A variable with bias b is rounded to false
// with probability (1 + f(b)) / 2, i.e. x_i is false iff Z_i < t_i with
// t_i = Phi^-1((1 + f(b_i)) / 2).
#pragma once

#include <array>
#include <string>

#include "tightgap/gauss.hpp"
#include "tightgap/interval.hpp"

namespace tightgap {

struct BoundaryBias : IntervalError {
  BoundaryBias() : IntervalError("bias may be +-1") {}
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Pred { Or, ImpOr, Nand, UnaryPos, UnaryNeg };

bool is_unary(Pred p);
const char* pred_name(Pred p);  // OR, IMPOR, NAND, POS, NEG
Pred parse_pred(const std::string& s);

// Fourier coefficients (P_0, P_i, P_j, P_ij) in units of 1/4.
std::array<int, 4> fourier_quarters(Pred p);
// Truth value at +-1 inputs (-1 = true); xj ignored for unary predicates.
bool satisfied(Pred p, int xi, int xj);

enum class Tri { yes, no, unknown };
const char* to_string(Tri t);

struct Configuration {
  Pred pred = Pred::Or;
  Interval bi, bj, bij;
  bool feasible_asserted = false;

  static Configuration binary(Pred p, Interval bi, Interval bj, Interval bij);
  static Configuration unary(Pred p, Interval b);
  static Configuration simple(Pred p, Interval b);  // (b, b, -1 + 2|b|)
};

// Decimal literal to the tightest enclosing interval (a point when exact).
Interval parse_decimal(const std::string& s);
// OR(0.3,-0.2;0.1), IMPOR(..), NAND(..), POS(0.1), NEG(0.16).
Configuration parse_configuration(const std::string& s);
std::string format_configuration(const Configuration& c);

Tri feasible(const Configuration& c);
Interval rho_of(const Configuration& c);
Interval value(const Configuration& c);
Tri positivity(const Configuration& c);

// Probability that rounding with the given thresholds satisfies c.
Interval prob_thresh(const Configuration& c, const Interval& ti, const Interval& tj = Interval(0.0),
                     double tol = kDefaultBivTol);
// Same with the relative pairwise bias supplied (e.g. from a tighter closed form).
Interval prob_thresh(const Configuration& c, const Interval& ti, const Interval& tj, const Correlation& rho,
                     double tol = kDefaultBivTol);

enum class SchemeKind { llz, gamma };
// Threshold maps: LLZ f(b) = beta b; gamma-scheme f(b) = -1 + gamma (1 + b).
struct Scheme {
  SchemeKind kind = SchemeKind::llz;
  Interval param = 1.0;
  Interval false_prob(const Interval& b) const;  // (1 + f(b)) / 2
  Interval threshold(const Interval& b) const;
  Interval f(const Interval& b) const;
};

Interval prob_scheme(const Configuration& c, const Scheme& s, double tol = kDefaultBivTol);
Interval prob_beta(const Configuration& c, const Interval& beta, double tol = kDefaultBivTol);
Interval f_beta(const Configuration& c, const Interval& beta, double tol = kDefaultBivTol);
Interval h_gamma(const Configuration& c, const Interval& gamma, double tol = kDefaultBivTol);

// g_{b,beta}(t) = Prob_beta(b + t, b - t, -1 + 2|b|) and its t-derivative.
Interval g_b_beta(const Interval& b, const Interval& beta, const Interval& t, double tol = kDefaultBivTol);
Interval g_b_beta_dt(const Interval& b, const Interval& beta, const Interval& t);

struct Grad3 {
  Interval d1, d2, d3;
};

enum class Functional { f_beta, h_gamma };
const char* to_string(Functional f);

Scheme scheme_of(Functional fn, const Interval& param);

// Partials of f_beta / h_gamma in (b1, b2, b12).
Grad3 grad_functional(Functional fn, const Configuration& c, const Interval& param);
Grad3 grad_functional(Functional fn, const Configuration& c, const Interval& param, const Interval& rho);
Grad3 grad_f_beta(const Configuration& c, const Interval& beta);
Grad3 grad_h_gamma(const Configuration& c, const Interval& gamma);

// The same functionals with b12 = b1 b2 + rho sqrt((1 - b1^2)(1 - b2^2)).
Interval b12_of(const Interval& b1, const Interval& b2, const Interval& rho);
Interval value_param_rho(Functional fn, const Interval& b1, const Interval& b2, const Interval& rho,
                         const Interval& param, double tol = kDefaultBivTol);
Grad3 grad_param_rho(Functional fn, const Interval& b1, const Interval& b2, const Interval& rho,
                     const Interval& param);
// Partial in beta / gamma at fixed (b1, b2, b12); rho is the relative pairwise bias.
Interval dparam_functional(Functional fn, const Configuration& c, const Interval& param, const Interval& rho);

namespace step3 {
// rho_b(t) for the configuration (b + t, b - t, -1 + 2|b|), b > 0.
Interval rho(const Interval& b, const Interval& t);
// d rho / dt = t * K(b, t).
Interval drho_dt_factor(const Interval& b, const Interval& t);
// Certificates on one box (t >= 0, b > 0).
bool certify_drho_bound(const Interval& b, const Interval& t);        // 0 <= K < 2/3
bool certify_lhs_bound(const Interval& b, const Interval& t, double beta_min);  // beta^2 pi (1 + rho) >= 0.681
}  // namespace step3

}  // namespace tightgap
