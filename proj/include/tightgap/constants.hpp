// Certified enclosures of the optimal ratios beta_LLZ, gamma* and alpha* and
// of their hardest biases.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tightgap/config.hpp"

namespace tightgap {

struct NoRootInSeedBox : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ToleranceUnreachable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Residual {
  std::string name;
  Interval value;  // must contain 0
};

struct ConstantReport {
  std::string name;
  Interval enclosure;
  Interval hardest_bias;
  std::string method;
  std::vector<Residual> residuals;
  bool residuals_ok() const;
};

ConstantReport solve_beta_llz(double tol = 1e-12);
ConstantReport solve_gamma_star(double tol = 1e-9);
ConstantReport solve_alpha_star(double tol = 1e-9);

// Global minimum of b -> F(b, b, -1 + 2|b|) over b_range, where F is f_beta or
// h_gamma at the given parameter. Every minimizer lies in one of `argmins`.
struct LineMin {
  Interval min_value;
  std::vector<Interval> argmins;  // disjoint, increasing
  std::uint64_t evaluations = 0;
};
LineMin minimize_simple_line(Functional fn, const Interval& param, const Interval& b_range, double tol);

// Residuals of the (b, t) system at a box:
//   F1 = 1 - Phi_rho(t, t) - (1 - 2 Phi(t)) / b,  rho = (b - 1) / (b + 1)
//   F2 = (1 - 2 Phi(t)) / b - e^{-(1+b) t^2 / (2b)} / (2 pi sqrt(b) (1 + b) Phi(t / sqrt(b)))
struct BetaSystem {
  Interval f1, f2;
};
BetaSystem beta_system(const Interval& b, const Interval& t);
struct Jacobian2 {
  Interval a11, a12, a21, a22;  // rows F1, F2; columns b, t
};
Jacobian2 beta_system_jacobian(const Interval& b, const Interval& t);

nlohmann::json to_json(const ConstantReport& r);

}  // namespace tightgap
