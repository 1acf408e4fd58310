// Hard distributions for MAX 2-AND-OR-NOT (Theta1) and MAX {1,2}-HORN SAT
// (Theta2), and certificates that the rounding schemes are optimal on them.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tightgap/config.hpp"
#include "tightgap/lemmas.hpp"

namespace tightgap {

struct PositivityUnverifiable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NegativeWeight : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnmappedBias : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PremiseFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WeightedEntry {
  Configuration config;
  Interval weight;
};

struct WeightedDistribution {
  std::vector<WeightedEntry> entries;
  Interval weight_sum() const;
  Interval value() const;
};

// Thresholds for the negative (t1) and positive (t2) bias; may be +-inf.
struct ThresholdPoint {
  Interval t1, t2;
};

// Each entry uses t1 for negative biases and t2 for positive ones.
// Throws UnmappedBias when a bias interval contains 0.
Interval prob_theta(const WeightedDistribution& d, const ThresholdPoint& t);

// A composite certificate: verified iff every premise passed.
struct Certificate {
  std::string name;
  std::vector<SideCheck> premises;
  bool verified() const;
  // Empty when verified.
  std::string first_failure() const;
  // Throws PremiseFailed naming the first failing premise.
  void require() const;
};

// Theta1: (b, b, -1 - 2b) OR with p1 and (b) NEG with p2, for b < 0.
struct Theta1 {
  WeightedDistribution dist;
  Interval gamma, b, rho, k;  // k = sqrt((1 - rho) / (1 + rho))
  Interval p1, p2;
  Interval t_gamma;  // the gamma-scheme threshold at b
  Interval t_star;   // stationary point of Prob(Theta1, t)
};

// Throws PositivityUnverifiable.
Theta1 build_theta1(const Interval& gamma_star, const Interval& b_star);
Interval theta1_prob(const Theta1& th, const Interval& t);
Interval theta1_derivative(const Theta1& th, const Interval& t);
Certificate theta1_optimal_certificate(const Theta1& th);

// Theta2 with weights p1 = p2 = p5 = p6 = p, p3, p4, for b > 0.
struct Theta2 {
  WeightedDistribution dist;
  Interval b, rho, k, t_star, r, r_prime;
  Interval p, p3, p4;
};

// Weights only, no checks; used per box by the horn-hard check.
Theta2 theta2_weights(const Interval& b);
// Throws NegativeWeight or PositivityUnverifiable.
Theta2 build_theta2(const Interval& b_star);
// Closed-form evaluation, same value as prob_theta on th.dist.
Interval theta2_prob(const Theta2& th, const Interval& t1, const Interval& t2);

// dProb/dt_i = phi(t_i) * bracket_i; the brackets are also the partials in
// tau_i = Phi(t_i) and stay bounded at infinite thresholds.
struct Pair {
  Interval d1, d2;
};
Pair theta2_brackets(const Theta2& th, const Interval& t1, const Interval& t2);
Pair theta2_grad(const Theta2& th, const Interval& t1, const Interval& t2);

struct Hessian2 {
  Interval h11, h12, h22;
  Interval det() const { return h11 * h22 - h12 * h12; }
  bool negative_definite() const { return h11.hi < 0 && det().lo > 0; }
};
Hessian2 theta2_hessian(const Theta2& th, const Interval& t1, const Interval& t2);

// Premises for threshold pairs with both tau < 1e-4 or both tau > 1 - 1e-4.
std::vector<SideCheck> theta2_boundary_certificate(const Theta2& th);
// Everything needed for Prob(Theta2, t1, t2) <= Prob(Theta2, t*, -t*) on
// the extended plane; runs the horn-hard check.
Certificate theta2_global_certificate(const Theta2& th, const Interval& alpha_star, const CheckOptions& opt = {});

// The interval used for b in the horn-hard check.
Interval horn_hard_bias_box();

nlohmann::json to_json(const WeightedDistribution& d);
nlohmann::json to_json(const Certificate& c);

}  // namespace tightgap
