// Monte-Carlo estimates of satisfaction probabilities, computed from explicit
// unit vectors and Gaussian samples rather than the analytic formulas, and
// brute-force optima of tiny instances.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tightgap/config.hpp"
#include "tightgap/hardness.hpp"

namespace tightgap {

struct InfeasibleConfiguration : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooManyVariables : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Vec3 = std::array<double, 3>;

// Unary configurations leave vj unset (zero).
struct VectorTriple {
  Vec3 v0, vi, vj;
};

// Factorizes the Gram matrix of (v0, vi, vj) at the interval midpoints.
VectorTriple embed(const Configuration& c);
double dot(const Vec3& a, const Vec3& b);

// Counter-based generator: the k-th draw of a stream depends only on (seed, stream, k).
std::uint64_t splitmix64(std::uint64_t x);
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t k);
// Box-Muller pair from draws 2k and 2k + 1.
std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t k);

struct Estimate {
  double value = 0;
  double stderr_ = 0;
  std::uint64_t samples = 0;
};

inline constexpr std::uint64_t kMcBatch = 65536;
inline constexpr std::uint64_t kMinSamples = 10'000;

// x_i is true iff vi_perp . r >= t_i. Thresholds may be infinite.
Estimate mc_round_thresholds(const Configuration& c, double ti, double tj, std::uint64_t samples, std::uint64_t seed);
// Single-threaded reference with identical output.
Estimate mc_round_thresholds_serial(const Configuration& c, double ti, double tj, std::uint64_t samples,
                                    std::uint64_t seed);
// Threshold map b -> Phi^-1((1 + f(b)) / 2) of the scheme.
Estimate mc_round(const Configuration& c, const Scheme& s, std::uint64_t samples, std::uint64_t seed);
Estimate mc_distribution(const WeightedDistribution& d, const ThresholdPoint& t, std::uint64_t samples,
                         std::uint64_t seed);

struct Clause {
  Pred pred;
  int i = 0, j = -1;  // 0-based; j = -1 for unary
  double weight = 0;
};

struct TinyInstance {
  int n = 0;
  std::vector<Clause> clauses;
};

// Lines "w <weight> <lit> [<lit>]", literals are +-(1-based index); '#' starts a
// comment. Weights are normalized to sum 1. Throws std::invalid_argument.
TinyInstance parse_instance(const std::string& text);

struct BruteForceResult {
  double opt_value = 0;
  std::vector<bool> assignment;  // true = variable set to true
};
// Exact optimum over all 2^n assignments; ties go to the lexicographically
// smallest assignment (false < true, x1 first).
BruteForceResult brute_force_opt(const TinyInstance& inst);

}  // namespace tightgap
