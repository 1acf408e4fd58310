#include "tightgap/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tightgap {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

namespace {

double point_of(const Interval& x) { return x.is_point() ? x.lo : x.mid(); }

constexpr double kPsdTol = 1e-9;

}  // namespace

VectorTriple embed(const Configuration& c) {
  double bi = point_of(c.bi);
  VectorTriple v{{1, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  if (std::fabs(bi) > 1 + kPsdTol) throw InfeasibleConfiguration("embed: |b_i| > 1");
  bi = std::clamp(bi, -1.0, 1.0);
  double si = std::sqrt(std::max(0.0, 1 - bi * bi));
  v.vi = {bi, si, 0};
  if (is_unary(c.pred)) return v;
  double bj = point_of(c.bj), bij = point_of(c.bij);
  if (std::fabs(bj) > 1 + kPsdTol || std::fabs(bij) > 1 + kPsdTol) throw InfeasibleConfiguration("embed: |b| > 1");
  bj = std::clamp(bj, -1.0, 1.0);
  double y = 0;
  if (si > 0) {
    y = (bij - bi * bj) / si;
  } else if (std::fabs(bij - bi * bj) > kPsdTol) {
    throw InfeasibleConfiguration("embed: Gram matrix not positive semidefinite");
  }
  double z2 = 1 - bj * bj - y * y;
  if (z2 < -kPsdTol) throw InfeasibleConfiguration("embed: Gram matrix not positive semidefinite");
  v.vj = {bj, y, std::sqrt(std::max(0.0, z2))};
  return v;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) {
  std::uint64_t key = splitmix64(seed) ^ splitmix64(~stream);
  std::uint64_t x = splitmix64(key + k * 0x9E3779B97F4A7C15ULL);
  return double((x >> 11) + 1) * 0x1p-53;  // (0, 1]
}

std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) {
  double u1 = uniform01(seed, stream, 2 * k), u2 = uniform01(seed, stream, 2 * k + 1);
  double r = std::sqrt(-2 * std::log(u1)), a = 2 * std::numbers::pi * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

namespace {

// Directions of vi_perp and vj_perp in the (e2, e3) plane; a zero direction
// (bias +-1) gets its own independent Gaussian.
struct Sampler {
  Pred pred;
  bool unary;
  double ti, tj;
  double ai1 = 0, aj1 = 0, aj2 = 0;
  bool own_i = false, own_j = false;

  Sampler(const Configuration& c, double ti_, double tj_) : pred(c.pred), unary(is_unary(c.pred)), ti(ti_), tj(tj_) {
    VectorTriple v = embed(c);
    double ni = std::hypot(v.vi[1], v.vi[2]);
    own_i = ni < 1e-12;
    if (!own_i) ai1 = v.vi[1] / ni;
    if (!unary) {
      double nj = std::hypot(v.vj[1], v.vj[2]);
      own_j = nj < 1e-12;
      if (!own_j) {
        aj1 = v.vj[1] / nj;
        aj2 = v.vj[2] / nj;
      }
    }
  }

  // Satisfied samples in batch `batch` of size n.
  std::uint64_t run(std::uint64_t seed, std::uint64_t batch, std::uint64_t n) const {
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < n; ++s) {
      auto g = normal_pair(seed, batch, 2 * s);
      std::array<double, 2> h{0, 0};
      if (own_i || own_j) h = normal_pair(seed, batch, 2 * s + 1);
      double zi = own_i ? h[0] : ai1 * g[0];
      int xi = zi >= ti ? -1 : 1;
      int xj = 1;
      if (!unary) {
        double zj = own_j ? h[1] : aj1 * g[0] + aj2 * g[1];
        xj = zj >= tj ? -1 : 1;
      }
      hits += satisfied(pred, xi, xj);
    }
    return hits;
  }
};

Estimate finish(std::uint64_t hits, std::uint64_t n) {
  Estimate e;
  e.samples = n;
  e.value = double(hits) / double(n);
  double var = e.value * (1 - e.value) / double(n);
  e.stderr_ = (hits == 0 || hits == n) ? 1.0 / double(n) : std::sqrt(var);
  return e;
}

void check_samples(std::uint64_t samples) {
  if (samples < kMinSamples) throw std::invalid_argument("Monte-Carlo: at least 10^4 samples required");
}

}  // namespace

Estimate mc_round_thresholds(const Configuration& c, double ti, double tj, std::uint64_t samples, std::uint64_t seed) {
  check_samples(samples);
  Sampler s(c, ti, tj);
  std::int64_t batches = std::int64_t((samples + kMcBatch - 1) / kMcBatch);
  std::uint64_t hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
  for (std::int64_t b = 0; b < batches; ++b) {
    std::uint64_t n = std::min<std::uint64_t>(kMcBatch, samples - std::uint64_t(b) * kMcBatch);
    hits += s.run(seed, std::uint64_t(b), n);
  }
  return finish(hits, samples);
}

Estimate mc_round_thresholds_serial(const Configuration& c, double ti, double tj, std::uint64_t samples,
                                    std::uint64_t seed) {
  check_samples(samples);
  Sampler s(c, ti, tj);
  std::uint64_t hits = 0;
  for (std::uint64_t b = 0; b * kMcBatch < samples; ++b)
    hits += s.run(seed, b, std::min<std::uint64_t>(kMcBatch, samples - b * kMcBatch));
  return finish(hits, samples);
}

Estimate mc_round(const Configuration& c, const Scheme& s, std::uint64_t samples, std::uint64_t seed) {
  double ti = point_of(s.threshold(c.bi));
  double tj = is_unary(c.pred) ? 0.0 : point_of(s.threshold(c.bj));
  return mc_round_thresholds(c, ti, tj, samples, seed);
}

Estimate mc_distribution(const WeightedDistribution& d, const ThresholdPoint& t, std::uint64_t samples,
                         std::uint64_t seed) {
  auto pick = [&](const Interval& b) {
    if (b.hi < 0) return point_of(t.t1);
    if (b.lo > 0) return point_of(t.t2);
    throw UnmappedBias("bias interval contains 0");
  };
  double value = 0, var = 0;
  for (std::size_t k = 0; k < d.entries.size(); ++k) {
    const auto& e = d.entries[k];
    double tj = is_unary(e.config.pred) ? 0.0 : pick(e.config.bj);
    Estimate x = mc_round_thresholds(e.config, pick(e.config.bi), tj, samples, splitmix64(seed + k));
    double w = point_of(e.weight);
    value += w * x.value;
    var += w * w * x.stderr_ * x.stderr_;
  }
  Estimate out;
  out.value = value;
  out.stderr_ = std::sqrt(var);
  out.samples = samples * d.entries.size();
  return out;
}

TinyInstance parse_instance(const std::string& text) {
  TinyInstance inst;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  double total = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("instance line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag != "w") fail("expected 'w'");
    double w;
    if (!(ls >> w) || !(w >= 0)) fail("bad weight");
    std::vector<long> lits;
    long l;
    while (ls >> l) lits.push_back(l);
    if (!ls.eof()) fail("bad literal");
    if (lits.empty() || lits.size() > 2) fail("expected one or two literals");
    for (long x : lits)
      if (x == 0) fail("literal 0");
    Clause c;
    c.weight = w;
    auto var = [](long x) { return int(std::labs(x) - 1); };
    if (lits.size() == 1) {
      c.pred = lits[0] > 0 ? Pred::UnaryPos : Pred::UnaryNeg;
      c.i = var(lits[0]);
    } else {
      long a = lits[0], b = lits[1];
      if (a > 0 && b > 0) {
        c.pred = Pred::Or;
      } else if (a < 0 && b < 0) {
        c.pred = Pred::Nand;
      } else {
        c.pred = Pred::ImpOr;  // not x_i or x_j
        if (a > 0) std::swap(a, b);
      }
      c.i = var(a);
      c.j = var(b);
    }
    inst.n = std::max({inst.n, c.i + 1, c.j + 1});
    total += w;
    inst.clauses.push_back(c);
  }
  if (inst.clauses.empty()) throw std::invalid_argument("instance: no clauses");
  if (!(total > 0)) throw std::invalid_argument("instance: total weight is 0");
  for (auto& c : inst.clauses) c.weight /= total;
  return inst;
}

BruteForceResult brute_force_opt(const TinyInstance& inst) {
  if (inst.n > 20) throw TooManyVariables("brute_force_opt: at most 20 variables");
  for (const auto& c : inst.clauses)
    if (c.i < 0 || c.i >= inst.n || c.j >= inst.n || (!is_unary(c.pred) && c.j < 0))
      throw std::invalid_argument("brute_force_opt: variable index out of range");
  BruteForceResult best;
  best.opt_value = -1;
  const int n = inst.n;
  // Bit n-1-k holds x_{k+1}, so increasing masks are lexicographic.
  for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << n); ++mask) {
    auto val = [&](int k) { return (mask >> (n - 1 - k)) & 1 ? -1 : 1; };
    double total = 0;
    for (const auto& c : inst.clauses)
      if (satisfied(c.pred, val(c.i), c.j >= 0 ? val(c.j) : 1)) total += c.weight;
    if (total > best.opt_value) {
      best.opt_value = total;
      best.assignment.assign(n, false);
      for (int k = 0; k < n; ++k) best.assignment[k] = val(k) == -1;
    }
  }
  return best;
}

}  // namespace tightgap
