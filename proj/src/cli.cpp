#include "tightgap/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tightgap/constants.hpp"
#include "tightgap/hardness.hpp"
#include "tightgap/lemmas.hpp"
#include "tightgap/simulator.hpp"

namespace tightgap {

using nlohmann::json;

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  int precision = kPrecisionBits;
  int workers = 0;  // 0 = OpenMP default
  std::uint64_t seed = 1;
  std::string out;
  bool json_stdout = false;
};

json iv(const Interval& x) { return json::array({x.lo, x.hi}); }

double parse_extended(const std::string& s) {
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("not a number: " + s);
  }
  if (pos != s.size()) throw UsageError("not a number: " + s);
  return v;
}

// Writes `body` to the output path (if any) plus a manifest with its hash.
void emit(const Globals& g, const std::string& command, const json& params, const std::string& body,
          std::ostream& out) {
  if (g.out.empty()) {
    out << body << "\n";
    return;
  }
  {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + g.out);
    f << body << "\n";
  }
  json m;
  m["schema_version"] = 1;
  m["command"] = command;
  m["parameters"] = params;
  m["precision_bits"] = g.precision;
#ifdef _OPENMP
  m["workers"] = g.workers > 0 ? g.workers : omp_get_max_threads();
#else
  m["workers"] = 1;
#endif
  m["seed"] = g.seed;
  m["outputs"] = json::array({{{"path", g.out}, {"sha256", sha256_hex(body + "\n")}}});
  std::ofstream mf(g.out + ".manifest.json");
  if (!mf) throw std::runtime_error("cannot write manifest for " + g.out);
  mf << m.dump(2) << "\n";
  if (g.json_stdout) out << body << "\n";
}

// ---- commands ----

int cmd_verify(const Globals& g, const std::string& id, const std::string& heuristic, int depth_limit,
               std::uint64_t max_boxes, bool serial, std::ostream& out) {
  LemmaTask task;
  try {
    task = lemma_task(id);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  CheckOptions opt;
  try {
    opt.heuristic = parse_heuristic(heuristic);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  opt.depth_limit = depth_limit;
  opt.max_boxes = max_boxes;
  LemmaResult r = run_lemma(task, opt, serial);
  json params = {{"lemma", id}, {"heuristic", heuristic}, {"depth_limit", depth_limit}, {"max_boxes", max_boxes}};
  emit(g, "verify", params, to_json(r).dump(2), out);
  return r.verified() ? kExitOk : kExitFailed;
}

ConstantReport solve(const std::string& which, double tol) {
  if (which == "beta") return solve_beta_llz(tol);
  if (which == "gamma") return solve_gamma_star(tol);
  if (which == "alpha") return solve_alpha_star(tol);
  throw UsageError("unknown constant: " + which);
}

int cmd_constants(const Globals& g, const std::string& which, std::optional<double> tol, std::ostream& out) {
  std::vector<std::string> names = which == "all" ? std::vector<std::string>{"beta", "alpha", "gamma"}
                                                  : std::vector<std::string>{which};
  json reports = json::array();
  for (const auto& n : names) {
    double t = tol ? *tol : (n == "beta" ? 1e-12 : 1e-9);
    reports.push_back(to_json(solve(n, t)));
  }
  json body = which == "all" ? json{{"schema_version", 1}, {"constants", reports}} : reports[0];
  emit(g, "constants", {{"which", which}, {"tol", tol ? json(*tol) : json(nullptr)}}, body.dump(2), out);
  return kExitOk;
}

Theta2 default_theta2(ConstantReport* alpha_out = nullptr) {
  ConstantReport a = solve_alpha_star(1e-9);
  if (alpha_out) *alpha_out = a;
  return build_theta2(a.hardest_bias);
}

Theta1 default_theta1() {
  ConstantReport gm = solve_gamma_star(1e-9);
  return build_theta1(gm.enclosure, gm.hardest_bias);
}

int cmd_hardness(const Globals& g, const std::string& problem, bool skip_verify, const CheckOptions& opt,
                 std::ostream& out) {
  json body;
  body["schema_version"] = 1;
  body["problem"] = problem;
  bool ok = true;
  if (problem == "horn") {
    ConstantReport a;
    Theta2 th = default_theta2(&a);
    body["alpha_star"] = iv(a.enclosure);
    body["b_star"] = iv(th.b);
    body["distribution"] = to_json(th.dist);
    body["weights"] = {{"p1", iv(th.p)}, {"p2", iv(th.p)}, {"p3", iv(th.p3)},
                       {"p4", iv(th.p4)}, {"p5", iv(th.p)}, {"p6", iv(th.p)}};
    body["t_star"] = iv(th.t_star);
    if (!skip_verify) {
      Certificate c = theta2_global_certificate(th, a.enclosure, opt);
      body["certificate"] = to_json(c);
      ok = c.verified();
    }
  } else if (problem == "ornot") {
    Theta1 th = default_theta1();
    body["gamma_star"] = iv(th.gamma);
    body["b_star"] = iv(th.b);
    body["distribution"] = to_json(th.dist);
    body["weights"] = {{"p1", iv(th.p1)}, {"p2", iv(th.p2)}};
    body["t_star"] = iv(th.t_star);
    if (!skip_verify) {
      Certificate c = theta1_optimal_certificate(th);
      body["certificate"] = to_json(c);
      ok = c.verified();
    }
  } else {
    throw UsageError("unknown problem: " + problem + " (expected ornot or horn)");
  }
  emit(g, "hardness", {{"problem", problem}, {"skip_verify", skip_verify}}, body.dump(2), out);
  return ok ? kExitOk : kExitFailed;
}

int cmd_plot(const Globals& g, int grid, std::ostream& out) {
  if (grid < 2) throw UsageError("grid must be at least 2");
  Theta2 th = default_theta2();
  std::ostringstream csv;
  csv << "tau1,tau2,prob\n" << std::setprecision(17);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      double t1 = double(i) / (grid - 1), t2 = double(j) / (grid - 1);
      Interval p = prob_theta(th.dist, {Phi_inv(Interval(t1)), Phi_inv(Interval(t2))});
      csv << t1 << "," << t2 << "," << p.mid() << "\n";
    }
  }
  std::string body = csv.str();
  body.pop_back();
  emit(g, "plot-theta2", {{"grid", grid}}, body, out);
  return kExitOk;
}

WeightedDistribution read_distribution(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read distribution file " + path);
  WeightedDistribution d;
  try {
    json j = json::parse(f);
    auto rd = [](const json& a) { return Interval(a.at(0).get<double>(), a.at(1).get<double>()); };
    for (const auto& e : j.at("entries")) {
      Pred p = parse_pred(e.at("pred").get<std::string>());
      Configuration c = is_unary(p) ? Configuration::unary(p, rd(e.at("b_i")))
                                    : Configuration::binary(p, rd(e.at("b_i")), rd(e.at("b_j")), rd(e.at("b_ij")));
      d.entries.push_back({c, Interval(e.at("weight_lo").get<double>(), e.at("weight_hi").get<double>())});
    }
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad distribution file: ") + e.what());
  }
  return d;
}

struct SimFlags {
  std::optional<double> beta, gamma;
  std::optional<std::string> t1, t2;
  std::uint64_t samples = 1'000'000;
};

int cmd_simulate(const Globals& g, const std::string& target, const SimFlags& f, std::ostream& out) {
  if (f.samples < kMinSamples) throw UsageError("--samples must be at least 10000");
  json body;
  body["schema_version"] = 1;
  body["target"] = target;
  body["samples"] = f.samples;
  body["seed"] = g.seed;
  Estimate est;
  Interval analytic;
  bool is_dist = target == "theta1" || target == "theta2" || target.ends_with(".json");
  if (is_dist) {
    WeightedDistribution d;
    ThresholdPoint t;
    if (target == "theta2") {
      Theta2 th = default_theta2();
      d = th.dist;
      t = {th.t_star, -th.t_star};
    } else if (target == "theta1") {
      Theta1 th = default_theta1();
      d = th.dist;
      t = {th.t_gamma, th.t_gamma};
    } else {
      d = read_distribution(target);
    }
    if (f.t1) t.t1 = Interval(parse_extended(*f.t1));
    if (f.t2) t.t2 = Interval(parse_extended(*f.t2));
    if (!f.t1 && !f.t2 && target.ends_with(".json")) throw UsageError("distribution files need --t1 and --t2");
    est = mc_distribution(d, t, f.samples, g.seed);
    analytic = prob_theta(d, t);
    body["thresholds"] = {iv(t.t1), iv(t.t2)};
  } else {
    Configuration c;
    try {
      c = parse_configuration(target);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    if (f.t1) {
      double ti = parse_extended(*f.t1), tj = f.t2 ? parse_extended(*f.t2) : 0.0;
      est = mc_round_thresholds(c, ti, tj, f.samples, g.seed);
      analytic = is_unary(c.pred) ? prob_thresh(c, Interval(ti)) : prob_thresh(c, Interval(ti), Interval(tj));
      body["thresholds"] = {ti, tj};
    } else {
      Scheme s = f.gamma ? Scheme{SchemeKind::gamma, Interval(*f.gamma)}
                         : Scheme{SchemeKind::llz, Interval(f.beta ? *f.beta : 0.9401656724814047)};
      est = mc_round(c, s, f.samples, g.seed);
      analytic = prob_scheme(c, s);
      body["scheme"] = {{"kind", s.kind == SchemeKind::llz ? "llz" : "gamma"}, {"param", s.param.lo}};
    }
  }
  body["estimate"] = est.value;
  body["stderr"] = est.stderr_;
  body["analytic"] = iv(analytic);
  body["z_score"] = (est.value - analytic.mid()) / est.stderr_;
  emit(g, "simulate", {{"target", target}, {"samples", f.samples}}, body.dump(2), out);
  return kExitOk;
}

template <class T>
void env_default(const char* name, T& v) {
  if (const char* s = std::getenv(name)) {
    try {
      v = T(std::stoll(s));
    } catch (const std::exception&) {
      throw UsageError(std::string("bad value in ") + name);
    }
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Globals g;
  try {
    env_default("TIGHTGAP_PRECISION", g.precision);
    env_default("TIGHTGAP_WORKERS", g.workers);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App app{"Certified constants, lemma checks and hard instances for THRESH rounding of MAX 2-SAT variants",
               "tightgap"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--precision", g.precision, "Working precision in bits (only 53 is supported)");
  app.add_option("--workers", g.workers, "OpenMP threads");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Write the result to this file and a manifest next to it");
  app.add_flag("--json", g.json_stdout, "Also print JSON to stdout when --out is given");

  std::string lemma, heuristic = "widest";
  int depth_limit = 60;
  std::uint64_t max_boxes = 50'000'000;
  bool serial = false;
  auto* verify = app.add_subcommand("verify", "Run an interval-arithmetic lemma check");
  verify->add_option("lemma", lemma, "Lemma id")->required();
  verify->add_option("--heuristic", heuristic, "widest or shortest_nonzero");
  verify->add_option("--depth-limit", depth_limit);
  verify->add_option("--max-boxes", max_boxes);
  verify->add_flag("--serial", serial, "Use the single-threaded checker");

  std::string which;
  std::optional<double> tol;
  auto* constants = app.add_subcommand("constants", "Certified enclosures of beta_LLZ, gamma*, alpha*");
  constants->add_option("which", which, "beta, gamma, alpha or all")->required();
  constants->add_option("--tol", tol, "Enclosure width");

  std::string problem;
  bool skip_verify = false;
  auto* hardness = app.add_subcommand("hardness", "Build a hard distribution and certify it");
  hardness->add_option("problem", problem, "ornot or horn")->required();
  hardness->add_flag("--skip-verify", skip_verify, "Only build the distribution");
  hardness->add_option("--heuristic", heuristic);
  hardness->add_option("--max-boxes", max_boxes);

  int grid = 101;
  auto* plot = app.add_subcommand("plot-theta2", "CSV of Prob(Theta2) over (Phi(t1), Phi(t2))");
  plot->add_option("--grid", grid, "Points per axis");

  std::string target;
  SimFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo estimate of a satisfaction probability");
  simulate->add_option("target", target, "Configuration literal, theta1, theta2 or a distribution .json")->required();
  simulate->add_option("--beta", sim.beta);
  simulate->add_option("--gamma", sim.gamma);
  simulate->add_option("--t1", sim.t1, "Threshold (negative bias / first variable); inf allowed");
  simulate->add_option("--t2", sim.t2);
  simulate->add_option("--samples", sim.samples);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (g.precision != kPrecisionBits)
      throw UsageError("--precision " + std::to_string(g.precision) + " unsupported; endpoints are " +
                       std::to_string(kPrecisionBits) + "-bit doubles");
    if (g.workers < 0) throw UsageError("--workers must be positive");
#ifdef _OPENMP
    if (g.workers > 0) omp_set_num_threads(g.workers);
#endif
    if (*verify) return cmd_verify(g, lemma, heuristic, depth_limit, max_boxes, serial, out);
    if (*constants) {
      if (which != "all" && which != "beta" && which != "gamma" && which != "alpha")
        throw UsageError("unknown constant: " + which);
      return cmd_constants(g, which, tol, out);
    }
    if (*hardness) {
      CheckOptions opt;
      try {
        opt.heuristic = parse_heuristic(heuristic);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      opt.max_boxes = max_boxes;
      return cmd_hardness(g, problem, skip_verify, opt, out);
    }
    if (*plot) return cmd_plot(g, grid, out);
    if (*simulate) return cmd_simulate(g, target, sim, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ToleranceUnreachable& e) {
    err << "ToleranceUnreachable: " << e.what() << "\n";
    return kExitFailed;
  } catch (const NoRootInSeedBox& e) {
    err << "NoRootInSeedBox: " << e.what() << "\n";
    return kExitFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}

}  // namespace tightgap
