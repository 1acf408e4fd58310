// The concrete verification tasks: one root box and criteria list per
// interval-arithmetic lemma, plus the direct side computations.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tightgap/config.hpp"
#include "tightgap/verifier.hpp"

namespace tightgap {

struct SideCheck {
  std::string id;
  std::string statement;
  bool passed = false;
  Interval value;                        // for direct computations
  std::optional<CheckReport> sub_check;  // for box checks
};

struct LemmaTask {
  std::string id;
  std::string statement;
  Box root;
  std::vector<Criterion> criteria;  // tried in this order; cheap ones first
  std::vector<std::string> notes;
  std::function<std::vector<SideCheck>(const CheckOptions&)> side_checks;
};

struct LemmaResult {
  LemmaTask task;
  CheckReport report;
  std::vector<SideCheck> side;
  bool verified() const;
};

const std::vector<std::string>& lemma_ids();
// Throws std::invalid_argument for an unknown id.
LemmaTask lemma_task(const std::string& id);

LemmaTask lemma_2sat_step1();
LemmaTask lemma_2sat_step2();
LemmaTask lemma_ornot_step1();
LemmaTask lemma_ornot_step2();
LemmaTask lemma_horn_step1();
LemmaTask lemma_horn_step2();
LemmaTask lemma_horn_hard();

LemmaResult run_lemma(const LemmaTask& task, const CheckOptions& opt = {}, bool serial = false);

nlohmann::json to_json(const SideCheck& s);
nlohmann::json to_json(const LemmaResult& r);

// Building blocks, exposed for tests.
namespace lemma_detail {

// b12 = -1 + b1 + b2 (plus) or -1 - b1 - b2 (minus) with the closed-form rho.
enum class Line { plus, minus };
Interval line_rho(Line line, const Interval& b1, const Interval& b2);
Configuration line_config(Line line, const Interval& b1, const Interval& b2);

// Enclosures of the functional over a box: monotone corner evaluation,
// intersected with the mean-value form whenever the gradient exists.
Interval rho_form_value(Functional fn, const Interval& b1, const Interval& b2, const Interval& rho,
                        const Interval& param);
Interval line_value(Functional fn, Line line, const Interval& b1, const Interval& b2, const Interval& param);

// Partials of the line-restricted functional in (b1, b2) and in the parameter.
struct LineGrad {
  Interval d1, d2, dparam;
};
LineGrad line_grad(Functional fn, Line line, const Interval& b1, const Interval& b2, const Interval& param);

}  // namespace lemma_detail

}  // namespace tightgap
