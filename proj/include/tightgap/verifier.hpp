// Divide-and-conquer certification: a box is accepted when one criterion
// certifies it, otherwise it is bisected and both halves are checked.
#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tightgap/interval.hpp"

namespace tightgap {

// certify(B) == true must imply the criterion's statement on every point of B.
// Interval exceptions thrown inside certify count as "not certified".
struct Criterion {
  std::string id;
  std::function<bool(const Box&)> certify;
};

enum class CheckStatus { Verified, DepthExceeded, Aborted };
const char* to_string(CheckStatus s);

struct CheckOptions {
  SplitHeuristic heuristic = SplitHeuristic::widest;
  int depth_limit = 60;
  std::uint64_t max_boxes = 50'000'000;
  const std::atomic<bool>* cancel = nullptr;
  bool record_leaves = false;
};

// A certified leaf: the split path from the root (bit 63 - k is the choice at
// depth k, 1 = upper half), its depth and the certifying criterion.
struct Leaf {
  std::uint64_t path = 0;
  int depth = 0;
  int criterion = -1;
};

struct CheckReport {
  std::string lemma_id;
  CheckStatus status = CheckStatus::Verified;
  std::uint64_t boxes_examined = 0;
  int max_depth = 0;
  double wall_time_s = 0;
  std::optional<Box> witness;
  SplitHeuristic heuristic = SplitHeuristic::widest;
  int precision_bits = kPrecisionBits;
  std::string abort_reason;
  std::vector<std::string> criterion_ids;
  std::vector<std::uint64_t> certified_by;  // leaves per criterion
  std::vector<Leaf> leaves;                 // only with record_leaves

  bool verified() const { return status == CheckStatus::Verified; }
};

inline constexpr int kReportSchemaVersion = 1;

// OpenMP version: fixed-size chunks of the DFS frontier are explored in
// parallel and merged in order, so counts do not depend on the thread count.
CheckReport check(const Box& root, const std::vector<Criterion>& criteria, const CheckOptions& opt = {});
// Plain recursive reference.
CheckReport check_serial(const Box& root, const std::vector<Criterion>& criteria, const CheckOptions& opt = {});

// Rebuilds the box of a leaf by replaying its split path.
Box leaf_box(const Box& root, const Leaf& leaf, SplitHeuristic heuristic);
// True when the recorded leaves tile the root and each is certified again by
// its recorded criterion.
bool replay_leaves(const Box& root, const std::vector<Criterion>& criteria, const CheckReport& report);

nlohmann::json to_json(const Box& box);
nlohmann::json to_json(const CheckReport& r);

}  // namespace tightgap
