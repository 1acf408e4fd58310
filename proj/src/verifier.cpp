#include "tightgap/verifier.hpp"

#include <algorithm>
#include <chrono>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tightgap {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Verified: return "Verified";
    case CheckStatus::DepthExceeded: return "DepthExceeded";
    case CheckStatus::Aborted: return "Aborted";
  }
  return "?";
}

namespace {

struct Node {
  Box box;
  std::uint64_t path;
  int depth;
};

int first_certifying(const std::vector<Criterion>& criteria, const Box& b) {
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      if (criteria[i].certify(b)) return int(i);
    } catch (const IntervalError&) {
    }
  }
  return -1;
}

// Outcome of exploring part of the tree.
struct Partial {
  std::uint64_t boxes = 0;
  int max_depth = 0;
  std::vector<std::uint64_t> certified_by;
  std::vector<Leaf> leaves;
  std::vector<Node> pending;  // unexplored, in DFS order (back = next)
  std::optional<Node> failure;
};

// Processes one node; returns false when the node can be neither certified nor split.
bool step(const std::vector<Criterion>& criteria, const CheckOptions& opt, Node n, Partial& out) {
  ++out.boxes;
  out.max_depth = std::max(out.max_depth, n.depth);
  int c = first_certifying(criteria, n.box);
  if (c >= 0) {
    ++out.certified_by[c];
    if (opt.record_leaves) out.leaves.push_back({n.path, n.depth, c});
    return true;
  }
  if (n.depth >= opt.depth_limit || n.depth >= 63) {
    out.failure = std::move(n);
    return false;
  }
  std::pair<Box, Box> halves;
  try {
    halves = split(n.box, pick_split_dim(n.box, opt.heuristic));
  } catch (const IntervalError&) {
    out.failure = std::move(n);
    return false;
  }
  std::uint64_t bit = std::uint64_t(1) << (63 - n.depth);
  out.pending.push_back({std::move(halves.second), n.path | bit, n.depth + 1});
  out.pending.push_back({std::move(halves.first), n.path, n.depth + 1});
  return true;
}

bool cancelled(const CheckOptions& opt) { return opt.cancel && opt.cancel->load(std::memory_order_relaxed); }

CheckReport finish(const Partial& p, const std::vector<Criterion>& criteria, const CheckOptions& opt,
                   std::chrono::steady_clock::time_point t0, CheckStatus status, std::string reason) {
  CheckReport r;
  r.status = status;
  r.abort_reason = std::move(reason);
  r.boxes_examined = p.boxes;
  r.max_depth = p.max_depth;
  r.heuristic = opt.heuristic;
  r.certified_by = p.certified_by;
  r.leaves = p.leaves;
  for (const auto& c : criteria) r.criterion_ids.push_back(c.id);
  if (p.failure) r.witness = p.failure->box;
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

void validate(const Box& root, const std::vector<Criterion>& criteria, const CheckOptions& opt) {
  if (root.size() == 0) throw std::invalid_argument("check: empty root box");
  if (criteria.empty()) throw std::invalid_argument("check: no criteria");
  if (opt.depth_limit < 1) throw std::invalid_argument("check: depth_limit must be >= 1");
}

constexpr std::size_t kChunk = 64;
constexpr std::uint64_t kLocalBudget = 64;

}  // namespace

CheckReport check_serial(const Box& root, const std::vector<Criterion>& criteria, const CheckOptions& opt) {
  validate(root, criteria, opt);
  auto t0 = std::chrono::steady_clock::now();
  Partial p;
  p.certified_by.assign(criteria.size(), 0);
  p.pending.push_back({root, 0, 0});
  while (!p.pending.empty()) {
    if (cancelled(opt)) return finish(p, criteria, opt, t0, CheckStatus::Aborted, "cancelled");
    if (p.boxes >= opt.max_boxes) return finish(p, criteria, opt, t0, CheckStatus::Aborted, "max_boxes reached");
    Node n = std::move(p.pending.back());
    p.pending.pop_back();
    if (!step(criteria, opt, std::move(n), p)) return finish(p, criteria, opt, t0, CheckStatus::DepthExceeded, "");
  }
  return finish(p, criteria, opt, t0, CheckStatus::Verified, "");
}

CheckReport check(const Box& root, const std::vector<Criterion>& criteria, const CheckOptions& opt) {
  validate(root, criteria, opt);
  auto t0 = std::chrono::steady_clock::now();
  Partial total;
  total.certified_by.assign(criteria.size(), 0);
  std::vector<Node> frontier{{root, 0, 0}};
  std::vector<Node> batch;
  std::vector<Partial> parts;
  while (!frontier.empty()) {
    if (cancelled(opt)) return finish(total, criteria, opt, t0, CheckStatus::Aborted, "cancelled");
    if (total.boxes >= opt.max_boxes) return finish(total, criteria, opt, t0, CheckStatus::Aborted, "max_boxes reached");
    std::size_t n = std::min(kChunk, frontier.size());
    batch.clear();
    for (std::size_t i = 0; i < n; ++i) {
      batch.push_back(std::move(frontier.back()));
      frontier.pop_back();
    }
    parts.assign(n, Partial{});
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < n; ++i) {
      Partial& p = parts[i];
      p.certified_by.assign(criteria.size(), 0);
      p.pending.push_back(std::move(batch[i]));
      while (!p.pending.empty() && p.boxes < kLocalBudget && !cancelled(opt)) {
        Node node = std::move(p.pending.back());
        p.pending.pop_back();
        if (!step(criteria, opt, std::move(node), p)) break;
      }
    }
    // Merge in batch order; the last batch element was the top of the stack.
    for (std::size_t k = n; k-- > 0;) {
      Partial& p = parts[k];
      total.boxes += p.boxes;
      total.max_depth = std::max(total.max_depth, p.max_depth);
      for (std::size_t c = 0; c < criteria.size(); ++c) total.certified_by[c] += p.certified_by[c];
      if (opt.record_leaves) total.leaves.insert(total.leaves.end(), p.leaves.begin(), p.leaves.end());
      if (p.failure && (!total.failure || p.failure->path < total.failure->path)) total.failure = std::move(p.failure);
      for (auto& node : p.pending) frontier.push_back(std::move(node));
    }
    if (total.failure) return finish(total, criteria, opt, t0, CheckStatus::DepthExceeded, "");
  }
  return finish(total, criteria, opt, t0, CheckStatus::Verified, "");
}

Box leaf_box(const Box& root, const Leaf& leaf, SplitHeuristic heuristic) {
  Box b = root;
  for (int d = 0; d < leaf.depth; ++d) {
    auto halves = split(b, pick_split_dim(b, heuristic));
    b = (leaf.path >> (63 - d)) & 1 ? halves.second : halves.first;
  }
  return b;
}

bool replay_leaves(const Box& root, const std::vector<Criterion>& criteria, const CheckReport& report) {
  if (!report.verified() || report.leaves.empty()) return false;
  // The leaves must tile the path space [0, 2^64) exactly.
  std::vector<std::pair<unsigned __int128, unsigned __int128>> spans;
  for (const Leaf& l : report.leaves) {
    unsigned __int128 lo = l.path, len = (unsigned __int128)1 << (64 - l.depth);
    spans.push_back({lo, lo + len});
  }
  std::sort(spans.begin(), spans.end());
  unsigned __int128 at = 0;
  for (const auto& s : spans) {
    if (s.first != at) return false;
    at = s.second;
  }
  if (at != (unsigned __int128)1 << 64) return false;
  for (const Leaf& l : report.leaves) {
    if (l.criterion < 0 || std::size_t(l.criterion) >= criteria.size()) return false;
    Box b = leaf_box(root, l, report.heuristic);
    bool ok = false;
    try {
      ok = criteria[l.criterion].certify(b);
    } catch (const IntervalError&) {
    }
    if (!ok) return false;
  }
  return true;
}

nlohmann::json to_json(const Box& box) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < box.size(); ++i) j[box.name(i)] = {box[i].lo, box[i].hi};
  return j;
}

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["lemma_id"] = r.lemma_id;
  j["status"] = to_string(r.status);
  j["boxes_examined"] = r.boxes_examined;
  j["max_depth"] = r.max_depth;
  j["wall_time_s"] = r.wall_time_s;
  j["heuristic"] = to_string(r.heuristic);
  j["precision_bits"] = r.precision_bits;
  nlohmann::json by = nlohmann::json::object();
  for (std::size_t i = 0; i < r.criterion_ids.size() && i < r.certified_by.size(); ++i)
    by[r.criterion_ids[i]] = r.certified_by[i];
  j["certified_by"] = by;
  if (!r.abort_reason.empty()) j["abort_reason"] = r.abort_reason;
  if (r.witness) j["witness"] = to_json(*r.witness);
  return j;
}

}  // namespace tightgap
