// Copyright 2026 The ittmlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ittm/feedback.hpp"

#include <algorithm>
#include <tuple>

namespace ittm {

std::string to_string(OracleKind k) {
  switch (k) {
    case OracleKind::EJ: return "ej";
    case OracleKind::IJ: return "ij";
    case OracleKind::E: return "e";
  }
  return "?";
}

OracleKind parse_oracle_kind(std::string_view text) {
  if (text == "ej") return OracleKind::EJ;
  if (text == "ij") return OracleKind::IJ;
  if (text == "e") return OracleKind::E;
  throw Error("unknown oracle '" + std::string(text) + "' (expected ej, ij or e)");
}

std::string to_string(TreeStatus s) {
  switch (s) {
    case TreeStatus::Convergent: return "CONVERGENT";
    case TreeStatus::DivergentDetected: return "DIVERGENT_DETECTED";
    case TreeStatus::BudgetExceeded: return "BUDGET_EXCEEDED";
  }
  return "?";
}

Query decode_query_tape(const Tape& scratch) {
  Query q;
  // Past the prefix the even cells repeat with the cycle, so a unary prefix
  // still running after prefix + 2 cycles never ends.
  const std::size_t bound = scratch.prefix().size() + 2 * scratch.cycle().size() + 1;
  while (scratch.get(2 * q.f) == kOne) {
    if (2 * q.f > bound) throw Error("decode_query: program id has no terminating 0");
    ++q.f;
  }
  const std::size_t start = 2 * (q.f + 1);
  const std::size_t n = scratch.prefix().size();
  const std::size_t m = n > start ? (n - start + 1) / 2 : 0;
  const auto bit = [&](std::size_t i) { return static_cast<std::uint8_t>(scratch.get(start + 2 * i) == kOne ? kOne : kZero); };
  std::vector<std::uint8_t> prefix(m);
  std::vector<std::uint8_t> cycle(scratch.cycle().size());
  for (std::size_t i = 0; i < m; ++i) prefix[i] = bit(i);
  for (std::size_t i = 0; i < cycle.size(); ++i) cycle[i] = bit(m + i);
  q.y = Tape(std::move(prefix), std::move(cycle));
  return q;
}

Query decode_query(const Snapshot& s) { return decode_query_tape(s.tapes[kScratchTape]); }

Tape encode_query(std::uint64_t f, const Tape& y) {
  std::vector<std::uint8_t> prefix(2 * (f + 1 + y.prefix().size()), kZero);
  for (std::uint64_t i = 0; i < f; ++i) prefix[2 * i] = kOne;
  for (std::size_t i = 0; i < y.prefix().size(); ++i) prefix[2 * (f + 1 + i)] = y.prefix()[i];
  std::vector<std::uint8_t> cycle(2 * y.cycle().size(), kZero);
  for (std::size_t i = 0; i < y.cycle().size(); ++i) cycle[2 * i] = y.cycle()[i];
  return Tape(std::move(prefix), std::move(cycle));
}

namespace {

bool has_zero(const Tape& y) {
  const auto zero = [](std::uint8_t v) { return v != kOne; };
  return std::any_of(y.prefix().begin(), y.prefix().end(), zero) || std::any_of(y.cycle().begin(), y.cycle().end(), zero);
}

bool answer_bit(OracleKind kind, VerdictKind v) {
  if (kind == OracleKind::IJ) return v == VerdictKind::Halted;
  return v == VerdictKind::Halted || v == VerdictKind::Settled;
}

class Evaluator {
 public:
  Evaluator(const Registry& registry, const FeedbackLimits& limits) : registry_(registry), limits_(limits) {}

  CompTree run(std::uint64_t e, const Tape& input) {
    CompTree tree;
    tree.oracle = limits_.oracle;
    tree.root = eval(e, input);
    tree.status = status_;
    tree.divergence_witness = std::move(witness_);
    tree.reason = std::move(reason_);
    return tree;
  }

 private:
  CompNode eval(std::uint64_t f, const Tape& y) {
    CompNode node;
    node.f = f;
    node.y = y;
    if (status_ != TreeStatus::Convergent) return node;
    for (std::size_t i = 0; i < chain_.size(); ++i) {
      if (chain_[i].f == f && chain_[i].y == y) {
        status_ = TreeStatus::DivergentDetected;
        witness_.assign(chain_.begin() + static_cast<std::ptrdiff_t>(i), chain_.end());
        witness_.push_back(WitnessLink{f, y, std::nullopt});
        reason_ = "call (" + std::to_string(f) + ", " + y.to_string() + ") repeats on its own call chain";
        return node;
      }
    }
    if (chain_.size() >= limits_.max_depth) return stop("depth cap " + std::to_string(limits_.max_depth) + " reached", node);
    if (++nodes_ > limits_.max_nodes) return stop("node cap reached", node);
    const Program& program = registry_.program(f);
    chain_.push_back(WitnessLink{f, y, std::nullopt});
    const Oracle oracle = [&](const Snapshot& s) -> std::optional<bool> {
      if (status_ != TreeStatus::Convergent) return std::nullopt;
      const Query q = decode_query(s);
      if (limits_.oracle == OracleKind::E) return !has_zero(q.y);
      chain_.back().query = s;
      node.query_times.push_back(s.stage);
      node.children.push_back(eval(q.f, q.y));
      if (status_ != TreeStatus::Convergent) return std::nullopt;
      return answer_bit(limits_.oracle, *node.children.back().verdict);
    };
    const RunResult r = run_transfinite(program, y, limits_.run, &oracle);
    chain_.pop_back();
    if (status_ != TreeStatus::Convergent) return node;
    if (r.repeating_queries) return stop("program " + std::to_string(f) + " makes infinitely many queries", node);
    if (r.verdict.kind == VerdictKind::BudgetExceeded) {
      return stop("program " + std::to_string(f) + " exceeded its run budget", node);
    }
    node.verdict = r.verdict.kind;
    node.loop = r.verdict.loop;
    node.local_clock = r.verdict.at;
    node.output = r.verdict.output;
    return node;
  }

  CompNode& stop(std::string why, CompNode& node) {
    status_ = TreeStatus::BudgetExceeded;
    reason_ = std::move(why);
    return node;
  }

  const Registry& registry_;
  const FeedbackLimits& limits_;
  std::vector<WitnessLink> chain_;
  std::vector<WitnessLink> witness_;
  TreeStatus status_ = TreeStatus::Convergent;
  std::string reason_;
  std::uint64_t nodes_ = 0;
};

Ordinal store_length(CompNode& n, bool tail) {
  if (!n.verdict) throw Error("absolute_length: node (" + std::to_string(n.f) + ", " + n.y.to_string() + ") has no verdict");
  Ordinal sum;
  Ordinal prev;
  for (std::size_t j = 0; j < n.children.size(); ++j) {
    sum += ord_sub(n.query_times[j], prev);
    sum += store_length(n.children[j], tail);
    prev = n.query_times[j];
  }
  if (n.children.empty()) {
    sum = n.local_clock;
  } else if (tail) {
    sum += ord_sub(n.local_clock, prev);
  }
  (tail ? n.h_tail : n.h) = sum;
  return sum;
}

[[noreturn]] void out_of_range(const Ordinal& stage) {
  throw Error("stage " + ord_print(stage) + " is past the end of the schedule");
}

unsigned level_in(const CompNode& n, const Ordinal& a, unsigned depth) {
  Ordinal offset;
  Ordinal prev;
  for (std::size_t j = 0; j < n.children.size(); ++j) {
    offset += ord_sub(n.query_times[j], prev);
    if (a < offset) return depth;
    const Ordinal len = node_length(n.children[j], true);
    if (a < offset + len) return level_in(n.children[j], ord_sub(a, offset), depth + 1);
    offset += len;
    prev = n.query_times[j];
  }
  if (a < offset + ord_sub(n.local_clock, prev)) return depth;
  out_of_range(a);
}

// `a` is a limit with offset < a throughout.
unsigned liminf_in(const CompNode& n, const Ordinal& a, unsigned depth) {
  Ordinal offset;
  Ordinal prev;
  for (std::size_t j = 0; j < n.children.size(); ++j) {
    offset += ord_sub(n.query_times[j], prev);
    if (a <= offset) return depth;
    const Ordinal len = node_length(n.children[j], true);
    if (a <= offset + len) return liminf_in(n.children[j], ord_sub(a, offset), depth + 1);
    offset += len;
    prev = n.query_times[j];
  }
  if (a <= offset + ord_sub(n.local_clock, prev)) return depth;
  out_of_range(a);
}

}  // namespace

CompTree run_feedback(const Registry& registry, std::uint64_t e, const Tape& input, const FeedbackLimits& limits) {
  return Evaluator(registry, limits).run(e, input);
}

OracleAnswer eval_oracle(const Registry& registry, OracleKind kind, std::uint64_t f, const Tape& y,
                         const FeedbackLimits& limits) {
  if (kind == OracleKind::E) return OracleAnswer{OracleAnswer::Kind::Bit, !has_zero(y)};
  FeedbackLimits sub = limits;
  sub.oracle = kind;
  const CompTree tree = run_feedback(registry, f, y, sub);
  switch (tree.status) {
    case TreeStatus::Convergent: return OracleAnswer{OracleAnswer::Kind::Bit, answer_bit(kind, *tree.root.verdict)};
    case TreeStatus::DivergentDetected: return OracleAnswer{OracleAnswer::Kind::Divergent, false};
    case TreeStatus::BudgetExceeded: break;
  }
  return OracleAnswer{OracleAnswer::Kind::Budget, false};
}

Ordinal node_length(const CompNode& node, bool tail_inclusive) {
  CompNode copy = node;
  return store_length(copy, tail_inclusive);
}

Ordinal absolute_length(CompTree& tree, bool tail_inclusive) {
  if (tree.status != TreeStatus::Convergent) {
    throw Error("absolute_length: tree is " + to_string(tree.status) + ", not convergent");
  }
  return store_length(tree.root, tail_inclusive);
}

unsigned level_at(const CompTree& tree, const Ordinal& stage) {
  if (tree.status != TreeStatus::Convergent) throw Error("level_at: tree is not convergent");
  return level_in(tree.root, stage, 0);
}

unsigned level_liminf(const CompTree& tree, const Ordinal& limit_stage) {
  if (!limit_stage.is_limit()) throw Error("level_liminf: " + ord_print(limit_stage) + " is not a limit");
  if (tree.status != TreeStatus::Convergent) throw Error("level_liminf: tree is not convergent");
  return liminf_in(tree.root, limit_stage, 0);
}

bool operator<(const Fact& a, const Fact& b) {
  return std::tie(a.e, a.x.prefix(), a.x.cycle(), a.bit) < std::tie(b.e, b.x.prefix(), b.x.cycle(), b.bit);
}

FactSet delta_operator_stage(const Registry& registry, const FactSet& x, const std::vector<Call>& universe,
                             const RunOptions& options) {
  FactSet out;
  const Oracle oracle = [&x](const Snapshot& s) -> std::optional<bool> {
    const Query q = decode_query(s);
    if (x.count(Fact{q.f, q.y, true})) return true;
    if (x.count(Fact{q.f, q.y, false})) return false;
    return std::nullopt;
  };
  for (const auto& call : universe) {
    const RunResult r = run_transfinite(registry.program(call.e), call.x, options, &oracle);
    if (r.blocked) continue;
    switch (r.verdict.kind) {
      case VerdictKind::Halted:
      case VerdictKind::Settled: out.insert(Fact{call.e, call.x, true}); break;
      case VerdictKind::LoopingUnsettled: out.insert(Fact{call.e, call.x, false}); break;
      case VerdictKind::BudgetExceeded: break;
    }
  }
  return out;
}

LfpResult delta_lfp(const Registry& registry, const std::vector<Call>& universe, const RunOptions& options) {
  LfpResult result;
  FactSet current;
  // Each proper step adds a fact and there is at most one per member.
  for (unsigned n = 0; n <= universe.size() + 1; ++n) {
    FactSet next = delta_operator_stage(registry, current, universe, options);
    if (next == current) {
      result.stage = n;
      result.facts = std::move(current);
      for (const auto& call : universe) {
        if (!result.facts.count(Fact{call.e, call.x, true}) && !result.facts.count(Fact{call.e, call.x, false})) {
          result.residue.push_back(call);
        }
      }
      return result;
    }
    for (const auto& f : next) {
      if (!current.count(f)) result.entered.emplace_back(f, n + 1);
    }
    current = std::move(next);
  }
  throw Error("delta_lfp: iteration did not stabilize; the operator is not monotone on this universe");
}

namespace {

nlohmann::json node_to_json(const CompNode& n) {
  nlohmann::json j;
  j["f"] = n.f;
  j["y"] = n.y.to_string();
  auto& delta = j["delta"] = nlohmann::json::array();
  for (const auto& d : n.query_times) delta.push_back(ord_print(d));
  j["verdict"] = n.verdict ? nlohmann::json(to_string(*n.verdict)) : nlohmann::json(nullptr);
  if (n.loop) j["loop"] = {ord_print(n.loop->start), ord_print(n.loop->period)};
  j["desk_sigma"] = ord_print(n.local_clock);
  j["H"] = n.h ? nlohmann::json(ord_print(*n.h)) : nlohmann::json(nullptr);
  if (n.h_tail) j["H_tail"] = ord_print(*n.h_tail);
  j["output"] = n.output.to_string();
  auto& children = j["children"] = nlohmann::json::array();
  for (const auto& c : n.children) children.push_back(node_to_json(c));
  return j;
}

}  // namespace

nlohmann::json tree_to_json(const CompTree& tree) {
  nlohmann::json j;
  j["status"] = to_string(tree.status);
  j["oracle"] = to_string(tree.oracle);
  j["root"] = node_to_json(tree.root);
  if (!tree.reason.empty()) j["reason"] = tree.reason;
  if (!tree.divergence_witness.empty()) {
    auto& w = j["witness"] = nlohmann::json::array();
    for (const auto& link : tree.divergence_witness) w.push_back({{"f", link.f}, {"y", link.y.to_string()}});
  }
  return j;
}

}  // namespace ittm
