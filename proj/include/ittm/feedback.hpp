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

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ittm/corpus.hpp"
#include "ittm/machine.hpp"

namespace ittm {

enum class OracleKind {
  EJ,  // 1 iff the queried computation halts or settles its output
  IJ,  // 1 iff it halts
  E,   // 0 iff the queried string has a zero
};

std::string to_string(OracleKind k);
OracleKind parse_oracle_kind(std::string_view text);

/// A query string read from the even scratch cells: the program id in
/// unary (f ones, then a zero) followed by the argument.
struct Query {
  std::uint64_t f = 0;
  Tape y;
  friend bool operator==(const Query&, const Query&) = default;
};

/// Throws Error when the unary prefix never ends.
Query decode_query(const Snapshot& s);
Query decode_query_tape(const Tape& scratch);
/// Scratch tape whose even cells spell out (f, y); odd cells are 0.
Tape encode_query(std::uint64_t f, const Tape& y);

struct CompNode {
  std::uint64_t f = 0;
  Tape y;
  /// Local stage at which the node's own run ended: the halting stage or
  /// the closure stage of its loop.
  Ordinal local_clock;
  /// Local stages of the queries that created children, increasing.
  std::vector<Ordinal> query_times;
  std::vector<CompNode> children;
  std::optional<VerdictKind> verdict;
  std::optional<LoopPair> loop;
  Tape output;
  std::optional<Ordinal> h;
  std::optional<Ordinal> h_tail;
};

enum class TreeStatus { Convergent, DivergentDetected, BudgetExceeded };
std::string to_string(TreeStatus s);

/// One call on a repeating chain: the called pair and the query snapshot
/// that issued the next call (absent on the closing repeat).
struct WitnessLink {
  std::uint64_t f = 0;
  Tape y;
  std::optional<Snapshot> query;
};

struct CompTree {
  CompNode root;
  TreeStatus status = TreeStatus::BudgetExceeded;
  OracleKind oracle = OracleKind::EJ;
  /// For DivergentDetected: calls from the first occurrence of the
  /// repeating pair to its repeat, both included.
  std::vector<WitnessLink> divergence_witness;
  std::string reason;
};

struct FeedbackLimits {
  RunOptions run;
  OracleKind oracle = OracleKind::EJ;
  unsigned max_depth = 32;
  std::uint64_t max_nodes = 10000;
};

/// Runs program e on the input, answering every query by evaluating the
/// queried computation depth first.
CompTree run_feedback(const Registry& registry, std::uint64_t e, const Tape& input, const FeedbackLimits& limits = {});

struct OracleAnswer {
  enum class Kind { Bit, Divergent, Budget };
  Kind kind = Kind::Budget;
  bool bit = false;
  friend bool operator==(const OracleAnswer&, const OracleAnswer&) = default;
};

OracleAnswer eval_oracle(const Registry& registry, OracleKind kind, std::uint64_t f, const Tape& y,
                         const FeedbackLimits& limits = {});

/// Length of the subtree's depth-first schedule. The default follows the
/// query-sum formula and leaves out the node's own run after its last
/// query; tail_inclusive adds it. Leaves count their local clock. Stores
/// the result on every node. Throws if a node has no verdict.
Ordinal absolute_length(CompTree& tree, bool tail_inclusive = false);
Ordinal node_length(const CompNode& node, bool tail_inclusive = false);

/// Depth of the node holding control at an absolute stage of the
/// tail-inclusive schedule. Throws if the stage is past its end.
unsigned level_at(const CompTree& tree, const Ordinal& stage);
/// Liminf of the levels at stages below a limit stage.
unsigned level_liminf(const CompTree& tree, const Ordinal& limit_stage);

/// An oracle fact: program e on argument x has eJ bit `bit`.
struct Fact {
  std::uint64_t e = 0;
  Tape x;
  bool bit = false;
  friend bool operator==(const Fact&, const Fact&) = default;
};
bool operator<(const Fact& a, const Fact& b);

struct Call {
  std::uint64_t e = 0;
  Tape x;
  friend bool operator==(const Call&, const Call&) = default;
};

using FactSet = std::set<Fact>;

/// Facts about universe members whose run, answering queries only from X,
/// halts or settles (bit 1) or loops with changing output (bit 0).
FactSet delta_operator_stage(const Registry& registry, const FactSet& x, const std::vector<Call>& universe,
                             const RunOptions& options = {});

struct LfpResult {
  FactSet facts;
  /// Least n with the n-th iterate equal to the next one.
  unsigned stage = 0;
  /// Iterate at which each fact first appeared.
  std::vector<std::pair<Fact, unsigned>> entered;
  /// Universe members with no fact.
  std::vector<Call> residue;
};

LfpResult delta_lfp(const Registry& registry, const std::vector<Call>& universe, const RunOptions& options = {});

/// {f, y, delta, verdict, loop, H, H_tail, desk_sigma, children}.
nlohmann::json tree_to_json(const CompTree& tree);

}  // namespace ittm
