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

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ittm/ordinal.hpp"
#include "ittm/tape.hpp"

namespace ittm {

using StateId = std::uint32_t;

/// How cells and the control state are chosen at a limit stage.
enum class LimitVariant {
  LiminfCells,        // cell = liminf of earlier values, state = limit state
  BlankOnAmbiguity,   // cell = blank if it changed cofinally, else its value
  LiminfInstruction,  // cells as LiminfCells, state = liminf of earlier state numbers
};

enum class Move : std::uint8_t { Left, Right };

inline constexpr int kInputTape = 0;
inline constexpr int kScratchTape = 1;
inline constexpr int kOutputTape = 2;
/// Scratch cell receiving the answer bit of an oracle query.
inline constexpr std::size_t kAnswerCell = 1;

inline constexpr std::int8_t kKeep = -1;

struct Rule {
  StateId next = 0;
  std::array<std::int8_t, 3> write{kKeep, kKeep, kKeep};
  Move move = Move::Right;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// A transition table over one or three tapes sharing a single head.
/// Read patterns are indexed with tape 0 as the most significant bit, so
/// the text pattern "101" is index 5. Blank cells read as 0.
struct Program {
  int tape_count = 3;
  std::vector<std::string> states;
  StateId start = 0;
  StateId halt = 0;
  std::optional<StateId> limit;
  std::optional<StateId> query;
  std::optional<StateId> resume;
  LimitVariant variant = LimitVariant::LiminfCells;
  std::vector<std::optional<Rule>> table;

  unsigned pattern_count() const { return 1u << tape_count; }
  const std::optional<Rule>& rule(StateId s, unsigned pattern) const {
    return table[s * pattern_count() + pattern];
  }
  std::optional<Rule>& rule(StateId s, unsigned pattern) { return table[s * pattern_count() + pattern]; }
  std::optional<StateId> find_state(std::string_view name) const;
  const std::string& state_name(StateId s) const { return states[s]; }
  int output_tape() const { return tape_count == 3 ? kOutputTape : 0; }

  /// Throws Error when the table is not total on ordinary states, or when
  /// halt/query states carry rules.
  void validate() const;

  friend bool operator==(const Program&, const Program&) = default;
};

/// Full machine configuration at a stage.
struct Snapshot {
  Ordinal stage;
  StateId state = 0;
  std::size_t head = 0;
  std::array<Tape, 3> tapes;
  /// Last stage at which the output tape changed.
  Ordinal output_dirty_since;

  /// Compares state, head and tapes; ignores the stage.
  bool same_configuration(const Snapshot& other) const {
    return state == other.state && head == other.head && tapes == other.tapes;
  }
  std::size_t configuration_hash() const;
};

Snapshot initial_snapshot(const Program& p, const Tape& input);

/// Answers the query posed by a machine sitting in its query state: the
/// answer bit, or nullopt when the oracle cannot answer (the run blocks).
using Oracle = std::function<std::optional<bool>(const Snapshot&)>;

/// One successor step. Throws on a halted machine, and on a query state
/// without an oracle or with an oracle that cannot answer.
Snapshot step(const Program& p, const Snapshot& s, const Oracle* oracle = nullptr);

struct CellRef {
  int tape = 0;
  std::size_t cell = 0;
  friend bool operator==(const CellRef&, const CellRef&) = default;
  friend auto operator<=>(const CellRef&, const CellRef&) = default;
};

struct HaltEvent {
  Snapshot at;
};
/// The configuration at `start` recurs `period` steps later.
struct CycleFound {
  Snapshot start;
  std::uint64_t period = 0;
  std::vector<CellRef> changed_cells;
};
/// The configuration at `start` recurs `period` steps later translated
/// `shift` cells to the right; the head never visits cells below `frontier`
/// during the period.
struct DriftFound {
  Snapshot start;
  std::uint64_t period = 0;
  std::int64_t shift = 0;
  std::size_t frontier = 0;
};
struct BudgetEvent {
  Snapshot at;
};
struct BlockedEvent {
  Snapshot at;
};
using RunEvent = std::variant<HaltEvent, CycleFound, DriftFound, BudgetEvent, BlockedEvent>;

/// Runs successor steps from `s` until halting, a certified repetition, an
/// unanswerable query, or `budget` steps.
RunEvent run_to_event(const Program& p, const Snapshot& s, std::uint64_t budget,
                      const Oracle* oracle = nullptr);

/// The snapshot at the limit of an eternally repeating cycle or drift.
/// Re-simulates the evidence and throws Error if it does not certify
/// eternal repetition.
Snapshot limit_snapshot(const Program& p, const RunEvent& evidence, const Ordinal& limit_stage,
                        const Oracle* oracle = nullptr);

enum class VerdictKind { Halted, Settled, LoopingUnsettled, BudgetExceeded };

struct LoopPair {
  Ordinal start;
  Ordinal period;
  friend bool operator==(const LoopPair&, const LoopPair&) = default;
};

struct RunVerdict {
  VerdictKind kind = VerdictKind::BudgetExceeded;
  /// Halting stage, loop closure stage (start + period), or the stage
  /// reached when the budget ran out.
  Ordinal at;
  std::optional<LoopPair> loop;
  Tape output;
};

enum class TraceKind { Step, Query, Limit, Cycle, Halt, Settle, Loop, Budget };

struct TraceEvent {
  TraceKind kind = TraceKind::Step;
  Snapshot snapshot;
  unsigned level = 0;
  std::string detail;
};

struct RunOptions {
  /// Successor steps per run between limits; also the number of limit
  /// snapshots examined at each higher level.
  std::uint64_t budget_per_level = 10000;
  /// Number of nested cycle detectors above the successor level; level k
  /// closes loops of length w^k * n.
  unsigned max_limit_tower = 3;
  std::uint64_t max_total_steps = 5'000'000;
  bool trace_steps = false;
  std::optional<LimitVariant> variant;
};

struct RunResult {
  RunVerdict verdict;
  std::vector<TraceEvent> trace;
  /// Snapshot at the halt, at the loop start, or where the run stopped.
  Snapshot final_snapshot;
  /// The run stopped on a query the oracle could not answer.
  bool blocked = false;
  /// An oracle query sits inside a block that repeats forever, so the run
  /// makes infinitely many queries.
  bool repeating_queries = false;
  /// Stages at which queries were posed, in order (realized queries only).
  std::vector<Ordinal> query_stages;
};

RunResult run_transfinite(const Program& p, const Tape& input, const RunOptions& options = {},
                          const Oracle* oracle = nullptr);
RunResult run_from(const Program& p, const Snapshot& start, const RunOptions& options = {},
                   const Oracle* oracle = nullptr);

/// Runs under the liminf and blank limit rules and reports whether the
/// verdict kinds and, for convergent runs, the outputs agree.
bool verdicts_agree_across_variants(const Program& p, const Tape& input, const RunOptions& options = {});

std::string to_string(LimitVariant v);
LimitVariant parse_variant(std::string_view text);
std::string to_string(VerdictKind k);
std::string to_string(TraceKind k);

/// Output tape with blanks read as 0, as used for comparing results.
Tape as_bits(const Tape& t);

}  // namespace ittm
