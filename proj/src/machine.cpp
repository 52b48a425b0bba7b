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

#include "ittm/machine.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

namespace ittm {

std::optional<StateId> Program::find_state(std::string_view name) const {
  for (StateId s = 0; s < states.size(); ++s) {
    if (states[s] == name) return s;
  }
  return std::nullopt;
}

void Program::validate() const {
  if (tape_count != 1 && tape_count != 3) throw Error("tape count must be 1 or 3");
  if (states.empty()) throw Error("program has no states");
  if (table.size() != states.size() * pattern_count()) throw Error("rule table has the wrong size");
  const auto check = [&](StateId s) {
    if (s >= states.size()) throw Error("state id out of range");
  };
  check(start);
  check(halt);
  if (limit) check(*limit);
  if (query) {
    check(*query);
    if (!resume) throw Error("a query state requires a resume state");
    if (tape_count != 3) throw Error("oracle queries need the 3-tape layout");
  }
  if (resume) check(*resume);
  if (!limit && variant != LimitVariant::LiminfInstruction) {
    throw Error("a limit state is required unless the instruction-liminf rule is used");
  }
  for (StateId s = 0; s < states.size(); ++s) {
    const bool ruleless = s == halt || (query && s == *query);
    for (unsigned pat = 0; pat < pattern_count(); ++pat) {
      const auto& r = rule(s, pat);
      if (ruleless && r) throw Error("state " + states[s] + " must not have rules");
      if (!ruleless && !r) throw Error("state " + states[s] + " has no rule for pattern " + std::to_string(pat));
      if (r) check(r->next);
    }
  }
}

std::size_t Snapshot::configuration_hash() const {
  std::size_t h = std::hash<StateId>{}(state) * 31 + std::hash<std::size_t>{}(head);
  for (const auto& t : tapes) h = h * 1000003 ^ t.hash();
  return h;
}

Snapshot initial_snapshot(const Program& p, const Tape& input) {
  Snapshot s;
  s.state = p.start;
  s.tapes[kInputTape] = input;
  return s;
}

std::string to_string(LimitVariant v) {
  switch (v) {
    case LimitVariant::LiminfCells: return "liminf";
    case LimitVariant::BlankOnAmbiguity: return "blank";
    case LimitVariant::LiminfInstruction: return "instruction";
  }
  return "?";
}

LimitVariant parse_variant(std::string_view text) {
  if (text == "liminf") return LimitVariant::LiminfCells;
  if (text == "blank") return LimitVariant::BlankOnAmbiguity;
  if (text == "instruction") return LimitVariant::LiminfInstruction;
  throw Error("unknown limit variant '" + std::string(text) + "'");
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Halted: return "HALTED";
    case VerdictKind::Settled: return "SETTLED";
    case VerdictKind::LoopingUnsettled: return "LOOPING_UNSETTLED";
    case VerdictKind::BudgetExceeded: return "BUDGET_EXCEEDED";
  }
  return "?";
}

std::string to_string(TraceKind k) {
  switch (k) {
    case TraceKind::Step: return "STEP";
    case TraceKind::Query: return "QUERY";
    case TraceKind::Limit: return "LIMIT";
    case TraceKind::Cycle: return "CYCLE";
    case TraceKind::Halt: return "HALT";
    case TraceKind::Settle: return "SETTLE";
    case TraceKind::Loop: return "LOOP";
    case TraceKind::Budget: return "BUDGET";
  }
  return "?";
}

Tape as_bits(const Tape& t) {
  return t.map([](std::uint8_t v) { return static_cast<std::uint8_t>(v == kOne ? kOne : kZero); });
}

namespace {

using Masks = std::array<Tape, 3>;

std::uint8_t bit_of(std::uint8_t v) { return v == kOne ? 1 : 0; }

Tape mask_tape(const Tape& t) {
  return t.map([](std::uint8_t v) { return static_cast<std::uint8_t>(1u << v); });
}

Masks mask_tapes(const Snapshot& s) {
  return {mask_tape(s.tapes[0]), mask_tape(s.tapes[1]), mask_tape(s.tapes[2])};
}

void or_cell(Tape& m, std::size_t i, std::uint8_t bits) { m.set(i, static_cast<std::uint8_t>(m.get(i) | bits)); }

Masks or_masks(const Masks& a, const Masks& b) {
  Masks r;
  for (int t = 0; t < 3; ++t) {
    r[t] = Tape::zip(a[t], b[t], [](std::uint8_t x, std::uint8_t y) { return static_cast<std::uint8_t>(x | y); });
  }
  return r;
}

bool single_valued(const Tape& mask) {
  const auto one = [](std::uint8_t m) { return std::popcount(m) <= 1; };
  return std::all_of(mask.prefix().begin(), mask.prefix().end(), one) &&
         std::all_of(mask.cycle().begin(), mask.cycle().end(), one);
}

bool is_query(const Program& p, StateId s) { return p.query && *p.query == s; }

/// Applies one transition in place. Returns false when the oracle cannot
/// answer. `written` receives the head position written at (or the answer
/// cell for queries).
bool apply_step(const Program& p, Snapshot& c, const Oracle* oracle, std::size_t& written, bool& was_query) {
  if (c.state == p.halt) throw Error("step: machine has halted");
  was_query = false;
  if (is_query(p, c.state)) {
    if (oracle == nullptr || !*oracle) throw Error("step: query state reached without an oracle");
    const auto answer = (*oracle)(c);
    if (!answer) return false;
    c.tapes[kScratchTape].set(kAnswerCell, *answer ? kOne : kZero);
    c.state = *p.resume;
    written = kAnswerCell;
    was_query = true;
    return true;
  }
  unsigned pattern = 0;
  for (int t = 0; t < p.tape_count; ++t) pattern = (pattern << 1) | bit_of(c.tapes[t].get(c.head));
  const auto& r = p.rule(c.state, pattern);
  if (!r) throw Error("step: no rule for state " + p.state_name(c.state));
  for (int t = 0; t < p.tape_count; ++t) {
    if (r->write[t] != kKeep) c.tapes[t].set(c.head, static_cast<std::uint8_t>(r->write[t]));
  }
  written = c.head;
  c.state = r->next;
  if (r->move == Move::Right) {
    ++c.head;
  } else if (c.head > 0) {
    --c.head;
  }
  return true;
}

/// Advances `c` by one stage, keeping the stage and output_dirty_since.
bool advance(const Program& p, Snapshot& c, const Oracle* oracle, std::size_t& written, bool& was_query) {
  const int out = p.output_tape();
  const std::size_t probe = is_query(p, c.state) ? kAnswerCell : c.head;
  const std::uint8_t before = c.tapes[out].get(probe);
  if (!apply_step(p, c, oracle, written, was_query)) return false;
  c.stage += Ordinal(1);
  if (c.tapes[out].get(written) != before) c.output_dirty_since = c.stage;
  return true;
}

struct WindowSummary {
  Masks masks;
  StateId min_state = 0;
  bool has_query = false;
};

/// Masks of the values every cell takes over configurations w[0..n-1],
/// where each w[k+1] follows w[k] by one step.
WindowSummary summarize(const Program& p, const std::vector<Snapshot>& w) {
  WindowSummary r{mask_tapes(w.front()), w.front().state, false};
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    r.min_state = std::min(r.min_state, w[k].state);
    if (is_query(p, w[k].state)) {
      r.has_query = true;
      or_cell(r.masks[kScratchTape], kAnswerCell, static_cast<std::uint8_t>(1u << w[k + 1].tapes[kScratchTape].get(kAnswerCell)));
      continue;
    }
    const std::size_t h = w[k].head;
    for (int t = 0; t < p.tape_count; ++t) {
      or_cell(r.masks[t], h, static_cast<std::uint8_t>(1u << w[k + 1].tapes[t].get(h)));
    }
  }
  return r;
}

std::uint8_t limit_value(LimitVariant v, std::uint8_t mask) {
  if (v == LimitVariant::BlankOnAmbiguity) {
    if (std::popcount(mask) == 1) return static_cast<std::uint8_t>(std::countr_zero(mask));
    return kBlank;
  }
  if (mask & (1u << kZero)) return kZero;
  if (mask & (1u << kOne)) return kOne;
  return kBlank;
}

Snapshot limit_from_masks(const Program& p, LimitVariant variant, const Masks& cofinal, StateId min_state,
                          const Ordinal& stage, const Snapshot& before) {
  Snapshot s;
  s.stage = stage;
  s.head = 0;
  if (variant == LimitVariant::LiminfInstruction) {
    s.state = min_state;
  } else {
    if (!p.limit) throw Error("program has no limit state");
    s.state = *p.limit;
  }
  for (int t = 0; t < 3; ++t) {
    s.tapes[t] = cofinal[t].map([variant](std::uint8_t m) { return limit_value(variant, m); });
  }
  const int out = p.output_tape();
  const bool changed = !single_valued(cofinal[out]) || s.tapes[out] != before.tapes[out];
  s.output_dirty_since = changed ? stage : before.output_dirty_since;
  return s;
}

bool drift_holds(const Snapshot& a, const Snapshot& b, std::size_t frontier, std::size_t shift) {
  if (a.state != b.state || b.head != a.head + shift) return false;
  for (int t = 0; t < 3; ++t) {
    if (!a.tapes[t].suffix_equal(frontier, b.tapes[t], frontier + shift)) return false;
  }
  return true;
}

/// Eventual tape contents after a certified drift: cells below the frontier
/// are frozen at the window start; each later cell ends with the value its
/// translate had after one period.
Tape drift_final(const Tape& at_start, const Tape& after_period, std::size_t frontier, std::size_t shift) {
  std::vector<std::uint8_t> prefix(frontier);
  std::vector<std::uint8_t> cycle(shift);
  for (std::size_t c = 0; c < frontier; ++c) prefix[c] = at_start.get(c);
  for (std::size_t j = 0; j < shift; ++j) cycle[j] = after_period.get(frontier + j);
  return Tape(std::move(prefix), std::move(cycle));
}

/// Values every cell takes over the whole future of a drift, given the
/// per-cell masks H of one period: V(c) = H(c) | V(c - shift) above the
/// frontier. V has period `shift` once H's own cycle has been absorbed.
Tape drift_history(const Tape& h, std::size_t frontier, std::size_t shift) {
  const std::size_t base = std::max(h.prefix().size(), frontier) + lcm_size(shift, h.cycle().size());
  std::vector<std::uint8_t> v(base + shift);
  for (std::size_t c = 0; c < v.size(); ++c) {
    v[c] = h.get(c);
    if (c >= frontier + shift) v[c] = static_cast<std::uint8_t>(v[c] | v[c - shift]);
  }
  std::vector<std::uint8_t> cycle(v.begin() + static_cast<std::ptrdiff_t>(base), v.end());
  v.resize(base);
  return Tape(std::move(v), std::move(cycle));
}

struct SuccessorRun {
  RunEvent event;
  std::vector<Snapshot> window;  // configurations of one period, both ends included
  Masks seen;                    // values taken by each cell over the whole run
  StateId min_state = 0;
  std::uint64_t steps = 0;
};

class SuccessorRunner {
 public:
  SuccessorRunner(const Program& p, const Oracle* oracle, std::vector<TraceEvent>* steps,
                  std::vector<Ordinal>* query_stages)
      : p_(p), oracle_(oracle), steps_(steps), query_stages_(query_stages) {}

  SuccessorRun run(const Snapshot& from, std::uint64_t budget) {
    SuccessorRun out;
    out.seen = mask_tapes(from);
    out.min_state = from.state;
    hist_.assign(1, from);
    by_hash_.clear();
    records_.clear();
    std::size_t max_head = from.head;
    for (std::uint64_t k = 0;; ++k) {
      out.steps = k;
      const Snapshot& cur = hist_[k];
      out.min_state = std::min(out.min_state, cur.state);
      if (cur.state == p_.halt) {
        out.event = HaltEvent{cur};
        return out;
      }
      if (auto cycle = find_exact(k)) {
        out.window.assign(hist_.begin() + static_cast<std::ptrdiff_t>(*cycle), hist_.end());
        CycleFound ev{hist_[*cycle], k - *cycle, {}};
        const auto summary = summarize(p_, out.window);
        for (int t = 0; t < 3; ++t) {
          const auto& pre = summary.masks[t].prefix();
          for (std::size_t c = 0; c < pre.size(); ++c) {
            if (std::popcount(pre[c]) > 1) ev.changed_cells.push_back(CellRef{t, c});
          }
        }
        out.event = std::move(ev);
        return out;
      }
      if (k > 0 && cur.head > max_head) {
        max_head = cur.head;
        if (auto drift = find_drift(k)) {
          out.window.assign(hist_.begin() + static_cast<std::ptrdiff_t>(drift->first), hist_.end());
          const auto& start = hist_[drift->first];
          out.event = DriftFound{start, k - drift->first, static_cast<std::int64_t>(cur.head - start.head),
                                 drift->second};
          return out;
        }
        records_[cur.state].push_back(k);
      }
      if (k >= budget) {
        out.event = BudgetEvent{cur};
        return out;
      }
      Snapshot next = cur;
      std::size_t written = 0;
      bool was_query = false;
      if (!advance(p_, next, oracle_, written, was_query)) {
        out.event = BlockedEvent{cur};
        return out;
      }
      if (was_query && query_stages_ != nullptr) query_stages_->push_back(cur.stage);
      for (int t = 0; t < 3; ++t) or_cell(out.seen[t], written, static_cast<std::uint8_t>(1u << next.tapes[t].get(written)));
      if (steps_ != nullptr) steps_->push_back(TraceEvent{was_query ? TraceKind::Query : TraceKind::Step, next, 0, {}});
      hist_.push_back(std::move(next));
    }
  }

 private:
  std::optional<std::uint64_t> find_exact(std::uint64_t k) {
    const std::size_t h = hist_[k].configuration_hash();
    auto& bucket = by_hash_[h];
    for (auto idx : bucket) {
      if (hist_[idx].same_configuration(hist_[k])) return idx;
    }
    bucket.push_back(k);
    return std::nullopt;
  }

  /// Looks for an earlier head record in the same state from which the
  /// run is a translate of itself. Periods containing queries never
  /// qualify: a query reads the whole scratch tape.
  std::optional<std::pair<std::uint64_t, std::size_t>> find_drift(std::uint64_t k) {
    auto it = records_.find(hist_[k].state);
    if (it == records_.end()) return std::nullopt;
    const auto& recs = it->second;
    constexpr std::size_t kCandidates = 16;
    const std::size_t lo = recs.size() > kCandidates ? recs.size() - kCandidates : 0;
    for (std::size_t n = recs.size(); n-- > lo;) {
      const std::uint64_t r = recs[n];
      std::size_t frontier = hist_[r].head;
      bool queried = false;
      for (std::uint64_t j = r; j <= k; ++j) {
        frontier = std::min(frontier, hist_[j].head);
        if (j < k && is_query(p_, hist_[j].state)) queried = true;
      }
      if (queried) continue;
      if (drift_holds(hist_[r], hist_[k], frontier, hist_[k].head - hist_[r].head)) {
        return std::make_pair(r, frontier);
      }
    }
    return std::nullopt;
  }

  const Program& p_;
  const Oracle* oracle_;
  std::vector<TraceEvent>* steps_;
  std::vector<Ordinal>* query_stages_;
  std::vector<Snapshot> hist_;
  std::unordered_map<std::size_t, std::vector<std::uint64_t>> by_hash_;
  std::unordered_map<StateId, std::vector<std::uint64_t>> records_;
};

/// Re-simulates `period` steps from `start`; used to check evidence that
/// did not come from our own detector.
std::vector<Snapshot> replay(const Program& p, const Snapshot& start, std::uint64_t period, const Oracle* oracle) {
  std::vector<Snapshot> w{start};
  for (std::uint64_t k = 0; k < period; ++k) {
    if (w.back().state == p.halt) throw Error("limit_snapshot: evidence halts");
    Snapshot next = w.back();
    std::size_t written = 0;
    bool was_query = false;
    if (!advance(p, next, oracle, written, was_query)) throw Error("limit_snapshot: oracle blocked");
    w.push_back(std::move(next));
  }
  return w;
}

struct LimitOfWindow {
  Snapshot limit;
  Masks cofinal;
  bool has_query = false;
  StateId min_state = 0;
};

LimitOfWindow cycle_limit(const Program& p, LimitVariant variant, const std::vector<Snapshot>& w,
                          const Ordinal& stage) {
  auto s = summarize(p, w);
  LimitOfWindow r;
  r.limit = limit_from_masks(p, variant, s.masks, s.min_state, stage, w.back());
  r.cofinal = std::move(s.masks);
  r.has_query = s.has_query;
  r.min_state = s.min_state;
  return r;
}

LimitOfWindow drift_limit(const Program& p, LimitVariant variant, const std::vector<Snapshot>& w,
                          std::size_t frontier, std::size_t shift, const Ordinal& stage) {
  auto s = summarize(p, w);
  LimitOfWindow r;
  Masks finals;
  for (int t = 0; t < 3; ++t) finals[t] = mask_tape(drift_final(w.front().tapes[t], w.back().tapes[t], frontier, shift));
  r.limit = limit_from_masks(p, variant, finals, s.min_state, stage, w.back());
  // Cofinally each cell is constant, but the output changes throughout.
  r.cofinal = finals;
  r.has_query = s.has_query;
  r.min_state = s.min_state;
  return r;
}

struct Segment {
  enum class Kind { Halted, Limit, Eternal, Budget, Blocked };
  Kind kind = Kind::Budget;
  Snapshot end;
  Masks seen;
  StateId min_state = 0;
  bool queries = false;
  LoopPair loop;
  bool settled = false;
};

class Engine {
 public:
  Engine(const Program& p, const RunOptions& opts, const Oracle* oracle, RunResult& result)
      : p_(p),
        opts_(opts),
        variant_(opts.variant.value_or(p.variant)),
        result_(result),
        runner_(p, oracle, opts.trace_steps ? &result.trace : nullptr, &result.query_stages) {}

  Segment run_level(unsigned level, const Snapshot& start) {
    if (level == 0) return successor_level(start);
    std::vector<Snapshot> seq{start};
    std::vector<Segment> segs;
    std::unordered_map<std::size_t, std::vector<std::size_t>> index;
    index[start.configuration_hash()].push_back(0);
    for (std::uint64_t n = 0; n < opts_.budget_per_level; ++n) {
      Segment sub = run_level(level - 1, seq.back());
      if (sub.kind != Segment::Kind::Limit) return sub;
      seq.push_back(sub.end);
      segs.push_back(std::move(sub));
      const std::size_t j = seq.size() - 1;
      auto& bucket = index[seq[j].configuration_hash()];
      for (auto i : bucket) {
        if (!seq[i].same_configuration(seq[j])) continue;
        Masks cofinal = segs[i].seen;
        StateId min_state = segs[i].min_state;
        for (std::size_t k = i + 1; k < j; ++k) {
          cofinal = or_masks(cofinal, segs[k].seen);
          min_state = std::min(min_state, segs[k].min_state);
        }
        for (std::size_t k = i; k < j; ++k) {
          if (segs[k].queries) result_.repeating_queries = true;
        }
        const Ordinal period = Ordinal::term(Ordinal(level), j - i);
        trace(TraceKind::Cycle, seq[i], level, "period " + ord_print(period));
        Snapshot limit = limit_from_masks(p_, variant_, cofinal, min_state,
                                          start.stage + Ordinal::term(Ordinal(level + 1)), seq[j]);
        for (std::size_t k = i; k < j; ++k) {
          if (limit.same_configuration(seq[k])) return eternal(seq[k], period, cofinal, level);
        }
        Segment out;
        out.kind = Segment::Kind::Limit;
        out.seen = segs[0].seen;
        out.min_state = segs[0].min_state;
        for (std::size_t k = 0; k < segs.size(); ++k) {
          if (k > 0) out.seen = or_masks(out.seen, segs[k].seen);
          out.min_state = std::min(out.min_state, segs[k].min_state);
          out.queries = out.queries || segs[k].queries;
        }
        trace(TraceKind::Limit, limit, level + 1, {});
        out.end = std::move(limit);
        return out;
      }
      bucket.push_back(j);
    }
    Segment out;
    out.kind = Segment::Kind::Budget;
    out.end = seq.back();
    return out;
  }

 private:
  Segment successor_level(const Snapshot& start) {
    Segment out;
    if (total_steps_ >= opts_.max_total_steps) {
      out.end = start;
      return out;
    }
    const std::uint64_t budget = std::min(opts_.budget_per_level, opts_.max_total_steps - total_steps_);
    const std::size_t queries_before = result_.query_stages.size();
    SuccessorRun run = runner_.run(start, budget);
    out.seen = std::move(run.seen);
    out.min_state = run.min_state;
    const Ordinal limit_stage = start.stage + Ordinal::omega();
    std::visit(
        [&](auto& ev) {
          using T = std::decay_t<decltype(ev)>;
          if constexpr (std::is_same_v<T, HaltEvent>) {
            total_steps_ += run.steps;
            out.kind = Segment::Kind::Halted;
            out.end = ev.at;
            trace(TraceKind::Halt, ev.at, 0, {});
          } else if constexpr (std::is_same_v<T, BudgetEvent>) {
            total_steps_ += run.steps;
            out.kind = Segment::Kind::Budget;
            out.end = ev.at;
          } else if constexpr (std::is_same_v<T, BlockedEvent>) {
            out.kind = Segment::Kind::Blocked;
            out.end = ev.at;
          } else if constexpr (std::is_same_v<T, CycleFound>) {
            total_steps_ += run.steps;
            trace(TraceKind::Cycle, ev.start, 0, "period " + std::to_string(ev.period));
            auto lim = cycle_limit(p_, variant_, run.window, limit_stage);
            if (lim.has_query) result_.repeating_queries = true;
            // The loop starts at the first configuration of the period that
            // the limit reproduces.
            for (std::size_t k = 0; k + 1 < run.window.size(); ++k) {
              if (lim.limit.same_configuration(run.window[k])) {
                out = eternal(run.window[k], Ordinal(ev.period), lim.cofinal, 0);
                return;
              }
            }
            out.kind = Segment::Kind::Limit;
            out.end = std::move(lim.limit);
            trace(TraceKind::Limit, out.end, 1, {});
          } else if constexpr (std::is_same_v<T, DriftFound>) {
            total_steps_ += run.steps;
            const auto shift = static_cast<std::size_t>(ev.shift);
            trace(TraceKind::Cycle, ev.start, 0,
                  "drift period " + std::to_string(ev.period) + " shift " + std::to_string(ev.shift));
            const auto period_masks = summarize(p_, run.window).masks;
            for (int t = 0; t < 3; ++t) {
              out.seen[t] = Tape::zip(out.seen[t], drift_history(period_masks[t], ev.frontier, shift),
                                      [](std::uint8_t a, std::uint8_t b) { return static_cast<std::uint8_t>(a | b); });
            }
            auto lim = drift_limit(p_, variant_, run.window, ev.frontier, shift, limit_stage);
            out.kind = Segment::Kind::Limit;
            out.end = std::move(lim.limit);
            trace(TraceKind::Limit, out.end, 1, {});
          }
        },
        run.event);
    out.queries = result_.query_stages.size() > queries_before;
    return out;
  }

  Segment eternal(const Snapshot& at, const Ordinal& period, const Masks& cofinal, unsigned level) {
    Segment out;
    out.kind = Segment::Kind::Eternal;
    out.end = at;
    out.loop = LoopPair{at.stage, period};
    out.settled = single_valued(cofinal[p_.output_tape()]);
    trace(out.settled ? TraceKind::Settle : TraceKind::Loop, at, level, "period " + ord_print(period));
    return out;
  }

  void trace(TraceKind kind, const Snapshot& s, unsigned level, std::string detail) {
    result_.trace.push_back(TraceEvent{kind, s, level, std::move(detail)});
  }

  const Program& p_;
  const RunOptions& opts_;
  LimitVariant variant_;
  RunResult& result_;
  SuccessorRunner runner_;
  std::uint64_t total_steps_ = 0;
};

}  // namespace

Snapshot step(const Program& p, const Snapshot& s, const Oracle* oracle) {
  Snapshot next = s;
  std::size_t written = 0;
  bool was_query = false;
  if (!advance(p, next, oracle, written, was_query)) throw Error("step: oracle could not answer");
  return next;
}

RunEvent run_to_event(const Program& p, const Snapshot& s, std::uint64_t budget, const Oracle* oracle) {
  if (budget < 1) throw Error("run_to_event: budget must be at least 1");
  SuccessorRunner runner(p, oracle, nullptr, nullptr);
  return runner.run(s, budget).event;
}

Snapshot limit_snapshot(const Program& p, const RunEvent& evidence, const Ordinal& limit_stage, const Oracle* oracle) {
  if (!limit_stage.is_limit()) throw Error("limit_snapshot: stage " + ord_print(limit_stage) + " is not a limit");
  if (const auto* c = std::get_if<CycleFound>(&evidence)) {
    if (c->period == 0) throw Error("limit_snapshot: empty period");
    auto w = replay(p, c->start, c->period, oracle);
    if (!w.back().same_configuration(c->start)) throw Error("limit_snapshot: configuration does not recur");
    return cycle_limit(p, p.variant, w, limit_stage).limit;
  }
  if (const auto* d = std::get_if<DriftFound>(&evidence)) {
    if (d->period == 0 || d->shift <= 0) throw Error("limit_snapshot: drift needs a positive shift");
    auto w = replay(p, d->start, d->period, oracle);
    for (const auto& s : w) {
      if (s.head < d->frontier) throw Error("limit_snapshot: head crosses the drift frontier");
      if (is_query(p, s.state) && &s != &w.back()) throw Error("limit_snapshot: drift period makes a query");
    }
    if (!drift_holds(d->start, w.back(), d->frontier, static_cast<std::size_t>(d->shift))) {
      throw Error("limit_snapshot: configuration does not recur under translation");
    }
    return drift_limit(p, p.variant, w, d->frontier, static_cast<std::size_t>(d->shift), limit_stage).limit;
  }
  throw Error("limit_snapshot: evidence is not a cycle or a drift");
}

RunResult run_from(const Program& p, const Snapshot& start, const RunOptions& options, const Oracle* oracle) {
  RunResult result;
  Engine engine(p, options, oracle, result);
  const Segment seg = engine.run_level(options.max_limit_tower, start);
  RunVerdict& v = result.verdict;
  result.final_snapshot = seg.end;
  v.output = seg.end.tapes[p.output_tape()];
  switch (seg.kind) {
    case Segment::Kind::Halted:
      v.kind = VerdictKind::Halted;
      v.at = seg.end.stage;
      break;
    case Segment::Kind::Eternal:
      v.kind = seg.settled ? VerdictKind::Settled : VerdictKind::LoopingUnsettled;
      v.loop = seg.loop;
      v.at = seg.loop.start + seg.loop.period;
      break;
    case Segment::Kind::Limit:
    case Segment::Kind::Budget:
    case Segment::Kind::Blocked:
      v.kind = VerdictKind::BudgetExceeded;
      v.at = seg.end.stage;
      result.blocked = seg.kind == Segment::Kind::Blocked;
      result.trace.push_back(TraceEvent{TraceKind::Budget, seg.end, 0,
                                        seg.kind == Segment::Kind::Limit  ? "limit tower exhausted"
                                        : seg.kind == Segment::Kind::Blocked ? "oracle blocked"
                                                                             : "step budget exhausted"});
      break;
  }
  return result;
}

RunResult run_transfinite(const Program& p, const Tape& input, const RunOptions& options, const Oracle* oracle) {
  return run_from(p, initial_snapshot(p, input), options, oracle);
}

bool verdicts_agree_across_variants(const Program& p, const Tape& input, const RunOptions& options) {
  RunOptions a = options;
  a.variant = LimitVariant::LiminfCells;
  RunOptions b = options;
  b.variant = LimitVariant::BlankOnAmbiguity;
  const auto ra = run_transfinite(p, input, a);
  const auto rb = run_transfinite(p, input, b);
  if (ra.verdict.kind != rb.verdict.kind) return false;
  const bool convergent = ra.verdict.kind == VerdictKind::Halted || ra.verdict.kind == VerdictKind::Settled;
  return !convergent || as_bits(ra.verdict.output) == as_bits(rb.verdict.output);
}

}  // namespace ittm
