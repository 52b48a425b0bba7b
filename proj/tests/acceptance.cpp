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

// Acceptance checks: one PASS/FAIL line per criterion, with timings.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "ittm/corpus.hpp"
#include "ittm/feedback.hpp"
#include "ittm/games.hpp"
#include "ittm/verify.hpp"
#include "support.hpp"

using namespace ittm;
using namespace ittm::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// 1. limit_snapshot against brute-force liminf on random small programs.
Outcome limit_rule_oracle() {
  std::mt19937_64 rng(20261015);
  std::size_t checked = 0;
  std::size_t tries = 0;
  std::size_t mismatched = 0;
  std::size_t flashing = 0;
  std::size_t marked = 0;
  while ((checked < 60 || flashing < 25) && tries < 20000) {
    ++tries;
    const unsigned n = 2 + static_cast<unsigned>(rng() % 3);  // 2..4 states
    const Program p = random_program(rng, n);
    const RunEvent ev = run_to_event(p, initial_snapshot(p, Tape()), 2000);
    const auto* cycle = std::get_if<CycleFound>(&ev);
    if (!cycle) continue;
    ++checked;
    const Snapshot lim = limit_snapshot(p, ev, Ordinal::omega());
    const auto brute = brute_force_limit(p, cycle->start, cycle->period, 3, false);
    bool same = lim.head == 0 && lim.state == *p.limit && lim.stage == Ordinal::omega();
    for (int t = 0; t < 3; ++t) same = same && lim.tapes[t] == brute[t];
    if (!same) ++mismatched;
    flashing += !cycle->changed_cells.empty();
    bool nonzero = false;
    for (const auto& t : lim.tapes) nonzero = nonzero || !t.finite_support() || !t.prefix().empty();
    marked += nonzero;
  }
  std::ostringstream d;
  d << checked << " cycling programs (" << tries << " generated, " << flashing << " with flashing cells, " << marked
    << " with nonzero limits), " << mismatched << " mismatches";
  return {checked >= 50 && flashing > 0 && mismatched == 0, d.str()};
}

// 2. Corpus verdicts, stages, outputs and eJ/iJ bits.
Outcome corpus_suite() {
  const Registry reg = default_registry();
  const auto entries = default_corpus();
  std::size_t failed = 0;
  bool separator_seen = false;
  std::string first_failure;
  for (const auto& e : entries) {
    const EntryCheck r = verify_entry(reg, e);
    if (!r.pass) {
      ++failed;
      if (first_failure.empty()) first_failure = r.name + ": " + (r.mismatches.empty() ? "" : r.mismatches.front());
    }
    if (e.ej == true && e.ij == false && r.pass) separator_seen = true;
  }
  std::ostringstream d;
  d << entries.size() << " entries, " << failed << " failed";
  if (!separator_seen) d << ", no passing eJ=1/iJ=0 entry";
  if (!first_failure.empty()) d << " (" << first_failure << ")";
  return {entries.size() >= 12 && failed == 0 && separator_seen, d.str()};
}

// 3. absolute_length against the event-linearization oracle.
Outcome h_oracle() {
  std::mt19937_64 rng(7);
  std::size_t agree = 0;
  const std::size_t total = 40;
  std::size_t infinite = 0;
  for (std::size_t i = 0; i < total; ++i) {
    CompTree tree;
    tree.status = TreeStatus::Convergent;
    tree.root = random_comp_node(rng, 1 + static_cast<unsigned>(i % 4), i % 4 != 0);
    const Ordinal h = absolute_length(tree, false);
    const Ordinal h_tail = absolute_length(tree, true);
    if (!h.is_finite()) ++infinite;
    if (h == linearized_length(tree.root, false) && h_tail == linearized_length(tree.root, true)) ++agree;
  }
  std::ostringstream d;
  d << agree << "/" << total << " trees agree (" << infinite << " with infinite H)";
  return {agree == total && infinite > 0, d.str()};
}

bool ej_bit(VerdictKind k) { return k == VerdictKind::Halted || k == VerdictKind::Settled; }

// 4. Delta least fixed point against run_feedback.
Outcome delta_vs_engine() {
  const Registry reg = default_registry();
  std::vector<Call> universe;
  for (const auto& e : default_corpus()) {
    if (e.oracle != "ej") continue;
    const Call c{e.id, e.input};
    if (std::find(universe.begin(), universe.end(), c) == universe.end()) universe.push_back(c);
  }
  // The e-user's query; the universe must answer every query it makes.
  universe.push_back(Call{*reg.find("halter"), Tape::parse("(1)")});

  const LfpResult lfp = delta_lfp(reg, universe);
  std::size_t disagreements = 0;
  bool self_absent = true;
  bool chain_present = false;
  for (const auto& call : universe) {
    const CompTree t = run_feedback(reg, call.e, call.x);
    std::optional<bool> engine;
    if (t.status == TreeStatus::Convergent) engine = ej_bit(*t.root.verdict);
    std::optional<bool> fixed;
    if (lfp.facts.count(Fact{call.e, call.x, true})) fixed = true;
    if (lfp.facts.count(Fact{call.e, call.x, false})) fixed = fixed ? std::nullopt : std::optional<bool>(false);
    if (engine != fixed) ++disagreements;
    const std::string& name = reg.name(call.e);
    if (name == "self-query" && fixed) self_absent = false;
    if (name == "chain-3" && fixed == true) chain_present = true;
  }
  std::ostringstream d;
  d << universe.size() << " calls, lfp stage " << lfp.stage << ", " << lfp.residue.size() << " in residue, "
    << disagreements << " disagreements";
  if (!self_absent) d << ", self-query in lfp";
  if (!chain_present) d << ", chain-3 missing";
  return {universe.size() >= 8 && disagreements == 0 && self_absent && chain_present, d.str()};
}

// 5. Exactly one of sigma/tau, verified by exhaustive play.
Outcome determinacy() {
  std::mt19937_64 rng(5);
  const std::size_t total = 240;
  std::size_t ok = 0;
  std::size_t i_won = 0;
  std::size_t plays = 0;
  for (std::size_t i = 0; i < total; ++i) {
    const unsigned b = 2 + static_cast<unsigned>(rng() % 2);
    const unsigned d = 2 * (1 + static_cast<unsigned>(rng() % 3));
    const Game g(GameTree(b, d), random_payoff(rng, b, d, 3, 3));
    Position root;
    const bool i_wins = i_wins_minimax(g.payoff(), b, d, root);
    std::optional<Strategy> sigma;
    try {
      sigma = extract_sigma(g);
    } catch (const Error&) {
    }
    const auto tau = synthesize_tau(g);
    if (sigma.has_value() == tau.has_value() || sigma.has_value() != i_wins) continue;
    const Strategy& s = sigma ? *sigma : tau->tau;
    if (survives_all_plays(g, s, &plays)) ++ok;
    i_won += i_wins;
  }
  std::ostringstream d;
  d << ok << "/" << total << " games (" << i_won << " won by I, " << plays << " plays enumerated)";
  return {ok == total, d.str()};
}

// 6. good_witness against exhaustive sub-quasi-strategy search.
Outcome witness_canonicity() {
  std::mt19937_64 rng(6);
  std::size_t checked = 0;
  std::size_t agree = 0;
  std::size_t none = 0;
  std::size_t tries = 0;
  while (checked < 80 && tries < 5000) {
    ++tries;
    const Game g(GameTree(2, 4), random_payoff(rng, 2, 4, 2, 2, 1 + static_cast<unsigned>(rng() % 4)));
    // Inside T' every leaf is already outside A, so a witness always
    // exists there. Other host trees exercise the case without one.
    const auto t_prime = non_losing_subtree(g);
    std::vector<GameTree::Node> roots;
    for (GameTree::Node n = 0; n < g.tree().size(); ++n) {
      if (g.tree().depth_of(n) % 2 == 0 && !g.tree().is_leaf(n)) roots.push_back(n);
    }
    const GameTree::Node p = roots[rng() % roots.size()];
    const bool use_t_prime = t_prime && t_prime->in[p] && rng() % 3 == 0;
    const QuasiStrategy host = use_t_prime ? restrict_to(g.tree(), *t_prime, p) : random_quasi_strategy(rng, g.tree(), p);
    const std::size_t block = rng() % g.block_count();
    const auto all = all_sub_quasi_strategies(g.tree(), host, p, 200);
    if (!all) continue;
    ++checked;
    std::vector<const NodeSet*> witnesses;
    for (const auto& s : *all) {
      bool avoids = true;
      for (GameTree::Node n = 0; n < g.tree().size(); ++n) {
        if (s[n] && g.tree().is_leaf(n) && g.in_block(n, block)) avoids = false;
      }
      if (avoids && !i_wins_inside(g, s, p)) witnesses.push_back(&s);
    }
    const auto w = good_witness(g, host, block, p);
    bool same = w.has_value() == !witnesses.empty();
    if (w && same) {
      // The returned witness is one of them and contains all the others.
      bool found = false;
      for (const NodeSet* s : witnesses) {
        found = found || *s == w->in;
        for (GameTree::Node n = 0; n < g.tree().size(); ++n) {
          if ((*s)[n] && !w->in[n]) same = false;
        }
      }
      same = same && found;
    }
    none += !w;
    agree += same;
  }
  std::ostringstream d;
  d << agree << "/" << checked << " instances agree (" << none << " without a witness)";
  return {checked >= 50 && agree == checked && none > 0 && none < checked, d.str()};
}

// 7. staged_search against the single-stage pipeline.
Outcome staged_equivalence() {
  std::mt19937_64 rng(8);
  std::size_t checked = 0;
  std::size_t agree = 0;
  std::size_t instability = 0;
  for (std::size_t i = 0; i < 60; ++i) {
    const unsigned b = 2 + static_cast<unsigned>(rng() % 2);
    const unsigned d = 2 * (1 + static_cast<unsigned>(rng() % 2));
    const Game g(GameTree(b, d), random_payoff(rng, b, d, 3, 3));
    std::vector<std::size_t> schedule;
    for (std::size_t m = 1; m <= g.payoff().max_conjuncts(); ++m) {
      if (m == g.payoff().max_conjuncts() || rng() % 2) schedule.push_back(m);
    }
    const SearchResult r = staged_search(g, schedule);
    const auto tau = synthesize_tau(g);
    const Strategy single = tau ? tau->tau : extract_sigma(g);
    ++checked;
    bool same = r.strategy.player == single.player;
    for (auto n : reached_positions(g, single)) {
      if (g.tree().is_leaf(n) || g.tree().to_move(n) != single.player) continue;
      auto a = r.strategy.moves.find(n);
      same = same && a != r.strategy.moves.end() && a->second == single.moves.at(n);
    }
    agree += same;
    for (const auto& e : r.events) instability += e.kind == "1" || e.kind == "unstable";
  }
  // Constructed instance: stage 2 is stable, so the search descends, and
  // the third conjunct then changes T'.
  Payoff a;
  a.blocks = {{{{0, 0}, {1, 0}}, {{0, 0}, {1, 0}}, {{0, 0}}}};
  const Game g(GameTree(2, 2), a);
  const SearchResult r = staged_search(g, {1, 2, 3});
  bool case1 = false;
  for (const auto& e : r.events) case1 = case1 || e.kind == "1";
  const auto tau = synthesize_tau(g);
  const bool constructed_ok = case1 && tau && r.strategy == tau->tau && survives_all_plays(g, r.strategy);
  std::ostringstream d;
  d << agree << "/" << checked << " schedules agree, " << instability << " instability events; constructed Case 1 "
    << (constructed_ok ? "fired" : "did not fire");
  return {checked >= 50 && agree == checked && constructed_ok, d.str()};
}

// 8. liminf and blank rules classify the corpus identically.
Outcome variant_robustness() {
  const Registry reg = default_registry();
  std::size_t differ = 0;
  std::string which;
  const auto entries = default_corpus();
  for (const auto& e : entries) {
    FeedbackLimits liminf;
    liminf.run.variant = LimitVariant::LiminfCells;
    FeedbackLimits blank;
    blank.run.variant = LimitVariant::BlankOnAmbiguity;
    const Classification a = classify(reg, e, liminf);
    const Classification b = classify(reg, e, blank);
    bool same = a.verdict == b.verdict;
    if (same && (a.verdict == "HALTED" || a.verdict == "SETTLED")) same = as_bits(a.output) == as_bits(b.output);
    if (!same) {
      ++differ;
      which += " " + e.name;
    }
  }
  std::ostringstream d;
  d << entries.size() << " entries, " << differ << " classified differently" << which;
  return {differ == 0, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
    double limit_seconds;
  };
  const Criterion criteria[] = {
      {"limit rule matches brute-force liminf", limit_rule_oracle, 10},
      {"corpus verdict suite", corpus_suite, 5},
      {"absolute length matches schedule oracle", h_oracle, 1},
      {"delta fixed point matches feedback engine", delta_vs_engine, 10},
      {"finite determinacy with verified strategies", determinacy, 60},
      {"witness canonicity", witness_canonicity, 30},
      {"staged search matches single stage", staged_equivalence, 60},
      {"limit variants agree on corpus", variant_robustness, 5},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.limit_seconds;
    failures += !pass;
    std::printf("[%s] %d. %s: %s (%.3f s, limit %.0f s)\n", pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str(),
                secs, c.limit_seconds);
  }
  std::printf("%d/%d criteria pass\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
