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

// Command-line front end: runs, feedback trees, game solving and corpus checks.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ittm/assembly.hpp"
#include "ittm/corpus.hpp"
#include "ittm/feedback.hpp"
#include "ittm/games.hpp"
#include "ittm/json_io.hpp"
#include "ittm/verify.hpp"

namespace {

using namespace ittm;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

struct Common {
  bool json_mode = false;
  std::string corpus_dir;
};

struct RunArgs {
  std::string program;
  std::string input;
  std::uint64_t budget = 10000;
  unsigned tower = 3;
  std::uint64_t max_steps = 5'000'000;
  std::string variant;
  std::size_t window = kDefaultWindow;
  bool trace_steps = false;
  std::string oracle = "ej";
  unsigned max_depth = 32;
  std::string expect;
  std::string out;
  std::string level_at;
  bool tail = false;
};

Registry open_registry(const Common& c) {
  return Registry::load((c.corpus_dir.empty() ? default_corpus_dir() : c.corpus_dir) + "/registry.json");
}

/// A registry id, a registry name, or a path to a .itm file (added to the
/// registry under a fresh id).
std::uint64_t resolve_program(Registry& reg, const std::string& what) {
  if (!what.empty() && what.find_first_not_of("0123456789") == std::string::npos) {
    const std::uint64_t id = std::stoull(what);
    if (!reg.contains(id)) throw Error("no program with id " + what);
    return id;
  }
  if (auto id = reg.find(what)) return *id;
  std::uint64_t fresh = 0;
  for (auto id : reg.ids()) fresh = std::max(fresh, id + 1);
  reg.add(fresh, what, load_program(what));
  return fresh;
}

RunOptions run_options(const RunArgs& a) {
  RunOptions o;
  o.budget_per_level = a.budget;
  o.max_limit_tower = a.tower;
  o.max_total_steps = a.max_steps;
  o.trace_steps = a.trace_steps;
  if (!a.variant.empty()) o.variant = parse_variant(a.variant);
  return o;
}

FeedbackLimits feedback_limits(const RunArgs& a) {
  FeedbackLimits l;
  l.run = run_options(a);
  l.oracle = parse_oracle_kind(a.oracle);
  l.max_depth = a.max_depth;
  return l;
}

std::string expected_verdict(const std::string& e) {
  if (e == "halted") return "HALTED";
  if (e == "settled") return "SETTLED";
  if (e == "looping") return "LOOPING_UNSETTLED";
  if (e == "budget") return "BUDGET_EXCEEDED";
  if (e == "convergent") return "CONVERGENT";
  if (e == "divergent") return "DIVERGENT_DETECTED";
  throw Error("unknown --expect value '" + e + "'");
}

void add_run_flags(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--input", a.input, "Input tape, e.g. 101 or 0(10)");
  cmd->add_option("--budget", a.budget, "Steps per level between limits")->check(CLI::PositiveNumber);
  cmd->add_option("--tower", a.tower, "Nested limit levels");
  cmd->add_option("--max-steps", a.max_steps, "Cap on successor steps over the whole run");
  cmd->add_option("--variant", a.variant, "Limit rule: liminf, blank or instruction");
  cmd->add_option("--oracle", a.oracle, "Oracle answering queries: ej, ij or e");
  cmd->add_option("--max-depth", a.max_depth, "Deepest nested query");
}

int cmd_run(const Common& c, const RunArgs& a) {
  Registry reg = open_registry(c);
  const std::uint64_t id = resolve_program(reg, a.program);
  const Program& p = reg.program(id);
  const FeedbackLimits limits = feedback_limits(a);
  const Oracle oracle = [&](const Snapshot& s) -> std::optional<bool> {
    const Query q = decode_query(s);
    const OracleAnswer ans = eval_oracle(reg, limits.oracle, q.f, q.y, limits);
    if (ans.kind != OracleAnswer::Kind::Bit) return std::nullopt;
    return ans.bit;
  };
  const RunResult r = run_transfinite(p, Tape::parse(a.input), limits.run, &oracle);
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw Error("cannot write " + a.out);
  }
  std::ostream& trace_out = a.out.empty() ? std::cout : file;
  for (const auto& e : r.trace) {
    if (c.json_mode || !a.out.empty()) {
      trace_out << trace_event_json(p, e, a.window).dump() << '\n';
    } else {
      std::cout << to_string(e.kind) << " " << ord_print(e.snapshot.stage) << " state=" << p.state_name(e.snapshot.state)
                << " head=" << e.snapshot.head << " level=" << e.level;
      if (!e.detail.empty()) std::cout << " (" << e.detail << ")";
      std::cout << '\n';
    }
  }
  if (c.json_mode) {
    json v = verdict_json(r.verdict);
    if (r.blocked) v["blocked"] = true;
    std::cout << v.dump() << '\n';
  } else {
    std::cout << to_string(r.verdict.kind) << " at " << ord_print(r.verdict.at);
    if (r.verdict.loop) std::cout << ", loop (" << ord_print(r.verdict.loop->start) << ", " << ord_print(r.verdict.loop->period) << ")";
    std::cout << "\noutput: " << (r.verdict.output.to_string().empty() ? "0" : r.verdict.output.to_string()) << '\n';
  }
  if (!a.expect.empty() && expected_verdict(a.expect) != to_string(r.verdict.kind)) return kNegative;
  return kOk;
}

int cmd_feedback(const Common& c, const RunArgs& a, bool dump_tree) {
  Registry reg = open_registry(c);
  const std::uint64_t id = resolve_program(reg, a.program);
  const FeedbackLimits limits = feedback_limits(a);
  CompTree tree = run_feedback(reg, id, Tape::parse(a.input), limits);
  std::optional<Ordinal> h, h_tail;
  if (tree.status == TreeStatus::Convergent) {
    h = absolute_length(tree, false);
    h_tail = absolute_length(tree, true);
  }
  std::optional<unsigned> level;
  if (!a.level_at.empty()) {
    const Ordinal at = ord_parse(a.level_at);
    level = a.tail && at.is_limit() ? level_liminf(tree, at) : level_at(tree, at);
  }
  const std::string root_verdict = tree.root.verdict ? to_string(*tree.root.verdict) : "none";
  if (c.json_mode || dump_tree) {
    json j = dump_tree ? tree_to_json(tree) : json{{"status", to_string(tree.status)}, {"oracle", to_string(tree.oracle)}};
    if (!dump_tree) {
      j["verdict"] = root_verdict;
      if (tree.status == TreeStatus::Convergent) j["bit"] = tree.oracle == OracleKind::IJ ? root_verdict == "HALTED" : root_verdict == "HALTED" || root_verdict == "SETTLED";
      if (!tree.reason.empty()) j["reason"] = tree.reason;
    }
    if (h) j["H"] = ord_print(*h);
    if (h_tail) j["H_tail"] = ord_print(*h_tail);
    j["leaf_length"] = "desk-sigma";
    if (level) j["level"] = *level;
    std::cout << (c.json_mode ? j.dump() : j.dump(2)) << '\n';
  } else {
    std::cout << to_string(tree.status) << " (oracle " << to_string(tree.oracle) << ")\n";
    if (tree.status == TreeStatus::Convergent) std::cout << "root verdict: " << root_verdict << " at " << ord_print(tree.root.local_clock) << '\n';
    if (!tree.reason.empty()) std::cout << "reason: " << tree.reason << '\n';
    for (const auto& link : tree.divergence_witness) std::cout << "  chain: (" << link.f << ", " << link.y.to_string() << ")\n";
    if (h) std::cout << "H = " << ord_print(*h) << " (desk-sigma leaves), tail-inclusive " << ord_print(*h_tail) << '\n';
    if (level) std::cout << "level: " << *level << '\n';
  }
  if (!a.expect.empty()) {
    const std::string want = expected_verdict(a.expect);
    const bool ok = want == to_string(tree.status) || (tree.status == TreeStatus::Convergent && want == root_verdict);
    if (!ok) return kNegative;
  }
  return kOk;
}

int cmd_solve(const Common& c, const std::string& game_path, const std::string& out) {
  const Game g = load_game(game_path);
  Strategy s;
  const Player w = winner(g, {});
  json j{{"winner", to_string(w)}};
  if (w == Player::II) {
    auto tau = synthesize_tau(g);
    s = tau->tau;
    j["handled_blocks"] = tau->handled_blocks;
  } else {
    s = extract_sigma(g);
  }
  const std::string failure = check_strategy(g, s);
  j["verified"] = failure.empty();
  j["strategy"] = strategy_to_json(g.tree(), s);
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw Error("cannot write " + out);
    f << strategy_to_json(g.tree(), s).dump(2) << '\n';
  }
  if (c.json_mode) {
    std::cout << j.dump() << '\n';
  } else {
    std::cout << "winner: " << to_string(w) << '\n' << "strategy " << (failure.empty() ? "verified" : "FAILED: " + failure) << '\n';
    for (const auto& [n, m] : s.moves) std::cout << "  [" << position_text(g.tree().position(n)) << "] -> " << m << '\n';
  }
  return failure.empty() ? kOk : kNegative;
}

int cmd_search(const Common& c, const std::string& game_path, const std::vector<std::size_t>& schedule,
               const std::string& events_path) {
  const Game g = load_game(game_path);
  const SearchResult r = staged_search(g, schedule);
  std::ofstream file;
  if (!events_path.empty()) {
    file.open(events_path);
    if (!file) throw Error("cannot write " + events_path);
  }
  for (const auto& e : r.events) {
    if (file.is_open()) file << event_to_json(e).dump() << '\n';
    if (c.json_mode && !file.is_open()) {
      std::cout << event_to_json(e).dump() << '\n';
    } else if (!c.json_mode) {
      std::cout << "stage " << e.stage << " level " << e.level << " case " << e.kind << ": " << e.detail << '\n';
    }
  }
  const std::string failure = check_strategy(g, r.strategy);
  if (c.json_mode) {
    std::cout << json{{"result", r.winner == Player::I ? "SIGMA" : "TAU"},
                      {"verified", failure.empty()},
                      {"strategy", strategy_to_json(g.tree(), r.strategy)}}
                     .dump()
              << '\n';
  } else {
    std::cout << (r.winner == Player::I ? "SIGMA" : "TAU") << (failure.empty() ? " (verified)" : " FAILED: " + failure) << '\n';
  }
  return failure.empty() ? kOk : kNegative;
}

int cmd_play(const std::string& game_path, const std::string& as) {
  const Game g = load_game(game_path);
  const GameTree& t = g.tree();
  const Player human = parse_player(as);
  const Player engine = human == Player::I ? Player::II : Player::I;
  const Player w = winner(g, {});
  Strategy s;
  if (w == engine) {
    s = engine == Player::II ? synthesize_tau(g)->tau : extract_sigma(g);
  }
  std::cout << "You play " << to_string(human) << "; moves are 0.." << t.branching() - 1 << ".\n";
  if (w != engine) std::cout << "(You can win this game.)\n";
  const NodeSet i_wins = solve(g, full_subtree(t, t.root()));
  GameTree::Node n = t.root();
  while (!t.is_leaf(n)) {
    if (t.to_move(n) == engine) {
      unsigned m = 0;
      if (auto it = s.moves.find(n); it != s.moves.end()) {
        m = it->second;
      } else {
        // Off the strategy: take the least move the engine does not lose.
        for (unsigned k = 0; k < t.branching(); ++k) {
          if ((i_wins[t.child(n, k)] != 0) == (engine == Player::I)) {
            m = k;
            break;
          }
        }
      }
      std::cout << "engine plays " << m << '\n';
      n = t.child(n, m);
      continue;
    }
    std::cout << "[" << position_text(t.position(n)) << "] your move: " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) {
      std::cout << "\nno move given\n";
      return kNegative;
    }
    unsigned m = 0;
    std::istringstream in(line);
    std::string rest;
    if (!(in >> m) || (in >> rest) || m >= t.branching()) {
      std::cout << "illegal move '" << line << "'\n";
      continue;
    }
    n = t.child(n, m);
  }
  const Player won = g.in_payoff(n) ? Player::I : Player::II;
  std::cout << "play [" << position_text(t.position(n)) << "] " << (g.in_payoff(n) ? "is" : "is not") << " in A: " << to_string(won)
            << " wins\n";
  return kOk;
}

int cmd_corpus_verify(const Common& c) {
  const std::string dir = c.corpus_dir.empty() ? default_corpus_dir() : c.corpus_dir;
  const Registry reg = Registry::load(dir + "/registry.json");
  auto entries = load_corpus(dir + "/corpus.json");
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  bool all = true;
  for (const auto& e : entries) {
    const EntryCheck r = verify_entry(reg, e);
    all = all && r.pass;
    if (c.json_mode) {
      std::cout << json{{"name", r.name}, {"pass", r.pass}, {"observed", r.observed}, {"mismatches", r.mismatches}}.dump() << '\n';
    } else {
      std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name << std::string(r.name.size() < 18 ? 18 - r.name.size() : 1, ' ')
                << r.observed << '\n';
      for (const auto& m : r.mismatches) std::cout << "      " << m << '\n';
    }
  }
  if (!c.json_mode) std::cout << (all ? "all entries pass" : "some entries FAIL") << '\n';
  return all ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ittmlab: transfinite machine runs, feedback trees and finite games"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_flag("--json", common.json_mode, "Machine-readable output");
  app.add_option("--corpus", common.corpus_dir, "Directory with registry.json and corpus.json");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run a program through its limit stages");
  run->add_option("program", run_args.program, "Registry id, registry name or .itm file")->required();
  add_run_flags(run, run_args);
  run->add_option("--window", run_args.window, "Cells shown per tape in trace lines");
  run->add_flag("--trace-steps", run_args.trace_steps, "Also emit one line per successor step");
  run->add_option("--trace", run_args.out, "Write the JSON-lines trace to a file");
  run->add_option("--expect", run_args.expect, "Exit 1 unless the verdict is halted|settled|looping|budget");

  RunArgs fb_args;
  auto* feedback = app.add_subcommand("feedback", "Evaluate a program with oracle queries answered depth first");
  feedback->add_option("program", fb_args.program, "Registry id, registry name or .itm file")->required();
  add_run_flags(feedback, fb_args);
  feedback->add_option("--expect", fb_args.expect, "Exit 1 unless the result is convergent|divergent|budget|halted|...");

  RunArgs tree_args;
  auto* tree = app.add_subcommand("tree", "Dump the computation tree with H per node");
  tree->add_option("program", tree_args.program, "Registry id, registry name or .itm file")->required();
  add_run_flags(tree, tree_args);
  tree->add_option("--level-at", tree_args.level_at, "Report the control level at this absolute stage");
  tree->add_flag("--liminf", tree_args.tail, "With --level-at on a limit stage, report the liminf of earlier levels");

  std::string game_path, strategy_out, events_out, as = "I";
  std::vector<std::size_t> schedule;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a finite game and print a verified strategy");
  solve_cmd->add_option("game", game_path, "Game JSON file")->required();
  solve_cmd->add_option("--out", strategy_out, "Write the strategy JSON here");

  auto* search = app.add_subcommand("search", "Staged search over payoff approximations");
  search->add_option("game", game_path, "Game JSON file")->required();
  search->add_option("--schedule", schedule, "Increasing conjunct counts, ending at the maximum")->delimiter(',');
  search->add_option("--events", events_out, "Write the JSON-lines event log here");

  auto* play = app.add_subcommand("play", "Play against the synthesized strategy");
  play->add_option("game", game_path, "Game JSON file")->required();
  play->add_option("--as", as, "Your side: I or II");

  auto* verify = app.add_subcommand("corpus-verify", "Check every corpus entry against its expected results");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  try {
    if (run->parsed()) return cmd_run(common, run_args);
    if (feedback->parsed()) return cmd_feedback(common, fb_args, false);
    if (tree->parsed()) return cmd_feedback(common, tree_args, true);
    if (solve_cmd->parsed()) return cmd_solve(common, game_path, strategy_out);
    if (search->parsed()) return cmd_search(common, game_path, schedule, events_out);
    if (play->parsed()) return cmd_play(game_path, as);
    if (verify->parsed()) return cmd_corpus_verify(common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
