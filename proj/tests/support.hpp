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

// Helpers shared by the unit tests and the acceptance binary. The oracles
// here deliberately avoid the library's own solvers.

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ittm/feedback.hpp"
#include "ittm/games.hpp"
#include "ittm/machine.hpp"

namespace ittm::testing {

/// A 3-tape program with `n` states, the last of which halts. State 0 is the
/// start and the limit state. Halting transitions are rare.
inline Program random_program(std::mt19937_64& rng, unsigned n) {
  Program p;
  p.tape_count = 3;
  for (unsigned s = 0; s < n; ++s) p.states.push_back("q" + std::to_string(s));
  p.start = 0;
  p.halt = n - 1;
  p.limit = 0;
  p.table.assign(n * p.pattern_count(), std::nullopt);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> write(-1, 1);
  std::uniform_int_distribution<unsigned> next(0, n - 2);
  std::uniform_int_distribution<int> percent(0, 99);
  for (StateId s = 0; s + 1 < n; ++s) {
    for (unsigned pat = 0; pat < p.pattern_count(); ++pat) {
      Rule r;
      r.next = percent(rng) < 5 ? p.halt : next(rng);
      for (auto& w : r.write) w = static_cast<std::int8_t>(write(rng));
      r.move = coin(rng) ? Move::Right : Move::Left;
      p.rule(s, pat) = r;
    }
  }
  return p;
}

/// Brute-force limit tapes: simulates `periods` full periods from the cycle
/// start and takes per-cell minima over the last `periods - 1` of them. A
/// cell that takes two values becomes blank when `blank` is set.
inline std::array<Tape, 3> brute_force_limit(const Program& p, const Snapshot& start, std::uint64_t period,
                                             unsigned periods, bool blank) {
  std::vector<Snapshot> seen{start};
  for (std::uint64_t k = 0; k < period * periods; ++k) seen.push_back(step(p, seen.back()));
  std::size_t width = 1;
  for (const auto& s : seen) {
    width = std::max(width, s.head + 1);
    for (const auto& t : s.tapes) width = std::max(width, t.horizon());
  }
  std::array<Tape, 3> out;
  for (int t = 0; t < 3; ++t) {
    std::vector<std::uint8_t> cells(width, 0);
    for (std::size_t c = 0; c < width; ++c) {
      std::uint8_t lo = 1;
      std::uint8_t hi = 0;
      for (std::size_t k = period; k < seen.size(); ++k) {
        const std::uint8_t v = seen[k].tapes[t].get(c) == kOne ? 1 : 0;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      cells[c] = blank && lo != hi ? kBlank : lo;
    }
    out[t] = Tape(cells, {kZero});
  }
  return out;
}

// ---- games -------------------------------------------------------------

/// Leaf membership straight from the stems.
inline bool in_block_by_stems(const Payoff& a, std::size_t block, const Position& leaf) {
  for (const auto& conjunct : a.blocks[block]) {
    bool hit = false;
    for (const auto& stem : conjunct) {
      if (stem.size() <= leaf.size() && std::equal(stem.begin(), stem.end(), leaf.begin())) hit = true;
    }
    if (!hit) return false;
  }
  return true;
}

inline bool in_payoff_by_stems(const Payoff& a, const Position& leaf) {
  for (std::size_t n = 0; n < a.blocks.size(); ++n) {
    if (in_block_by_stems(a, n, leaf)) return true;
  }
  return false;
}

/// Recursive minimax over positions; true when I wins from p.
inline bool i_wins_minimax(const Payoff& a, unsigned b, unsigned d, Position& p) {
  if (p.size() == d) return in_payoff_by_stems(a, p);
  const bool i_moves = p.size() % 2 == 0;
  for (unsigned m = 0; m < b; ++m) {
    p.push_back(m);
    const bool w = i_wins_minimax(a, b, d, p);
    p.pop_back();
    if (i_moves && w) return true;
    if (!i_moves && !w) return false;
  }
  return !i_moves;
}

/// Plays `s` against every opposing line. True when every play ends in the
/// owner's favour and the strategy is defined wherever it is needed.
inline bool survives_all_plays(const Game& g, const Strategy& s, std::size_t* plays = nullptr) {
  const GameTree& t = g.tree();
  const Payoff& a = g.payoff();
  const bool owner_is_i = s.player == Player::I;
  std::function<bool(Position&)> go = [&](Position& p) {
    if (p.size() == t.depth()) {
      if (plays) ++*plays;
      return in_payoff_by_stems(a, p) == owner_is_i;
    }
    const bool owner_moves = (p.size() % 2 == 0) == owner_is_i;
    if (owner_moves) {
      auto it = s.moves.find(t.node(p));
      if (it == s.moves.end() || it->second >= t.branching()) return false;
      p.push_back(it->second);
      const bool ok = go(p);
      p.pop_back();
      return ok;
    }
    for (unsigned m = 0; m < t.branching(); ++m) {
      p.push_back(m);
      const bool ok = go(p);
      p.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  Position root;
  return go(root);
}

/// Stems are at most `max_stem` long (0: the depth).
inline Payoff random_payoff(std::mt19937_64& rng, unsigned b, unsigned d, unsigned max_blocks, unsigned max_conjuncts,
                            unsigned max_stem = 0) {
  std::uniform_int_distribution<unsigned> blocks(1, max_blocks);
  std::uniform_int_distribution<unsigned> conjuncts(1, max_conjuncts);
  std::uniform_int_distribution<unsigned> stems(1, 3);
  std::uniform_int_distribution<unsigned> len(1, max_stem == 0 ? d : std::min(max_stem, d));
  std::uniform_int_distribution<unsigned> move(0, b - 1);
  Payoff a;
  a.blocks.resize(blocks(rng));
  for (auto& block : a.blocks) {
    block.resize(conjuncts(rng));
    for (auto& conjunct : block) {
      const unsigned k = stems(rng);
      for (unsigned i = 0; i < k; ++i) {
        Position stem(len(rng));
        for (auto& m : stem) m = move(rng);
        conjunct.push_back(stem);
      }
    }
  }
  return a;
}

/// Every quasi-strategy for II inside `s` rooted at p, as member sets.
/// Gives up (nullopt) past `cap` members.
inline std::optional<std::vector<NodeSet>> all_sub_quasi_strategies(const GameTree& t, const QuasiStrategy& s,
                                                                   GameTree::Node p, std::size_t cap) {
  using Sets = std::vector<std::vector<GameTree::Node>>;
  bool overflow = false;
  std::function<Sets(GameTree::Node)> below = [&](GameTree::Node n) -> Sets {
    if (overflow) return {};
    if (t.is_leaf(n)) return {{n}};
    std::vector<GameTree::Node> kids;
    for (unsigned m = 0; m < t.branching(); ++m) {
      if (s.in[t.child(n, m)]) kids.push_back(t.child(n, m));
    }
    const auto product = [&](const std::vector<GameTree::Node>& chosen) {
      Sets acc{{n}};
      for (auto c : chosen) {
        const Sets sub = below(c);
        Sets next;
        for (const auto& x : acc) {
          for (const auto& y : sub) {
            auto z = x;
            z.insert(z.end(), y.begin(), y.end());
            next.push_back(std::move(z));
            if (next.size() > cap) overflow = true;
          }
        }
        if (overflow) return Sets{};
        acc = std::move(next);
      }
      return acc;
    };
    if (t.to_move(n) == Player::I) {
      // A quasi-strategy keeps every I move; a missing one leaves nothing.
      if (kids.size() != t.branching()) return {};
      return product(kids);
    }
    Sets out;
    for (unsigned mask = 1; mask < (1u << kids.size()); ++mask) {
      std::vector<GameTree::Node> chosen;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (mask >> i & 1) chosen.push_back(kids[i]);
      }
      for (auto& x : product(chosen)) out.push_back(std::move(x));
      if (out.size() > cap) overflow = true;
      if (overflow) return {};
    }
    return out;
  };
  if (!s.in[p]) return std::vector<NodeSet>{};
  const Sets sets = below(p);
  if (overflow) return std::nullopt;
  std::vector<NodeSet> result;
  for (const auto& members : sets) {
    NodeSet in(t.size(), 0);
    for (auto n : members) in[n] = 1;
    result.push_back(std::move(in));
  }
  return result;
}

/// A random quasi-strategy for II below p: each II child kept with
/// probability 1/2, at least one kept.
inline QuasiStrategy random_quasi_strategy(std::mt19937_64& rng, const GameTree& t, GameTree::Node p) {
  QuasiStrategy s{p, NodeSet(t.size(), 0)};
  s.in[p] = 1;
  for (GameTree::Node n = p; n < t.size(); ++n) {
    if (!s.in[n] || t.is_leaf(n)) continue;
    if (t.to_move(n) == Player::I) {
      for (unsigned m = 0; m < t.branching(); ++m) s.in[t.child(n, m)] = 1;
      continue;
    }
    const unsigned forced = static_cast<unsigned>(rng() % t.branching());
    for (unsigned m = 0; m < t.branching(); ++m) s.in[t.child(n, m)] = m == forced || rng() % 2;
  }
  return s;
}

/// Minimax restricted to a member set, from p.
inline bool i_wins_inside(const Game& g, const NodeSet& in, GameTree::Node n) {
  const GameTree& t = g.tree();
  if (t.is_leaf(n)) return g.in_payoff(n);
  const bool i_moves = t.to_move(n) == Player::I;
  for (unsigned m = 0; m < t.branching(); ++m) {
    const auto c = t.child(n, m);
    if (!in[c]) continue;
    const bool w = i_wins_inside(g, in, c);
    if (i_moves && w) return true;
    if (!i_moves && !w) return false;
  }
  return !i_moves;
}

// ---- computation trees --------------------------------------------------

/// A random ordinal below w^2 * 3 with a small finite part.
inline Ordinal random_small_ordinal(std::mt19937_64& rng, bool allow_infinite) {
  std::uniform_int_distribution<int> kind(0, allow_infinite ? 3 : 0);
  std::uniform_int_distribution<std::uint64_t> n(0, 6);
  switch (kind(rng)) {
    case 1: return Ordinal::omega() + Ordinal(n(rng));
    case 2: return Ordinal::term(Ordinal(1), 1 + n(rng) % 2) + Ordinal(n(rng));
    case 3: return Ordinal::term(Ordinal(2)) + Ordinal::omega() + Ordinal(n(rng));
    default: return Ordinal(n(rng));
  }
}

/// Convergent tree of the given depth: each node gets 0..3 children with
/// strictly increasing query times and a local clock past the last query.
inline CompNode random_comp_node(std::mt19937_64& rng, unsigned depth, bool mixed) {
  CompNode node;
  node.f = rng() % 8;
  node.verdict = VerdictKind::Halted;
  std::uniform_int_distribution<unsigned> kids(depth == 0 ? 0 : 1, depth == 0 ? 0 : 3);
  std::set<Ordinal> times;
  const unsigned k = kids(rng);
  while (times.size() < k) times.insert(random_small_ordinal(rng, mixed) + Ordinal(1));
  node.query_times.assign(times.begin(), times.end());
  for (unsigned i = 0; i < k; ++i) node.children.push_back(random_comp_node(rng, depth - 1, mixed));
  const Ordinal last = node.query_times.empty() ? Ordinal(0) : node.query_times.back();
  node.local_clock = last + Ordinal(1) + random_small_ordinal(rng, mixed);
  return node;
}

/// Schedule oracle: walks the depth-first evaluation with an explicit stack,
/// emitting one segment per stretch of control, and adds them in order.
/// Leaves contribute their local clock; inner nodes contribute the local
/// time elapsed since they last held control, up to each query. With
/// `tail`, inner nodes also contribute the time after their last query.
inline Ordinal linearized_length(const CompNode& root, bool tail) {
  struct Frame {
    const CompNode* node;
    std::size_t next_child = 0;
    Ordinal local;  // local time already accounted for
  };
  std::vector<Ordinal> segments;
  std::vector<Frame> stack{{&root}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    const CompNode& n = *f.node;
    if (n.children.empty()) {
      segments.push_back(n.local_clock);
      stack.pop_back();
      continue;
    }
    if (f.next_child < n.children.size()) {
      const Ordinal& q = n.query_times[f.next_child];
      segments.push_back(ord_sub(q, f.local));
      f.local = q;
      const CompNode* child = &n.children[f.next_child++];
      stack.push_back({child});
      continue;
    }
    if (tail) segments.push_back(ord_sub(n.local_clock, f.local));
    stack.pop_back();
  }
  Ordinal total;
  for (const auto& s : segments) total = ord_add(total, s);
  return total;
}

}  // namespace ittm::testing
