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

#include "ittm/games.hpp"

#include <algorithm>
#include <fstream>

namespace ittm {

using Node = GameTree::Node;

std::string to_string(Player p) { return p == Player::I ? "I" : "II"; }

Player parse_player(std::string_view text) {
  if (text == "I") return Player::I;
  if (text == "II") return Player::II;
  throw Error("unknown player '" + std::string(text) + "' (expected I or II)");
}

std::string position_text(const Position& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

Position parse_position(std::string_view text) {
  Position p;
  if (text.empty()) return p;
  std::size_t i = 0;
  while (true) {
    if (i >= text.size() || text[i] < '0' || text[i] > '9') throw ParseError("expected a move number", 0, i + 1);
    unsigned v = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
      v = v * 10 + static_cast<unsigned>(text[i] - '0');
      if (v > 1000000) throw ParseError("move number too large", 0, i + 1);
      ++i;
    }
    p.push_back(v);
    if (i == text.size()) return p;
    if (text[i] != '.') throw ParseError("expected '.'", 0, i + 1);
    ++i;
  }
}

GameTree::GameTree(unsigned branching, unsigned depth) : branching_(branching), depth_(depth) {
  if (branching == 0) throw Error("game tree: branching must be positive");
  if (depth % 2 != 0) throw Error("game tree: depth must be even");
  std::size_t level = 1;
  std::size_t total = 0;
  for (unsigned k = 0; k <= depth; ++k) {
    total += level;
    if (total > 4'000'000) throw Error("game tree: more than 4000000 nodes");
    level *= branching;
  }
  depth_of_.reserve(total);
  level = 1;
  for (unsigned k = 0; k <= depth; ++k) {
    depth_of_.insert(depth_of_.end(), level, k);
    level *= branching;
  }
}

bool GameTree::is_prefix(Node a, Node b) const {
  while (depth_of_[b] > depth_of_[a]) b = parent(b);
  return a == b;
}

Position GameTree::position(Node n) const {
  Position p(depth_of_[n]);
  for (std::size_t i = p.size(); i-- > 0;) {
    p[i] = move_of(n);
    n = parent(n);
  }
  return p;
}

Node GameTree::node(const Position& p) const {
  if (p.size() > depth_) throw Error("position " + position_text(p) + " is deeper than the tree");
  Node n = root();
  for (unsigned m : p) {
    if (m >= branching_) throw Error("position " + position_text(p) + " has a move outside 0.." + std::to_string(branching_ - 1));
    n = child(n, m);
  }
  return n;
}

std::size_t Payoff::max_conjuncts() const {
  std::size_t m = 0;
  for (const auto& b : blocks) m = std::max(m, b.size());
  return m;
}

Payoff Payoff::truncated(std::size_t m) const {
  Payoff out = *this;
  for (auto& b : out.blocks) {
    if (b.size() > m) b.resize(m);
  }
  return out;
}

Game::Game(GameTree tree, Payoff payoff) : tree_(std::move(tree)), payoff_(std::move(payoff)) {
  if (payoff_.blocks.size() > 32) throw Error("payoff: at most 32 blocks");
  block_mask_.assign(tree_.size(), 0);
  std::vector<std::vector<std::vector<Node>>> stems(payoff_.blocks.size());
  for (std::size_t n = 0; n < payoff_.blocks.size(); ++n) {
    for (const auto& conj : payoff_.blocks[n]) {
      auto& out = stems[n].emplace_back();
      for (const auto& stem : conj) out.push_back(tree_.node(stem));
    }
  }
  for (Node leaf = 0; leaf < tree_.size(); ++leaf) {
    if (!tree_.is_leaf(leaf)) continue;
    for (std::size_t n = 0; n < stems.size(); ++n) {
      bool all = true;
      for (const auto& conj : stems[n]) {
        bool any = false;
        for (Node s : conj) any = any || tree_.is_prefix(s, leaf);
        all = all && any;
      }
      if (all) block_mask_[leaf] |= 1u << n;
    }
  }
}

bool Game::in_block(Node leaf, std::size_t n) const { return n < 32 && ((block_mask_[leaf] >> n) & 1u); }

Game parse_game(const nlohmann::json& doc) {
  try {
    const unsigned b = doc.at("branching").get<unsigned>();
    const unsigned d = doc.at("depth").get<unsigned>();
    Payoff payoff;
    for (const auto& block : doc.at("blocks")) {
      auto& out = payoff.blocks.emplace_back();
      for (const auto& conj : block) {
        auto& stems = out.emplace_back();
        for (const auto& stem : conj) stems.push_back(parse_position(stem.get<std::string>()));
      }
    }
    return Game(GameTree(b, d), std::move(payoff));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("game file: ") + e.what());
  }
}

Game load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return parse_game(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

nlohmann::json game_to_json(const Game& g) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : g.payoff().blocks) {
    nlohmann::json conjs = nlohmann::json::array();
    for (const auto& c : b) {
      nlohmann::json stems = nlohmann::json::array();
      for (const auto& s : c) stems.push_back(position_text(s));
      conjs.push_back(stems);
    }
    blocks.push_back(conjs);
  }
  return {{"branching", g.tree().branching()}, {"depth", g.tree().depth()}, {"blocks", blocks}};
}

std::size_t QuasiStrategy::count() const {
  std::size_t c = 0;
  for (char v : in) c += v != 0;
  return c;
}

QuasiStrategy full_subtree(const GameTree& t, Node p) {
  QuasiStrategy s{p, NodeSet(t.size(), 0)};
  s.in[p] = 1;
  for (Node n = p + 1; n < t.size(); ++n) s.in[n] = s.in[t.parent(n)];
  return s;
}

QuasiStrategy restrict_to(const GameTree& t, const QuasiStrategy& s, Node p) {
  QuasiStrategy r{p, NodeSet(t.size(), 0)};
  r.in[p] = s.in[p];
  for (Node n = p + 1; n < t.size(); ++n) r.in[n] = s.in[n] && r.in[t.parent(n)];
  return r;
}

bool is_quasi_strategy(const GameTree& t, const QuasiStrategy& s) {
  if (s.in.size() != t.size() || !s.in[s.root]) return false;
  for (Node n = 0; n < t.size(); ++n) {
    if (!s.in[n]) continue;
    if (n != s.root && (n < s.root || !s.in[t.parent(n)])) return false;
    if (t.is_leaf(n)) continue;
    unsigned kept = 0;
    for (unsigned m = 0; m < t.branching(); ++m) kept += s.in[t.child(n, m)] != 0;
    if (t.to_move(n) == Player::I ? kept != t.branching() : kept == 0) return false;
  }
  return true;
}

NodeSet solve(const Game& g, const QuasiStrategy& s) {
  const GameTree& t = g.tree();
  NodeSet win(t.size(), 0);
  for (Node n = static_cast<Node>(t.size()); n-- > s.root;) {
    if (!s.in[n]) continue;
    if (t.is_leaf(n)) {
      win[n] = g.in_payoff(n);
      continue;
    }
    const bool i_moves = t.to_move(n) == Player::I;
    bool result = !i_moves;
    for (unsigned m = 0; m < t.branching(); ++m) {
      const Node c = t.child(n, m);
      if (!s.in[c]) continue;
      if (i_moves && win[c]) result = true;
      if (!i_moves && !win[c]) result = false;
    }
    win[n] = result;
  }
  return win;
}

Player winner(const Game& g, const Position& p) {
  const Node n = g.tree().node(p);
  return solve(g, full_subtree(g.tree(), n))[n] ? Player::I : Player::II;
}

NodeSet non_losing_positions(const Game& g) {
  NodeSet win = solve(g, full_subtree(g.tree(), g.tree().root()));
  for (auto& v : win) v = !v;
  return win;
}

std::optional<QuasiStrategy> non_losing_in(const Game& g, const QuasiStrategy& s) {
  const GameTree& t = g.tree();
  const NodeSet win = solve(g, s);
  if (win[s.root]) return std::nullopt;
  QuasiStrategy r{s.root, NodeSet(t.size(), 0)};
  r.in[s.root] = 1;
  for (Node n = s.root + 1; n < t.size(); ++n) r.in[n] = s.in[n] && !win[n] && r.in[t.parent(n)];
  return r;
}

std::optional<QuasiStrategy> non_losing_subtree(const Game& g, const Position& root) {
  return non_losing_in(g, full_subtree(g.tree(), g.tree().node(root)));
}

std::optional<QuasiStrategy> good_witness(const Game& g, const QuasiStrategy& t_prime, std::size_t block, Node p) {
  const GameTree& t = g.tree();
  if (!t_prime.in[p]) throw Error("good_witness: position " + position_text(t.position(p)) + " is not in the tree");
  // Safety: II can keep every play inside t_prime and out of the block.
  NodeSet safe(t.size(), 0);
  for (Node n = static_cast<Node>(t.size()); n-- > p;) {
    if (!t_prime.in[n] || !t.is_prefix(p, n)) continue;
    if (t.is_leaf(n)) {
      safe[n] = !g.in_block(n, block);
      continue;
    }
    const bool i_moves = t.to_move(n) == Player::I;
    bool any = false;
    bool all = true;
    for (unsigned m = 0; m < t.branching(); ++m) {
      const Node c = t.child(n, m);
      if (!t_prime.in[c]) {
        if (i_moves) all = false;
        continue;
      }
      any = any || safe[c];
      all = all && safe[c];
    }
    safe[n] = i_moves ? all : any;
  }
  if (!safe[p]) return std::nullopt;
  QuasiStrategy s{p, NodeSet(t.size(), 0)};
  s.in[p] = 1;
  for (Node n = p + 1; n < t.size(); ++n) s.in[n] = safe[n] && s.in[t.parent(n)];
  if (solve(g, s)[p]) return std::nullopt;
  return s;
}

namespace {

QuasiStrategy require(std::optional<QuasiStrategy> s, const char* what) {
  if (!s) throw Error(std::string("synthesize_tau: ") + what);
  return std::move(*s);
}

TreeFamily first_family(const Game& g, const QuasiStrategy& t_prime) {
  TreeFamily f;
  f.depth = 1;
  FamilyEntry e;
  e.relevant = t_prime;
  e.witness = require(good_witness(g, t_prime, 0, t_prime.root), "root is not good");
  e.non_losing = require(non_losing_in(g, e.witness), "witness is lost for II");
  f.entries.emplace(t_prime.root, std::move(e));
  return f;
}

/// II's replies at the odd positions just below each entry: the least move
/// inside the entry's non-losing tree.
void tau_moves(const Game& g, const TreeFamily& f, Strategy& tau) {
  const GameTree& t = g.tree();
  for (const auto& [q, e] : f.entries) {
    if (t.is_leaf(q)) continue;
    for (unsigned a = 0; a < t.branching(); ++a) {
      const Node c = t.child(q, a);
      for (unsigned m = 0; m < t.branching(); ++m) {
        if (e.non_losing.in[t.child(c, m)]) {
          tau.moves[c] = m;
          break;
        }
      }
      if (!tau.moves.count(c)) throw Error("synthesize_tau: no non-losing reply at " + position_text(t.position(c)));
    }
  }
}

TreeFamily next_family(const Game& g, const TreeFamily& prev) {
  const GameTree& t = g.tree();
  Strategy tau;
  tau_moves(g, prev, tau);
  TreeFamily f;
  f.depth = prev.depth + 1;
  const std::size_t block = prev.depth;
  for (const auto& [q, e] : prev.entries) {
    for (unsigned a = 0; a < t.branching(); ++a) {
      const Node c = t.child(q, a);
      const Node p = t.child(c, tau.moves.at(c));
      FamilyEntry next;
      next.relevant = require(non_losing_in(g, restrict_to(t, e.witness, p)), "relevant position is lost for II");
      next.witness = require(good_witness(g, next.relevant, block, p), "relevant position is not good");
      next.non_losing = require(non_losing_in(g, next.witness), "witness is lost for II");
      f.entries.emplace(p, std::move(next));
    }
  }
  return f;
}

unsigned family_count(const Game& g) { return g.tree().depth() / 2; }

Strategy tau_from(const Game& g, const std::vector<TreeFamily>& families) {
  Strategy tau;
  tau.player = Player::II;
  for (const auto& f : families) tau_moves(g, f, tau);
  return tau;
}

}  // namespace

std::optional<TauResult> synthesize_tau(const Game& g) {
  auto t_prime = non_losing_subtree(g);
  if (!t_prime) return std::nullopt;
  TauResult r;
  r.non_losing = *t_prime;
  const unsigned k = family_count(g);
  if (k > 0) r.families.push_back(first_family(g, *t_prime));
  while (r.families.size() < k) r.families.push_back(next_family(g, r.families.back()));
  r.tau = tau_from(g, r.families);
  for (std::size_t n = 0; n < std::min<std::size_t>(k, g.block_count()); ++n) r.handled_blocks.push_back(n);
  return r;
}

Strategy extract_sigma(const Game& g) {
  const GameTree& t = g.tree();
  const NodeSet win = solve(g, full_subtree(t, t.root()));
  if (!win[t.root()]) throw Error("extract_sigma: II wins this game");
  Strategy sigma;
  sigma.player = Player::I;
  std::vector<Node> stack{t.root()};
  while (!stack.empty()) {
    const Node n = stack.back();
    stack.pop_back();
    if (t.is_leaf(n)) continue;
    if (t.to_move(n) == Player::I) {
      for (unsigned m = 0; m < t.branching(); ++m) {
        if (win[t.child(n, m)]) {
          sigma.moves[n] = m;
          stack.push_back(t.child(n, m));
          break;
        }
      }
    } else {
      for (unsigned m = 0; m < t.branching(); ++m) stack.push_back(t.child(n, m));
    }
  }
  return sigma;
}

namespace {

template <class Visit>
std::string walk(const Game& g, const Strategy& s, Visit visit) {
  const GameTree& t = g.tree();
  std::vector<Node> stack{t.root()};
  while (!stack.empty()) {
    const Node n = stack.back();
    stack.pop_back();
    visit(n);
    if (t.is_leaf(n)) {
      const bool i_wins = g.in_payoff(n);
      if (i_wins != (s.player == Player::I)) return "play " + position_text(t.position(n)) + " is lost";
      continue;
    }
    if (t.to_move(n) == s.player) {
      auto it = s.moves.find(n);
      if (it == s.moves.end()) return "no move at " + position_text(t.position(n));
      if (it->second >= t.branching()) return "illegal move at " + position_text(t.position(n));
      stack.push_back(t.child(n, it->second));
    } else {
      for (unsigned m = t.branching(); m-- > 0;) stack.push_back(t.child(n, m));
    }
  }
  return {};
}

}  // namespace

std::string check_strategy(const Game& g, const Strategy& s) {
  return walk(g, s, [](Node) {});
}

std::vector<Node> reached_positions(const Game& g, const Strategy& s) {
  std::vector<Node> out;
  walk(g, s, [&](Node n) {
    if (!g.tree().is_leaf(n) && g.tree().to_move(n) == s.player) out.push_back(n);
  });
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json strategy_to_json(const GameTree& t, const Strategy& s) {
  nlohmann::json moves = nlohmann::json::object();
  for (const auto& [n, m] : s.moves) moves[position_text(t.position(n))] = m;
  return {{"player", to_string(s.player)}, {"moves", moves}};
}

Strategy strategy_from_json(const GameTree& t, const nlohmann::json& doc) {
  Strategy s;
  try {
    s.player = parse_player(doc.at("player").get<std::string>());
    for (const auto& [pos, move] : doc.at("moves").items()) {
      const Node n = t.node(parse_position(pos));
      if (t.is_leaf(n) || t.to_move(n) != s.player) throw Error("strategy moves at " + pos + ", not its owner's turn");
      s.moves[n] = move.get<unsigned>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("strategy file: ") + e.what());
  }
  return s;
}

SearchResult staged_search(const Game& g, std::vector<std::size_t> schedule) {
  const std::size_t top = g.payoff().max_conjuncts();
  if (schedule.empty()) {
    for (std::size_t m = 1; m <= top; ++m) schedule.push_back(m);
    if (schedule.empty()) schedule.push_back(0);
  }
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i] <= schedule[i - 1]) throw Error("staged_search: schedule must be increasing");
  }
  if (schedule.back() != top) throw Error("staged_search: schedule must end at " + std::to_string(top));

  SearchResult result;
  const unsigned k = family_count(g);
  std::optional<QuasiStrategy> stored_prime;
  bool have_stored = false;
  std::vector<TreeFamily> stored;
  const auto log = [&](std::size_t stage, unsigned level, std::string kind, std::string detail) {
    result.events.push_back(SearchEvent{stage, level, std::move(kind), std::move(detail)});
  };

  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const std::size_t m = schedule[i];
    const bool final = i + 1 == schedule.size();
    const Game stage = g.truncated(m);
    auto t_prime = non_losing_subtree(stage);
    if (!t_prime) {
      if (final) {
        log(m, 0, "0", "I wins the exact game");
        result.winner = Player::I;
        result.strategy = extract_sigma(stage);
        return result;
      }
      log(m, 0, "0-unconfirmed", "I wins this approximation; discarded " + std::to_string(stored.size()) + " levels");
      stored_prime.reset();
      stored.clear();
      have_stored = true;
      continue;
    }
    if (!have_stored || stored_prime != t_prime) {
      if (have_stored && !stored.empty()) {
        log(m, 0, "1", "T' changed; discarded " + std::to_string(stored.size()) + " levels");
      } else if (have_stored) {
        log(m, 0, "unstable", "T' changed");
      }
      stored_prime = t_prime;
      stored.clear();
      have_stored = true;
    } else {
      bool unstable = false;
      for (std::size_t j = 0; j < stored.size(); ++j) {
        const TreeFamily fresh = j == 0 ? first_family(stage, *t_prime) : next_family(stage, stored[j - 1]);
        if (fresh != stored[j]) {
          log(m, static_cast<unsigned>(j + 1), std::to_string(j + 2),
              "depth " + std::to_string(j + 1) + " trees changed; discarded " + std::to_string(stored.size() - j) +
                  " levels");
          stored.resize(j);
          unstable = true;
          break;
        }
      }
      if (!unstable && stored.size() < k) {
        stored.push_back(stored.empty() ? first_family(stage, *t_prime) : next_family(stage, stored.back()));
        log(m, static_cast<unsigned>(stored.size()), "descend",
            std::to_string(stored.back().entries.size()) + " relevant positions");
      }
    }
    if (final) {
      while (stored.size() < k) {
        stored.push_back(stored.empty() ? first_family(stage, *t_prime) : next_family(stage, stored.back()));
      }
      log(m, k, "tau", "cascade complete");
      result.winner = Player::II;
      result.strategy = tau_from(stage, stored);
      return result;
    }
  }
  throw Error("staged_search: empty schedule");
}

nlohmann::json event_to_json(const SearchEvent& e) {
  return {{"stage", e.stage}, {"level", e.level}, {"case", e.kind}, {"detail", e.detail}};
}

}  // namespace ittm
