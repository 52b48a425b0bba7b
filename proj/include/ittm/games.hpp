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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ittm/error.hpp"

namespace ittm {

enum class Player { I, II };
std::string to_string(Player p);
Player parse_player(std::string_view text);

using Position = std::vector<unsigned>;

/// "0.1.2"; the empty position is "".
std::string position_text(const Position& p);
Position parse_position(std::string_view text);

/// Full game tree of the given branching and even depth. Nodes are numbered
/// breadth first: the children of n are b*n + 1 .. b*n + b.
class GameTree {
 public:
  using Node = std::uint32_t;

  GameTree(unsigned branching, unsigned depth);

  unsigned branching() const { return branching_; }
  unsigned depth() const { return depth_; }
  std::size_t size() const { return depth_of_.size(); }
  Node root() const { return 0; }
  Node child(Node n, unsigned move) const { return static_cast<Node>(n * branching_ + 1 + move); }
  Node parent(Node n) const { return (n - 1) / branching_; }
  unsigned move_of(Node n) const { return (n - 1) % branching_; }
  unsigned depth_of(Node n) const { return depth_of_[n]; }
  bool is_leaf(Node n) const { return depth_of_[n] == depth_; }
  Player to_move(Node n) const { return depth_of_[n] % 2 == 0 ? Player::I : Player::II; }
  /// True when a is a prefix of b.
  bool is_prefix(Node a, Node b) const;

  Position position(Node n) const;
  /// Throws Error if p is not in the tree.
  Node node(const Position& p) const;

 private:
  unsigned branching_;
  unsigned depth_;
  std::vector<unsigned> depth_of_;
};

/// A = union of blocks; block n = intersection of its conjuncts; a conjunct
/// is the set of plays extending one of its stems.
struct Payoff {
  std::vector<std::vector<std::vector<Position>>> blocks;

  std::size_t max_conjuncts() const;
  /// Keeps the first `m` conjuncts of each block.
  Payoff truncated(std::size_t m) const;
};

/// A tree and a payoff with per-leaf membership precomputed.
class Game {
 public:
  Game(GameTree tree, Payoff payoff);

  const GameTree& tree() const { return tree_; }
  const Payoff& payoff() const { return payoff_; }
  std::size_t block_count() const { return payoff_.blocks.size(); }
  /// Leaf membership in block n (false past the last block).
  bool in_block(GameTree::Node leaf, std::size_t n) const;
  bool in_payoff(GameTree::Node leaf) const { return block_mask_[leaf] != 0; }
  Game truncated(std::size_t m) const { return Game(tree_, payoff_.truncated(m)); }

 private:
  GameTree tree_;
  Payoff payoff_;
  std::vector<std::uint32_t> block_mask_;
};

/// {"branching": b, "depth": d, "blocks": [[["0.1", "1"], ...], ...]}.
Game parse_game(const nlohmann::json& doc);
Game load_game(const std::string& path);
nlohmann::json game_to_json(const Game& g);

using NodeSet = std::vector<char>;

/// Subtree rooted at `root`: the member nodes at or below it.
struct QuasiStrategy {
  GameTree::Node root = 0;
  NodeSet in;
  bool contains(GameTree::Node n) const { return in[n] != 0; }
  std::size_t count() const;
  friend bool operator==(const QuasiStrategy&, const QuasiStrategy&) = default;
};

/// The full tree below p.
QuasiStrategy full_subtree(const GameTree& t, GameTree::Node p);
/// Members of s at or below p.
QuasiStrategy restrict_to(const GameTree& t, const QuasiStrategy& s, GameTree::Node p);
/// Checks the quasi-strategy shape for II: prefix closed from the root,
/// every I move kept, at least one II move kept, leaves at full depth.
bool is_quasi_strategy(const GameTree& t, const QuasiStrategy& s);

/// Exact winner of the game restricted to s, from every member node.
/// Entry n is 1 when I wins from n.
NodeSet solve(const Game& g, const QuasiStrategy& s);

Player winner(const Game& g, const Position& p);

/// Every position from which I has no winning strategy.
NodeSet non_losing_positions(const Game& g);
/// II's non-losing quasi-strategy inside s: members all of whose ancestors
/// up to s.root are non-losing in the game restricted to s. Empty (nullopt)
/// when I wins from s.root.
std::optional<QuasiStrategy> non_losing_in(const Game& g, const QuasiStrategy& s);
std::optional<QuasiStrategy> non_losing_subtree(const Game& g, const Position& root = {});

/// The largest quasi-strategy inside t_prime below p whose plays all avoid
/// block `block`, if II does not lose the game restricted to it.
std::optional<QuasiStrategy> good_witness(const Game& g, const QuasiStrategy& t_prime, std::size_t block,
                                          GameTree::Node p);

struct Strategy {
  Player player = Player::II;
  std::map<GameTree::Node, unsigned> moves;
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// One relevant position p of even length 2(k-1), with the trees built there.
struct FamilyEntry {
  /// Tree in which p is shown good: II's non-losing quasi-strategy of the
  /// parent witness restricted to p (T' itself at the root).
  QuasiStrategy relevant;
  QuasiStrategy witness;     // T*(p)
  QuasiStrategy non_losing;  // T'(p)
  friend bool operator==(const FamilyEntry&, const FamilyEntry&) = default;
};

/// Trees of depth k (k >= 1) keyed by relevant positions of length 2(k-1).
struct TreeFamily {
  unsigned depth = 0;
  std::map<GameTree::Node, FamilyEntry> entries;
  friend bool operator==(const TreeFamily&, const TreeFamily&) = default;
};

struct TauResult {
  Strategy tau;
  QuasiStrategy non_losing;  // T'
  std::vector<TreeFamily> families;
  /// Blocks avoided by a witness; blocks at index >= depth/2 get none.
  std::vector<std::size_t> handled_blocks;
};

/// II's strategy by the witness cascade; nullopt when I wins.
std::optional<TauResult> synthesize_tau(const Game& g);

/// I's strategy: least move keeping a win for I. Throws if II wins.
Strategy extract_sigma(const Game& g);

/// Plays the strategy against every opposing line. Returns an empty string
/// if every reached leaf is won by the strategy's owner, else a description
/// of the first failure.
std::string check_strategy(const Game& g, const Strategy& s);

/// Positions reached when the owner follows s and the opponent plays anything.
std::vector<GameTree::Node> reached_positions(const Game& g, const Strategy& s);

nlohmann::json strategy_to_json(const GameTree& t, const Strategy& s);
Strategy strategy_from_json(const GameTree& t, const nlohmann::json& doc);

struct SearchEvent {
  std::size_t stage = 0;
  unsigned level = 0;
  /// "0", "0-unconfirmed", "1", "2", ..., "unstable", "descend", "tau".
  std::string kind;
  std::string detail;
};

struct SearchResult {
  Player winner = Player::II;  // I: SIGMA, II: TAU
  Strategy strategy;
  std::vector<SearchEvent> events;
};

/// Staged approximation: stage M keeps the first M conjuncts of each block,
/// so the payoff shrinks as M grows and is exact at the last stage. The
/// schedule must be increasing and end at max_conjuncts (empty: 1..max).
SearchResult staged_search(const Game& g, std::vector<std::size_t> schedule = {});

nlohmann::json event_to_json(const SearchEvent& e);

}  // namespace ittm
