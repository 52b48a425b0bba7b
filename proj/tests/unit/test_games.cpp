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

#include <doctest.h>

#include <random>

#include "../support.hpp"
#include "ittm/games.hpp"

using namespace ittm;
using ittm::testing::i_wins_minimax;
using ittm::testing::survives_all_plays;

namespace {

Payoff all_leaves() { return Payoff{{{{Position{}}}}}; }

/// Brute force over all pure strategy pairs for b=2, d=4: I picks a move
/// at the root and at each of the 4 depth-2 nodes, II at each depth-1 and
/// depth-3 node.
bool i_wins_by_strategy_pairs(const Game& g) {
  const GameTree& t = g.tree();
  for (unsigned sigma = 0; sigma < (1u << 5); ++sigma) {
    bool beats_all = true;
    for (unsigned tau = 0; tau < (1u << 10) && beats_all; ++tau) {
      const unsigned m0 = sigma & 1;
      const unsigned m1 = tau >> m0 & 1;
      const unsigned m2 = sigma >> (1 + 2 * m0 + m1) & 1;
      const unsigned m3 = tau >> (2 + 4 * m0 + 2 * m1 + m2) & 1;
      beats_all = g.in_payoff(t.node({m0, m1, m2, m3}));
    }
    if (beats_all) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("games") {
  TEST_CASE("positions") {
    const GameTree t(3, 4);
    CHECK(t.size() == 1 + 3 + 9 + 27 + 81);
    CHECK(position_text(t.position(t.node({2, 0, 1}))) == "2.0.1");
    CHECK(parse_position("") == Position{});
    CHECK(t.parent(t.child(7, 2)) == 7);
    CHECK(t.to_move(t.node({1})) == Player::II);
    CHECK_THROWS_AS(t.node({3}), Error);
    CHECK_THROWS_AS(GameTree(2, 3), Error);
  }

  TEST_CASE("trivial payoffs") {
    const Game full(GameTree(2, 4), all_leaves());
    const Game empty(GameTree(2, 4), Payoff{});
    for (GameTree::Node n = 0; n < full.tree().size(); ++n) {
      CHECK(winner(full, full.tree().position(n)) == Player::I);
      CHECK(winner(empty, empty.tree().position(n)) == Player::II);
    }
    CHECK_FALSE(non_losing_subtree(full).has_value());
    CHECK(non_losing_subtree(empty)->count() == empty.tree().size());
  }

  TEST_CASE("winner matches strategy-pair enumeration") {
    std::mt19937_64 rng(21);
    int i_count = 0;
    for (int i = 0; i < 40; ++i) {
      const Game g(GameTree(2, 4), testing::random_payoff(rng, 2, 4, 3, 2, 3));
      const bool brute = i_wins_by_strategy_pairs(g);
      CHECK((winner(g, {}) == Player::I) == brute);
      i_count += brute;
    }
    CHECK(i_count > 0);
    CHECK(i_count < 40);
  }

  TEST_CASE("T' position by position") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 30; ++i) {
      const Game g(GameTree(2, 4), testing::random_payoff(rng, 2, 4, 2, 2));
      const NodeSet nl = non_losing_positions(g);
      for (GameTree::Node n = 0; n < g.tree().size(); ++n) {
        Position p = g.tree().position(n);
        CHECK((nl[n] != 0) == !i_wins_minimax(g.payoff(), 2, 4, p));
      }
      const auto t_prime = non_losing_subtree(g);
      if (!t_prime) continue;
      CHECK(is_quasi_strategy(g.tree(), *t_prime));
      for (GameTree::Node n = 0; n < g.tree().size(); ++n) {
        // Members are the positions all of whose prefixes II does not lose.
        bool all = true;
        for (GameTree::Node a = n;; a = g.tree().parent(a)) {
          all = all && nl[a];
          if (a == 0) break;
        }
        CHECK((t_prime->in[n] != 0) == all);
      }
    }
  }

  TEST_CASE("good_witness edge cases") {
    Payoff a;
    a.blocks = {{{Position{0}}}, {}};  // block 1 is empty: every leaf
    const Game g(GameTree(2, 2), a);
    const QuasiStrategy full = full_subtree(g.tree(), 0);
    // Block 0 is [0]; II wins iff I cannot open with 0, so I wins here.
    CHECK_FALSE(good_witness(g, full, 0, 0).has_value());
    CHECK_FALSE(good_witness(g, full, 1, 0).has_value());
    // With nothing to avoid the witness is T' itself.
    const Game none(GameTree(2, 2), Payoff{});
    const auto t_prime = non_losing_subtree(none);
    REQUIRE(t_prime.has_value());
    const auto w = good_witness(none, *t_prime, 5, 0);
    REQUIRE(w.has_value());
    CHECK(w->in == t_prime->in);
  }

  TEST_CASE("tau for the empty payoff is least-move") {
    const Game g(GameTree(3, 4), Payoff{});
    const auto tau = synthesize_tau(g);
    REQUIRE(tau.has_value());
    for (const auto& [n, m] : tau->tau.moves) CHECK(m == 0);
    CHECK(survives_all_plays(g, tau->tau));
  }

  TEST_CASE("tau on a four-leaf game") {
    // B0 = [0.0]: II answers 1 after I's 0 and is free after I's 1.
    Payoff a;
    a.blocks = {{{Position{0, 0}}}};
    const Game g(GameTree(2, 2), a);
    const auto tau = synthesize_tau(g);
    REQUIRE(tau.has_value());
    CHECK(tau->tau.moves.at(g.tree().node({0})) == 1);
    CHECK(tau->tau.moves.at(g.tree().node({1})) == 0);
    CHECK(tau->handled_blocks == std::vector<std::size_t>{0});
  }

  TEST_CASE("sigma examples") {
    const Game full(GameTree(2, 2), all_leaves());
    const Strategy s = extract_sigma(full);
    CHECK(s.moves.at(0) == 0);
    Payoff a;
    a.blocks = {{{Position{1}}}};
    const Game g(GameTree(2, 2), a);
    CHECK(extract_sigma(g).moves.at(0) == 1);
    CHECK_FALSE(synthesize_tau(g).has_value());
    CHECK_THROWS_AS(extract_sigma(Game(GameTree(2, 2), Payoff{})), Error);
  }

  TEST_CASE("strategies survive exhaustive play") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
      const unsigned b = 2 + i % 2;
      const unsigned d = 2 + 2 * (i % 3);
      const Game g(GameTree(b, d), testing::random_payoff(rng, b, d, 3, 3));
      const auto tau = synthesize_tau(g);
      const Strategy s = tau ? tau->tau : extract_sigma(g);
      CHECK(survives_all_plays(g, s));
      CHECK(check_strategy(g, s).empty());
      if (!tau) continue;
      // Per-block safety: plays consistent with tau avoid each handled block.
      for (auto n : reached_positions(g, s)) {
        if (!g.tree().is_leaf(n)) continue;
        for (auto block : tau->handled_blocks) CHECK_FALSE(g.in_block(n, block));
      }
    }
  }

  TEST_CASE("check_strategy reports a losing strategy") {
    Payoff a;
    a.blocks = {{{Position{1}}}};
    const Game g(GameTree(2, 2), a);
    Strategy bad{Player::I, {{0, 0}}};
    CHECK_FALSE(check_strategy(g, bad).empty());
    CHECK_FALSE(survives_all_plays(g, bad));
  }

  TEST_CASE("staged search with a single stage has no instability") {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 20; ++i) {
      const Game g(GameTree(2, 4), testing::random_payoff(rng, 2, 4, 2, 3));
      const SearchResult r = staged_search(g, {g.payoff().max_conjuncts()});
      for (const auto& e : r.events) {
        CHECK(e.kind != "1");
        CHECK(e.kind != "unstable");
      }
      const auto tau = synthesize_tau(g);
      CHECK((r.winner == Player::II) == tau.has_value());
      CHECK(r.strategy == (tau ? tau->tau : extract_sigma(g)));
    }
  }

  TEST_CASE("staged search: early stages favour I, exact payoff favours II") {
    // Stage 1 makes [0] and [1] both in A, so I wins; the second conjunct
    // of each block removes I's win.
    Payoff a;
    a.blocks = {{{Position{0}}, {Position{0, 0}}}, {{Position{1}}, {Position{1, 0}}}};
    const Game g(GameTree(2, 2), a);
    const SearchResult r = staged_search(g, {1, 2});
    CHECK(r.winner == Player::II);
    REQUIRE_FALSE(r.events.empty());
    CHECK(r.events.front().kind == "0-unconfirmed");
    CHECK(r.events.back().kind == "tau");
    CHECK(survives_all_plays(g, r.strategy));
  }

  TEST_CASE("staged search rejects bad schedules") {
    const Game g(GameTree(2, 2), Payoff{{{{Position{0}}, {Position{1}}}}});
    CHECK_THROWS_AS(staged_search(g, {2, 1}), Error);
    CHECK_THROWS_AS(staged_search(g, {1}), Error);
  }

  TEST_CASE("json round trips") {
    std::mt19937_64 rng(25);
    const Game g(GameTree(2, 4), testing::random_payoff(rng, 2, 4, 2, 2));
    const Game back = parse_game(game_to_json(g));
    CHECK(game_to_json(back) == game_to_json(g));
    const auto tau = synthesize_tau(g);
    const Strategy s = tau ? tau->tau : extract_sigma(g);
    CHECK(strategy_from_json(g.tree(), strategy_to_json(g.tree(), s)) == s);
    CHECK_THROWS_AS(parse_game(nlohmann::json{{"branching", 2}, {"depth", 3}, {"blocks", nlohmann::json::array()}}),
                    Error);
  }
}
