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

// Python module: thin wrappers returning JSON text that the package decodes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ittm/assembly.hpp"
#include "ittm/corpus.hpp"
#include "ittm/feedback.hpp"
#include "ittm/games.hpp"
#include "ittm/json_io.hpp"
#include "ittm/verify.hpp"

namespace py = pybind11;
using namespace ittm;
using nlohmann::json;

namespace {

std::string ordinal_normalize(const std::string& text) { return ord_print(ord_parse(text)); }

std::string ordinal_add(const std::string& a, const std::string& b) { return ord_print(ord_parse(a) + ord_parse(b)); }

std::string ordinal_sub(const std::string& a, const std::string& b) {
  return ord_print(ord_sub(ord_parse(a), ord_parse(b)));
}

int ordinal_cmp(const std::string& a, const std::string& b) {
  switch (ord_cmp(ord_parse(a), ord_parse(b))) {
    case Cmp::LT: return -1;
    case Cmp::EQ: return 0;
    case Cmp::GT: return 1;
  }
  return 0;
}

RunOptions options(std::uint64_t budget, const std::string& variant) {
  RunOptions o;
  o.budget_per_level = budget;
  if (!variant.empty()) o.variant = parse_variant(variant);
  return o;
}

std::string run_source(const std::string& source, const std::string& input, std::uint64_t budget,
                       const std::string& variant) {
  const Program p = parse_program(source);
  const RunResult r = run_transfinite(p, Tape::parse(input), options(budget, variant));
  return verdict_json(r.verdict).dump();
}

std::uint64_t program_id(const Registry& reg, const std::string& name) {
  if (auto id = reg.find(name)) return *id;
  throw Error("no program named '" + name + "'");
}

std::string feedback(const std::string& name, const std::string& input, const std::string& oracle,
                     std::uint64_t budget) {
  const Registry reg = default_registry();
  FeedbackLimits l;
  l.run.budget_per_level = budget;
  l.oracle = parse_oracle_kind(oracle);
  CompTree t = run_feedback(reg, program_id(reg, name), Tape::parse(input), l);
  if (t.status == TreeStatus::Convergent) {
    absolute_length(t, false);
    absolute_length(t, true);
  }
  return tree_to_json(t).dump();
}

std::string corpus_verify() {
  const Registry reg = default_registry();
  json out = json::array();
  for (const auto& e : default_corpus()) {
    const EntryCheck r = verify_entry(reg, e);
    out.push_back({{"name", r.name}, {"pass", r.pass}, {"observed", r.observed}, {"mismatches", r.mismatches}});
  }
  return out.dump();
}

std::string solve_game(const std::string& game_json) {
  const Game g = parse_game(json::parse(game_json));
  const auto tau = synthesize_tau(g);
  const Strategy s = tau ? tau->tau : extract_sigma(g);
  return json{{"winner", to_string(tau ? Player::II : Player::I)},
              {"verified", check_strategy(g, s).empty()},
              {"strategy", strategy_to_json(g.tree(), s)}}
      .dump();
}

std::string search_game(const std::string& game_json, const std::vector<std::size_t>& schedule) {
  const Game g = parse_game(json::parse(game_json));
  const SearchResult r = staged_search(g, schedule);
  json events = json::array();
  for (const auto& e : r.events) events.push_back(event_to_json(e));
  return json{{"result", r.winner == Player::I ? "SIGMA" : "TAU"},
              {"strategy", strategy_to_json(g.tree(), r.strategy)},
              {"events", events}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Transfinite machine runs, feedback trees and finite games.";
  py::register_exception<Error>(m, "IttmError", PyExc_ValueError);
  m.def("ordinal_normalize", &ordinal_normalize, py::arg("text"));
  m.def("ordinal_add", &ordinal_add, py::arg("a"), py::arg("b"));
  m.def("ordinal_sub", &ordinal_sub, py::arg("a"), py::arg("b"));
  m.def("ordinal_cmp", &ordinal_cmp, py::arg("a"), py::arg("b"));
  m.def("run_source", &run_source, py::arg("source"), py::arg("input") = "", py::arg("budget") = 10000,
        py::arg("variant") = "");
  m.def("feedback", &feedback, py::arg("name"), py::arg("input") = "", py::arg("oracle") = "ej",
        py::arg("budget") = 10000);
  m.def("corpus_verify", &corpus_verify);
  m.def("solve_game", &solve_game, py::arg("game_json"));
  m.def("search_game", &search_game, py::arg("game_json"), py::arg("schedule") = std::vector<std::size_t>{});
}
