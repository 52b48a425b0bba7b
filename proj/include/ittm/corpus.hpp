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

#include "ittm/machine.hpp"

namespace ittm {

/// Program ids used in oracle queries, mapped to programs.
class Registry {
 public:
  void add(std::uint64_t id, std::string name, Program program);
  bool contains(std::uint64_t id) const { return programs_.count(id) != 0; }
  const Program& program(std::uint64_t id) const;
  const std::string& name(std::uint64_t id) const;
  std::optional<std::uint64_t> find(const std::string& name) const;
  std::vector<std::uint64_t> ids() const;

  /// Reads a JSON list of {id, name, path}; paths are relative to the file.
  static Registry load(const std::string& path);

 private:
  struct Item {
    std::string name;
    Program program;
  };
  std::map<std::uint64_t, Item> programs_;
};

struct CorpusEntry {
  std::string name;
  std::uint64_t id = 0;
  Tape input;
  /// Oracle used for the entry's feedback run: "ej", "ij" or "e".
  std::string oracle = "ej";
  /// HALTED, SETTLED, LOOPING_UNSETTLED, BUDGET_EXCEEDED or DIVERGENT_DETECTED.
  std::string verdict;
  std::optional<Ordinal> at;
  std::optional<LoopPair> loop;
  std::optional<Tape> output;
  std::optional<bool> ej;
  std::optional<bool> ij;
  std::optional<Ordinal> h;
  std::optional<Ordinal> h_tail;
  std::string note;
};

std::vector<CorpusEntry> load_corpus(const std::string& path);

/// Directory holding registry.json and corpus.json. ITTMLAB_CORPUS
/// overrides the build-time default.
std::string default_corpus_dir();
Registry default_registry();
std::vector<CorpusEntry> default_corpus();

}  // namespace ittm
