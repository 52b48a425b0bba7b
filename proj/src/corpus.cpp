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

#include "ittm/corpus.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ittm/assembly.hpp"

#ifndef ITTM_CORPUS_DIR
#define ITTM_CORPUS_DIR "corpus"
#endif

namespace ittm {

using nlohmann::json;

void Registry::add(std::uint64_t id, std::string name, Program program) {
  if (programs_.count(id)) throw Error("registry: duplicate id " + std::to_string(id));
  programs_.emplace(id, Item{std::move(name), std::move(program)});
}

const Program& Registry::program(std::uint64_t id) const {
  auto it = programs_.find(id);
  if (it == programs_.end()) throw Error("registry: no program with id " + std::to_string(id));
  return it->second.program;
}

const std::string& Registry::name(std::uint64_t id) const {
  auto it = programs_.find(id);
  if (it == programs_.end()) throw Error("registry: no program with id " + std::to_string(id));
  return it->second.name;
}

std::optional<std::uint64_t> Registry::find(const std::string& name) const {
  for (const auto& [id, item] : programs_) {
    if (item.name == name) return id;
  }
  return std::nullopt;
}

std::vector<std::uint64_t> Registry::ids() const {
  std::vector<std::uint64_t> out;
  for (const auto& kv : programs_) out.push_back(kv.first);
  return out;
}

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace

Registry Registry::load(const std::string& path) {
  const json doc = read_json(path);
  const auto dir = std::filesystem::path(path).parent_path();
  Registry r;
  try {
    for (const auto& item : doc) {
      const std::string file = item.at("path").get<std::string>();
      const std::string name = item.contains("name") ? item["name"].get<std::string>()
                                                     : std::filesystem::path(file).stem().string();
      r.add(item.at("id").get<std::uint64_t>(), name, load_program((dir / file).string()));
    }
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
  return r;
}

std::vector<CorpusEntry> load_corpus(const std::string& path) {
  const json doc = read_json(path);
  std::vector<CorpusEntry> out;
  try {
    for (const auto& item : doc) {
      CorpusEntry e;
      e.name = item.at("name").get<std::string>();
      e.id = item.at("id").get<std::uint64_t>();
      e.input = Tape::parse(item.value("input", ""));
      e.oracle = item.value("oracle", "ej");
      e.verdict = item.at("verdict").get<std::string>();
      if (item.contains("at")) e.at = ord_parse(item["at"].get<std::string>());
      if (item.contains("loop")) {
        e.loop = LoopPair{ord_parse(item["loop"][0].get<std::string>()), ord_parse(item["loop"][1].get<std::string>())};
      }
      if (item.contains("output")) e.output = Tape::parse(item["output"].get<std::string>());
      if (item.contains("ej")) e.ej = item["ej"].get<bool>();
      if (item.contains("ij")) e.ij = item["ij"].get<bool>();
      if (item.contains("H")) e.h = ord_parse(item["H"].get<std::string>());
      if (item.contains("H_tail")) e.h_tail = ord_parse(item["H_tail"].get<std::string>());
      e.note = item.value("note", "");
      out.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
  return out;
}

std::string default_corpus_dir() {
  if (const char* env = std::getenv("ITTMLAB_CORPUS"); env != nullptr && *env != '\0') return env;
  return ITTM_CORPUS_DIR;
}

Registry default_registry() { return Registry::load(default_corpus_dir() + "/registry.json"); }

std::vector<CorpusEntry> default_corpus() { return load_corpus(default_corpus_dir() + "/corpus.json"); }

}  // namespace ittm
