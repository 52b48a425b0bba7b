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

#include "ittm/verify.hpp"

namespace ittm {

Classification classify(const Registry& registry, const CorpusEntry& entry, const FeedbackLimits& limits) {
  FeedbackLimits l = limits;
  l.oracle = parse_oracle_kind(entry.oracle);
  Classification c;
  c.tree = run_feedback(registry, entry.id, entry.input, l);
  if (c.tree.status == TreeStatus::Convergent) {
    c.verdict = to_string(*c.tree.root.verdict);
    c.at = c.tree.root.local_clock;
    c.loop = c.tree.root.loop;
    c.output = c.tree.root.output;
  } else {
    c.verdict = to_string(c.tree.status);
  }
  return c;
}

namespace {

std::string bit_text(const OracleAnswer& a) {
  switch (a.kind) {
    case OracleAnswer::Kind::Bit: return a.bit ? "1" : "0";
    case OracleAnswer::Kind::Divergent: return "divergent";
    case OracleAnswer::Kind::Budget: return "budget";
  }
  return "?";
}

std::string loop_text(const std::optional<LoopPair>& l) {
  return l ? "(" + ord_print(l->start) + ", " + ord_print(l->period) + ")" : "none";
}

}  // namespace

EntryCheck verify_entry(const Registry& registry, const CorpusEntry& entry, const FeedbackLimits& limits) {
  EntryCheck r;
  r.name = entry.name;
  Classification c = classify(registry, entry, limits);
  r.observed = c.verdict;
  if (c.at) r.observed += " at " + ord_print(*c.at);
  const auto mismatch = [&](const std::string& what, const std::string& want, const std::string& got) {
    r.pass = false;
    r.mismatches.push_back(what + ": expected " + want + ", got " + got);
  };
  if (c.verdict != entry.verdict) mismatch("verdict", entry.verdict, c.verdict);
  if (entry.at && (!c.at || *c.at != *entry.at)) mismatch("stage", ord_print(*entry.at), c.at ? ord_print(*c.at) : "none");
  if (entry.loop && c.loop != entry.loop) mismatch("loop", loop_text(entry.loop), loop_text(c.loop));
  if (entry.output && c.output != *entry.output) mismatch("output", entry.output->to_string(), c.output.to_string());
  const auto bit = [&](OracleKind kind, const std::optional<bool>& want, const char* label) {
    if (!want) return;
    const OracleAnswer got = eval_oracle(registry, kind, entry.id, entry.input, limits);
    if (got.kind != OracleAnswer::Kind::Bit || got.bit != *want) mismatch(label, *want ? "1" : "0", bit_text(got));
  };
  bit(OracleKind::EJ, entry.ej, "eJ");
  bit(OracleKind::IJ, entry.ij, "iJ");
  if ((entry.h || entry.h_tail) && c.tree.status == TreeStatus::Convergent) {
    if (entry.h) {
      const Ordinal h = absolute_length(c.tree, false);
      if (h != *entry.h) mismatch("H", ord_print(*entry.h), ord_print(h));
    }
    if (entry.h_tail) {
      const Ordinal h = absolute_length(c.tree, true);
      if (h != *entry.h_tail) mismatch("tail-inclusive H", ord_print(*entry.h_tail), ord_print(h));
    }
  } else if (entry.h || entry.h_tail) {
    mismatch("H", "a convergent tree", c.verdict);
  }
  return r;
}

}  // namespace ittm
