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

#include <string>
#include <vector>

#include "ittm/corpus.hpp"
#include "ittm/feedback.hpp"

namespace ittm {

/// Verdict of a corpus entry's feedback run: the root verdict when the
/// tree converges, otherwise the tree status.
struct Classification {
  std::string verdict;
  std::optional<Ordinal> at;
  std::optional<LoopPair> loop;
  Tape output;
  CompTree tree;
};

Classification classify(const Registry& registry, const CorpusEntry& entry, const FeedbackLimits& limits = {});

struct EntryCheck {
  std::string name;
  bool pass = true;
  std::string observed;
  std::vector<std::string> mismatches;
};

/// Compares every expectation recorded on the entry.
EntryCheck verify_entry(const Registry& registry, const CorpusEntry& entry, const FeedbackLimits& limits = {});

}  // namespace ittm
