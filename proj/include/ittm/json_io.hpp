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

#include <json.hpp>

#include "ittm/machine.hpp"

namespace ittm {

inline constexpr std::size_t kDefaultWindow = 32;

/// Cells [0, width) of a tape as digits 0, 1, b.
std::string tape_window(const Tape& t, std::size_t width);

/// {stage, event, state, head, window, level, detail}; window holds one
/// string per tape.
nlohmann::json trace_event_json(const Program& p, const TraceEvent& e, std::size_t window = kDefaultWindow);
/// {verdict, at, loop, output}.
nlohmann::json verdict_json(const RunVerdict& v);

}  // namespace ittm
