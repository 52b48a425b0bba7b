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
#include <string_view>

#include "ittm/machine.hpp"

namespace ittm {

/// Parses `.itm` source:
///
///   # comment
///   .tapes 3
///   .states A B H L
///   .start A
///   .halt H
///   .limit L
///   .variant liminf          (liminf | blank | instruction)
///   .query Q / .resume R     (optional, 3 tapes only)
///   A 0*1 -> B 1** R
///
/// Read patterns have one character per tape, tape 0 first; '*' matches
/// either bit. In write patterns '*' keeps the cell. Overlapping rules are
/// rejected as duplicates. Errors are ParseError with line and column.
Program parse_program(std::string_view text);

/// Canonical source with one rule per (state, pattern) and no wildcards in
/// read patterns.
std::string serialize_program(const Program& p);

Program load_program(const std::string& path);

}  // namespace ittm
