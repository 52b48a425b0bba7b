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

#include "ittm/json_io.hpp"

namespace ittm {

std::string tape_window(const Tape& t, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    const auto v = t.get(i);
    s[i] = v == kBlank ? 'b' : static_cast<char>('0' + v);
  }
  return s;
}

nlohmann::json trace_event_json(const Program& p, const TraceEvent& e, std::size_t window) {
  nlohmann::json tapes = nlohmann::json::array();
  for (int t = 0; t < p.tape_count; ++t) tapes.push_back(tape_window(e.snapshot.tapes[t], window));
  return {{"stage", ord_print(e.snapshot.stage)},
          {"event", to_string(e.kind)},
          {"state", p.state_name(e.snapshot.state)},
          {"head", e.snapshot.head},
          {"window", tapes},
          {"level", e.level},
          {"detail", e.detail}};
}

nlohmann::json verdict_json(const RunVerdict& v) {
  nlohmann::json j{{"verdict", to_string(v.kind)}, {"at", ord_print(v.at)}, {"output", v.output.to_string()}};
  if (v.loop) {
    j["loop"] = {{"start", ord_print(v.loop->start)}, {"period", ord_print(v.loop->period)}};
  } else {
    j["loop"] = nullptr;
  }
  return j;
}

}  // namespace ittm
