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

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ittm {

/// Cell contents. Blank only arises under the blank-on-ambiguity limit rule.
enum : std::uint8_t { kZero = 0, kOne = 1, kBlank = 2 };

/// An ultimately periodic sequence over cells 0, 1, 2, ...: a finite prefix
/// followed by a cycle repeated forever. The default value is all zeros,
/// i.e. finite support. Kept canonical (minimal cycle, shortest prefix) so
/// that == is extensional equality.
class Tape {
 public:
  Tape() : cycle_{kZero} {}
  Tape(std::vector<std::uint8_t> prefix, std::vector<std::uint8_t> cycle);

  std::uint8_t get(std::size_t i) const {
    return i < prefix_.size() ? prefix_[i] : cycle_[(i - prefix_.size()) % cycle_.size()];
  }
  void set(std::size_t i, std::uint8_t v);

  const std::vector<std::uint8_t>& prefix() const { return prefix_; }
  const std::vector<std::uint8_t>& cycle() const { return cycle_; }

  /// Cells from `from` onward, as a new sequence starting at 0.
  Tape suffix(std::size_t from) const;
  /// True when this[a + i] == other[b + i] for every i >= 0.
  bool suffix_equal(std::size_t a, const Tape& other, std::size_t b) const;
  /// Every cell beyond the prefix repeats with this period; a length past
  /// which every structural difference between two tapes must show.
  std::size_t horizon() const { return prefix_.size() + cycle_.size(); }
  bool finite_support() const { return cycle_.size() == 1 && cycle_[0] == kZero; }

  /// Text form: prefix digits then an optional "(cycle)"; "(0)" is omitted.
  /// Digits are 0, 1 and b (blank). Example: "01(10)".
  std::string to_string() const;
  static Tape parse(std::string_view text);

  /// Pointwise map/zip; the result is canonicalized.
  template <class F>
  Tape map(F f) const;
  template <class F>
  static Tape zip(const Tape& a, const Tape& b, F f);

  friend bool operator==(const Tape&, const Tape&) = default;
  std::size_t hash() const;

 private:
  void canonicalize();
  void trim();

  std::vector<std::uint8_t> prefix_;
  std::vector<std::uint8_t> cycle_;
};

std::size_t lcm_size(std::size_t a, std::size_t b);

template <class F>
Tape Tape::map(F f) const {
  std::vector<std::uint8_t> p(prefix_.size());
  std::vector<std::uint8_t> c(cycle_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = f(prefix_[i]);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f(cycle_[i]);
  return Tape(std::move(p), std::move(c));
}

template <class F>
Tape Tape::zip(const Tape& a, const Tape& b, F f) {
  const std::size_t n = std::max(a.prefix_.size(), b.prefix_.size());
  const std::size_t period = lcm_size(a.cycle_.size(), b.cycle_.size());
  std::vector<std::uint8_t> p(n);
  std::vector<std::uint8_t> c(period);
  for (std::size_t i = 0; i < n; ++i) p[i] = f(a.get(i), b.get(i));
  for (std::size_t i = 0; i < period; ++i) c[i] = f(a.get(n + i), b.get(n + i));
  return Tape(std::move(p), std::move(c));
}

}  // namespace ittm
