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

#include "ittm/tape.hpp"

#include <algorithm>
#include <numeric>

#include "ittm/error.hpp"

namespace ittm {

std::size_t lcm_size(std::size_t a, std::size_t b) { return a / std::gcd(a, b) * b; }

Tape::Tape(std::vector<std::uint8_t> prefix, std::vector<std::uint8_t> cycle)
    : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
  if (cycle_.empty()) cycle_.push_back(kZero);
  canonicalize();
}

void Tape::set(std::size_t i, std::uint8_t v) {
  if (get(i) == v) return;
  if (i >= prefix_.size()) {
    // Unroll the cycle far enough to hold cell i, keeping the phase.
    const std::size_t old = prefix_.size();
    prefix_.reserve(i + 1);
    for (std::size_t k = old; k <= i; ++k) prefix_.push_back(cycle_[(k - old) % cycle_.size()]);
    std::rotate(cycle_.begin(), cycle_.begin() + static_cast<std::ptrdiff_t>((i + 1 - old) % cycle_.size()),
                cycle_.end());
  }
  prefix_[i] = v;
  trim();
}

void Tape::trim() {
  while (!prefix_.empty() && prefix_.back() == cycle_.back()) {
    std::rotate(cycle_.rbegin(), cycle_.rbegin() + 1, cycle_.rend());
    prefix_.pop_back();
  }
}

void Tape::canonicalize() {
  const std::size_t n = cycle_.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = cycle_[i] == cycle_[i - d];
    if (periodic) {
      cycle_.resize(d);
      break;
    }
  }
  trim();
}

Tape Tape::suffix(std::size_t from) const {
  std::vector<std::uint8_t> p;
  std::vector<std::uint8_t> c(cycle_.size());
  if (from < prefix_.size()) p.assign(prefix_.begin() + static_cast<std::ptrdiff_t>(from), prefix_.end());
  const std::size_t start = std::max(from, prefix_.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = get(start + k);
  return Tape(std::move(p), std::move(c));
}

bool Tape::suffix_equal(std::size_t a, const Tape& other, std::size_t b) const {
  // Past both prefixes each side is periodic, so checking one joint period
  // beyond the longer prefix decides equality on the whole suffix.
  const std::size_t pa = prefix_.size() > a ? prefix_.size() - a : 0;
  const std::size_t pb = other.prefix_.size() > b ? other.prefix_.size() - b : 0;
  const std::size_t span = std::max(pa, pb) + lcm_size(cycle_.size(), other.cycle_.size());
  for (std::size_t i = 0; i < span; ++i) {
    if (get(a + i) != other.get(b + i)) return false;
  }
  return true;
}

namespace {

char digit(std::uint8_t v) { return v == kBlank ? 'b' : static_cast<char>('0' + v); }

}  // namespace

std::string Tape::to_string() const {
  std::string s;
  for (auto v : prefix_) s += digit(v);
  if (!finite_support()) {
    s += '(';
    for (auto v : cycle_) s += digit(v);
    s += ')';
  }
  return s;
}

Tape Tape::parse(std::string_view text) {
  std::vector<std::uint8_t> prefix;
  std::vector<std::uint8_t> cycle;
  bool in_cycle = false;
  bool closed = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (closed) throw ParseError("trailing characters after cycle", 0, i + 1);
    if (ch == '(') {
      if (in_cycle) throw ParseError("nested '('", 0, i + 1);
      in_cycle = true;
      continue;
    }
    if (ch == ')') {
      if (!in_cycle || cycle.empty()) throw ParseError("empty or unopened cycle", 0, i + 1);
      closed = true;
      continue;
    }
    std::uint8_t v = 0;
    if (ch == '0') {
      v = kZero;
    } else if (ch == '1') {
      v = kOne;
    } else if (ch == 'b') {
      v = kBlank;
    } else {
      throw ParseError(std::string("bad cell value '") + ch + "'", 0, i + 1);
    }
    (in_cycle ? cycle : prefix).push_back(v);
  }
  if (in_cycle && !closed) throw ParseError("unterminated cycle", 0, text.size() + 1);
  return Tape(std::move(prefix), std::move(cycle));
}

std::size_t Tape::hash() const {
  std::size_t h = 1469598103934665603ULL;
  for (auto v : prefix_) h = (h ^ v) * 1099511628211ULL;
  h = (h ^ 0xff) * 1099511628211ULL;
  for (auto v : cycle_) h = (h ^ v) * 1099511628211ULL;
  return h;
}

}  // namespace ittm
