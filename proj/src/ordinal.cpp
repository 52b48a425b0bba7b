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

#include "ittm/ordinal.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace ittm {

Ordinal::Ordinal(std::uint64_t n) {
  if (n > 0) terms_.push_back(OrdinalTerm{Ordinal{}, n});
}

Ordinal Ordinal::omega() { return term(Ordinal(1)); }

Ordinal Ordinal::term(const Ordinal& exponent, std::uint64_t coefficient) {
  Ordinal r;
  if (coefficient > 0) r.terms_.push_back(OrdinalTerm{exponent, coefficient});
  return r;
}

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

bool Ordinal::is_limit() const { return !terms_.empty() && !terms_.back().exponent.is_zero(); }

bool Ordinal::is_successor() const { return !terms_.empty() && terms_.back().exponent.is_zero(); }

std::uint64_t Ordinal::finite_value() const {
  if (!is_finite()) throw Error("ordinal " + ord_print(*this) + " is not finite");
  return terms_.empty() ? 0 : terms_[0].coefficient;
}

std::uint64_t Ordinal::finite_part() const { return is_successor() ? terms_.back().coefficient : 0; }

bool operator==(const Ordinal& a, const Ordinal& b) { return a.terms_ == b.terms_; }

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.terms_[i];
    const auto& y = b.terms_[i];
    if (auto c = x.exponent <=> y.exponent; c != 0) return c;
    if (auto c = x.coefficient <=> y.coefficient; c != 0) return c;
  }
  return a.terms_.size() <=> b.terms_.size();
}

Ordinal& Ordinal::operator+=(const Ordinal& rhs) {
  if (rhs.terms_.empty()) return *this;
  const Ordinal& lead = rhs.terms_.front().exponent;
  // Terms of *this below rhs's leading exponent are absorbed.
  while (!terms_.empty() && terms_.back().exponent < lead) terms_.pop_back();
  auto it = rhs.terms_.begin();
  if (!terms_.empty() && terms_.back().exponent == lead) {
    terms_.back().coefficient += it->coefficient;
    ++it;
  }
  terms_.insert(terms_.end(), it, rhs.terms_.end());
  return *this;
}

std::size_t Ordinal::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& t : terms_) {
    h ^= t.exponent.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::uint64_t>{}(t.coefficient) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

Ordinal ord_add(const Ordinal& a, const Ordinal& b) { return a + b; }

Ordinal ord_sub(const Ordinal& a, const Ordinal& b) {
  if (b > a) throw Error("ord_sub: " + ord_print(b) + " exceeds " + ord_print(a));
  const auto& at = a.terms_;
  const auto& bt = b.terms_;
  std::size_t i = 0;
  while (i < bt.size() && at[i] == bt[i]) ++i;
  Ordinal r;
  if (i == bt.size()) {
    r.terms_.assign(at.begin() + static_cast<std::ptrdiff_t>(i), at.end());
    return r;
  }
  // First difference: bt[i] < at[i]. The remainder of b is absorbed by
  // whatever follows, so only the leading difference survives.
  if (at[i].exponent == bt[i].exponent) {
    r.terms_.push_back(OrdinalTerm{at[i].exponent, at[i].coefficient - bt[i].coefficient});
  } else {
    r.terms_.push_back(at[i]);
  }
  r.terms_.insert(r.terms_.end(), at.begin() + static_cast<std::ptrdiff_t>(i) + 1, at.end());
  return r;
}

Cmp ord_cmp(const Ordinal& a, const Ordinal& b) {
  auto c = a <=> b;
  if (c < 0) return Cmp::LT;
  if (c > 0) return Cmp::GT;
  return Cmp::EQ;
}

Ordinal ord_sup(const std::vector<Ordinal>& values) {
  Ordinal best;
  for (const auto& v : values) {
    if (v > best) best = v;
  }
  return best;
}

namespace {

class OrdinalParser {
 public:
  explicit OrdinalParser(std::string_view text) : text_(text) {}

  Ordinal parse() {
    Ordinal r = sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return r;
  }

 private:
  Ordinal sum() {
    Ordinal r = term();
    while (accept('+')) r += term();
    return r;
  }

  Ordinal term() {
    skip_ws();
    if (accept('w')) {
      Ordinal exponent(1);
      if (accept('^')) exponent = atom();
      std::uint64_t coefficient = 1;
      if (accept('*')) coefficient = nat();
      if (coefficient == 0) fail("coefficient must be positive");
      return Ordinal::term(exponent, coefficient);
    }
    return Ordinal(nat());
  }

  Ordinal atom() {
    skip_ws();
    if (accept('(')) {
      Ordinal r = sum();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (accept('w')) return Ordinal::omega();
    return Ordinal(nat());
  }

  std::uint64_t nat() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail(pos_ >= text_.size() ? "unexpected end of input" : "expected a number or 'w'");
    }
    std::uint64_t n = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const auto digit = static_cast<std::uint64_t>(text_[pos_] - '0');
      if (n > (UINT64_MAX - digit) / 10) fail("number too large");
      n = n * 10 + digit;
      ++pos_;
    }
    return n;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, 0, pos_ + 1); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string print_atom(const Ordinal& e) {
  if (e.is_finite()) return std::to_string(e.finite_value());
  if (e == Ordinal::omega()) return "w";
  return "(" + ord_print(e) + ")";
}

}  // namespace

Ordinal ord_parse(std::string_view text) { return OrdinalParser(text).parse(); }

std::string ord_print(const Ordinal& value) {
  if (value.is_zero()) return "0";
  std::string out;
  for (const auto& t : value.terms()) {
    if (!out.empty()) out += '+';
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coefficient);
      continue;
    }
    out += 'w';
    if (t.exponent != Ordinal(1)) out += "^" + print_atom(t.exponent);
    if (t.coefficient != 1) out += "*" + std::to_string(t.coefficient);
  }
  return out;
}

}  // namespace ittm
