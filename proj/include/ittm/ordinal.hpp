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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ittm/error.hpp"

namespace ittm {

struct OrdinalTerm;

/// An ordinal below epsilon_0 in Cantor normal form:
///   w^e1 * c1 + w^e2 * c2 + ... + w^ek * ck,   e1 > e2 > ... > ek,  ci >= 1.
/// Zero is the empty sum. Every value is kept canonical, so structural
/// equality is ordinal equality.
class Ordinal {
 public:
  Ordinal() = default;
  Ordinal(std::uint64_t n);  // NOLINT(google-explicit-constructor)

  static Ordinal omega();
  /// w^exponent * coefficient; coefficient 0 gives zero.
  static Ordinal term(const Ordinal& exponent, std::uint64_t coefficient = 1);

  const std::vector<OrdinalTerm>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  bool is_limit() const;
  bool is_successor() const;
  /// Value of a finite ordinal; throws if infinite.
  std::uint64_t finite_value() const;
  /// The trailing w^0 coefficient (0 for zero and limits).
  std::uint64_t finite_part() const;

  friend bool operator==(const Ordinal& a, const Ordinal& b);
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);

  Ordinal& operator+=(const Ordinal& rhs);
  friend Ordinal operator+(Ordinal a, const Ordinal& b) { return a += b; }

  std::size_t hash() const;

 private:
  friend Ordinal ord_sub(const Ordinal& a, const Ordinal& b);
  std::vector<OrdinalTerm> terms_;
};

struct OrdinalTerm {
  Ordinal exponent;
  std::uint64_t coefficient = 1;

  friend bool operator==(const OrdinalTerm&, const OrdinalTerm&) = default;
};

enum class Cmp { LT, EQ, GT };

Ordinal ord_add(const Ordinal& a, const Ordinal& b);
/// Left subtraction: the unique g with b + g = a. Throws if b > a.
Ordinal ord_sub(const Ordinal& a, const Ordinal& b);
Cmp ord_cmp(const Ordinal& a, const Ordinal& b);
/// Supremum of a finite list, i.e. its maximum (zero for an empty list).
Ordinal ord_sup(const std::vector<Ordinal>& values);

/// Grammar:
///   sum  := term ('+' term)*
///   term := 'w' ('^' atom)? ('*' nat)? | nat
///   atom := nat | 'w' | '(' sum ')'
/// Terms are combined with ordinal addition, so "w+w" and "3+w" are accepted
/// and normalized. Whitespace is ignored.
Ordinal ord_parse(std::string_view text);
std::string ord_print(const Ordinal& value);

}  // namespace ittm

template <>
struct std::hash<ittm::Ordinal> {
  std::size_t operator()(const ittm::Ordinal& o) const noexcept { return o.hash(); }
};
