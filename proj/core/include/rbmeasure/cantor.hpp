// Copyright 2026 The rbmeasure Authors
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
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rbmeasure/numerics.hpp"

namespace rbm {

class ProbMeasure;

/// A finite binary string. Bit 0 is the leftmost bit. The empty string is
/// lambda and prints as "λ" in human-readable output (to_string() returns "").
class BitString {
 public:
  BitString() = default;
  /// Accepts only '0'/'1' characters. "λ" is accepted as the empty string.
  explicit BitString(std::string_view bits);

  static BitString zeros(std::size_t n) { return BitString(std::string(n, '0'), Trusted{}); }

  /// s_k of the standard enumeration: by length, then lexicographically.
  static BitString from_index(std::uint64_t k);
  /// Inverse of from_index. Throws PreconditionError for length >= 63.
  std::uint64_t index() const;

  /// The length-n string whose bits read as the binary numeral `value`.
  static BitString from_value(std::uint64_t value, std::size_t n);
  /// Bits read as a binary numeral (length must be < 64).
  std::uint64_t value() const;

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  int operator[](std::size_t i) const { return bits_[i] == '1' ? 1 : 0; }

  /// The first n bits. Requires n <= size().
  BitString prefix(std::size_t n) const;
  /// bits [i, j], inclusive.
  BitString slice(std::size_t i, std::size_t j) const;
  BitString child(int bit) const;
  BitString parent() const;

  bool is_prefix_of(const BitString& other) const;
  bool comparable(const BitString& other) const {
    return is_prefix_of(other) || other.is_prefix_of(*this);
  }

  const std::string& to_string() const { return bits_; }
  /// Like to_string() but renders lambda as "λ".
  std::string display() const { return bits_.empty() ? std::string("λ") : bits_; }

  friend bool operator==(const BitString&, const BitString&) = default;
  /// Standard-enumeration order (length first, then lexicographic).
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) return a.size() <=> b.size();
    return a.bits_ <=> b.bits_;
  }
  friend std::ostream& operator<<(std::ostream& os, const BitString& w) {
    return os << w.display();
  }

 private:
  struct Trusted {};
  BitString(std::string bits, Trusted) : bits_(std::move(bits)) {}

  std::string bits_;
};

/// Calls f on every string of length < depth (2^depth - 1 strings), in
/// standard-enumeration order.
void for_each_string_below(std::size_t depth, const std::function<void(const BitString&)>& f);
/// Calls f on every string of length exactly n, lexicographically.
void for_each_string_of_length(std::size_t n, const std::function<void(const BitString&)>& f);

/// True iff no member is a proper prefix of another.
bool is_prefix_set(const std::vector<BitString>& strings);

/// A finite prefix set, validated at construction.
class PrefixSet {
 public:
  PrefixSet() = default;
  /// Throws PreconditionError when `members` is not a prefix set.
  explicit PrefixSet(std::vector<BitString> members);

  const std::vector<BitString>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  /// Length of the longest member, 0 when empty.
  std::size_t max_length() const;

 private:
  std::vector<BitString> members_;
};

/// A finite union of cylinders, stored as the length-`depth` strings whose
/// cylinders compose it. Always kept in canonical form: sibling pairs are
/// merged until the depth is minimal.
class ClopenSet {
 public:
  /// The empty set.
  /// Deepest canonical bitmap supported (2^24 cells).
  static constexpr std::size_t kMaxDepth = 24;

  ClopenSet() : ClopenSet(0, std::vector<bool>{false}) {}

  static ClopenSet empty_set() { return ClopenSet(); }
  static ClopenSet full() { return ClopenSet(0, std::vector<bool>{true}); }
  static ClopenSet cylinder(const BitString& w);
  /// Union of the cylinders of arbitrary strings (not necessarily a prefix set).
  static ClopenSet from_strings(const std::vector<BitString>& generators);
  /// The set at `depth` selecting exactly `selected` (each of length depth).
  static ClopenSet from_selection(std::size_t depth, const std::vector<BitString>& selected);

  std::size_t depth() const { return depth_; }
  /// Selected strings at the canonical depth, sorted.
  std::vector<BitString> selected() const;
  /// Selected strings after refining to depth n >= depth().
  std::vector<BitString> selected_at(std::size_t n) const;
  /// Shortest-possible prefix set generating the set (siblings merged per node).
  PrefixSet minimal_prefix_set() const;

  /// Does the set contain the cylinder C_w?
  bool contains_cylinder(const BitString& w) const;
  /// Is C_w disjoint from the set?
  bool disjoint_from_cylinder(const BitString& w) const;

  ClopenSet complement() const;
  friend ClopenSet set_union(const ClopenSet& a, const ClopenSet& b);
  friend ClopenSet set_intersection(const ClopenSet& a, const ClopenSet& b);
  friend ClopenSet set_difference(const ClopenSet& a, const ClopenSet& b);

  bool is_empty() const;
  bool is_full() const;

  friend bool operator==(const ClopenSet&, const ClopenSet&) = default;

  /// "depth:[w1,w2,...]"
  std::string to_string() const;

 private:
  ClopenSet(std::size_t depth, std::vector<bool> bitmap);
  void canonicalize();
  std::vector<bool> refined(std::size_t n) const;

  std::size_t depth_ = 0;
  std::vector<bool> bitmap_;  // indexed by BitString::value() of length-depth strings
};

ClopenSet set_union(const ClopenSet& a, const ClopenSet& b);
ClopenSet set_intersection(const ClopenSet& a, const ClopenSet& b);
ClopenSet set_difference(const ClopenSet& a, const ClopenSet& b);

/// sum over w in A of nu(w).
Rational classical_measure(const PrefixSet& set, const ProbMeasure& nu);
/// nu of a clopen set, via its depth-n representatives.
Rational classical_measure(const ClopenSet& set, const ProbMeasure& nu);

}  // namespace rbm

template <>
struct std::hash<rbm::BitString> {
  std::size_t operator()(const rbm::BitString& w) const noexcept {
    return std::hash<std::string>{}(w.to_string());
  }
};
