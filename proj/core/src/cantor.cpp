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

#include "rbmeasure/cantor.hpp"

#include <algorithm>

#include "rbmeasure/measure.hpp"

namespace rbm {

namespace {

constexpr std::size_t kMaxClopenDepth = ClopenSet::kMaxDepth;

void check_clopen_depth(std::size_t n) {
  if (n > kMaxClopenDepth) {
    throw PreconditionError("clopen depth " + std::to_string(n) + " exceeds limit " +
                            std::to_string(kMaxClopenDepth));
  }
}

}  // namespace

BitString::BitString(std::string_view bits) {
  if (bits == "λ") return;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw PreconditionError("invalid bit string \"" + std::string(bits) + "\"");
    }
  }
  bits_ = std::string(bits);
}

BitString BitString::from_index(std::uint64_t k) {
  // s_k has length n = floor(log2(k + 1)) and value k + 1 - 2^n.
  const std::uint64_t k1 = k + 1;
  std::size_t n = 0;
  while ((k1 >> (n + 1)) != 0) ++n;
  return from_value(k1 - (std::uint64_t{1} << n), n);
}

std::uint64_t BitString::index() const {
  if (size() >= 63) throw PreconditionError("string too long for a 64-bit index");
  return (std::uint64_t{1} << size()) - 1 + value();
}

BitString BitString::from_value(std::uint64_t value, std::size_t n) {
  if (n < 64 && (value >> n) != 0) throw PreconditionError("value does not fit in n bits");
  std::string bits(n, '0');
  for (std::size_t i = 0; i < n; ++i) {
    if ((value >> (n - 1 - i)) & 1U) bits[i] = '1';
  }
  return BitString(std::move(bits), Trusted{});
}

std::uint64_t BitString::value() const {
  if (size() >= 64) throw PreconditionError("string too long for a 64-bit value");
  std::uint64_t v = 0;
  for (char c : bits_) v = (v << 1) | (c == '1' ? 1U : 0U);
  return v;
}

BitString BitString::prefix(std::size_t n) const {
  if (n > size()) throw PreconditionError("prefix longer than string");
  return BitString(bits_.substr(0, n), Trusted{});
}

BitString BitString::slice(std::size_t i, std::size_t j) const {
  if (i > j || j >= size()) throw PreconditionError("invalid slice bounds");
  return BitString(bits_.substr(i, j - i + 1), Trusted{});
}

BitString BitString::child(int bit) const {
  return BitString(bits_ + (bit != 0 ? '1' : '0'), Trusted{});
}

BitString BitString::parent() const {
  if (empty()) throw PreconditionError("lambda has no parent");
  return prefix(size() - 1);
}

bool BitString::is_prefix_of(const BitString& other) const {
  return size() <= other.size() && other.bits_.compare(0, size(), bits_) == 0;
}

void for_each_string_below(std::size_t depth, const std::function<void(const BitString&)>& f) {
  for (std::size_t n = 0; n < depth; ++n) for_each_string_of_length(n, f);
}

void for_each_string_of_length(std::size_t n, const std::function<void(const BitString&)>& f) {
  if (n >= 63) throw PreconditionError("exhaustive scan depth too large");
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t v = 0; v < count; ++v) f(BitString::from_value(v, n));
}

bool is_prefix_set(const std::vector<BitString>& strings) {
  std::vector<BitString> sorted = strings;
  // Lexicographic order puts every prefix immediately before some extension of
  // it, so checking adjacent pairs suffices once duplicates are removed.
  std::sort(sorted.begin(), sorted.end(), [](const BitString& a, const BitString& b) {
    return a.to_string() < b.to_string();
  });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1].is_prefix_of(sorted[i])) return false;
  }
  return true;
}

PrefixSet::PrefixSet(std::vector<BitString> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (!is_prefix_set(members_)) throw PreconditionError("not a prefix set");
}

std::size_t PrefixSet::max_length() const {
  std::size_t n = 0;
  for (const auto& w : members_) n = std::max(n, w.size());
  return n;
}

ClopenSet::ClopenSet(std::size_t depth, std::vector<bool> bitmap)
    : depth_(depth), bitmap_(std::move(bitmap)) {
  canonicalize();
}

ClopenSet ClopenSet::cylinder(const BitString& w) { return from_strings({w}); }

ClopenSet ClopenSet::from_strings(const std::vector<BitString>& generators) {
  std::size_t n = 0;
  for (const auto& w : generators) n = std::max(n, w.size());
  check_clopen_depth(n);
  std::vector<bool> bitmap(std::size_t{1} << n, false);
  for (const auto& w : generators) {
    const std::size_t span = std::size_t{1} << (n - w.size());
    const std::size_t first = static_cast<std::size_t>(w.value()) * span;
    std::fill(bitmap.begin() + static_cast<std::ptrdiff_t>(first),
              bitmap.begin() + static_cast<std::ptrdiff_t>(first + span), true);
  }
  return ClopenSet(n, std::move(bitmap));
}

ClopenSet ClopenSet::from_selection(std::size_t depth, const std::vector<BitString>& selected) {
  check_clopen_depth(depth);
  std::vector<bool> bitmap(std::size_t{1} << depth, false);
  for (const auto& w : selected) {
    if (w.size() != depth) throw PreconditionError("selected string has the wrong length");
    bitmap[static_cast<std::size_t>(w.value())] = true;
  }
  return ClopenSet(depth, std::move(bitmap));
}

void ClopenSet::canonicalize() {
  while (depth_ > 0) {
    std::vector<bool> merged(bitmap_.size() / 2);
    for (std::size_t i = 0; i < merged.size(); ++i) {
      if (bitmap_[2 * i] != bitmap_[2 * i + 1]) return;
      merged[i] = bitmap_[2 * i];
    }
    bitmap_ = std::move(merged);
    --depth_;
  }
}

std::vector<bool> ClopenSet::refined(std::size_t n) const {
  check_clopen_depth(n);
  if (n < depth_) throw PreconditionError("cannot refine to a smaller depth");
  const std::size_t span = std::size_t{1} << (n - depth_);
  std::vector<bool> out(std::size_t{1} << n, false);
  for (std::size_t i = 0; i < bitmap_.size(); ++i) {
    if (!bitmap_[i]) continue;
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(i * span),
              out.begin() + static_cast<std::ptrdiff_t>((i + 1) * span), true);
  }
  return out;
}

std::vector<BitString> ClopenSet::selected() const { return selected_at(depth_); }

std::vector<BitString> ClopenSet::selected_at(std::size_t n) const {
  const auto bits = refined(n);
  std::vector<BitString> out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out.push_back(BitString::from_value(i, n));
  }
  return out;
}

PrefixSet ClopenSet::minimal_prefix_set() const {
  // Walk the tree from the root; stop at nodes whose cylinder is fully inside.
  std::vector<BitString> members;
  std::function<void(const BitString&)> visit = [&](const BitString& w) {
    if (contains_cylinder(w)) {
      members.push_back(w);
      return;
    }
    if (disjoint_from_cylinder(w) || w.size() >= depth_) return;
    visit(w.child(0));
    visit(w.child(1));
  };
  visit(BitString());
  return PrefixSet(std::move(members));
}

bool ClopenSet::contains_cylinder(const BitString& w) const {
  if (w.size() >= depth_) return bitmap_[static_cast<std::size_t>(w.prefix(depth_).value())];
  const std::size_t span = std::size_t{1} << (depth_ - w.size());
  const std::size_t first = static_cast<std::size_t>(w.value()) * span;
  for (std::size_t i = first; i < first + span; ++i) {
    if (!bitmap_[i]) return false;
  }
  return true;
}

bool ClopenSet::disjoint_from_cylinder(const BitString& w) const {
  if (w.size() >= depth_) return !bitmap_[static_cast<std::size_t>(w.prefix(depth_).value())];
  const std::size_t span = std::size_t{1} << (depth_ - w.size());
  const std::size_t first = static_cast<std::size_t>(w.value()) * span;
  for (std::size_t i = first; i < first + span; ++i) {
    if (bitmap_[i]) return false;
  }
  return true;
}

ClopenSet ClopenSet::complement() const {
  std::vector<bool> bits(bitmap_.size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = !bitmap_[i];
  return ClopenSet(depth_, std::move(bits));
}

namespace {

template <typename Op>
ClopenSet combine(const ClopenSet& a, const ClopenSet& b, Op op) {
  const std::size_t n = std::max(a.depth(), b.depth());
  std::vector<BitString> selected;
  const auto sa = a.selected_at(n);
  const auto sb = b.selected_at(n);
  std::vector<bool> in_a(std::size_t{1} << n, false), in_b(std::size_t{1} << n, false);
  for (const auto& w : sa) in_a[static_cast<std::size_t>(w.value())] = true;
  for (const auto& w : sb) in_b[static_cast<std::size_t>(w.value())] = true;
  for (std::size_t i = 0; i < in_a.size(); ++i) {
    if (op(in_a[i], in_b[i])) selected.push_back(BitString::from_value(i, n));
  }
  return ClopenSet::from_selection(n, selected);
}

}  // namespace

ClopenSet set_union(const ClopenSet& a, const ClopenSet& b) {
  return combine(a, b, [](bool x, bool y) { return x || y; });
}

ClopenSet set_intersection(const ClopenSet& a, const ClopenSet& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; });
}

ClopenSet set_difference(const ClopenSet& a, const ClopenSet& b) {
  return combine(a, b, [](bool x, bool y) { return x && !y; });
}

bool ClopenSet::is_empty() const { return depth_ == 0 && !bitmap_[0]; }

bool ClopenSet::is_full() const { return depth_ == 0 && bitmap_[0]; }

std::string ClopenSet::to_string() const {
  std::string out = std::to_string(depth_) + ":[";
  bool first = true;
  for (const auto& w : selected()) {
    if (!first) out += ",";
    out += w.display();
    first = false;
  }
  return out + "]";
}

Rational classical_measure(const PrefixSet& set, const ProbMeasure& nu) {
  Rational total(0);
  for (const auto& w : set.members()) total += nu.measure_of(w);
  return total;
}

Rational classical_measure(const ClopenSet& set, const ProbMeasure& nu) {
  return classical_measure(PrefixSet(set.selected()), nu);
}

}  // namespace rbm
