/*!
 *  Copyright (c) 2026 by Contributors
 * \file charset.cc
 */
#include "dslguide/charset.h"

#include <algorithm>
#include <functional>

#include "dslguide/error.h"
#include "dslguide/unicode.h"

namespace dslguide {

CharSet::CharSet(std::initializer_list<char32_t> scalars) {
  for (char32_t c : scalars) Add(c);
}

CharSet CharSet::Single(char32_t c) {
  CharSet set;
  set.Add(c);
  return set;
}

CharSet CharSet::Range(char32_t lo, char32_t hi) {
  CharSet set;
  set.AddRange(lo, hi);
  return set;
}

CharSet CharSet::FromRanges(const std::vector<ScalarRange>& ranges) {
  CharSet set;
  for (const auto& r : ranges) set.AddRange(r.lo, r.hi);
  return set;
}

void CharSet::AddRange(char32_t lo, char32_t hi) {
  if (lo > hi) throw Error("character range has lo > hi");
  if (hi > kMaxScalar) throw Error("character range exceeds U+10FFFF");
  if (lo < 0xD800 && hi >= 0xD800) {
    InsertRaw(lo, 0xD7FF);
    if (hi > 0xDFFF) InsertRaw(0xE000, hi);
  } else if (lo >= 0xD800 && lo <= 0xDFFF) {
    if (hi > 0xDFFF) InsertRaw(0xE000, hi);
  } else {
    InsertRaw(lo, hi);
  }
}

void CharSet::InsertRaw(char32_t lo, char32_t hi) {
  auto it = std::lower_bound(ranges_.begin(), ranges_.end(), lo,
                             [](const ScalarRange& r, char32_t v) { return r.hi + 1 < v; });
  auto first = it;
  while (it != ranges_.end() && it->lo <= hi + 1) {
    lo = std::min(lo, it->lo);
    hi = std::max(hi, it->hi);
    ++it;
  }
  it = ranges_.erase(first, it);
  ranges_.insert(it, ScalarRange{lo, hi});
}

void CharSet::Merge(const CharSet& other) {
  if (ranges_.empty()) {
    ranges_ = other.ranges_;
    return;
  }
  for (const auto& r : other.ranges_) InsertRaw(r.lo, r.hi);
}

void CharSet::Remove(char32_t c) { *this = Subtract(Single(c)); }

CharSet CharSet::Union(const CharSet& other) const {
  CharSet out = *this;
  out.Merge(other);
  return out;
}

CharSet CharSet::Intersect(const CharSet& other) const {
  CharSet out;
  std::size_t i = 0, j = 0;
  while (i < ranges_.size() && j < other.ranges_.size()) {
    char32_t lo = std::max(ranges_[i].lo, other.ranges_[j].lo);
    char32_t hi = std::min(ranges_[i].hi, other.ranges_[j].hi);
    if (lo <= hi) out.ranges_.push_back({lo, hi});
    if (ranges_[i].hi < other.ranges_[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

CharSet CharSet::Subtract(const CharSet& other) const {
  CharSet out;
  std::size_t j = 0;
  for (const auto& r : ranges_) {
    char32_t lo = r.lo;
    bool done = false;
    while (j < other.ranges_.size() && other.ranges_[j].hi < lo) ++j;
    std::size_t k = j;
    while (k < other.ranges_.size() && other.ranges_[k].lo <= r.hi) {
      const auto& cut = other.ranges_[k];
      if (cut.lo > lo) out.ranges_.push_back({lo, cut.lo - 1});
      if (cut.hi >= r.hi) {
        done = true;
        break;
      }
      lo = cut.hi + 1;
      ++k;
    }
    if (!done) out.ranges_.push_back({lo, r.hi});
  }
  return out;
}

bool CharSet::Contains(char32_t c) const {
  auto it = std::lower_bound(ranges_.begin(), ranges_.end(), c,
                             [](const ScalarRange& r, char32_t v) { return r.hi < v; });
  return it != ranges_.end() && it->lo <= c;
}

bool CharSet::Intersects(const CharSet& other) const {
  std::size_t i = 0, j = 0;
  while (i < ranges_.size() && j < other.ranges_.size()) {
    if (ranges_[i].hi < other.ranges_[j].lo) {
      ++i;
    } else if (other.ranges_[j].hi < ranges_[i].lo) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

std::uint64_t CharSet::size() const {
  std::uint64_t n = 0;
  for (const auto& r : ranges_) n += static_cast<std::uint64_t>(r.hi - r.lo) + 1;
  return n;
}

char32_t CharSet::Nth(std::uint64_t k) const {
  for (const auto& r : ranges_) {
    std::uint64_t width = static_cast<std::uint64_t>(r.hi - r.lo) + 1;
    if (k < width) return static_cast<char32_t>(r.lo + k);
    k -= width;
  }
  DSLGUIDE_ICHECK(false, "CharSet::Nth index out of range");
}

std::optional<char32_t> CharSet::SingleScalar() const {
  if (ranges_.size() == 1 && ranges_[0].lo == ranges_[0].hi) return ranges_[0].lo;
  return std::nullopt;
}

std::size_t CharSet::Hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& r : ranges_) {
    h ^= std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(r.lo) << 32) | r.hi) +
         0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::string CharSet::ToString() const {
  std::string out = "{";
  for (std::size_t i = 0; i < ranges_.size(); ++i) {
    if (i) out += ", ";
    const auto& r = ranges_[i];
    auto quote = [](char32_t c) {
      std::string d = DescribeScalar(c);
      return d.size() > 1 && (d[0] == '\\' || d[0] == 'U' || d[0] == '\'') ? d : "'" + d + "'";
    };
    out += quote(r.lo);
    if (r.hi != r.lo) out += "-" + quote(r.hi);
  }
  out += "}";
  return out;
}

}  // namespace dslguide
