/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide/charset.h
 * \brief Normalized sets of Unicode scalar values stored as sorted disjoint ranges.
 */
#ifndef DSLGUIDE_CHARSET_H_
#define DSLGUIDE_CHARSET_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace dslguide {

struct ScalarRange {
  char32_t lo;
  char32_t hi;

  bool operator==(const ScalarRange&) const = default;
  auto operator<=>(const ScalarRange&) const = default;
};

/*!
 * \brief A set of scalar values. Ranges are kept sorted, disjoint and non-adjacent, and never
 * contain surrogate code points (they are cut out on insertion).
 */
class CharSet {
 public:
  CharSet() = default;
  CharSet(std::initializer_list<char32_t> scalars);

  static CharSet Single(char32_t c);
  static CharSet Range(char32_t lo, char32_t hi);
  static CharSet FromRanges(const std::vector<ScalarRange>& ranges);

  void Add(char32_t c) { AddRange(c, c); }
  void AddRange(char32_t lo, char32_t hi);
  void Merge(const CharSet& other);
  void Remove(char32_t c);

  CharSet Union(const CharSet& other) const;
  CharSet Intersect(const CharSet& other) const;
  CharSet Subtract(const CharSet& other) const;

  bool Contains(char32_t c) const;
  bool Intersects(const CharSet& other) const;
  bool empty() const { return ranges_.empty(); }
  /*! \brief Number of scalars in the set. */
  std::uint64_t size() const;
  /*! \brief The k-th smallest scalar, k < size(). */
  char32_t Nth(std::uint64_t k) const;
  /*! \brief The only member if size() == 1. */
  std::optional<char32_t> SingleScalar() const;
  const std::vector<ScalarRange>& ranges() const { return ranges_; }

  std::size_t Hash() const;
  /*! \brief Compact display, e.g. {'.', 'E', '0'-'9'}. */
  std::string ToString() const;

  bool operator==(const CharSet&) const = default;

 private:
  void InsertRaw(char32_t lo, char32_t hi);

  std::vector<ScalarRange> ranges_;
};

}  // namespace dslguide

#endif  // DSLGUIDE_CHARSET_H_
