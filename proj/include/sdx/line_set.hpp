#pragma once

#include <algorithm>
#include <initializer_list>
#include <vector>

namespace sdx {

/// Sorted set of 1-based line numbers on one side of a diff.
class LineSet {
 public:
  LineSet() = default;
  LineSet(std::initializer_list<int> lines) {
    for (int l : lines) insert(l);
  }

  void insert(int line) {
    auto it = std::lower_bound(lines_.begin(), lines_.end(), line);
    if (it == lines_.end() || *it != line) lines_.insert(it, line);
  }

  bool contains(int line) const {
    return std::binary_search(lines_.begin(), lines_.end(), line);
  }

  /// True when every line in [first, last] is a member.
  bool contains_range(int first, int last) const {
    if (first > last) return false;
    auto it = std::lower_bound(lines_.begin(), lines_.end(), first);
    for (int l = first; l <= last; ++l, ++it) {
      if (it == lines_.end() || *it != l) return false;
    }
    return true;
  }

  /// True when some member falls in [first, last].
  bool intersects_range(int first, int last) const {
    auto it = std::lower_bound(lines_.begin(), lines_.end(), first);
    return it != lines_.end() && *it <= last;
  }

  bool empty() const { return lines_.empty(); }
  std::size_t size() const { return lines_.size(); }
  const std::vector<int>& lines() const { return lines_; }

  auto begin() const { return lines_.begin(); }
  auto end() const { return lines_.end(); }

  bool operator==(const LineSet& other) const = default;

 private:
  std::vector<int> lines_;
};

}  // namespace sdx
