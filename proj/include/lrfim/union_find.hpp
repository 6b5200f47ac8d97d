#pragma once

#include <numeric>
#include <vector>

namespace lrfim {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

  /// Groups of element ids; groups ordered by smallest member.
  std::vector<std::vector<int>> groups() {
    std::vector<std::vector<int>> out;
    std::vector<int> slot(parent_.size(), -1);
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      const std::size_t r = find(i);
      if (slot[r] < 0) {
        slot[r] = static_cast<int>(out.size());
        out.emplace_back();
      }
      out[static_cast<std::size_t>(slot[r])].push_back(static_cast<int>(i));
    }
    return out;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned> rank_;
};

}  // namespace lrfim
