#include "lrfim/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

namespace lrfim {

Region random_percolation(int d, int side, double q, std::mt19937_64& rng) {
  Site lo = Site::origin(d), hi = Site::origin(d);
  for (int i = 0; i < d; ++i) hi[i] = side - 1;
  std::bernoulli_distribution keep(q);
  std::vector<Site> out;
  for (const Site& s : Region::box(lo, hi))
    if (keep(rng)) out.push_back(s);
  if (out.empty()) out.push_back(lo);
  return Region(d, std::move(out));
}

Region random_eden(int d, std::size_t size, std::mt19937_64& rng) {
  // uniform over distinct frontier sites; frontier kept as vector + index for O(1) removal
  std::set<Site> cells{Site::origin(d)};
  std::vector<Site> frontier;
  std::map<Site, std::size_t> where;
  auto grow_around = [&](const Site& c) {
    for (int i = 0; i < d; ++i)
      for (int s : {-1, 1}) {
        const Site n = c.shifted(i, s);
        if (!cells.count(n) && !where.count(n)) {
          where.emplace(n, frontier.size());
          frontier.push_back(n);
        }
      }
  };
  grow_around(Site::origin(d));
  while (cells.size() < size) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng);
    const Site pick = frontier[k];
    where.erase(pick);
    if (k + 1 != frontier.size()) {
      frontier[k] = frontier.back();
      where[frontier[k]] = k;
    }
    frontier.pop_back();
    cells.insert(pick);
    grow_around(pick);
  }
  return Region(d, std::vector<Site>(cells.begin(), cells.end()));
}

Region random_cube_union(int d, int count, int max_side, int span, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> side(1, max_side), corner(0, span - 1);
  std::vector<Site> out;
  for (int k = 0; k < count; ++k) {
    Site lo = Site::origin(d), hi = Site::origin(d);
    const int s = side(rng);
    for (int i = 0; i < d; ++i) {
      lo[i] = corner(rng);
      hi[i] = lo[i] + s - 1;
    }
    for (const Site& x : Region::box(lo, hi)) out.push_back(x);
  }
  return Region(d, std::move(out));
}

Graph random_connected_graph(std::size_t n, double q, std::mt19937_64& rng) {
  Graph g(n);
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, v - 1);
    g.add_edge(v, pick(rng));
  }
  std::bernoulli_distribution extra(q);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (extra(rng)) g.add_edge(u, v);
  return g;
}

Region random_region(int d, std::size_t max_size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto cap = std::max<std::size_t>(max_size, 1);
  Region r;
  switch (seed % 3) {
    case 0: {
      int side = 2;
      while (std::pow(side + 1, d) <= static_cast<double>(cap)) ++side;
      r = random_percolation(d, side, std::uniform_real_distribution<double>(0.1, 0.6)(rng), rng);
      break;
    }
    case 1:
      r = random_eden(d, std::uniform_int_distribution<std::size_t>(1, cap)(rng), rng);
      break;
    default:
      r = random_cube_union(d, std::uniform_int_distribution<int>(1, 4)(rng), 3, d == 2 ? 12 : 6, rng);
      break;
  }
  if (r.size() > cap) r = Region(d, std::vector<Site>(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(cap)));
  return r;
}

}  // namespace lrfim
