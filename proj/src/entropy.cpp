#include "lrfim/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

namespace lrfim {

bool is_subordinated(const CubeCollection& fine, const CubeCollection& coarse) {
  if (fine.scale > coarse.scale) return false;
  const int shift = coarse.scale - fine.scale;
  for (const Cube& c : fine.cubes) {
    Cube up{coarse.scale, c.anchor};
    for (int i = 0; i < c.anchor.dim; ++i) up.anchor[i] = static_cast<std::int32_t>(floor_shift(c.anchor[i], shift));
    if (!coarse.contains(up)) return false;
  }
  return true;
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

SubordinatedCount count_subordinated(const CubeCollection& coarse, int scale, std::int64_t V) {
  if (V < 0) throw std::invalid_argument("V must be >= 0");
  if (scale > coarse.scale) throw std::invalid_argument("fine scale exceeds the coarse scale");
  const int bits = (coarse.scale - scale) * coarse.dim;
  if (bits > 62) throw std::invalid_argument("scale gap too large");
  const std::uint64_t slots = (std::uint64_t{1} << bits) * coarse.size();
  SubordinatedCount out;
  out.exact = binomial(slots, static_cast<std::uint64_t>(V));
  out.log_exact = out.exact == 0 ? -INFINITY : std::log(out.exact.convert_to<double>());
  if (V > 0) {
    const double v = static_cast<double>(V);
    out.log_bound = v * (std::log(static_cast<double>(slots)) + 1.0 - std::log(v));
  }
  return out;
}

int n_r(const Region& lambda, int r) {
  const std::int64_t diam = std::max<std::int64_t>(diameter(lambda), 1);
  int m = 0;
  while (std::ldexp(1.0, r * m) < static_cast<double>(diam)) ++m;
  return m;
}

std::int64_t partial_volume(const Region& lambda, int level, const Params& p) {
  if (lambda.empty()) throw std::invalid_argument("partial volume of an empty region");
  std::int64_t v = 0;
  const int top = n_r(lambda, p.r);
  for (int n = level; n <= top; ++n) v += static_cast<std::int64_t>(min_cover(lambda, p.r * n).size());
  return v;
}

// ---------------------------------------------------------------- graphs

void Graph::add_edge(std::size_t u, std::size_t v) {
  if (u >= n || v >= n) throw std::out_of_range("vertex out of range");
  if (u == v) return;
  if (std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end()) return;
  adj[u].push_back(v);
  adj[v].push_back(u);
}

bool Graph::connected(const std::vector<std::size_t>& vertices) const {
  if (vertices.empty()) return false;
  std::vector<char> in(n, 0), seen(n, 0);
  for (auto v : vertices) in[v] = 1;
  std::vector<std::size_t> stack{vertices.front()};
  seen[vertices.front()] = 1;
  std::size_t reached = 0;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    ++reached;
    for (auto w : adj[v])
      if (in[w] && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  std::size_t distinct = 0;
  for (char c : in) distinct += c;
  return reached == distinct;
}

std::vector<std::vector<std::size_t>> cover_graph_by_subgraphs(const Graph& g, std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (g.n == 0) throw std::invalid_argument("empty graph");
  // BFS spanning tree rooted at 0
  std::vector<std::size_t> parent(g.n, g.n), order;
  std::vector<char> seen(g.n, 0);
  order.push_back(0);
  seen[0] = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto w : g.adj[order[i]])
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = order[i];
        order.push_back(w);
      }
  if (order.size() != g.n) throw std::invalid_argument("graph is not connected");

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::vector<std::size_t>> bundle(g.n);
  // Children hand up remainders smaller than k; a vertex groups them into bundles of
  // at least k and attaches itself to keep each bundle connected.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto v = *it;
    std::vector<std::size_t> r = std::move(bundle[v]);
    r.push_back(v);
    if (r.size() >= k) {
      groups.push_back(std::move(r));
      r.clear();
    }
    if (parent[v] == g.n) {
      if (!r.empty()) groups.push_back(std::move(r));
      break;
    }
    auto& b = bundle[parent[v]];
    b.insert(b.end(), r.begin(), r.end());
    if (b.size() >= k) {
      b.push_back(parent[v]);
      groups.push_back(std::move(b));
      b.clear();
    }
  }
  for (auto& grp : groups) std::sort(grp.begin(), grp.end());
  return groups;
}

// ---------------------------------------------------------------- checks

CheckReport check_volume_bound(const Contour& gamma, int level, const Params& p, const ConstantTable& k) {
  const double lhs = static_cast<double>(partial_volume(gamma.support, level, p));
  const double cover = static_cast<double>(min_cover(gamma.support, p.r * level).size());
  return make_check("volume_bound", lhs, k.b3_vol * std::max(level, 1) * cover, p.d >= 2);
}

CheckReport check_covering_bound(const Contour& gamma, int level, int step, const Params& p, const ConstantTable& k) {
  const double lhs = static_cast<double>(min_cover(gamma.support, p.r * level).size());
  const double n = static_cast<double>(gamma.size());
  if (level < step) {
    const double rhs = k.b4 * std::pow(std::max(level, 1), k.kappa) / std::pow(2.0, p.r * k.a_prime * level) * n;
    return make_check("covering_bound_small_l", lhs, rhs, p.d >= 2);
  }
  const double rhs =
      k.b4_prime * std::pow(level, k.kappa) * std::max(n / std::pow(2.0, p.r * k.a_prime * level / p.a), 1.0);
  return make_check("covering_bound_large_l", lhs, rhs, p.d >= 2 && level >= 1);
}

FamilyCount check_family_bound(int level, std::int64_t V, const Params& p, std::size_t budget) {
  if (V < 1) throw std::invalid_argument("V must be >= 1");
  const int d = p.d;
  const int scale = p.r * level;
  const std::int64_t side = std::int64_t{1} << scale;
  // With k cubes, V >= k + n_r - ℓ, so diam <= 2^{r(V - k + ℓ)} and every point sits in that box.
  auto reach = [&](std::int64_t k) { return std::ldexp(1.0, static_cast<int>(p.r * (V - k + level))); };
  const double dmax = reach(1);
  if (dmax > 4096) throw std::length_error("family enumeration box too large");
  const auto R = static_cast<std::int64_t>(dmax);

  std::vector<Cube> cand;
  {
    const std::int64_t lo = floor_shift(-R, scale), hi = floor_shift(R, scale);
    Site a = Site::origin(d);
    std::function<void(int)> fill = [&](int axis) {
      if (axis == d) {
        cand.push_back(Cube{scale, a});
        return;
      }
      for (std::int64_t x = lo; x <= hi; ++x) {
        a[axis] = static_cast<std::int32_t>(x);
        fill(axis + 1);
      }
    };
    fill(0);
  }
  auto extent = [&](const Cube& c) {
    std::int64_t m = 0;
    for (int i = 0; i < d; ++i)
      m = std::max({m, std::abs(static_cast<std::int64_t>(c.anchor[i]) * side),
                    std::abs(static_cast<std::int64_t>(c.anchor[i]) * side + side - 1)});
    return m;
  };

  FamilyCount out;
  out.level = level;
  out.V = V;
  std::vector<std::size_t> chosen;
  std::vector<std::int64_t> reach_of(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) reach_of[i] = extent(cand[i]);

  std::function<void(std::int64_t)> dfs = [&](std::int64_t held) {
    const double lim = reach(static_cast<std::int64_t>(chosen.size()) + 1);
    if (static_cast<double>(held) > lim) return;
    for (std::size_t i = chosen.empty() ? 0 : chosen.back() + 1; i < cand.size(); ++i) {
      if (static_cast<double>(reach_of[i]) > lim) continue;
      if (++out.nodes > budget) throw std::length_error("family enumeration exceeded its budget");
      chosen.push_back(i);
      std::vector<Site> pts;
      for (auto c : chosen)
        for (const Site& s : cand[c].points()) pts.push_back(s);
      const Region B(d, std::move(pts));
      const std::int64_t v = partial_volume(B, level, p);
      if (v <= V) {
        if (v == V) {
          const std::int64_t diam = diameter(B);
          bool inside = true;
          for (const Site& s : B)
            for (int a = 0; a < d && inside; ++a)
              if (std::abs(static_cast<std::int64_t>(s[a])) > diam) inside = false;
          if (inside) ++out.count;
        }
        dfs(std::max(held, reach_of[i]));
      }
      chosen.pop_back();
    }
  };
  dfs(0);
  const ConstantTable k = compute_constants(p);
  out.check = make_check("family_bound", out.count ? std::log(static_cast<double>(out.count)) : 0.0,
                         k.b5 * static_cast<double>(V));
  return out;
}

CoveringCount check_coverings_of_C0(const std::vector<Contour>& contours, std::size_t n, int level, const Params& p,
                                    const ConstantTable& k) {
  CoveringCount out;
  out.n = n;
  out.level = level;
  std::set<std::vector<Cube>> seen;
  for (const Contour& g : contours) {
    if (g.size() != n) continue;
    ++out.contours;
    seen.insert(min_cover(g.support, p.r * level).cubes);
  }
  out.coverings = seen.size();
  const double lv = std::max(level, 1);
  out.log_bound = k.b6 * std::pow(lv, k.kappa + 1.0) *
                  std::max(static_cast<double>(n) / std::pow(2.0, p.r * k.a_prime * level / p.a), 1.0);
  out.check = make_check("coverings_of_C0", std::log(static_cast<double>(std::max<std::size_t>(out.coverings, 1))),
                         out.log_bound, p.d >= 2);
  return out;
}

CheckReport check_C0_count(std::size_t count, std::size_t n, const ConstantTable& k) {
  return make_check("C0_count", std::log(static_cast<double>(std::max<std::size_t>(count, 1))),
                    k.b6 * static_cast<double>(n), k.params.d >= 2 && n >= 1);
}

}  // namespace lrfim
