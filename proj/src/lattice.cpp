#include "lrfim/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lrfim/union_find.hpp"

namespace lrfim {

Site::Site(std::initializer_list<int> coords) {
  if (coords.size() == 0 || coords.size() > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("site dimension must be in [1, 4]");
  dim = static_cast<std::int32_t>(coords.size());
  std::size_t i = 0;
  for (int v : coords) c[i++] = v;
}

Site Site::origin(int d) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("site dimension must be in [1, 4]");
  Site s;
  s.dim = d;
  return s;
}

std::string to_string(const Site& s) {
  std::string out = "(";
  for (int i = 0; i < s.dim; ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out + ")";
}

int l1_distance(const Site& a, const Site& b) {
  int d = 0;
  for (int i = 0; i < a.dim; ++i) d += std::abs(a[i] - b[i]);
  return d;
}

// ---------------------------------------------------------------- Region

Region::Region(int dim, std::vector<Site> sites) : dim_(dim), sites_(std::move(sites)) { finish(); }

void Region::finish() {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
  if (sites_.empty()) return;
  for (const Site& s : sites_)
    if (s.dim != dim_) throw std::invalid_argument("site dimension does not match region");
  lo_ = hi_ = sites_.front();
  for (const Site& s : sites_) {
    for (int i = 0; i < dim_; ++i) {
      lo_[i] = std::min(lo_[i], s[i]);
      hi_[i] = std::max(hi_[i], s[i]);
    }
  }
}

Region Region::box(const Site& lo, const Site& hi) {
  std::vector<Site> v;
  GridIndex g(lo, hi);
  v.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v.push_back(g.site(i));
  return Region(lo.dim, std::move(v));
}

Region Region::centered_box(int d, int side) {
  if (side < 1) throw std::invalid_argument("box side must be positive");
  Site lo = Site::origin(d), hi = Site::origin(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = -(side / 2);
    hi[i] = side - 1 - side / 2;
  }
  return box(lo, hi);
}

bool Region::contains(const Site& s) const { return std::binary_search(sites_.begin(), sites_.end(), s); }

std::ptrdiff_t Region::index_of(const Site& s) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
  if (it == sites_.end() || !(*it == s)) return -1;
  return it - sites_.begin();
}

const Site& Region::lo() const {
  if (sites_.empty()) throw std::invalid_argument("empty region");
  return lo_;
}

const Site& Region::hi() const {
  if (sites_.empty()) throw std::invalid_argument("empty region");
  return hi_;
}

namespace {
int merged_dim(const Region& a, const Region& b) { return a.dim() ? a.dim() : b.dim(); }
}  // namespace

Region Region::unite(const Region& o) const {
  std::vector<Site> v;
  v.reserve(size() + o.size());
  std::set_union(begin(), end(), o.begin(), o.end(), std::back_inserter(v));
  return Region(merged_dim(*this, o), std::move(v));
}

Region Region::intersect(const Region& o) const {
  std::vector<Site> v;
  std::set_intersection(begin(), end(), o.begin(), o.end(), std::back_inserter(v));
  return Region(merged_dim(*this, o), std::move(v));
}

Region Region::minus(const Region& o) const {
  std::vector<Site> v;
  std::set_difference(begin(), end(), o.begin(), o.end(), std::back_inserter(v));
  return Region(merged_dim(*this, o), std::move(v));
}

Region Region::sym_diff(const Region& o) const {
  std::vector<Site> v;
  std::set_symmetric_difference(begin(), end(), o.begin(), o.end(), std::back_inserter(v));
  return Region(merged_dim(*this, o), std::move(v));
}

bool Region::is_subset_of(const Region& o) const { return std::includes(o.begin(), o.end(), begin(), end()); }

bool Region::intersects(const Region& o) const {
  auto i = begin();
  auto j = o.begin();
  while (i != end() && j != o.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else return true;
  }
  return false;
}

std::string to_string(const Region& r) {
  std::string out = "{";
  bool first = true;
  for (const Site& s : r) {
    if (!first) out += ';';
    first = false;
    out += to_string(s);
  }
  return out + "}";
}

// ---------------------------------------------------------------- GridIndex

GridIndex::GridIndex(const Site& lo, const Site& hi) : dim_(lo.dim), lo_(lo) {
  for (int i = dim_ - 1; i >= 0; --i) {
    const auto ui = static_cast<std::size_t>(i);
    ext_[ui] = hi[i] - lo[i] + 1;
    if (ext_[ui] <= 0) throw std::invalid_argument("grid box has non-positive extent");
    stride_[ui] = static_cast<std::int64_t>(size_);
    size_ *= static_cast<std::size_t>(ext_[ui]);
  }
}

bool GridIndex::inside(const Site& s) const {
  for (int i = 0; i < dim_; ++i) {
    const int off = s[i] - lo_[i];
    if (off < 0 || off >= ext_[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

std::size_t GridIndex::index(const Site& s) const {
  std::int64_t idx = 0;
  for (int i = 0; i < dim_; ++i) idx += static_cast<std::int64_t>(s[i] - lo_[i]) * stride_[static_cast<std::size_t>(i)];
  return static_cast<std::size_t>(idx);
}

Site GridIndex::site(std::size_t idx) const {
  Site s = lo_;
  for (int i = dim_ - 1; i >= 0; --i) {
    const auto ui = static_cast<std::size_t>(i);
    s[i] = lo_[i] + static_cast<int>(idx % static_cast<std::size_t>(ext_[ui]));
    idx /= static_cast<std::size_t>(ext_[ui]);
  }
  return s;
}

// ---------------------------------------------------------------- distances

int l1_distance(const Region& a, const Region& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty region");
  int best = std::numeric_limits<int>::max();
  for (const Site& x : a) {
    for (const Site& y : b) {
      best = std::min(best, l1_distance(x, y));
      if (best == 0) return 0;
    }
  }
  return best;
}

std::int64_t diameter(const Region& r) {
  std::int64_t best = 0;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) best = std::max<std::int64_t>(best, l1_distance(r[i], r[j]));
  return best;
}

// ---------------------------------------------------------------- flood fills

namespace {

Site inflate_lo(const Site& s, int by) {
  Site o = s;
  for (int i = 0; i < s.dim; ++i) o[i] -= by;
  return o;
}

Site inflate_hi(const Site& s, int by) {
  Site o = s;
  for (int i = 0; i < s.dim; ++i) o[i] += by;
  return o;
}

// Labels connected groups of cells with mark == from; returns the groups as index lists.
std::vector<std::vector<std::size_t>> label_cells(const GridIndex& g, std::vector<std::uint8_t>& mark,
                                                  std::uint8_t from, std::uint8_t to) {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mark[i] != from) continue;
    groups.emplace_back();
    auto& grp = groups.back();
    mark[i] = to;
    stack.push_back(i);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      grp.push_back(c);
      g.for_each_neighbor(c, [&](std::size_t n) {
        if (mark[n] == from) {
          mark[n] = to;
          stack.push_back(n);
        }
      });
    }
  }
  return groups;
}

Region region_of(const GridIndex& g, const std::vector<std::size_t>& cells) {
  std::vector<Site> v;
  v.reserve(cells.size());
  for (std::size_t c : cells) v.push_back(g.site(c));
  return Region(g.dim(), std::move(v));
}

}  // namespace

std::vector<Region> components(const Region& r) {
  if (r.empty()) return {};
  GridIndex g(r.lo(), r.hi());
  std::vector<std::uint8_t> mark(g.size(), 0);
  for (const Site& s : r) mark[g.index(s)] = 1;
  std::vector<Region> out;
  for (auto& grp : label_cells(g, mark, 1, 2)) out.push_back(region_of(g, grp));
  // Cells are scanned in lexicographic order, so groups already start at their smallest site.
  return out;
}

bool is_connected(const Region& r) { return r.size() <= 1 || components(r).size() == 1; }

VolumeInterior volume_interior(const Region& r) {
  VolumeInterior out{Region(r.dim()), Region(r.dim()), {}};
  if (r.empty()) return out;
  GridIndex g(inflate_lo(r.lo(), 1), inflate_hi(r.hi(), 1));
  std::vector<std::uint8_t> mark(g.size(), 0);
  for (const Site& s : r) mark[g.index(s)] = 1;
  // Corner cell of the inflated shell is never in r, hence in the unbounded component.
  std::vector<std::size_t> stack{0};
  mark[0] = 2;
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    g.for_each_neighbor(c, [&](std::size_t n) {
      if (mark[n] == 0) {
        mark[n] = 2;
        stack.push_back(n);
      }
    });
  }
  std::vector<Site> interior, vol;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mark[i] == 0) interior.push_back(g.site(i));
    if (mark[i] != 2) vol.push_back(g.site(i));
  }
  out.interior = Region(r.dim(), std::move(interior));
  out.volume = Region(r.dim(), std::move(vol));
  for (auto& grp : label_cells(g, mark, 0, 3)) out.interior_components.push_back(region_of(g, grp));
  return out;
}

Region volume(const Region& r) { return volume_interior(r).volume; }

// ---------------------------------------------------------------- boundaries

Boundaries boundaries(const Region& r) {
  Boundaries b{{}, Region(r.dim()), Region(r.dim())};
  std::vector<Site> inner, ext;
  for (const Site& s : r) {
    bool on_edge = false;
    for (int i = 0; i < r.dim(); ++i) {
      for (int delta : {-1, 1}) {
        const Site n = s.shifted(i, delta);
        if (!r.contains(n)) {
          b.edge.emplace_back(s, n);
          ext.push_back(n);
          on_edge = true;
        }
      }
    }
    if (on_edge) inner.push_back(s);
  }
  b.inner = Region(r.dim(), std::move(inner));
  b.external = Region(r.dim(), std::move(ext));
  return b;
}

Region inner_boundary(const Region& r) { return boundaries(r).inner; }
Region external_boundary(const Region& r) { return boundaries(r).external; }
std::size_t edge_boundary_size(const Region& r) { return boundaries(r).edge.size(); }

bool isoperimetric_check(const Region& r) {
  if (r.empty()) throw std::invalid_argument("empty region");
  const double d = r.dim();
  const double lhs = std::pow(static_cast<double>(r.size()), (d - 1.0) / d);
  return lhs <= static_cast<double>(inner_boundary(r).size()) + 1e-9;
}

// ---------------------------------------------------------------- cubes

std::int64_t floor_shift(std::int64_t x, int scale) {
  if (scale >= 63) return x < 0 ? -1 : 0;
  return x >> scale;
}

std::int64_t Cube::side() const {
  if (scale >= 62) return std::numeric_limits<std::int64_t>::max();
  return std::int64_t{1} << scale;
}

Site Cube::lo() const {
  Site s = anchor;
  for (int i = 0; i < anchor.dim; ++i) s[i] = static_cast<std::int32_t>(anchor[i] * side());
  return s;
}

Site Cube::hi() const {
  Site s = anchor;
  for (int i = 0; i < anchor.dim; ++i) s[i] = static_cast<std::int32_t>((anchor[i] + 1) * side() - 1);
  return s;
}

bool Cube::contains(const Site& s) const {
  for (int i = 0; i < anchor.dim; ++i)
    if (floor_shift(s[i], scale) != anchor[i]) return false;
  return true;
}

Region Cube::points() const {
  if (scale * anchor.dim > 24) throw std::invalid_argument("cube too large to materialize");
  return Region::box(lo(), hi());
}

double Cube::volume() const { return std::ldexp(1.0, scale * anchor.dim); }

Cube cube_of(const Site& s, int scale) {
  Cube c{scale, s};
  for (int i = 0; i < s.dim; ++i) c.anchor[i] = static_cast<std::int32_t>(floor_shift(s[i], scale));
  return c;
}

std::int64_t l1_distance(const Cube& a, const Cube& b) {
  if (a.scale != b.scale) throw std::invalid_argument("cubes of different scales");
  __int128 total = 0;
  const __int128 side = a.scale >= 100 ? (static_cast<__int128>(1) << 100) : (static_cast<__int128>(1) << a.scale);
  for (int i = 0; i < a.anchor.dim; ++i) {
    const std::int64_t da = std::abs(static_cast<std::int64_t>(a.anchor[i]) - b.anchor[i]);
    if (da > 0) total += static_cast<__int128>(da - 1) * side + 1;
  }
  const __int128 cap = std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(total > cap ? cap : total);
}

bool share_face(const Cube& a, const Cube& b) {
  if (a.scale != b.scale) return false;
  int diff = 0;
  for (int i = 0; i < a.anchor.dim; ++i) diff += std::abs(a.anchor[i] - b.anchor[i]);
  return diff == 1;
}

std::vector<Cube> face_neighbors(const Cube& c) {
  std::vector<Cube> out;
  for (int i = 0; i < c.anchor.dim; ++i)
    for (int delta : {-1, 1}) out.push_back(Cube{c.scale, c.anchor.shifted(i, delta)});
  return out;
}

bool CubeCollection::contains(const Cube& c) const { return std::binary_search(cubes.begin(), cubes.end(), c); }

Region CubeCollection::covered() const {
  std::vector<Site> v;
  for (const Cube& c : cubes) {
    Region p = c.points();
    v.insert(v.end(), p.begin(), p.end());
  }
  return Region(dim, std::move(v));
}

CubeCollection make_collection(int dim, int scale, std::vector<Cube> cubes) {
  std::sort(cubes.begin(), cubes.end());
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
  for (const Cube& c : cubes)
    if (c.scale != scale) throw std::invalid_argument("mixed cube scales");
  return CubeCollection{scale, dim, std::move(cubes)};
}

CubeCollection min_cover(const Region& r, int scale) {
  std::vector<Cube> v;
  v.reserve(r.size());
  for (const Site& s : r) v.push_back(cube_of(s, scale));
  return make_collection(r.dim(), scale, std::move(v));
}

CubeGraph cube_graph(const Region& r, int scale, double M, double a) {
  if (r.empty()) throw std::invalid_argument("empty region");
  CubeGraph g;
  g.vertices = min_cover(r, scale);
  const auto n = g.vertices.cubes.size();
  const long double threshold = static_cast<long double>(M) * std::exp2l(static_cast<long double>(a) * scale);
  DisjointSets ds(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto dist = l1_distance(g.vertices.cubes[i], g.vertices.cubes[j]);
      if (static_cast<long double>(dist) <= threshold) {
        g.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
        ds.unite(i, j);
      }
    }
  }
  g.components = ds.groups();
  std::vector<int> comp_of(n);
  for (std::size_t k = 0; k < g.components.size(); ++k)
    for (int v : g.components[k]) comp_of[static_cast<std::size_t>(v)] = static_cast<int>(k);
  std::vector<std::vector<Site>> areas(g.components.size());
  for (const Site& s : r) {
    const Cube c = cube_of(s, scale);
    const auto it = std::lower_bound(g.vertices.cubes.begin(), g.vertices.cubes.end(), c);
    areas[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(it - g.vertices.cubes.begin())])].push_back(s);
  }
  for (auto& v : areas) g.covered_areas.emplace_back(r.dim(), std::move(v));
  return g;
}

// ---------------------------------------------------------------- rectangles

bool Rectangle::contains(const Site& s) const {
  for (int i = 0; i < dim; ++i) {
    const int off = s[i] - corner[i];
    if (off < 0 || off >= extent[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

Region Rectangle::points() const {
  Site hi = corner;
  for (int i = 0; i < dim; ++i) hi[i] = corner[i] + extent[static_cast<std::size_t>(i)] - 1;
  return Region::box(corner, hi);
}

std::size_t Rectangle::face_size(int axis) const {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i)
    if (i != axis) n *= static_cast<std::size_t>(extent[static_cast<std::size_t>(i)]);
  return n;
}

Projection project(const Region& a, const Rectangle& rect, int axis) {
  if (axis < 0 || axis >= rect.dim) throw std::invalid_argument("axis out of range");
  Site hi = rect.corner;
  for (int i = 0; i < rect.dim; ++i) hi[i] = rect.corner[i] + rect.extent[static_cast<std::size_t>(i)] - 1;
  hi[axis] = rect.corner[axis];
  std::vector<Site> all, good, bad;
  const Region face = Region::box(rect.corner, hi);
  for (const Site& x : face) {
    bool meets_a = false, meets_rest = false;
    for (int k = 0; k < rect.extent[static_cast<std::size_t>(axis)]; ++k) {
      if (a.contains(x.shifted(axis, k))) meets_a = true;
      else meets_rest = true;
    }
    if (!meets_a) continue;
    all.push_back(x);
    (meets_rest ? good : bad).push_back(x);
  }
  return Projection{Region(rect.dim, std::move(all)), Region(rect.dim, std::move(good)), Region(rect.dim, std::move(bad))};
}

}  // namespace lrfim
