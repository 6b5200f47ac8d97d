#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace lrfim {

inline constexpr int kMaxDim = 4;

/// A point of Z^d, d <= kMaxDim. Unused trailing coordinates stay zero.
struct Site {
  std::array<std::int32_t, kMaxDim> c{};
  std::int32_t dim = 0;

  Site() = default;
  Site(std::initializer_list<int> coords);
  static Site origin(int d);

  int operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  std::int32_t& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

  Site shifted(int axis, int delta) const {
    Site s = *this;
    s.c[static_cast<std::size_t>(axis)] += delta;
    return s;
  }

  friend auto operator<=>(const Site&, const Site&) = default;
  friend bool operator==(const Site&, const Site&) = default;
};

std::string to_string(const Site& s);
int l1_distance(const Site& a, const Site& b);

/// Finite subset of Z^d stored as a sorted, duplicate-free vector.
class Region {
 public:
  Region() = default;
  explicit Region(int dim) : dim_(dim) {}
  Region(int dim, std::vector<Site> sites);

  /// Sites of [lo, hi] (inclusive corners).
  static Region box(const Site& lo, const Site& hi);
  /// Box of side `side` per axis holding the origin: [-floor(s/2), s-1-floor(s/2)]^d.
  static Region centered_box(int d, int side);

  int dim() const { return dim_; }
  std::size_t size() const { return sites_.size(); }
  bool empty() const { return sites_.empty(); }
  const std::vector<Site>& sites() const { return sites_; }
  auto begin() const { return sites_.begin(); }
  auto end() const { return sites_.end(); }
  const Site& operator[](std::size_t i) const { return sites_[i]; }

  bool contains(const Site& s) const;
  /// Position of s in sites(), or -1.
  std::ptrdiff_t index_of(const Site& s) const;

  /// Tight bounding box; throws on an empty region.
  const Site& lo() const;
  const Site& hi() const;

  Region unite(const Region& o) const;
  Region intersect(const Region& o) const;
  Region minus(const Region& o) const;
  Region sym_diff(const Region& o) const;
  bool is_subset_of(const Region& o) const;
  bool intersects(const Region& o) const;

  friend bool operator==(const Region& a, const Region& b) { return a.sites_ == b.sites_; }
  friend auto operator<=>(const Region& a, const Region& b) { return a.sites_ <=> b.sites_; }

 private:
  void finish();

  int dim_ = 0;
  std::vector<Site> sites_;
  Site lo_, hi_;
};

std::string to_string(const Region& r);

/// Dense row-major indexer over an inclusive box; backbone of the flood fills.
class GridIndex {
 public:
  GridIndex(const Site& lo, const Site& hi);

  int dim() const { return dim_; }
  std::size_t size() const { return size_; }
  bool inside(const Site& s) const;
  std::size_t index(const Site& s) const;
  Site site(std::size_t idx) const;
  std::int64_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }
  int extent(int axis) const { return ext_[static_cast<std::size_t>(axis)]; }
  const Site& lo() const { return lo_; }

  /// Calls f(neighbor_index) for the in-box nearest neighbours of idx.
  template <class F>
  void for_each_neighbor(std::size_t idx, F&& f) const {
    std::size_t rest = idx;
    for (int i = dim_ - 1; i >= 0; --i) {
      const auto ui = static_cast<std::size_t>(i);
      const std::size_t coord = rest % static_cast<std::size_t>(ext_[ui]);
      rest /= static_cast<std::size_t>(ext_[ui]);
      if (coord > 0) f(idx - static_cast<std::size_t>(stride_[ui]));
      if (coord + 1 < static_cast<std::size_t>(ext_[ui])) f(idx + static_cast<std::size_t>(stride_[ui]));
    }
  }

 private:
  int dim_;
  Site lo_;
  std::array<int, kMaxDim> ext_{};
  std::array<std::int64_t, kMaxDim> stride_{};
  std::size_t size_ = 1;
};

int l1_distance(const Region& a, const Region& b);
std::int64_t diameter(const Region& r);

/// Nearest-neighbour connected components, ordered by their smallest site.
std::vector<Region> components(const Region& r);
bool is_connected(const Region& r);

struct VolumeInterior {
  Region volume;
  Region interior;
  std::vector<Region> interior_components;
};
VolumeInterior volume_interior(const Region& r);
Region volume(const Region& r);

struct Boundaries {
  std::vector<std::pair<Site, Site>> edge;  // (inside, outside)
  Region inner;
  Region external;
};
Boundaries boundaries(const Region& r);
Region inner_boundary(const Region& r);
Region external_boundary(const Region& r);
std::size_t edge_boundary_size(const Region& r);

bool isoperimetric_check(const Region& r);

/// Grid cube prod [2^m x_i, 2^m (x_i+1)).
struct Cube {
  int scale = 0;
  Site anchor;

  std::int64_t side() const;
  /// Lowest / highest corner; only meaningful when the side fits in int32.
  Site lo() const;
  Site hi() const;
  bool contains(const Site& s) const;
  Region points() const;
  double volume() const;

  friend auto operator<=>(const Cube&, const Cube&) = default;
  friend bool operator==(const Cube&, const Cube&) = default;
};

Cube cube_of(const Site& s, int scale);
std::int64_t floor_shift(std::int64_t x, int scale);
/// Closed-form per-axis distance; saturates at INT64_MAX for huge scales.
std::int64_t l1_distance(const Cube& a, const Cube& b);
bool share_face(const Cube& a, const Cube& b);
std::vector<Cube> face_neighbors(const Cube& c);

struct CubeCollection {
  int scale = 0;
  int dim = 0;
  std::vector<Cube> cubes;  // sorted, unique

  std::size_t size() const { return cubes.size(); }
  bool empty() const { return cubes.empty(); }
  bool contains(const Cube& c) const;
  Region covered() const;
  friend bool operator==(const CubeCollection&, const CubeCollection&) = default;
};

CubeCollection make_collection(int dim, int scale, std::vector<Cube> cubes);
CubeCollection min_cover(const Region& r, int scale);

struct CubeGraph {
  CubeCollection vertices;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> components;  // vertex ids, each sorted
  std::vector<Region> covered_areas;          // r ∩ union of the component's cubes
};
/// Edges join cubes at l1 distance <= M * 2^(a*scale).
CubeGraph cube_graph(const Region& r, int scale, double M, double a);

struct Rectangle {
  Site corner;
  std::array<int, kMaxDim> extent{};
  int dim = 0;

  bool contains(const Site& s) const;
  Region points() const;
  std::size_t face_size(int axis) const;
};

struct Projection {
  Region all, good, bad;  // face points with x_axis = corner_axis
};
Projection project(const Region& a, const Rectangle& rect, int axis);

}  // namespace lrfim
