#include "lrfim/contour.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "lrfim/numerics.hpp"

namespace lrfim {

namespace {

Site inflate(const Site& s, int by) {
  Site o = s;
  for (int i = 0; i < s.dim; ++i) o[i] += by;
  return o;
}

Region union_of(int dim, const std::vector<Region>& rs) {
  std::vector<Site> all;
  for (const auto& r : rs) all.insert(all.end(), r.begin(), r.end());
  return Region(dim, std::move(all));
}

void sort_parts(Partition& P) {
  std::vector<std::size_t> idx(P.parts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return P.parts[x][0] < P.parts[y][0]; });
  Partition out;
  out.method = P.method;
  for (auto i : idx) {
    out.parts.push_back(std::move(P.parts[i]));
    out.step_of_part.push_back(P.step_of_part[i]);
  }
  P = std::move(out);
}

/// Index of the connected component of x^c holding each site: -1 for the unbounded one.
int complement_component(const VolumeInterior& vi, const Site& s) {
  if (!vi.interior.contains(s)) return -1;
  for (std::size_t k = 0; k < vi.interior_components.size(); ++k)
    if (vi.interior_components[k].contains(s)) return static_cast<int>(k);
  return -1;
}

/// Union of the external connected components of a support.
Region external_part(const Region& support) {
  const auto comps = components(support);
  std::vector<Region> vols;
  vols.reserve(comps.size());
  for (const auto& c : comps) vols.push_back(volume(c));
  std::vector<Region> ext;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    bool is_ext = true;
    for (std::size_t j = 0; j < comps.size() && is_ext; ++j)
      if (j != k && vols[j].intersects(vols[k]) && !vols[j].is_subset_of(vols[k])) is_ext = false;
    if (is_ext) ext.push_back(comps[k]);
  }
  return union_of(support.dim(), ext);
}

int constant_sign(const Configuration& sigma, const Region& read) {
  int sign = 0;
  for (const Site& s : read) {
    const int v = sigma.spin(s);
    if (sign == 0) sign = v;
    else if (v != sign) throw std::invalid_argument("not a valid contour of σ");
  }
  if (sign == 0) throw std::invalid_argument("not a valid contour of σ");
  return sign;
}

Contour assemble(const Region& support, int outer, const VolumeInterior& vi, std::vector<int> labels) {
  Contour g;
  g.support = support;
  g.outer_label = outer;
  g.interior_components = vi.interior_components;
  g.interior_labels = std::move(labels);
  g.interior = vi.interior;
  g.volume = vi.volume;
  std::vector<Region> plus, minus;
  for (std::size_t k = 0; k < g.interior_components.size(); ++k)
    (g.interior_labels[k] > 0 ? plus : minus).push_back(g.interior_components[k]);
  g.I_plus = union_of(support.dim(), plus);
  g.I_minus = union_of(support.dim(), minus);
  return g;
}

/// Pairwise couplings by l1 distance, cached per call.
class CouplingTable {
 public:
  explicit CouplingTable(const Params& p) : J_(p.J), alpha_(p.alpha) {}
  double operator()(int dist) {
    if (dist == 0) return 0.0;
    const auto u = static_cast<std::size_t>(dist);
    if (u >= cache_.size()) {
      const std::size_t old = cache_.size();
      cache_.resize(u + 1);
      for (std::size_t i = old; i <= u; ++i) cache_[i] = i == 0 ? 0.0 : J_ * std::pow(static_cast<double>(i), -alpha_);
    }
    return cache_[u];
  }

 private:
  double J_, alpha_;
  std::vector<double> cache_;
};

}  // namespace

// ---------------------------------------------------------------- boundary of a configuration

Region boundary_of_config(const Configuration& sigma) {
  const int d = sigma.region.dim();
  if (sigma.region.empty()) return Region(d);
  GridIndex g(inflate(sigma.region.lo(), -2), inflate(sigma.region.hi(), 2));
  std::vector<std::int8_t> spin(g.size(), static_cast<std::int8_t>(sigma.boundary));
  for (std::size_t i = 0; i < sigma.region.size(); ++i) spin[g.index(sigma.region[i])] = sigma.spins[i];
  std::vector<Site> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool incorrect = false;
    g.for_each_neighbor(i, [&](std::size_t n) { incorrect |= spin[n] != spin[i]; });
    if (incorrect) out.push_back(g.site(i));
  }
  return Region(d, std::move(out));
}

// ---------------------------------------------------------------- partitions

bool condition_B(const Region& x, const Region& y, const Params& p) {
  const double vmin = static_cast<double>(std::min(volume(x).size(), volume(y).size()));
  return static_cast<double>(l1_distance(x, y)) > p.M * std::pow(vmin, p.a / p.delta);
}

bool condition_A1(const Region& x, const Region& y) {
  if (y.empty()) return true;
  if (x.intersects(y)) return false;
  const auto vi = volume_interior(x);
  const int first = complement_component(vi, y[0]);
  for (const Site& s : y)
    if (complement_component(vi, s) != first) return false;
  return true;
}

Partition gamma_r_partition(const Region& A, const Params& p) {
  if (A.empty()) throw std::invalid_argument("gamma_r_partition needs a non-empty set");
  Partition P;
  P.method = PartitionMethod::GammaR;
  Region rest = A;
  for (int n = 1; !rest.empty(); ++n) {
    if (n > 4096) throw std::runtime_error("gamma_r construction did not terminate");
    const int scale = p.r * n;
    const CubeGraph G = cube_graph(rest, scale, p.M, p.a);
    const double limit = std::exp2(static_cast<double>(scale) * (p.d + 1));
    std::vector<Region> removed;
    for (const Region& area : G.covered_areas) {
      if (static_cast<double>(volume(area).size()) <= limit) {
        P.parts.push_back(area);
        P.step_of_part.push_back(n);
        removed.push_back(area);
      }
    }
    if (!removed.empty()) rest = rest.minus(union_of(A.dim(), removed));
  }
  sort_parts(P);
  return P;
}

std::vector<std::vector<Region>> valid_partitions(const Region& A, const Params& p) {
  const std::size_t n = A.size();
  if (n > kFinestCap) throw std::invalid_argument("finest partition: set exceeds the size cap");
  if (n == 0) return {{}};
  const std::uint32_t full = (1u << n) - 1;
  std::vector<int> vol(full + 1, -1);
  auto subset = [&](std::uint32_t m) {
    std::vector<Site> s;
    for (std::size_t i = 0; i < n; ++i)
      if (m >> i & 1u) s.push_back(A[i]);
    return Region(A.dim(), std::move(s));
  };
  auto volume_of = [&](std::uint32_t m) {
    if (vol[m] < 0) vol[m] = static_cast<int>(volume(subset(m)).size());
    return vol[m];
  };
  std::vector<int> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = l1_distance(A[i], A[j]);
  auto separated = [&](std::uint32_t x, std::uint32_t y) {
    int dmin = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < n; ++i) {
      if (!(x >> i & 1u)) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (y >> j & 1u) dmin = std::min(dmin, dist[i * n + j]);
    }
    const double vmin = std::min(volume_of(x), volume_of(y));
    return static_cast<double>(dmin) > p.M * std::pow(vmin, p.a / p.delta);
  };

  std::vector<std::vector<Region>> out;
  std::vector<int> rgs(n, 0);
  // Restricted growth strings enumerate every set partition once.
  auto visit = [&](auto&& self, std::size_t i, int blocks) -> void {
    if (i == n) {
      std::vector<std::uint32_t> masks(static_cast<std::size_t>(blocks), 0);
      for (std::size_t k = 0; k < n; ++k) masks[static_cast<std::size_t>(rgs[k])] |= 1u << k;
      for (std::size_t x = 0; x < masks.size(); ++x)
        for (std::size_t y = x + 1; y < masks.size(); ++y)
          if (!separated(masks[x], masks[y])) return;
      std::vector<Region> parts;
      for (auto m : masks) parts.push_back(subset(m));
      std::sort(parts.begin(), parts.end(), [](const Region& a, const Region& b) { return a[0] < b[0]; });
      out.push_back(std::move(parts));
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      rgs[i] = b;
      self(self, i + 1, std::max(blocks, b + 1));
    }
  };
  visit(visit, 0, 0);
  return out;
}

Partition finest_partition_bruteforce(const Region& A, const Params& p) {
  if (A.empty()) throw std::invalid_argument("finest partition needs a non-empty set");
  const auto all = valid_partitions(A, p);
  std::vector<int> label(A.size(), 0);
  for (const auto& parts : all) {
    std::map<std::pair<int, int>, int> ids;
    std::vector<int> next(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) {
      int block = 0;
      for (std::size_t k = 0; k < parts.size(); ++k)
        if (parts[k].contains(A[i])) block = static_cast<int>(k);
      auto [it, fresh] = ids.emplace(std::make_pair(label[i], block), static_cast<int>(ids.size()));
      next[i] = it->second;
    }
    label = std::move(next);
  }
  std::map<int, std::vector<Site>> groups;
  for (std::size_t i = 0; i < A.size(); ++i) groups[label[i]].push_back(A[i]);
  Partition P;
  P.method = PartitionMethod::FinestBruteforce;
  for (auto& [id, sites] : groups) {
    P.parts.emplace_back(A.dim(), std::move(sites));
    P.step_of_part.push_back(0);
  }
  sort_parts(P);
  return P;
}

bool refines(const std::vector<Region>& fine, const std::vector<Region>& coarse) {
  for (const auto& f : fine) {
    bool inside = false;
    for (const auto& c : coarse)
      if (f.is_subset_of(c)) {
        inside = true;
        break;
      }
    if (!inside) return false;
  }
  return true;
}

PartitionCheck check_partition(const Region& A, const Partition& P, const Params& p) {
  PartitionCheck c;
  std::size_t total = 0;
  for (const auto& part : P.parts) {
    if (part.empty()) c.exact_cover = false;
    total += part.size();
  }
  if (total != A.size() || union_of(A.dim(), P.parts) != A) c.exact_cover = false;
  for (std::size_t i = 0; i < P.parts.size(); ++i) {
    for (std::size_t j = 0; j < P.parts.size(); ++j) {
      if (i == j) continue;
      if (i < j && !condition_B(P.parts[i], P.parts[j], p)) ++c.b_violations;
      if (!condition_A1(P.parts[i], P.parts[j])) ++c.a1_violations;
    }
  }
  if (P.method == PartitionMethod::GammaR) {
    for (std::size_t i = 0; i < P.parts.size(); ++i) {
      const double limit = std::exp2(static_cast<double>(p.r) * P.step_of_part[i] * (p.d + 1));
      if (static_cast<double>(volume(P.parts[i]).size()) > limit) ++c.step_volume_violations;
    }
  }
  return c;
}

std::size_t check_big_clusters(const Region& part, int step, const Params& p) {
  std::size_t bad = 0;
  for (int l = 0; l < step; ++l) {
    const CubeGraph G = cube_graph(part, p.r * l, p.M, p.a);
    const double need = std::exp2(p.r * (1.0 - 1.0 / p.d) * l);
    for (const auto& comp : G.components)
      if (static_cast<double>(comp.size()) < need) ++bad;
  }
  return bad;
}

// ---------------------------------------------------------------- contours

Contour label_contour(const Configuration& sigma, const Region& part) {
  if (part.empty()) throw std::invalid_argument("not a valid contour of σ");
  const int outer = constant_sign(sigma, inner_boundary(volume(external_part(part))));
  const auto vi = volume_interior(part);
  std::vector<int> labels;
  for (const auto& ik : vi.interior_components) labels.push_back(constant_sign(sigma, inner_boundary(volume(ik))));
  return assemble(part, outer, vi, std::move(labels));
}

Contour make_contour(const Region& support, int outer_label, const std::vector<int>& interior_labels) {
  const auto vi = volume_interior(support);
  if (vi.interior_components.size() != interior_labels.size())
    throw std::invalid_argument("label count does not match the interior components");
  return assemble(support, outer_label, vi, interior_labels);
}

bool ContourFamily::contains(const Contour& g) const {
  return std::find(contours.begin(), contours.end(), g) != contours.end();
}

ContourFamily contours_of(const Configuration& sigma, const Params& p, PartitionMethod method) {
  ContourFamily fam;
  fam.origin_label = sigma.boundary;
  const Region A = boundary_of_config(sigma);
  fam.partition.method = method;
  if (A.empty()) return fam;
  fam.partition = method == PartitionMethod::GammaR ? gamma_r_partition(A, p) : finest_partition_bruteforce(A, p);
  for (const auto& part : fam.partition.parts) fam.contours.push_back(label_contour(sigma, part));
  fam.external.assign(fam.contours.size(), true);
  if (fam.contours.size() > 1) {
    for (std::size_t i = 0; i < fam.contours.size(); ++i) {
      const auto ext_comps = components(external_part(fam.contours[i].support));
      for (std::size_t j = 0; j < fam.contours.size() && fam.external[i]; ++j) {
        if (j == i) continue;
        for (const auto& c : ext_comps)
          if (c.is_subset_of(fam.contours[j].volume)) {
            fam.external[i] = false;
            break;
          }
      }
    }
  }
  return fam;
}

Configuration erase_contour(const Configuration& sigma, const Contour& gamma, const Params& p, EraseMode mode) {
  if (mode != EraseMode::Unchecked) {
    const bool present = contours_of(sigma, p).contains(gamma);
    if (!present) {
      if (mode == EraseMode::Lenient) return sigma;
      throw std::invalid_argument("γ is not a contour of σ");
    }
  }
  Configuration out = sigma;
  for (const Site& s : gamma.I_minus) {
    const auto i = out.region.index_of(s);
    if (i < 0) throw std::invalid_argument("I-(γ) leaves the configuration region");
    out.spins[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(-out.spins[static_cast<std::size_t>(i)]);
  }
  for (const Site& s : gamma.support) {
    const auto i = out.region.index_of(s);
    if (i >= 0) out.spins[static_cast<std::size_t>(i)] = +1;
    else if (out.boundary != +1) throw std::invalid_argument("sp(γ) leaves the configuration region");
  }
  return out;
}

double interaction(const Region& A, const Region& B, const Params& p) {
  CouplingTable J(p);
  double s = 0.0;
  for (const Site& x : A)
    for (const Site& y : B) s += J(l1_distance(x, y));
  return s;
}

double interaction_F(const Region& B, const Params& p) {
  const double c = lattice_constant(p.d, p.alpha).value;
  return static_cast<double>(B.size()) * p.J * c - interaction(B, B, p);
}

PeierlsGap peierls_gap(const Configuration& sigma, const Contour& gamma, const Params& p, const ConstantTable& k) {
  const FieldSample h0 = zero_field(sigma.region);
  const Configuration tau = erase_contour(sigma, gamma, p, EraseMode::Unchecked);
  PeierlsGap g;
  g.delta_h = rel_energy(sigma, h0, p) - rel_energy(tau, h0, p);
  g.budget = static_cast<double>(gamma.size()) + interaction_F(gamma.I_minus, p) + interaction_F(gamma.support, p);
  g.rhs = k.kappa_defined ? k.c2 * g.budget : std::numeric_limits<double>::quiet_NaN();
  g.ratio = g.delta_h / g.budget;
  return g;
}

// ---------------------------------------------------------------- enumeration

namespace {

template <class Visit>
void enumerate_spins(const Region& lambda, const Region& free, std::size_t cap, Visit&& visit_chunk) {
  if (free.size() > cap) throw std::invalid_argument("enumeration exceeds the exact cap");
  const std::uint64_t total = std::uint64_t{1} << free.size();
  std::vector<std::size_t> pos;
  for (const Site& s : free) pos.push_back(static_cast<std::size_t>(lambda.index_of(s)));
  const std::uint64_t chunks = std::min<std::uint64_t>(total, 256);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::uint64_t lo = total * static_cast<std::uint64_t>(c) / chunks;
    const std::uint64_t hi = total * static_cast<std::uint64_t>(c + 1) / chunks;
    Configuration sigma = Configuration::uniform(lambda, +1, +1);
    std::vector<Contour> local;
    for (std::uint64_t m = lo; m < hi; ++m) {
      for (std::size_t b = 0; b < pos.size(); ++b) sigma.spins[pos[b]] = (m >> b & 1u) ? -1 : +1;
      visit_chunk(sigma, local);
    }
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());
#pragma omp critical(lrfim_enum_merge)
    visit_chunk.merge(local);
  }
}

struct Collector {
  std::vector<Contour> all;
  void merge(std::vector<Contour>& local) {
    all.insert(all.end(), std::make_move_iterator(local.begin()), std::make_move_iterator(local.end()));
  }
  std::vector<Contour> finish() {
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return std::move(all);
  }
};

}  // namespace

C0Enumeration enumerate_C0_all(const Region& lambda, const Params& p, std::size_t cap) {
  const Region free = lambda.minus(inner_boundary(lambda));
  const Site origin = Site::origin(lambda.dim());
  struct V : Collector {
    const Params* p;
    const Region* lambda;
    Site origin;
    void operator()(const Configuration& sigma, std::vector<Contour>& local) const {
      const auto fam = contours_of(sigma, *p);
      if (fam.size() != 1) return;
      const Contour& g = fam.contours[0];
      if (g.outer_label != +1 || !g.volume.contains(origin) || !g.volume.is_subset_of(*lambda)) return;
      local.push_back(g);
    }
  } v;
  v.p = &p;
  v.lambda = &lambda;
  v.origin = origin;
  enumerate_spins(lambda, free, cap, v);
  C0Enumeration out;
  out.configurations = std::size_t{1} << free.size();
  out.contours = v.finish();
  return out;
}

std::vector<Contour> enumerate_C0(const Region& lambda, std::size_t n, const Params& p, std::size_t cap) {
  std::vector<Contour> out;
  for (auto& g : enumerate_C0_all(lambda, p, cap).contours)
    if (g.size() == n) out.push_back(std::move(g));
  return out;
}

AllContours enumerate_all_contours(const Region& lambda, const Params& p, std::size_t cap) {
  struct V : Collector {
    const Params* p;
    void operator()(const Configuration& sigma, std::vector<Contour>& local) const {
      for (auto& g : contours_of(sigma, *p).contours) local.push_back(std::move(g));
    }
  } v;
  v.p = &p;
  enumerate_spins(lambda, lambda, cap, v);
  AllContours out;
  out.configurations = std::size_t{1} << lambda.size();
  out.contours = v.finish();
  return out;
}

// ---------------------------------------------------------------- dense single-part extraction

bool single_part_regime(const Region& lambda, const Params& p) {
  if (lambda.empty()) return false;
  const Region hat = lambda.unite(external_boundary(lambda));
  const CubeCollection cover = min_cover(hat, p.r);
  const long double limit = static_cast<long double>(p.M) * std::exp2l(static_cast<long double>(p.a) * p.r);
  for (std::size_t i = 0; i < cover.size(); ++i)
    for (std::size_t j = i + 1; j < cover.size(); ++j)
      if (static_cast<long double>(l1_distance(cover.cubes[i], cover.cubes[j])) > limit) return false;
  return static_cast<double>(volume(hat).size()) <= std::exp2(static_cast<double>(p.r) * (p.d + 1));
}

DenseContourExtractor::DenseContourExtractor(const Region& lambda)
    : grid_(inflate(lambda.lo(), -2), inflate(lambda.hi(), 2)), lambda_(lambda) {
  if (grid_.size() > kMaxCells) throw std::invalid_argument("dense extractor: box too large");
  for (const Site& s : lambda) lambda_cell_.push_back(grid_.index(s));
  nbr_.resize(grid_.size());
  for (std::size_t c = 0; c < grid_.size(); ++c) {
    nbr_[c].fill(-1);
    std::size_t k = 0;
    grid_.for_each_neighbor(c, [&](std::size_t n) { nbr_[c][k++] = static_cast<std::int16_t>(n); });
  }
  spin_.assign(grid_.size(), +1);
  stack_.reserve(grid_.size());
}

std::size_t DenseContourExtractor::flood_outside(const std::vector<std::uint8_t>& wall,
                                                 std::vector<std::uint8_t>& seen) {
  seen.assign(grid_.size(), 0);
  stack_.clear();
  stack_.push_back(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack_.empty()) {
    const std::size_t c = stack_.back();
    stack_.pop_back();
    for (std::int16_t n : nbr_[c]) {
      if (n < 0) break;
      const auto u = static_cast<std::size_t>(n);
      if (!seen[u] && !wall[u]) {
        seen[u] = 1;
        ++count;
        stack_.push_back(static_cast<std::uint16_t>(u));
      }
    }
  }
  return count;
}

// `outside` marks the complement of a volume; reads σ on volume cells touching it.
int DenseContourExtractor::read_sign(const std::vector<std::uint8_t>& outside) const {
  int sign = 0;
  for (std::size_t c = 0; c < grid_.size(); ++c) {
    if (outside[c]) continue;
    bool edge = false;
    for (std::int16_t n : nbr_[c]) {
      if (n < 0) break;
      if (outside[static_cast<std::size_t>(n)]) {
        edge = true;
        break;
      }
    }
    if (!edge) continue;
    if (sign == 0) sign = spin_[c];
    else if (spin_[c] != sign) throw std::invalid_argument("not a valid contour of σ");
  }
  return sign;
}

bool DenseContourExtractor::extract(std::span<const std::int8_t> spins, Key& out) {
  const std::size_t N = grid_.size();
  for (std::size_t i = 0; i < lambda_cell_.size(); ++i) spin_[lambda_cell_[i]] = spins[i];
  auto& inc = inc_;
  inc.assign(N, 0);
  bool any = false;
  for (std::size_t c = 0; c < N; ++c) {
    for (std::int16_t n : nbr_[c]) {
      if (n < 0) break;
      if (spin_[static_cast<std::size_t>(n)] != spin_[c]) {
        inc[c] = 1;
        any = true;
        break;
      }
    }
  }
  if (!any) {
    for (std::size_t c : lambda_cell_) spin_[c] = +1;
    return false;
  }

  // Connected components of the support, labelled 1..k.
  auto& comp = comp_;
  comp.assign(N, 0);
  int ncomp = 0;
  for (std::size_t c = 0; c < N; ++c) {
    if (!inc[c] || comp[c]) continue;
    ++ncomp;
    stack_.clear();
    stack_.push_back(static_cast<std::uint16_t>(c));
    comp[c] = static_cast<std::uint8_t>(ncomp);
    while (!stack_.empty()) {
      const std::size_t x = stack_.back();
      stack_.pop_back();
      for (std::int16_t n : nbr_[x]) {
        if (n < 0) break;
        const auto u = static_cast<std::size_t>(n);
        if (inc[u] && !comp[u]) {
          comp[u] = static_cast<std::uint8_t>(ncomp);
          stack_.push_back(static_cast<std::uint16_t>(u));
        }
      }
    }
  }

  auto& wall = wall_;
  auto& seen = seen_;
  wall.resize(N);
  int outer = 0;
  if (ncomp == 1) {
    flood_outside(inc, seen);
    outer = read_sign(seen);
  } else {
    auto& outside = outside_;
    if (outside.size() < static_cast<std::size_t>(ncomp)) outside.resize(static_cast<std::size_t>(ncomp));
    for (int k = 1; k <= ncomp; ++k) {
      for (std::size_t c = 0; c < N; ++c) wall[c] = comp[c] == k;
      flood_outside(wall, outside[static_cast<std::size_t>(k - 1)]);
    }
    auto& ext_wall = ext_wall_;
    ext_wall.assign(N, 0);
    for (int k = 0; k < ncomp; ++k) {
      bool is_ext = true;
      for (int j = 0; j < ncomp && is_ext; ++j) {
        if (j == k) continue;
        const auto& vk = outside[static_cast<std::size_t>(k)];
        const auto& vj = outside[static_cast<std::size_t>(j)];
        bool meet = false, subset = true;
        for (std::size_t c = 0; c < N; ++c) {
          if (vj[c]) continue;
          if (!vk[c]) meet = true;
          else subset = false;
        }
        if (meet && !subset) is_ext = false;
      }
      if (is_ext)
        for (std::size_t c = 0; c < N; ++c) ext_wall[c] |= comp[c] == k + 1;
    }
    flood_outside(ext_wall, seen);
    outer = read_sign(seen);
  }

  // Interior components of the support and their labels.
  auto& outside_support = outside_support_;
  flood_outside(inc, outside_support);
  auto& icomp = icomp_;
  icomp.assign(N, 0);
  out = Key{};
  out.outer = static_cast<std::int8_t>(outer);
  int nint = 0;
  for (std::size_t c = 0; c < N; ++c) {
    if (inc[c]) out.support[c >> 6] |= std::uint64_t{1} << (c & 63);
    if (inc[c] || outside_support[c] || icomp[c]) continue;
    ++nint;
    stack_.clear();
    stack_.push_back(static_cast<std::uint16_t>(c));
    icomp[c] = static_cast<std::uint8_t>(nint);
    while (!stack_.empty()) {
      const std::size_t x = stack_.back();
      stack_.pop_back();
      for (std::int16_t n : nbr_[x]) {
        if (n < 0) break;
        const auto u = static_cast<std::size_t>(n);
        if (!inc[u] && !outside_support[u] && !icomp[u]) {
          icomp[u] = static_cast<std::uint8_t>(nint);
          stack_.push_back(static_cast<std::uint16_t>(u));
        }
      }
    }
    for (std::size_t x = 0; x < N; ++x) wall[x] = icomp[x] == nint;
    flood_outside(wall, seen);
    if (read_sign(seen) < 0)
      for (std::size_t x = 0; x < N; ++x)
        if (icomp[x] == nint) out.minus[x >> 6] |= std::uint64_t{1} << (x & 63);
  }
  for (std::size_t c : lambda_cell_) spin_[c] = +1;
  return true;
}

Contour DenseContourExtractor::to_contour(const Key& key) const {
  std::vector<Site> sup;
  for (std::size_t c = 0; c < grid_.size(); ++c)
    if (key.support[c >> 6] >> (c & 63) & 1u) sup.push_back(grid_.site(c));
  const Region support(lambda_.dim(), std::move(sup));
  const auto vi = volume_interior(support);
  std::vector<int> labels;
  for (const auto& ik : vi.interior_components) {
    const std::size_t c = grid_.index(ik[0]);
    labels.push_back((key.minus[c >> 6] >> (c & 63) & 1u) ? -1 : +1);
  }
  return assemble(support, key.outer, vi, std::move(labels));
}

MinusSetSweep sweep_minus_interiors(const Region& lambda, const Params& p, std::size_t cap) {
  if (lambda.size() > cap || lambda.size() > 30) throw std::invalid_argument("enumeration exceeds the exact cap");
  if (!single_part_regime(lambda, p)) throw std::invalid_argument("sweep needs the single-part regime");
  const std::uint64_t total = std::uint64_t{1} << lambda.size();
  std::vector<std::uint64_t> seen((total + 63) / 64, 0);
  const std::uint64_t chunks = std::min<std::uint64_t>(total, 256);
  std::size_t with_contour = 0;
  const GridIndex grid(inflate(lambda.lo(), -2), inflate(lambda.hi(), 2));
  std::vector<std::int64_t> lambda_of_cell(grid.size(), -1);
  for (std::size_t i = 0; i < lambda.size(); ++i) lambda_of_cell[grid.index(lambda[i])] = static_cast<std::int64_t>(i);
#pragma omp parallel for schedule(dynamic) reduction(+ : with_contour)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    DenseContourExtractor ex(lambda);
    const std::uint64_t lo = total * static_cast<std::uint64_t>(c) / chunks;
    const std::uint64_t hi = total * static_cast<std::uint64_t>(c + 1) / chunks;
    std::vector<std::int8_t> spins(lambda.size());
    DenseContourExtractor::Key k;
    for (std::uint64_t m = lo; m < hi; ++m) {
      for (std::size_t b = 0; b < spins.size(); ++b) spins[b] = (m >> b & 1u) ? -1 : +1;
      if (!ex.extract(spins, k)) continue;
      ++with_contour;
      std::uint64_t mask = 0;
      for (std::size_t w = 0; w < 2; ++w) {
        for (std::uint64_t bits = k.minus[w]; bits; bits &= bits - 1) {
          const auto cell = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
          const auto li = lambda_of_cell[cell];
          if (li < 0) throw std::logic_error("minus interior left the box");
          mask |= std::uint64_t{1} << li;
        }
      }
#pragma omp atomic
      seen[mask >> 6] |= std::uint64_t{1} << (mask & 63);
    }
  }
  MinusSetSweep out;
  out.configurations = static_cast<std::size_t>(total);
  out.with_contour = with_contour;
  for (std::uint64_t w = 0; w < seen.size(); ++w) {
    for (std::uint64_t bits = seen[w]; bits; bits &= bits - 1) {
      const std::uint64_t mask = w * 64 + static_cast<std::uint64_t>(std::countr_zero(bits));
      std::vector<Site> sites;
      for (std::size_t i = 0; i < lambda.size(); ++i)
        if (mask >> i & 1u) sites.push_back(lambda[i]);
      out.minus_sets.emplace_back(lambda.dim(), std::move(sites));
    }
  }
  return out;
}

// ---------------------------------------------------------------- interaction bounds

std::vector<CheckReport> check_aux_interaction_bounds(const ContourFamily& family, std::size_t index,
                                                          const Params& p, const ConstantTable& k) {
  const Contour& g = family.contours.at(index);
  const int dim = g.support.dim();
  auto volumes_where = [&](auto&& keep) {
    std::vector<Region> vs;
    for (std::size_t j = 0; j < family.contours.size(); ++j)
      if (j != index && keep(family.contours[j])) vs.push_back(family.contours[j].volume);
    return union_of(dim, vs);
  };
  const Region& sp = g.support;
  const Region& im = g.I_minus;
  const Region others = volumes_where([](const Contour&) { return true; });
  const Region ext_im = volumes_where([&](const Contour& c) { return !c.support.intersects(im); });
  const Region int_im = volumes_where([&](const Contour& c) { return c.support.is_subset_of(im); });

  const double F_sp = interaction_F(sp, p);
  const double F_im = interaction_F(im, p);
  const double c_alpha = lattice_constant(p.d, p.alpha).value;
  const double vexp = p.a / (p.d + 1.0) * (p.d - p.alpha);
  const double vol_term = std::pow(static_cast<double>(g.volume.size()), vexp) / std::pow(p.M, p.alpha - p.d);
  const double mg = std::pow(p.M, p.decay_gap());
  const bool ok = k.kappa_defined;

  double third = 0.0;
  for (const Site& y : int_im) {
    double inside = 0.0;
    for (const Site& x : im)
      if (!(x == y)) inside += coupling(x, y, p);
    third += p.J * c_alpha - inside;
  }

  std::vector<CheckReport> out;
  out.push_back(make_check("aux_lemma_sp", interaction(sp, others, p),
                 k.kappa1 * (static_cast<double>(sp.size()) * vol_term + F_sp / p.M), ok));
  out.push_back(make_check("aux_lemma_I-", interaction(im, ext_im, p),
                 k.kappa1 * (static_cast<double>(im.size()) * vol_term + F_im / p.M), ok));
  out.push_back(make_check("aux_cor_sp", interaction(sp, others, p), k.kappa2 / mg * F_sp, ok));
  out.push_back(make_check("aux_cor_I-", interaction(im, ext_im, p), k.kappa2 / mg * F_im, ok));
  out.push_back(make_check("aux_cor_I-_complement", third, k.kappa2 * F_im / p.M, ok));
  return out;
}

// ---------------------------------------------------------------- serialization

std::string serialize(const Contour& g) {
  std::ostringstream os;
  os << "support=[";
  for (std::size_t i = 0; i < g.support.size(); ++i) {
    if (i) os << ';';
    os << '(';
    for (int k = 0; k < g.support.dim(); ++k) os << (k ? "," : "") << g.support[i][k];
    os << ')';
  }
  os << "] labels=[(0," << (g.outer_label > 0 ? "+1" : "-1") << ')';
  for (std::size_t k = 0; k < g.interior_labels.size(); ++k)
    os << ";(" << k + 1 << ',' << (g.interior_labels[k] > 0 ? "+1" : "-1") << ')';
  os << ']';
  return os.str();
}

Contour parse_contour(const std::string& line, int dim) {
  auto bracket = [&](const std::string& key) {
    const auto at = line.find(key + "=[");
    if (at == std::string::npos) throw std::invalid_argument("missing " + key + " in contour line");
    const auto start = at + key.size() + 2;
    const auto end = line.find(']', start);
    if (end == std::string::npos) throw std::invalid_argument("unterminated " + key + " in contour line");
    return line.substr(start, end - start);
  };
  auto tuples = [](const std::string& body) {
    std::vector<std::vector<int>> out;
    std::size_t i = 0;
    while ((i = body.find('(', i)) != std::string::npos) {
      const auto j = body.find(')', i);
      if (j == std::string::npos) throw std::invalid_argument("unterminated tuple in contour line");
      std::vector<int> t;
      std::istringstream is(body.substr(i + 1, j - i - 1));
      std::string tok;
      while (std::getline(is, tok, ',')) t.push_back(std::stoi(tok));
      out.push_back(std::move(t));
      i = j + 1;
    }
    return out;
  };
  std::vector<Site> sites;
  for (const auto& t : tuples(bracket("support"))) {
    if (static_cast<int>(t.size()) != dim) throw std::invalid_argument("site dimension mismatch in contour line");
    Site s = Site::origin(dim);
    for (int k = 0; k < dim; ++k) s[k] = t[static_cast<std::size_t>(k)];
    sites.push_back(s);
  }
  const auto labs = tuples(bracket("labels"));
  if (labs.empty() || labs[0].size() != 2 || labs[0][0] != 0) throw std::invalid_argument("outer label missing");
  std::vector<int> interior(labs.size() - 1);
  for (std::size_t k = 1; k < labs.size(); ++k) {
    if (labs[k].size() != 2 || labs[k][0] != static_cast<int>(k)) throw std::invalid_argument("bad label entry");
    interior[k - 1] = labs[k][1];
  }
  return make_contour(Region(dim, std::move(sites)), labs[0][1], interior);
}

}  // namespace lrfim
