#include "lrfim/coarse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace lrfim {

AdmissibleCover admissible_cover(const Region& interior, int level, const Params& p, Admissibility rule) {
  if (level < 0) throw std::invalid_argument("level must be >= 0");
  const int dim = interior.dim() ? interior.dim() : p.d;
  const int scale = p.r * level;
  AdmissibleCover out;
  out.level = level;
  out.cubes.scale = scale;
  out.cubes.dim = dim;
  out.inner_boundary = out.cubes;
  out.B = Region(dim);

  std::map<Cube, std::size_t> count;
  for (const Site& s : interior) ++count[cube_of(s, scale)];
  const double vol = std::ldexp(1.0, scale * dim);
  std::vector<Cube> adm;
  for (const auto& [c, n] : count) {
    const double twice = 2.0 * static_cast<double>(n);
    if (rule == Admissibility::AtLeastHalf ? twice >= vol : twice > vol) adm.push_back(c);
  }
  out.cubes = make_collection(dim, scale, std::move(adm));
  out.B = out.cubes.covered();
  if (out.B.dim() == 0) out.B = Region(dim);

  std::vector<Cube> inner;
  for (const Cube& c : out.cubes.cubes) {
    bool on_edge = false;
    for (const Cube& n : face_neighbors(c)) {
      if (out.cubes.contains(n)) continue;
      on_edge = true;
      out.edge_boundary.emplace_back(c, n);
    }
    if (on_edge) inner.push_back(c);
  }
  out.inner_boundary = make_collection(dim, scale, std::move(inner));
  std::sort(out.edge_boundary.begin(), out.edge_boundary.end());
  return out;
}

AdmissibleCover admissible_cover(const Contour& gamma, int level, const Params& p, Admissibility rule) {
  return admissible_cover(gamma.I_minus, level, p, rule);
}

std::vector<std::pair<Cube, Cube>> reconstruct_edge_boundary(const CubeCollection& inner,
                                                             const std::function<bool(const Cube&)>& admissible) {
  std::vector<std::pair<Cube, Cube>> out;
  for (const Cube& c : inner.cubes)
    for (const Cube& n : face_neighbors(c))
      if (!admissible(n)) out.emplace_back(c, n);
  std::sort(out.begin(), out.end());
  return out;
}

double d2(const Region& A, const Region& B, double eps) {
  return 2.0 * eps * std::sqrt(static_cast<double>(A.sym_diff(B).size()));
}

CheckReport check_projection_lemma(const Region& A, const Rectangle& R, double lambda) {
  const int d = R.dim;
  int lo = R.extent[0], hi = R.extent[0];
  for (int i = 1; i < d; ++i) {
    lo = std::min(lo, R.extent[static_cast<std::size_t>(i)]);
    hi = std::max(hi, R.extent[static_cast<std::size_t>(i)]);
  }
  bool hyp = d >= 2 && lo >= 2 && hi <= 2 * lo;
  const Region inside = A.intersect(R.points());
  double lhs = 0;
  for (int i = 0; i < d && hyp; ++i) {
    const double pi = static_cast<double>(project(inside, R, i).all.size());
    if (pi > lambda * static_cast<double>(R.face_size(i))) hyp = false;
    lhs += pi;
  }
  if (!hyp) return make_check("projection_lemma", lhs, 0.0, false);
  std::size_t ext = 0;
  for (const Site& s : external_boundary(A))
    if (R.contains(s)) ++ext;
  return make_check("projection_lemma", lhs, c_projection(d, lambda) * static_cast<double>(ext));
}

CheckReport check_cube_pair_lemma(const Region& A, const Cube& C, const Cube& Cp, double b) {
  const int d = C.anchor.dim;
  const double vol = C.volume();
  const double lhs = std::ldexp(1.0, C.scale * (d - 1));
  if (!share_face(C, Cp)) return make_check("cube_pair_lemma", lhs, 0.0, false);
  const Region pc = C.points(), pcp = Cp.points();
  const double in_c = static_cast<double>(A.intersect(pc).size());
  const double in_cp = static_cast<double>(A.intersect(pcp).size());
  if (!(2.0 * in_c >= vol && 2.0 * in_cp < vol)) return make_check("cube_pair_lemma", lhs, 0.0, false);
  const Region U = pc.unite(pcp);
  const double ext = static_cast<double>(external_boundary(A).intersect(U).size());
  return make_check("cube_pair_lemma", lhs, b * ext);
}

int proposition1_cutoff(std::size_t size, const Params& p, const ConstantTable& k) {
  if (p.d < 2) throw std::invalid_argument("the cutoff needs d >= 2");
  const double top = k.b1 * static_cast<double>(size);
  int l = 0;
  while (top / std::ldexp(1.0, p.r * l * (p.d - 1)) >= 1.0) ++l;
  return l;
}

Prop1Report check_proposition1(const Contour& gamma, int level, const Params& p, const ConstantTable& k) {
  const AdmissibleCover F = admissible_cover(gamma, level, p);
  const AdmissibleCover F1 = admissible_cover(gamma, level + 1, p);
  const double den = std::ldexp(1.0, p.r * level * (p.d - 1));
  const double n = static_cast<double>(gamma.size());
  const double inner = static_cast<double>(F.inner_boundary.size());
  const double ext = static_cast<double>(external_boundary(gamma.I_minus).size());

  Prop1Report r;
  r.level = level;
  r.inner_vs_exterior = make_check("prop1_inner", inner, k.b1 * ext / den);
  r.exterior_vs_size = make_check("prop1_exterior", k.b1 * ext / den, k.b1 * n / den);
  r.symmetric_difference = make_check("prop1_symdiff", static_cast<double>(F.B.sym_diff(F1.B).size()),
                                      k.b2 * std::ldexp(1.0, p.r * level) * n);
  r.inner_vs_exterior_printed = make_check("prop1_inner_printed", inner, k.b1_as_printed * ext / den);
  r.cutoff_empty = make_check("prop1_cutoff", static_cast<double>(F.cubes.size()), 0.0, k.b1 * n / den < 1.0);
  return r;
}

ApproximationRadius approximation_radius(const Contour& g1, const Contour& g2, int level, const Params& p,
                                         const ConstantTable& k) {
  if (g1.size() != g2.size()) throw std::invalid_argument("contours differ in size");
  if (admissible_cover(g1, level, p).B != admissible_cover(g2, level, p).B)
    throw std::invalid_argument("contours have different B_l images");
  ApproximationRadius out;
  out.distance = d2(g1.I_minus, g2.I_minus, p.eps);
  out.bound = 4.0 * p.eps * k.b3_diam * std::pow(2.0, p.r * level / 2.0) *
              std::sqrt(static_cast<double>(g1.size()));
  out.check = make_check("approximation_radius", out.distance, out.bound);
  return out;
}

BellImageCount count_Bell_images(const std::vector<Contour>& contours, std::size_t n, int level, const Params& p,
                                 const ConstantTable& k) {
  BellImageCount out;
  out.n = n;
  out.level = level;
  std::set<Region> images;
  for (const Contour& g : contours) {
    if (g.size() != n) continue;
    ++out.contours;
    images.insert(admissible_cover(g, level, p).B);
  }
  out.images = images.size();
  const double den = std::ldexp(1.0, p.r * level * (p.d - 1));
  out.log_bound = k.c4 * std::pow(static_cast<double>(level), k.kappa + 1.0) * static_cast<double>(n) / den;
  bool hyp = level >= 1 && p.d >= 2 && n > 0;
  if (hyp) {
    const double top = std::log(k.b1 * static_cast<double>(n)) / (p.r * std::log(2.0)) / (p.d - 1);
    hyp = level <= top;
  }
  out.check = make_check("bell_images", std::log(static_cast<double>(std::max<std::size_t>(out.images, 1))),
                         out.log_bound, hyp);
  return out;
}

}  // namespace lrfim
