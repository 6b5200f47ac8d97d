#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "lrfim/constants.hpp"
#include "lrfim/contour.hpp"
#include "lrfim/lattice.hpp"
#include "lrfim/params.hpp"
#include "lrfim/report.hpp"

namespace lrfim {

enum class Admissibility {
  AtLeastHalf,  // |C ∩ I₋| >= |C|/2, the displayed set definition
  MoreThanHalf  // strict variant for sensitivity runs
};

struct AdmissibleCover {
  int level = 0;
  CubeCollection cubes;           // 𝔉_ℓ(γ)
  Region B;                       // B_ℓ(γ)
  CubeCollection inner_boundary;  // cubes of 𝔉_ℓ with a face neighbour outside it
  std::vector<std::pair<Cube, Cube>> edge_boundary;  // (inside, outside) face pairs
};

/// Cubes at scale rℓ that are at least half filled by `interior`.
AdmissibleCover admissible_cover(const Region& interior, int level, const Params& p,
                                 Admissibility rule = Admissibility::AtLeastHalf);
AdmissibleCover admissible_cover(const Contour& gamma, int level, const Params& p,
                                 Admissibility rule = Admissibility::AtLeastHalf);

/// Edge boundary rebuilt from the inner boundary plus a membership oracle for neighbours.
std::vector<std::pair<Cube, Cube>> reconstruct_edge_boundary(const CubeCollection& inner,
                                                             const std::function<bool(const Cube&)>& admissible);

/// 2ε √|A Δ B|
double d2(const Region& A, const Region& B, double eps);

/// Σ_i |P_i(A∩R)| <= c(d,λ) |∂_ex A ∩ R| when R <= r_i <= 2R (R >= 2) and |P_i(A∩R)| <= λ|R_i|.
CheckReport check_projection_lemma(const Region& A, const Rectangle& R, double lambda);

/// 2^{rℓ(d-1)} <= b |∂_ex A ∩ (C ∪ C')| for face-sharing rℓ-cubes with C at least half in A and
/// C' less than half.
CheckReport check_cube_pair_lemma(const Region& A, const Cube& C, const Cube& Cp, double b);

struct Prop1Report {
  int level = 0;
  CheckReport inner_vs_exterior;  // |∂_in 𝔉_ℓ| <= b₁ |∂_ex I₋| / 2^{rℓ(d-1)}
  CheckReport exterior_vs_size;   // b₁ |∂_ex I₋| / 2^{rℓ(d-1)} <= b₁ |γ| / 2^{rℓ(d-1)}
  CheckReport symmetric_difference;  // |B_ℓ Δ B_{ℓ+1}| <= b₂ 2^{rℓ} |γ|
  CheckReport inner_vs_exterior_printed;  // first inequality with b₁ = 2d/b
  CheckReport cutoff_empty;  // b₁|γ|/2^{rℓ(d-1)} < 1 implies 𝔉_ℓ = ∅ (HypothesisNotMet otherwise)
};
Prop1Report check_proposition1(const Contour& gamma, int level, const Params& p, const ConstantTable& k);

/// Largest ℓ to examine: the first ℓ with b₁|γ|/2^{rℓ(d-1)} < 1.
int proposition1_cutoff(std::size_t size, const Params& p, const ConstantTable& k);

struct ApproximationRadius {
  double distance = 0;
  double bound = 0;
  CheckReport check;
};
/// Throws std::invalid_argument unless B_ℓ(γ₁) = B_ℓ(γ₂) and |γ₁| = |γ₂|.
ApproximationRadius approximation_radius(const Contour& g1, const Contour& g2, int level, const Params& p,
                                         const ConstantTable& k);

struct BellImageCount {
  std::size_t n = 0;
  int level = 0;
  std::size_t contours = 0;
  std::size_t images = 0;
  double log_bound = 0;  // c₄ ℓ^{κ+1} n / 2^{rℓ(d-1)}
  CheckReport check;     // log(images) <= log_bound, only for 1 <= ℓ <= log_{2^r}(b₁ n)/(d-1)
};
/// Distinct B_ℓ images over the given contours of size n.
BellImageCount count_Bell_images(const std::vector<Contour>& contours, std::size_t n, int level, const Params& p,
                                 const ConstantTable& k);

}  // namespace lrfim
