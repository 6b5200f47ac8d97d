#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lrfim/constants.hpp"
#include "lrfim/contour.hpp"
#include "lrfim/lattice.hpp"
#include "lrfim/params.hpp"
#include "lrfim/report.hpp"

namespace lrfim {

using BigInt = boost::multiprecision::cpp_int;

/// Every cube of `fine` lies inside a cube of `coarse` (fine.scale <= coarse.scale).
bool is_subordinated(const CubeCollection& fine, const CubeCollection& coarse);

struct SubordinatedCount {
  BigInt exact;         // C(2^{(m-n)d} |coarse|, V)
  double log_exact = 0;
  double log_bound = 0;  // V log(2^{(m-n)d} e |coarse| / V), 0 for V = 0
};
SubordinatedCount count_subordinated(const CubeCollection& coarse, int scale, std::int64_t V);

BigInt binomial(std::uint64_t n, std::uint64_t k);

/// ceil(log_{2^r} (diam ∨ 1)).
int n_r(const Region& lambda, int r);
/// Σ_{n=ℓ}^{n_r(Λ)} |C_{rn}(Λ)|
std::int64_t partial_volume(const Region& lambda, int level, const Params& p);

struct Graph {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> adj;

  explicit Graph(std::size_t vertices = 0) : n(vertices), adj(vertices) {}
  void add_edge(std::size_t u, std::size_t v);
  bool connected(const std::vector<std::size_t>& vertices) const;
};

/// At most ceil(|v(G)|/k) connected vertex sets of size <= 2k covering v(G), built from a
/// spanning tree in post-order. Throws std::invalid_argument on an empty or disconnected G or k < 1.
std::vector<std::vector<std::size_t>> cover_graph_by_subgraphs(const Graph& g, std::size_t k);

/// V_r^ℓ(sp γ) <= b₃(ℓ ∨ 1) |C_{rℓ}(γ)| with b₃ = b3_vol.
CheckReport check_volume_bound(const Contour& gamma, int level, const Params& p, const ConstantTable& k);

/// |C_{rℓ}(γ)| against b₄(ℓ∨1)^κ |γ| / 2^{ra'ℓ} for ℓ < j, and b₄' ℓ^κ (|γ| / 2^{r a' ℓ / a} ∨ 1) for ℓ >= j.
CheckReport check_covering_bound(const Contour& gamma, int level, int step, const Params& p, const ConstantTable& k);

struct FamilyCount {
  int level = 0;
  std::int64_t V = 0;
  std::size_t count = 0;
  std::size_t nodes = 0;  // search nodes visited
  CheckReport check;      // log(count) <= b₅ V
};
/// Enumerates collections of rℓ-cubes C with V_r^ℓ(B_C) = V and B_C ⊂ [-diam B_C, diam B_C]^d.
/// Throws std::length_error once more than `budget` search nodes are needed.
FamilyCount check_family_bound(int level, std::int64_t V, const Params& p, std::size_t budget = 20'000'000);

struct CoveringCount {
  std::size_t n = 0;
  int level = 0;
  std::size_t contours = 0;
  std::size_t coverings = 0;
  double log_bound = 0;  // b₆ (ℓ∨1)^{κ+1} (n / 2^{r ℓ a'/a} ∨ 1)
  CheckReport check;
};
/// Distinct rℓ-coverings of the supports of the given contours of size n.
CoveringCount check_coverings_of_C0(const std::vector<Contour>& contours, std::size_t n, int level, const Params& p,
                                    const ConstantTable& k);

/// |C₀(n)| <= e^{b₆ n}
CheckReport check_C0_count(std::size_t count, std::size_t n, const ConstantTable& k);

}  // namespace lrfim
