#pragma once

#include <cstddef>
#include <cstdint>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrfim/constants.hpp"
#include "lrfim/lattice.hpp"
#include "lrfim/model.hpp"
#include "lrfim/params.hpp"
#include "lrfim/report.hpp"

namespace lrfim {

inline constexpr std::size_t kFinestCap = 10;

/// Incorrect sites of σ: x whose closed unit ball does not carry a constant spin.
/// Includes sites outside Λ next to it.
Region boundary_of_config(const Configuration& sigma);

enum class PartitionMethod { GammaR, FinestBruteforce };

struct Partition {
  std::vector<Region> parts;      // ordered by smallest site
  PartitionMethod method = PartitionMethod::GammaR;
  std::vector<int> step_of_part;  // removal step n >= 1 for GammaR, 0 otherwise
};

/// d(x, y) > M min{|V(x)|, |V(y)|}^{a/δ}
bool condition_B(const Region& x, const Region& y, const Params& p);
/// y lies inside a single connected component of x^c.
bool condition_A1(const Region& x, const Region& y);

Partition gamma_r_partition(const Region& A, const Params& p);

/// All set partitions of A (|A| <= kFinestCap) whose parts pairwise satisfy (B).
std::vector<std::vector<Region>> valid_partitions(const Region& A, const Params& p);
/// Common refinement of every valid partition.
Partition finest_partition_bruteforce(const Region& A, const Params& p);

/// Every part of `fine` lies inside some part of `coarse`.
bool refines(const std::vector<Region>& fine, const std::vector<Region>& coarse);

struct PartitionCheck {
  bool exact_cover = true;  // condition (A)
  std::size_t b_violations = 0;
  std::size_t a1_violations = 0;
  std::size_t step_volume_violations = 0;  // |V(part)| > 2^{rn(d+1)} at its removal step
  bool ok() const { return exact_cover && b_violations == 0 && step_volume_violations == 0; }
};
PartitionCheck check_partition(const Region& A, const Partition& P, const Params& p);

/// For a part removed at step j: 2^{r(1-1/d)ℓ} <= |C_{rℓ}(part^G)| for every ℓ < j and G.
/// Returns the number of violated (ℓ, G) pairs.
std::size_t check_big_clusters(const Region& part, int step, const Params& p);

struct Contour {
  Region support;
  int outer_label = +1;
  std::vector<Region> interior_components;  // I(γ)^(k), k = 1.. in order of smallest site
  std::vector<int> interior_labels;
  Region interior, volume, I_plus, I_minus;

  std::size_t size() const { return support.size(); }
  friend bool operator==(const Contour& a, const Contour& b) {
    return a.support == b.support && a.outer_label == b.outer_label && a.interior_labels == b.interior_labels;
  }
  friend auto operator<=>(const Contour& a, const Contour& b) {
    if (auto c = a.support <=> b.support; c != 0) return c;
    if (auto c = a.outer_label <=> b.outer_label; c != 0) return c;
    return a.interior_labels <=> b.interior_labels;
  }
};

/// Builds the contour (part, label) of σ; throws "not a valid contour of σ" if a read set
/// does not carry a constant sign.
Contour label_contour(const Configuration& sigma, const Region& part);
/// Contour from a support and explicit labels (interior components taken in canonical order).
Contour make_contour(const Region& support, int outer_label, const std::vector<int>& interior_labels);

struct ContourFamily {
  std::vector<Contour> contours;
  std::vector<bool> external;
  int origin_label = +1;  // boundary condition of σ, the label of the unbounded phase
  Partition partition;

  std::size_t size() const { return contours.size(); }
  bool contains(const Contour& g) const;
};

ContourFamily contours_of(const Configuration& sigma, const Params& p,
                          PartitionMethod method = PartitionMethod::GammaR);

enum class EraseMode {
  Strict,   // γ must be a contour of σ (re-extracted with Γ^r)
  Lenient,  // if γ is not a contour of σ, return σ unchanged
  Unchecked
};
/// τ_γ: identity on I₊ ∪ V^c, flip on I₋, +1 on sp(γ).
Configuration erase_contour(const Configuration& sigma, const Contour& gamma, const Params& p,
                            EraseMode mode = EraseMode::Strict);

/// Σ_{x∈A, y∈B, x≠y} J_xy over ordered pairs.
double interaction(const Region& A, const Region& B, const Params& p);
/// F_B = |B| J c_α - Σ_{x≠y ∈ B} J_xy.
double interaction_F(const Region& B, const Params& p);

struct PeierlsGap {
  double delta_h = 0;
  double rhs = 0;
  double ratio = 0;
  double budget = 0;  // |γ| + F_{I-} + F_sp
};
/// Zero-field energy drop of erasing γ. rhs is NaN when c₂ is undefined.
PeierlsGap peierls_gap(const Configuration& sigma, const Contour& gamma, const Params& p,
                       const ConstantTable& k);

/// σ on Λ whose contour family is exactly one contour with 0 ∈ V ⊂ Λ.
/// Only Λ \ ∂_in Λ is free: a minus spin on ∂_in Λ makes its outer neighbour incorrect.
struct C0Enumeration {
  std::vector<Contour> contours;  // distinct, sorted
  std::size_t configurations = 0;
};
C0Enumeration enumerate_C0_all(const Region& lambda, const Params& p, std::size_t cap = kExactCap);
std::vector<Contour> enumerate_C0(const Region& lambda, std::size_t n, const Params& p,
                                  std::size_t cap = kExactCap);

/// Distinct contours of every σ ∈ Ω_Λ^+ (all spins of Λ free). Parallel over index ranges.
struct AllContours {
  std::vector<Contour> contours;  // distinct, sorted
  std::size_t configurations = 0;
};
AllContours enumerate_all_contours(const Region& lambda, const Params& p, std::size_t cap = kExactCap);

/// Interaction sums against other contours' volumes, for B = sp and B = I₋ plus the three
/// corollary displays.
std::vector<CheckReport> check_aux_interaction_bounds(const ContourFamily& family, std::size_t index,
                                                          const Params& p, const ConstantTable& k);

/// support=[(x,y);...] labels=[(0,+1);(1,-1);...], component 0 being the outer label.
std::string serialize(const Contour& g);
Contour parse_contour(const std::string& line, int dim);


/// True when every σ ∈ Ω_Λ^+ has Γ^r(∂σ) = {∂σ}: the cubes covering Λ ∪ ∂_ex Λ are pairwise
/// joined at step 1 and the volume of that set stays under 2^{r(d+1)}.
bool single_part_regime(const Region& lambda, const Params& p);

/// Allocation-free labelling of the single contour of σ on a padded grid around a small box.
class DenseContourExtractor {
 public:
  static constexpr std::size_t kMaxCells = 128;
  struct Key {
    std::array<std::uint64_t, 2> support{};
    std::array<std::uint64_t, 2> minus{};
    std::int8_t outer = +1;
    friend auto operator<=>(const Key&, const Key&) = default;
    friend bool operator==(const Key&, const Key&) = default;
  };

  explicit DenseContourExtractor(const Region& lambda);

  /// Spins aligned with lambda.sites(), plus boundary. Returns false when ∂σ = ∅.
  bool extract(std::span<const std::int8_t> spins, Key& out);
  Contour to_contour(const Key& key) const;

 private:
  std::size_t flood_outside(const std::vector<std::uint8_t>& wall, std::vector<std::uint8_t>& seen);
  int read_sign(const std::vector<std::uint8_t>& outside) const;

  GridIndex grid_;
  Region lambda_;
  std::vector<std::size_t> lambda_cell_;
  std::vector<std::array<std::int16_t, 2 * kMaxDim>> nbr_;
  std::vector<std::int8_t> spin_;
  std::vector<std::uint16_t> stack_;
  std::vector<std::uint8_t> inc_, comp_, wall_, seen_, ext_wall_, outside_support_, icomp_;
  std::vector<std::vector<std::uint8_t>> outside_;
};

/// Every σ ∈ Ω_Λ^+ through the dense extractor, keeping only the distinct minus interiors
/// (a bitmap over subsets of Λ, so |Λ| <= 30). Needs the single-part regime.
struct MinusSetSweep {
  std::size_t configurations = 0;
  std::size_t with_contour = 0;
  std::vector<Region> minus_sets;  // distinct I₋(γ), ordered by their bitmask over Λ
};
MinusSetSweep sweep_minus_interiors(const Region& lambda, const Params& p, std::size_t cap = kExactCap);

}  // namespace lrfim
