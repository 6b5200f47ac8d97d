#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lrfim/constants.hpp"
#include "lrfim/contour.hpp"
#include "lrfim/lattice.hpp"
#include "lrfim/model.hpp"
#include "lrfim/params.hpp"
#include "lrfim/report.hpp"

namespace lrfim {

/// Δ_A(h) = -(1/β) log(Z(h)/Z(τ_A h)) with absolute partition functions on Λ = h.region.
double delta_A(const Region& A, const FieldSample& h, const Params& p);

struct TailPoint {
  double lambda = 0;
  double tail_A = 0, bound_A = 0, slack_A = 0;
  double tail_diff = 0, bound_diff = 0, slack_diff = 0;
  bool ok() const { return tail_A <= bound_A + slack_A && tail_diff <= bound_diff + slack_diff; }
};

struct ConcentrationReport {
  std::size_t samples = 0;
  std::vector<TailPoint> grid;
  std::size_t violations = 0;        // grid points where either tail exceeds bound + slack
  double antisymmetry_error = 0;     // max |Δ_A(h) + Δ_A(τ_A h)|
  double max_abs_delta = 0;
};

/// Tails P(|Δ_A| > λ) and P(|Δ_A - Δ_A'| > λ) against 2exp(-λ²/(8ε²|A|)) and 2exp(-λ²/(8ε²|AΔA'|)),
/// with 3 sqrt(q(1-q)/n) slack at q = min(bound, 1). The λ grid has `points` equally spaced values
/// up to where the wider bound falls to 1e-3.
ConcentrationReport verify_concentration(const Region& A, const Region& Ap, const Region& lambda, const Params& p,
                                         FieldDistribution dist, std::size_t samples, std::uint64_t seed,
                                         std::size_t points = 20);

struct DensityRatio {
  double log_ratio = 0;  // log g(σ,h)/g(τ_γ σ, τ_{I-} h)
  double log_bound = 0;  // -βc₂|γ| - 2βε Σ_{sp⁻} h + log Z(τ_{I-} h) - log Z(h)
  CheckReport check;     // hypothesis: c₂ defined and M feasible
};
DensityRatio density_ratio(const Configuration& sigma, const Contour& gamma, const FieldSample& h, const Params& p,
                           const ConstantTable& k);

struct BadEventEstimate {
  double eps = 0;
  double probability = 0;
  double se = 0;
  std::size_t samples = 0;
  std::size_t contours = 0;
};
/// Fraction of draws with sup_{γ∈C₀, |γ|<=n_max} Δ_{I-(γ)}/(c₂|γ|) > 1/4.
/// Draws depend only on (seed, index), so runs at different ε share fields.
BadEventEstimate bad_event_probability(const Region& lambda, const Params& p, std::size_t n_max, std::size_t samples,
                                       std::uint64_t seed, FieldDistribution dist = FieldDistribution::Gaussian);

struct BadEventSweep {
  std::vector<BadEventEstimate> points;
  double slope = 0;  // least squares slope of log P against 1/ε² over points with P > 0
  std::size_t fitted = 0;
};
BadEventSweep bad_event_sweep(const Region& lambda, const Params& p, const std::vector<double>& eps,
                              std::size_t n_max, std::size_t samples, std::uint64_t seed,
                              FieldDistribution dist = FieldDistribution::Gaussian);

enum class AnimalVariant { Connected, ContourInteriors };

struct AnimalResult {
  Region best_region;
  double score = 0;
  double numerator = 0;
  double normalization = 0;  // |∂A| edges for Connected, |γ| for ContourInteriors
  std::size_t candidates = 0;
};
/// Connected: max over connected A ∋ 0 with |A| <= k_max of Σ_A h / |∂A| (non-empty A only).
/// ContourInteriors: max over γ ∈ C₀(h.region) with |γ| <= k_max of Σ_{I-(γ)} h / |γ|.
AnimalResult greedy_animal(const FieldSample& h, std::size_t k_max, AnimalVariant variant, const Params& p);
/// Naive oracle: every subset of the l1 ball of radius k_max - 1 that holds 0, is connected and has <= k_max sites.
AnimalResult greedy_animal_bruteforce(const FieldSample& h, std::size_t k_max);

/// Fixed lattice animals of size <= k_max whose lexicographically smallest cell is the origin.
std::vector<Region> fixed_animals(int d, std::size_t k_max);

struct SupEstimate {
  std::size_t n = 0;
  std::size_t contours = 0;
  Estimate sup;  // E sup_{γ∈C₀(n)} Δ_{I-(γ)}
};
SupEstimate estimate_sup_expectation(std::size_t n, const Region& lambda, const Params& p, std::size_t samples,
                                     std::uint64_t seed, FieldDistribution dist = FieldDistribution::Gaussian);

/// Centered box with its 2^d corners removed. For side 5 in d = 2 this has 21 sites and
/// the free region of C₀ is the 3x3 center, so a contour with non-empty I₋ exists.
Region cornerless_box(int d, int side);

}  // namespace lrfim
