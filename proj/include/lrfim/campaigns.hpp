#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lrfim/contour.hpp"
#include "lrfim/lattice.hpp"
#include "lrfim/params.hpp"
#include "lrfim/report.hpp"

namespace lrfim {

struct CheckRecord {
  std::uint64_t seed = 0;
  std::string tag;
  CheckReport report;
  bool asserted = true;
};

/// Seeded batch of checks; only asserted records enter the summary.
struct Campaign {
  std::string name;
  CampaignSummary summary;
  std::vector<CheckRecord> records;
  std::vector<std::pair<std::string, std::string>> data;

  void add(std::uint64_t seed, const std::string& tag, const CheckReport& r, bool asserted = true);
  void note(const std::string& key, const std::string& value) { data.emplace_back(key, value); }
  void absorb(const Campaign& other);
  bool ok() const { return summary.ok(); }
};

/// seed, tag, lemma, lhs, rhs, margin, status, asserted
CsvWriter campaign_csv(const Campaign& c);

/// Γ^r partitions of random regions: (A), (B), step volumes and the big-cluster lemma.
Campaign partitions_campaign(int d, const Params& p, std::size_t instances, std::size_t max_size, std::uint64_t seed,
                             const std::string& tag);
/// Bell-enumeration finest partition: (B), (A1) and refinement of every valid partition.
Campaign finest_campaign(const Params& p, std::size_t instances, std::size_t max_size, std::uint64_t seed,
                         const std::string& tag);

/// B₀(γ) = I₋(γ) over the distinct minus interiors of every σ ∈ Ω_Λ^+.
Campaign coarse_identity_campaign(const Region& lambda, const Params& p, const std::string& tag);
/// Distinct I₋ sets from the generic extractor equal those of the dense sweep.
Campaign sweep_crosscheck_campaign(const Region& lambda, const Params& p, const std::string& tag);

/// Coarse-graining bounds at every ℓ up to the cutoff; the printed-b₁ variant is data only.
Campaign prop1_campaign(const std::vector<Contour>& contours, const Params& p, const std::string& tag);
/// d₂ radius over every pair of equal-size contours with equal B_ℓ.
Campaign approximation_campaign(const std::vector<Contour>& contours, const Params& p, int max_level,
                                const std::string& tag);

Campaign projection_campaign(int d, double lambda, std::size_t instances, std::uint64_t seed);
/// Cube-pair lemma at the given levels with p.r as the scale step.
Campaign cube_pair_campaign(int d, const std::vector<int>& levels, const Params& p, std::size_t instances,
                            std::uint64_t seed);

/// Every (σ, external γ) of Ω_Λ^+ at zero field: ΔH > 0 and ΔH >= c₂(|γ| + F_{I-} + F_sp).
Campaign peierls_campaign(const Region& lambda, const Params& p);

/// |C₀(n)|, rℓ-coverings, B_ℓ images, volume and covering bounds over C₀(Λ).
Campaign entropy_campaign(const Region& lambda, const Params& p, int max_level, const std::string& tag);
/// |F^ℓ_V| <= e^{b₅ V} for V = 1..v_max.
Campaign family_campaign(const Params& p, int level, std::int64_t v_max);
/// Postconditions of cover_graph_by_subgraphs on random connected graphs.
Campaign graph_cover_campaign(std::size_t instances, std::size_t max_vertices, std::uint64_t seed);
/// count_subordinated against explicit enumeration for (m-n)d <= 8, V <= 5.
Campaign subordination_campaign();

/// Δ tails on the 2×2 box [-1,0]^2 with A, A' overlapping, Gaussian and Bernoulli fields.
Campaign concentration_campaign(const Params& p, std::size_t samples, std::uint64_t seed);

}  // namespace lrfim
