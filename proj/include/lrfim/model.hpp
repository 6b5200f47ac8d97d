#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "lrfim/lattice.hpp"
#include "lrfim/params.hpp"

namespace lrfim {

inline constexpr std::size_t kExactCap = 24;
inline constexpr std::size_t kCouplingCap = 10000;

struct LatticeConstant {
  double value = 0.0;
  double tail_bound = 0.0;  // guaranteed absolute error of value
};

/// c_α = Σ_{y≠0} |y|^{-α}, from the exact shell polynomial and zeta values.
LatticeConstant lattice_constant(const Params& p);
LatticeConstant lattice_constant(int d, double alpha);
/// Direct shell summation up to the radius where the analytic tail bound drops below tol.
LatticeConstant lattice_constant_shells(int d, double alpha, double tol, std::int64_t max_radius = 100'000'000);
/// J 2^{d-1+α} e^{d-1}/(α-d) R^{d-α}: bound on Σ_{|y|>R} J_{0y}.
double cited_tail_bound(int d, double alpha, double J, double R);

double coupling(const Site& x, const Site& y, const Params& p);

struct Configuration {
  Region region;
  std::vector<std::int8_t> spins;  // aligned with region.sites()
  int boundary = +1;

  static Configuration uniform(const Region& r, int spin, int boundary = +1);
  int spin(const Site& s) const;
  void set(const Site& s, int v);
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

enum class FieldDistribution { Zero, Gaussian, Bernoulli, Custom };

struct FieldSample {
  Region region;
  std::vector<double> values;  // aligned with region.sites()
  FieldDistribution distribution = FieldDistribution::Zero;
  std::uint64_t seed = 0;

  double at(const Site& s) const;
};

FieldSample sample_field(const Region& r, FieldDistribution dist, std::uint64_t seed);
FieldSample zero_field(const Region& r);
FieldSample custom_field(const Region& r, std::vector<double> values);
/// Negates h on A (τ_A); A must lie inside the field's region.
FieldSample flip_field(const FieldSample& h, const Region& A);

/// Dense J_xy on Λ plus the outside field b_x = J c_α - Σ_{y∈Λ} J_xy.
class CouplingMatrix {
 public:
  CouplingMatrix(const Region& region, const Params& p);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return m_[i * n_ + j]; }
  const double* row(std::size_t i) const { return m_.data() + i * n_; }
  double outside(std::size_t i) const { return b_[i]; }
  const Region& region() const { return region_; }

 private:
  Region region_;
  std::size_t n_;
  std::vector<double> m_;
  std::vector<double> b_;
};

/// H^η(σ) - H^η(η everywhere); η is σ.boundary.
double rel_energy(const Configuration& sigma, const FieldSample& h, const Params& p);
double rel_energy(const CouplingMatrix& K, std::span<const std::int8_t> spins, int boundary,
                  std::span<const double> h, double eps);
/// Field-dependent part of H(all plus), -ε Σ h_x; the rest of the offset is h-independent.
double plus_state_field_energy(const FieldSample& h, const Params& p);

enum class Constraint { None, Theta };

/// Sites of Λ that must be +1 for Θ_Λ: ∂_in Λ together with their neighbours inside Λ.
Region theta_frozen_sites(const Region& region);

/// log Σ exp(-β rel_energy) over Ω_Λ^+ (restricted to Θ_Λ if asked). Gray-code kernel, OpenMP over chunks.
double log_partition_function(const Region& region, const FieldSample& h, const Params& p,
                              Constraint c = Constraint::None, std::size_t cap = kExactCap);
/// Serial reference recomputing every energy from scratch.
double log_partition_function_reference(const Region& region, const FieldSample& h, const Params& p,
                                        Constraint c = Constraint::None, std::size_t cap = kExactCap);
double partition_function(const Region& region, const FieldSample& h, const Params& p,
                          Constraint c = Constraint::None);

struct ExactMarginals {
  double log_z = 0.0;
  std::vector<double> p_minus;  // P(σ_x = -1) per site of Λ
};
ExactMarginals exact_marginals(const Region& region, const FieldSample& h, const Params& p,
                               Constraint c = Constraint::None);

double gibbs_probability(const std::function<bool(const Configuration&)>& event, const Region& region,
                         const FieldSample& h, const Params& p, bool conditioned_on_theta);

/// Calls f(spins, rel_energy) for every admissible configuration, serially.
void for_each_state(const Region& region, const FieldSample& h, const Params& p, Constraint c,
                    const std::function<void(std::span<const std::int8_t>, double)>& f,
                    std::size_t cap = kExactCap);

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

struct MetropolisOptions {
  std::size_t sweeps = 10000;
  std::size_t burn_in = 1000;
  std::size_t batches = 20;
  std::uint64_t seed = 1;
  bool conditioned = false;
  std::vector<Site> tracked;  // sites whose P(σ_x = -1) is estimated
};

struct MetropolisResult {
  Estimate magnetization;
  std::vector<Estimate> p_minus;            // Rao–Blackwellised: mean of P(σ_x=-1 | rest)
  std::vector<Estimate> p_minus_indicator;  // plain indicator averages
  double acceptance = 0.0;
};

/// Single-spin-flip Metropolis chain on Λ with plus boundary.
class MetropolisChain {
 public:
  MetropolisChain(const CouplingMatrix& K, const FieldSample& h, const Params& p, bool conditioned,
                  std::uint64_t seed);

  std::span<const std::int8_t> spins() const { return spins_; }
  void set_spins(std::span<const std::int8_t> s);
  /// Energy change of flipping site i.
  double delta_energy(std::size_t i) const { return 2.0 * spins_[i] * local_[i]; }
  double acceptance_probability(std::size_t i) const;
  /// P(σ_i = -1 | all other spins).
  double conditional_minus(std::size_t i) const;
  bool frozen(std::size_t i) const { return frozen_[i] != 0; }
  const std::vector<std::size_t>& free_sites() const { return free_; }
  void flip(std::size_t i);
  /// One sweep = |free| proposals at uniformly chosen free sites; returns accepted count.
  std::size_t sweep();

 private:
  const CouplingMatrix& K_;
  double beta_;
  std::vector<std::int8_t> spins_;
  std::vector<double> local_;
  std::vector<std::uint8_t> frozen_;
  std::vector<std::size_t> free_;
  std::mt19937_64 rng_;
};

MetropolisResult metropolis_run(const Region& region, const FieldSample& h, const Params& p,
                                const MetropolisOptions& opt);

}  // namespace lrfim
