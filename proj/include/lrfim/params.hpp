#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace lrfim {

/// User-facing parameter choices; unset fields take their default values.
struct ParamSpec {
  int d = 3;
  double alpha = 4.0;
  double J = 1.0;
  double beta = 1.0;
  double eps = 0.5;
  std::optional<double> M;
  std::optional<double> a;
  std::optional<double> delta;
  std::optional<int> r;
  double tol = 1e-10;
  std::uint64_t seed = 1;
};

struct Params {
  int d = 3;
  double alpha = 4.0;
  double J = 1.0;
  double beta = 1.0;
  double eps = 0.5;
  double M = 1.0;
  double a = 12.0;
  double delta = 4.0;
  int r = 20;
  double tol = 1e-10;
  std::uint64_t seed = 1;

  bool a_overridden = false;
  bool delta_overridden = false;
  bool r_overridden = false;
  bool M_overridden = false;

  /// True when a, delta or r differ from their defining formulas.
  bool non_paper() const { return a_overridden || delta_overridden || r_overridden; }
  /// (alpha - d) ∧ 1
  double decay_gap() const;
  std::string describe() const;
};

/// Fills defaults and validates; throws std::invalid_argument on bad input.
Params resolve(const ParamSpec& spec);
Params paper_params(int d, double alpha);
/// Default constants with the small multiscale overrides r=2, M=2, a=3.
Params small_override_params(int d, double alpha);

double default_a(int d, double alpha);
int default_r(int d, double a);

/// kappa^(1) = J 2^{d-1+α} e^{d-1}/(α-d) + 3 ζ(a/(d+1) - 1); nullopt when the zeta argument is <= 1.
std::optional<double> kappa_one(int d, double alpha, double J, double a);
std::optional<double> kappa_two(int d, double alpha, double J, double a);
/// Smallest M with M^{(α-d)∧1} = 24 κ2 2^{α+1}(2d+1); feasibility needs M strictly above it.
std::optional<double> m_threshold(int d, double alpha, double J, double a);

}  // namespace lrfim
