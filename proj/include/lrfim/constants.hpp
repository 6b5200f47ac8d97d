#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrfim/params.hpp"

namespace lrfim {

/// c(d, λ) from c(2, λ) = 4 and c(d, λ) = d/(d-1) [c(d-1, (λ+1)/2) + (d-1) 2^{d-1}/(1-λ)].
double c_projection(int d, double lambda);

struct ConstantRow {
  std::string name;
  double value;
  std::string formula;
};

/// Every derived constant for one parameter set. Entries that are undefined for
/// the given parameters (d = 1, or a divergent zeta argument) hold NaN.
struct ConstantTable {
  Params params;

  double c_alpha = 0;
  double c_alpha_error = 0;
  double kappa1 = 0;
  double kappa2 = 0;
  double c2 = 0;
  double c2_F_I = 0;   // coefficient of F_{I-} in the energy lower bound
  double c2_F_sp = 0;  // coefficient of F_sp
  double m_threshold = 0;
  bool kappa_defined = false;
  bool feasible = false;

  double c_d_lambda = 0;  // c(d, 7/8)
  double b = 0;
  double b1 = 0;
  double b1_as_printed = 0;  // 2d/b, kept for comparison
  double b2 = 0;
  double b3_diam = 0;
  double b3_vol = 0;
  double b3_vol_prime = 0;
  double b_bar_vol = 0;
  double a_bar = 0;
  double b_bar = 0;
  double kappa = 0;
  double a_prime = 0;
  double b4_bar = 0;
  double b4 = 0;
  double b4_prime = 0;
  double b5 = 0;
  double b6 = 0;
  double c4_prime = 0;
  double c4 = 0;

  std::vector<ConstantRow> rows() const;
  /// Fingerprint of the printed table; identical parameters give identical hashes.
  std::uint64_t hash() const;
};

ConstantTable compute_constants(const Params& p);

}  // namespace lrfim
