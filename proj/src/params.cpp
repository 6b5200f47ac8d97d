#include "lrfim/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lrfim/lattice.hpp"
#include "lrfim/numerics.hpp"

namespace lrfim {

double Params::decay_gap() const { return std::min(alpha - d, 1.0); }

std::string Params::describe() const {
  char buf[512];
  std::snprintf(buf, sizeof buf, "d=%d alpha=%.17g J=%.17g beta=%.17g eps=%.17g M=%.17g a=%.17g delta=%.17g r=%d tol=%.3g seed=%llu%s",
                d, alpha, J, beta, eps, M, a, delta, r, tol, static_cast<unsigned long long>(seed),
                non_paper() ? " non-paper" : "");
  return buf;
}

double default_a(int d, double alpha) { return 3.0 * (d + 1) / std::min(alpha - d, 1.0); }

int default_r(int d, double a) { return 4 * static_cast<int>(std::ceil(std::log2(a + 1.0))) + d + 1; }

std::optional<double> kappa_one(int d, double alpha, double J, double a) {
  const double s = a / (d + 1) - 1.0;
  if (!(s > 1.0)) return std::nullopt;
  return J * std::pow(2.0, d - 1 + alpha) * std::exp(d - 1.0) / (alpha - d) + 3.0 * zeta(s);
}

std::optional<double> kappa_two(int d, double alpha, double J, double a) {
  auto k1 = kappa_one(d, alpha, J, a);
  if (!k1) return std::nullopt;
  return *k1 * (1.0 / J + 1.0);
}

std::optional<double> m_threshold(int d, double alpha, double J, double a) {
  auto k2 = kappa_two(d, alpha, J, a);
  if (!k2) return std::nullopt;
  const double gap = std::min(alpha - d, 1.0);
  return std::pow(24.0 * *k2 * std::pow(2.0, alpha + 1) * (2 * d + 1), 1.0 / gap);
}

Params resolve(const ParamSpec& s) {
  if (s.d < 1 || s.d > kMaxDim) throw std::invalid_argument("d must be in [1, 4]");
  if (!(s.alpha > s.d)) throw std::invalid_argument("alpha must exceed d");
  if (!(s.J > 0)) throw std::invalid_argument("J must be positive");
  if (!(s.beta >= 0)) throw std::invalid_argument("beta must be non-negative");
  if (!(s.eps >= 0)) throw std::invalid_argument("eps must be non-negative");
  if (!(s.tol > 0)) throw std::invalid_argument("tol must be positive");
  Params p;
  p.d = s.d;
  p.alpha = s.alpha;
  p.J = s.J;
  p.beta = s.beta;
  p.eps = s.eps;
  p.tol = s.tol;
  p.seed = s.seed;
  const double a_def = default_a(s.d, s.alpha);
  p.a = s.a.value_or(a_def);
  p.a_overridden = s.a.has_value() && *s.a != a_def;
  p.delta = s.delta.value_or(s.d + 1.0);
  p.delta_overridden = s.delta.has_value() && *s.delta != s.d + 1.0;
  const int r_def = default_r(s.d, p.a);
  p.r = s.r.value_or(r_def);
  p.r_overridden = s.r.has_value() && *s.r != r_def;
  if (!(p.a > 0) || !(p.delta > 0) || p.r < 1) throw std::invalid_argument("a, delta must be positive and r >= 1");
  if (s.M) {
    p.M = *s.M;
    p.M_overridden = true;
  } else {
    auto thr = m_threshold(s.d, s.alpha, s.J, p.a);
    p.M = thr ? 2.0 * *thr : 1.0;
  }
  if (!(p.M > 0)) throw std::invalid_argument("M must be positive");
  return p;
}

Params paper_params(int d, double alpha) {
  ParamSpec s;
  s.d = d;
  s.alpha = alpha;
  return resolve(s);
}

Params small_override_params(int d, double alpha) {
  ParamSpec s;
  s.d = d;
  s.alpha = alpha;
  s.r = 2;
  s.M = 2.0;
  s.a = 3.0;
  return resolve(s);
}

}  // namespace lrfim
