#include "lrfim/constants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "lrfim/model.hpp"
#include "lrfim/numerics.hpp"

namespace lrfim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double log_base_2r(double x, int r) { return std::log2(x) / r; }

}  // namespace

double c_projection(int d, double lambda) {
  if (d < 2) throw std::invalid_argument("c(d, lambda) needs d >= 2");
  if (!(lambda > 0 && lambda < 1)) throw std::invalid_argument("lambda must lie in (0, 1)");
  if (d == 2) return 4.0;
  const double prev = c_projection(d - 1, (lambda + 1.0) / 2.0);
  return d / (d - 1.0) * (prev + (d - 1.0) * std::ldexp(1.0, d - 1) / (1.0 - lambda));
}

ConstantTable compute_constants(const Params& p) {
  ConstantTable t;
  t.params = p;
  const int d = p.d;
  const double alpha = p.alpha, J = p.J, a = p.a, M = p.M;
  const int r = p.r;
  const double gap = p.decay_gap();

  const LatticeConstant lc = lattice_constant(d, alpha);
  t.c_alpha = lc.value;
  t.c_alpha_error = lc.tail_bound;

  const auto k1 = kappa_one(d, alpha, J, a);
  t.kappa_defined = k1.has_value();
  if (k1) {
    t.kappa1 = *k1;
    t.kappa2 = *kappa_two(d, alpha, J, a);
    t.m_threshold = *m_threshold(d, alpha, J, a);
    const double mg = std::pow(M, gap);
    const double base = 1.0 / ((2 * d + 1) * std::pow(2.0, alpha + 1));
    t.c2_F_I = base - 12.0 * t.kappa2 / mg;
    t.c2_F_sp = base - 2.0 * t.kappa2 / mg;
    t.c2 = std::min(J * t.c_alpha / ((2 * d + 1) * std::pow(2.0, alpha)), t.c2_F_I);
    t.feasible = mg > 24.0 * t.kappa2 * std::pow(2.0, alpha + 1) * (2 * d + 1);
  } else {
    t.kappa1 = t.kappa2 = t.m_threshold = t.c2 = t.c2_F_I = t.c2_F_sp = kNaN;
  }

  t.b5 = (r * d + 1) * std::log(2.0) + 2.0 + d * std::log(3.0);

  if (d < 2) {
    for (double* v : {&t.c_d_lambda, &t.b, &t.b1, &t.b1_as_printed, &t.b2, &t.b3_diam, &t.b3_vol,
                      &t.b3_vol_prime, &t.b_bar_vol, &t.a_bar, &t.b_bar, &t.kappa, &t.a_prime, &t.b4_bar,
                      &t.b4, &t.b4_prime, &t.b6, &t.c4_prime, &t.c4})
      *v = kNaN;
    return t;
  }

  t.c_d_lambda = c_projection(d, 7.0 / 8.0);
  t.b = std::max(8.0, (2.0 * t.c_d_lambda + 1.0) * std::pow(2.0, 1.0 - 1.0 / d));
  t.b1 = 2.0 * d * t.b;
  t.b1_as_printed = 2.0 * d / t.b;
  t.b2 = t.b * std::ldexp(1.0, r * d + 1);
  t.b3_diam = 2.0 * std::sqrt(t.b2);

  const double l2M = log_base_2r(2.0 * M, r);
  t.b_bar_vol = (a + 2.0 + l2M) / (a - 1.0);
  const double e3 = (r - d - 1.0) / std::log2(a);
  t.b3_vol_prime = std::max(std::pow(2.0, r - d + 2.0) * (2.0 + a / (d - 1.0)) *
                                std::pow(t.b_bar_vol + log_base_2r(2.0 * M * std::pow(d, a), r) + 3.0, e3),
                            3.0 + l2M);
  t.b3_vol = 2.0 * (t.b3_vol_prime + 1.0);

  const double inv_d = 1.0 / d;
  t.a_bar = a + 1.0 - inv_d;
  t.b_bar = (t.a_bar + 1.0 + l2M) / (t.a_bar - 1.0);
  t.kappa = (d + 1.0 + r * (1.0 - inv_d) * t.b_bar) / std::log2(t.a_bar);
  t.a_prime = (1.0 - inv_d) / (a - inv_d);

  double b4_bar = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= static_cast<int>(std::floor(t.b_bar)); ++j) {
    const double v = std::pow(std::max(j, 1), t.kappa) * std::pow(2.0, -r * (1.0 - inv_d) * j / (t.a_bar - 1.0));
    b4_bar = std::min(b4_bar, v);
  }
  t.b4_bar = b4_bar;
  t.b4 = std::max(std::pow(2.0, d + 1.0 + r * (1.0 - inv_d) * (t.a_bar / (t.a_bar - 1.0) + 1.0) * t.b_bar),
                  1.0 / b4_bar);
  t.b4_prime = 2.0 * std::pow(16.0 * M * d, d) * t.b4 * std::pow(2.0, r * t.a_prime);
  t.b6 = 2.0 * t.b5 * t.b3_vol * (t.b4 + t.b4_prime);

  const double ratio = a * (d - 1.0) / t.a_prime;
  const double ceil_term = std::ceil(std::pow(2.0, r * t.a_prime / a));
  t.c4_prime = (1.0 + std::log(2.0 * d * (t.b4 + t.b4_prime) * std::pow(ratio, t.kappa) * ceil_term) + t.kappa +
                ((d - 1.0) * (a * d / t.a_prime - 1.0) - 1.0) * std::log(2.0) * r) *
               2.0 * t.b1;
  t.c4 = t.b6 * t.b1 * std::pow(ratio, t.kappa + 1.0) * ceil_term + t.c4_prime + std::log(2.0) * 2.0 * d * t.b1;
  return t;
}

std::vector<ConstantRow> ConstantTable::rows() const {
  const Params& p = params;
  return {
      {"d", static_cast<double>(p.d), "dimension"},
      {"alpha", p.alpha, "decay exponent"},
      {"J", p.J, "coupling strength"},
      {"a", p.a, p.a_overridden ? "override" : "3(d+1)/((alpha-d) min 1)"},
      {"delta", p.delta, p.delta_overridden ? "override" : "d+1"},
      {"r", static_cast<double>(p.r), p.r_overridden ? "override" : "4 ceil(log2(a+1)) + d + 1"},
      {"M", p.M, p.M_overridden ? "override" : "2 M_threshold"},
      {"c_alpha", c_alpha, "sum_{y!=0} |y|^-alpha via sphere polynomial and zeta"},
      {"c_alpha_error", c_alpha_error, "guaranteed absolute error of c_alpha"},
      {"kappa1", kappa1, "J 2^{d-1+alpha} e^{d-1}/(alpha-d) + 3 zeta(a/(d+1)-1)"},
      {"kappa2", kappa2, "kappa1 (1/J + 1)"},
      {"M_threshold", m_threshold, "(24 kappa2 2^{alpha+1}(2d+1))^{1/((alpha-d) min 1)}"},
      {"feasible", feasible ? 1.0 : 0.0, "M^{(alpha-d) min 1} > 24 kappa2 2^{alpha+1}(2d+1)"},
      {"c2", c2, "min{J c_alpha/((2d+1)2^alpha), 1/((2d+1)2^{alpha+1}) - 12 kappa2/M^{(alpha-d) min 1}}"},
      {"c2_F_sp", c2_F_sp, "1/((2d+1)2^{alpha+1}) - 2 kappa2/M^{(alpha-d) min 1}"},
      {"c_d_lambda", c_d_lambda, "c(d, 7/8) by recursion from c(2, lambda) = 4"},
      {"b", b, "max{8, (2c+1) 2^{1-1/d}}"},
      {"b1", b1, "2 d b"},
      {"b1_as_printed", b1_as_printed, "2 d / b"},
      {"b2", b2, "b 2^{rd+1}"},
      {"b3_diam", b3_diam, "2 sqrt(b2)"},
      {"b_bar_vol", b_bar_vol, "(a + 2 + log_{2^r}(2M))/(a - 1)"},
      {"b3_vol_prime", b3_vol_prime,
       "max{2^{r-d+2}(2 + a/(d-1))(b_bar_vol + log_{2^r}(2M d^a) + 3)^{(r-d-1)/log2 a}, 3 + log_{2^r}(2M)}"},
      {"b3_vol", b3_vol, "2(b3_vol_prime + 1)"},
      {"a_bar", a_bar, "a + 1 - 1/d"},
      {"b_bar", b_bar, "(a_bar + 1 + log_{2^r}(2M))/(a_bar - 1)"},
      {"kappa", kappa, "(d + 1 + r(1-1/d) b_bar)/log2(a_bar)"},
      {"a_prime", a_prime, "(1-1/d)/(a-1/d)"},
      {"b4_bar", b4_bar, "min_{0<=j<=b_bar} (j v 1)^kappa 2^{-r(1-1/d)j/(a_bar-1)}"},
      {"b4", b4, "max{2^{d+1+r(1-1/d)(a_bar/(a_bar-1)+1) b_bar}, 1/b4_bar}"},
      {"b4_prime", b4_prime, "2(16 M d)^d b4 2^{r a_prime}"},
      {"b5", b5, "(rd+1) ln 2 + 2 + d ln 3"},
      {"b6", b6, "2 b5 b3_vol (b4 + b4_prime)"},
      {"c4_prime", c4_prime,
       "[1 + ln(2d(b4+b4')(a(d-1)/a')^kappa ceil(2^{r a'/a})) + kappa + ((d-1)(ad/a'-1)-1) r ln 2] 2 b1"},
      {"c4", c4, "b6 b1 (a(d-1)/a')^{kappa+1} ceil(2^{r a'/a}) + c4_prime + 2d b1 ln 2"},
  };
}

std::uint64_t ConstantTable::hash() const {
  std::uint64_t h = fnv1a(nullptr, 0);
  for (const auto& row : rows()) {
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, "%s=%.17g;", row.name.c_str(), row.value);
    h = fnv1a(buf, static_cast<std::size_t>(n), h);
  }
  return h;
}

}  // namespace lrfim
