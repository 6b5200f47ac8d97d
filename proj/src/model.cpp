#include "lrfim/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "lrfim/numerics.hpp"

namespace lrfim {

// ---------------------------------------------------------------- lattice constant

LatticeConstant lattice_constant(int d, double alpha) {
  if (!(alpha > d)) throw std::invalid_argument("alpha must exceed d");
  const auto poly = sphere_count_polynomial(d);
  LatticeConstant lc;
  for (std::size_t j = 0; j < poly.size(); ++j) {
    if (poly[j] == 0.0) continue;
    double err = 0.0;
    lc.value += poly[j] * zeta(alpha - static_cast<double>(j), &err);
    lc.tail_bound += std::abs(poly[j]) * err;
  }
  lc.tail_bound += 16.0 * std::numeric_limits<double>::epsilon() * lc.value;
  return lc;
}

LatticeConstant lattice_constant(const Params& p) {
  LatticeConstant lc = lattice_constant(p.d, p.alpha);
  if (lc.tail_bound > p.tol)
    throw std::runtime_error("lattice constant error " + std::to_string(lc.tail_bound) + " exceeds tol");
  return lc;
}

double cited_tail_bound(int d, double alpha, double J, double R) {
  return J * std::pow(2.0, d - 1 + alpha) * std::exp(d - 1.0) / (alpha - d) * std::pow(R, d - alpha);
}

LatticeConstant lattice_constant_shells(int d, double alpha, double tol, std::int64_t max_radius) {
  if (!(alpha > d)) throw std::invalid_argument("alpha must exceed d");
  const double lead = cited_tail_bound(d, alpha, 1.0, 1.0);
  const double r_needed = std::ceil(std::pow(lead / tol, 1.0 / (alpha - d)));
  if (r_needed > static_cast<double>(max_radius))
    throw std::runtime_error("shell sum cannot reach tol within the radius cap; achieved bound " +
                             std::to_string(cited_tail_bound(d, alpha, 1.0, static_cast<double>(max_radius))));
  const auto R = static_cast<std::int64_t>(r_needed);
  double sum = 0.0;
  for (std::int64_t n = R; n >= 1; --n) sum += sphere_count(d, n) * std::pow(static_cast<double>(n), -alpha);
  return LatticeConstant{sum, cited_tail_bound(d, alpha, 1.0, static_cast<double>(R))};
}

double coupling(const Site& x, const Site& y, const Params& p) {
  const int dist = l1_distance(x, y);
  return dist == 0 ? 0.0 : p.J * std::pow(static_cast<double>(dist), -p.alpha);
}

// ---------------------------------------------------------------- configurations and fields

Configuration Configuration::uniform(const Region& r, int spin, int boundary) {
  return Configuration{r, std::vector<std::int8_t>(r.size(), static_cast<std::int8_t>(spin)), boundary};
}

int Configuration::spin(const Site& s) const {
  const auto i = region.index_of(s);
  return i < 0 ? boundary : spins[static_cast<std::size_t>(i)];
}

void Configuration::set(const Site& s, int v) {
  const auto i = region.index_of(s);
  if (i < 0) throw std::invalid_argument("site outside configuration region");
  spins[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(v);
}

double FieldSample::at(const Site& s) const {
  const auto i = region.index_of(s);
  if (i < 0) throw std::invalid_argument("site outside field region");
  return values[static_cast<std::size_t>(i)];
}

FieldSample sample_field(const Region& r, FieldDistribution dist, std::uint64_t seed) {
  FieldSample h{r, std::vector<double>(r.size(), 0.0), dist, seed};
  std::mt19937_64 rng(seed);
  if (dist == FieldDistribution::Gaussian) {
    std::normal_distribution<double> g(0.0, 1.0);
    for (double& v : h.values) v = g(rng);
  } else if (dist == FieldDistribution::Bernoulli) {
    std::bernoulli_distribution b(0.5);
    for (double& v : h.values) v = b(rng) ? 1.0 : -1.0;
  } else if (dist == FieldDistribution::Custom) {
    throw std::invalid_argument("custom fields are built with custom_field");
  }
  return h;
}

FieldSample zero_field(const Region& r) { return FieldSample{r, std::vector<double>(r.size(), 0.0), FieldDistribution::Zero, 0}; }

FieldSample custom_field(const Region& r, std::vector<double> values) {
  if (values.size() != r.size()) throw std::invalid_argument("field size mismatch");
  return FieldSample{r, std::move(values), FieldDistribution::Custom, 0};
}

FieldSample flip_field(const FieldSample& h, const Region& A) {
  FieldSample out = h;
  for (const Site& s : A) {
    const auto i = h.region.index_of(s);
    if (i < 0) throw std::invalid_argument("flip set outside field region");
    out.values[static_cast<std::size_t>(i)] = -out.values[static_cast<std::size_t>(i)];
  }
  return out;
}

// ---------------------------------------------------------------- energies

CouplingMatrix::CouplingMatrix(const Region& region, const Params& p) : region_(region), n_(region.size()) {
  if (n_ > kCouplingCap) throw std::invalid_argument("region exceeds coupling-matrix cap");
  const double c_alpha = lattice_constant(p).value;
  m_.assign(n_ * n_, 0.0);
  b_.assign(n_, p.J * c_alpha);
  std::vector<double> by_distance;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const auto dist = static_cast<std::size_t>(l1_distance(region[i], region[j]));
      while (by_distance.size() <= dist)
        by_distance.push_back(by_distance.empty() ? 0.0 : p.J * std::pow(static_cast<double>(by_distance.size()), -p.alpha));
      const double v = by_distance[dist];
      m_[i * n_ + j] = m_[j * n_ + i] = v;
    }
  }
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) b_[i] -= m_[i * n_ + j];
}

double rel_energy(const CouplingMatrix& K, std::span<const std::int8_t> s, int boundary, std::span<const double> h,
                  double eps) {
  const std::size_t n = K.size();
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = K.row(i);
    double pair = 0.0;
    for (std::size_t j = i + 1; j < n; ++j)
      if (s[i] != s[j]) pair += row[j];
    e += 2.0 * pair;
    if (s[i] != boundary) e += 2.0 * K.outside(i) - 2.0 * eps * h[i] * s[i];
  }
  return e;
}

double rel_energy(const Configuration& sigma, const FieldSample& h, const Params& p) {
  if (!(sigma.region == h.region)) throw std::invalid_argument("configuration and field regions differ");
  const CouplingMatrix K(sigma.region, p);
  return rel_energy(K, sigma.spins, sigma.boundary, h.values, p.eps);
}

double plus_state_field_energy(const FieldSample& h, const Params& p) {
  double s = 0.0;
  for (double v : h.values) s += v;
  return -p.eps * s;
}

Region theta_frozen_sites(const Region& region) {
  const Region inner = inner_boundary(region);
  std::vector<Site> v(inner.begin(), inner.end());
  for (const Site& s : inner)
    for (int i = 0; i < region.dim(); ++i)
      for (int delta : {-1, 1}) {
        const Site n = s.shifted(i, delta);
        if (region.contains(n)) v.push_back(n);
      }
  return Region(region.dim(), std::move(v));
}

// ---------------------------------------------------------------- exact enumeration

namespace {

struct ExactSetup {
  CouplingMatrix K;
  std::vector<std::size_t> free;
  std::vector<std::int8_t> base;
  std::vector<double> h;
  double eps;
  double eref;  // lower bound of every relative energy
};

ExactSetup make_setup(const Region& region, const FieldSample& h, const Params& p, Constraint c, std::size_t cap) {
  if (!(h.region == region)) throw std::invalid_argument("field region differs from volume");
  ExactSetup s{CouplingMatrix(region, p), {}, std::vector<std::int8_t>(region.size(), 1), h.values, p.eps, 0.0};
  const Region frozen = c == Constraint::Theta ? theta_frozen_sites(region) : Region(region.dim());
  for (std::size_t i = 0; i < region.size(); ++i)
    if (!frozen.contains(region[i])) s.free.push_back(i);
  if (s.free.size() > cap)
    throw std::invalid_argument("exact enumeration cap exceeded (" + std::to_string(s.free.size()) +
                                " free spins); use Monte Carlo");
  for (double v : h.values) s.eref -= 2.0 * p.eps * std::abs(v);
  return s;
}

// Visits Gray-code states [start, end) of the free spins; f(spins, energy).
template <class F>
void gray_chunk(const ExactSetup& S, std::uint64_t start, std::uint64_t end, F&& f) {
  const std::size_t n = S.K.size();
  std::vector<std::int8_t> s = S.base;
  const std::uint64_t g = start ^ (start >> 1);
  for (std::size_t b = 0; b < S.free.size(); ++b)
    if ((g >> b) & 1U) s[S.free[b]] = -1;
  double e = rel_energy(S.K, s, +1, S.h, S.eps);
  std::vector<double> local(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = S.K.row(i);
    double acc = S.K.outside(i) + S.eps * S.h[i];
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * s[j];
    local[i] = acc;
  }
  for (std::uint64_t k = start; k < end; ++k) {
    f(std::span<const std::int8_t>(s), e);
    if (k + 1 == end) break;
    const std::size_t i = S.free[static_cast<std::size_t>(std::countr_zero(k + 1))];
    const int old = s[i];
    e += 2.0 * old * local[i];
    s[i] = static_cast<std::int8_t>(-old);
    const double* row = S.K.row(i);
    for (std::size_t j = 0; j < n; ++j) local[j] -= 2.0 * old * row[j];
  }
}

std::uint64_t chunk_count(std::uint64_t total) { return std::min<std::uint64_t>(total, 256); }

}  // namespace

double log_partition_function(const Region& region, const FieldSample& h, const Params& p, Constraint c,
                              std::size_t cap) {
  const ExactSetup S = make_setup(region, h, p, c, cap);
  const std::uint64_t total = std::uint64_t{1} << S.free.size();
  const std::uint64_t chunks = chunk_count(total);
  std::vector<double> partial(chunks, 0.0);
  const double beta = p.beta;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(chunks); ++ci) {
    const auto c0 = static_cast<std::uint64_t>(ci);
    double acc = 0.0;
    gray_chunk(S, total * c0 / chunks, total * (c0 + 1) / chunks,
               [&](std::span<const std::int8_t>, double e) { acc += std::exp(-beta * (e - S.eref)); });
    partial[c0] = acc;
  }
  double sum = 0.0;
  for (double v : partial) sum += v;
  return std::log(sum) - beta * S.eref;
}

double log_partition_function_reference(const Region& region, const FieldSample& h, const Params& p, Constraint c,
                                        std::size_t cap) {
  const ExactSetup S = make_setup(region, h, p, c, cap);
  const std::uint64_t total = std::uint64_t{1} << S.free.size();
  double log_z = -std::numeric_limits<double>::infinity();
  std::vector<std::int8_t> s;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    s = S.base;
    for (std::size_t b = 0; b < S.free.size(); ++b)
      if ((mask >> b) & 1U) s[S.free[b]] = -1;
    log_z = log_add(log_z, -p.beta * rel_energy(S.K, s, +1, S.h, S.eps));
  }
  return log_z;
}

double partition_function(const Region& region, const FieldSample& h, const Params& p, Constraint c) {
  return std::exp(log_partition_function(region, h, p, c));
}

ExactMarginals exact_marginals(const Region& region, const FieldSample& h, const Params& p, Constraint c) {
  const ExactSetup S = make_setup(region, h, p, c, kExactCap);
  const std::size_t n = region.size();
  const std::uint64_t total = std::uint64_t{1} << S.free.size();
  const std::uint64_t chunks = chunk_count(total);
  std::vector<double> partial(chunks, 0.0);
  std::vector<std::vector<double>> partial_minus(chunks, std::vector<double>(n, 0.0));
  const double beta = p.beta;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(chunks); ++ci) {
    const auto c0 = static_cast<std::uint64_t>(ci);
    double acc = 0.0;
    auto& pm = partial_minus[c0];
    gray_chunk(S, total * c0 / chunks, total * (c0 + 1) / chunks, [&](std::span<const std::int8_t> s, double e) {
      const double w = std::exp(-beta * (e - S.eref));
      acc += w;
      for (std::size_t i = 0; i < n; ++i)
        if (s[i] < 0) pm[i] += w;
    });
    partial[c0] = acc;
  }
  double sum = 0.0;
  std::vector<double> minus(n, 0.0);
  for (std::uint64_t ci = 0; ci < chunks; ++ci) {
    sum += partial[ci];
    for (std::size_t i = 0; i < n; ++i) minus[i] += partial_minus[ci][i];
  }
  ExactMarginals out;
  out.log_z = std::log(sum) - beta * S.eref;
  out.p_minus.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.p_minus[i] = minus[i] / sum;
  return out;
}

void for_each_state(const Region& region, const FieldSample& h, const Params& p, Constraint c,
                    const std::function<void(std::span<const std::int8_t>, double)>& f, std::size_t cap) {
  const ExactSetup S = make_setup(region, h, p, c, cap);
  gray_chunk(S, 0, std::uint64_t{1} << S.free.size(), f);
}

double gibbs_probability(const std::function<bool(const Configuration&)>& event, const Region& region,
                         const FieldSample& h, const Params& p, bool conditioned_on_theta) {
  const Constraint c = conditioned_on_theta ? Constraint::Theta : Constraint::None;
  double eref = 0.0;
  for (double v : h.values) eref -= 2.0 * p.eps * std::abs(v);
  double num = 0.0, den = 0.0;
  Configuration sigma = Configuration::uniform(region, +1);
  for_each_state(region, h, p, c, [&](std::span<const std::int8_t> s, double e) {
    const double w = std::exp(-p.beta * (e - eref));
    den += w;
    std::copy(s.begin(), s.end(), sigma.spins.begin());
    if (event(sigma)) num += w;
  });
  return num / den;
}

// ---------------------------------------------------------------- Metropolis

MetropolisChain::MetropolisChain(const CouplingMatrix& K, const FieldSample& h, const Params& p, bool conditioned,
                                 std::uint64_t seed)
    : K_(K), beta_(p.beta), spins_(K.size(), 1), local_(K.size()), frozen_(K.size(), 0), rng_(seed) {
  if (!(h.region == K.region())) throw std::invalid_argument("field region differs from volume");
  if (conditioned) {
    const Region fz = theta_frozen_sites(K.region());
    for (std::size_t i = 0; i < K.size(); ++i) frozen_[i] = fz.contains(K.region()[i]) ? 1 : 0;
  }
  for (std::size_t i = 0; i < K.size(); ++i) {
    if (!frozen_[i]) free_.push_back(i);
    const double* row = K.row(i);
    double acc = K.outside(i) + p.eps * h.values[i];
    for (std::size_t j = 0; j < K.size(); ++j) acc += row[j];
    local_[i] = acc;
  }
}

void MetropolisChain::set_spins(std::span<const std::int8_t> s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != spins_[i]) {
      if (frozen_[i]) throw std::invalid_argument("cannot change a frozen spin");
      flip(i);
    }
}

double MetropolisChain::acceptance_probability(std::size_t i) const {
  return std::min(1.0, std::exp(-beta_ * delta_energy(i)));
}

double MetropolisChain::conditional_minus(std::size_t i) const {
  if (frozen_[i]) return 0.0;
  return 1.0 / (1.0 + std::exp(2.0 * beta_ * local_[i]));
}

void MetropolisChain::flip(std::size_t i) {
  const int old = spins_[i];
  spins_[i] = static_cast<std::int8_t>(-old);
  const double* row = K_.row(i);
  const std::size_t n = K_.size();
  for (std::size_t j = 0; j < n; ++j) local_[j] -= 2.0 * old * row[j];
}

std::size_t MetropolisChain::sweep() {
  if (free_.empty()) return 0;
  std::uniform_int_distribution<std::size_t> pick(0, free_.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t accepted = 0;
  for (std::size_t k = 0; k < free_.size(); ++k) {
    const std::size_t i = free_[pick(rng_)];
    const double de = delta_energy(i);
    if (de <= 0.0 || unit(rng_) < std::exp(-beta_ * de)) {
      flip(i);
      ++accepted;
    }
  }
  return accepted;
}

namespace {

Estimate batch_estimate(const std::vector<double>& batch_means) {
  Estimate e;
  const double b = static_cast<double>(batch_means.size());
  for (double v : batch_means) e.mean += v;
  e.mean /= b;
  double var = 0.0;
  for (double v : batch_means) var += (v - e.mean) * (v - e.mean);
  e.se = batch_means.size() > 1 ? std::sqrt(var / (b - 1.0) / b) : 0.0;
  return e;
}

}  // namespace

MetropolisResult metropolis_run(const Region& region, const FieldSample& h, const Params& p,
                                const MetropolisOptions& opt) {
  if (opt.batches == 0 || opt.sweeps < opt.batches) throw std::invalid_argument("need sweeps >= batches > 0");
  const CouplingMatrix K(region, p);
  MetropolisChain chain(K, h, p, opt.conditioned, opt.seed);
  std::vector<std::size_t> tracked;
  for (const Site& s : opt.tracked) {
    const auto i = region.index_of(s);
    if (i < 0) throw std::invalid_argument("tracked site outside volume");
    tracked.push_back(static_cast<std::size_t>(i));
  }
  for (std::size_t t = 0; t < opt.burn_in; ++t) chain.sweep();

  const std::size_t per_batch = opt.sweeps / opt.batches;
  std::vector<double> mag_batches;
  std::vector<std::vector<double>> rb_batches(tracked.size()), ind_batches(tracked.size());
  std::size_t accepted = 0, proposed = 0;
  for (std::size_t b = 0; b < opt.batches; ++b) {
    double mag = 0.0;
    std::vector<double> rb(tracked.size(), 0.0), ind(tracked.size(), 0.0);
    for (std::size_t t = 0; t < per_batch; ++t) {
      accepted += chain.sweep();
      proposed += chain.free_sites().size();
      double m = 0.0;
      for (auto v : chain.spins()) m += v;
      mag += m / static_cast<double>(region.size());
      for (std::size_t k = 0; k < tracked.size(); ++k) {
        rb[k] += chain.conditional_minus(tracked[k]);
        ind[k] += chain.spins()[tracked[k]] < 0 ? 1.0 : 0.0;
      }
    }
    const double inv = 1.0 / static_cast<double>(per_batch);
    mag_batches.push_back(mag * inv);
    for (std::size_t k = 0; k < tracked.size(); ++k) {
      rb_batches[k].push_back(rb[k] * inv);
      ind_batches[k].push_back(ind[k] * inv);
    }
  }
  MetropolisResult out;
  out.magnetization = batch_estimate(mag_batches);
  for (std::size_t k = 0; k < tracked.size(); ++k) {
    out.p_minus.push_back(batch_estimate(rb_batches[k]));
    out.p_minus_indicator.push_back(batch_estimate(ind_batches[k]));
  }
  out.acceptance = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  return out;
}

}  // namespace lrfim
