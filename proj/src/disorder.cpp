#include "lrfim/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "lrfim/numerics.hpp"

namespace lrfim {

namespace {

double log_z_abs(const FieldSample& h, const Params& p) {
  return log_partition_function(h.region, h, p) - p.beta * plus_state_field_energy(h, p);
}

double sum_over(const FieldSample& h, const Region& A) {
  double s = 0;
  for (const Site& x : A) s += h.at(x);
  return s;
}

// Exceptions must not escape the OpenMP loops below, so size is checked up front.
void require_exact(const Region& lambda) {
  if (lambda.size() > kExactCap)
    throw std::invalid_argument("exact enumeration cap exceeded (" + std::to_string(lambda.size()) +
                                " spins); use a smaller region");
}

Estimate mean_se(const std::vector<double>& v) {
  Estimate e;
  if (v.empty()) return e;
  double s = 0;
  for (double x : v) s += x;
  e.mean = s / static_cast<double>(v.size());
  if (v.size() > 1) {
    double q = 0;
    for (double x : v) q += (x - e.mean) * (x - e.mean);
    e.se = std::sqrt(q / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return e;
}

/// Distinct I₋ sets of C₀(Λ) with the smallest |γ| per set, for |γ| in [n_lo, n_hi].
std::map<Region, std::size_t> minus_sets(const Region& lambda, const Params& p, std::size_t n_lo, std::size_t n_hi,
                                         std::size_t& contours) {
  std::map<Region, std::size_t> out;
  contours = 0;
  for (const Contour& g : enumerate_C0_all(lambda, p).contours) {
    if (g.size() < n_lo || g.size() > n_hi) continue;
    ++contours;
    auto [it, fresh] = out.emplace(g.I_minus, g.size());
    if (!fresh) it->second = std::min(it->second, g.size());
  }
  return out;
}

}  // namespace

double delta_A(const Region& A, const FieldSample& h, const Params& p) {
  if (A.empty()) return 0.0;
  if (!A.is_subset_of(h.region)) throw std::invalid_argument("A must lie inside the field region");
  return -(log_z_abs(h, p) - log_z_abs(flip_field(h, A), p)) / p.beta;
}

ConcentrationReport verify_concentration(const Region& A, const Region& Ap, const Region& lambda, const Params& p,
                                         FieldDistribution dist, std::size_t samples, std::uint64_t seed,
                                         std::size_t points) {
  if (samples == 0 || points == 0) throw std::invalid_argument("need samples and grid points");
  require_exact(lambda);
  std::vector<double> dA(samples), dDiff(samples), anti(samples);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i) {
    const FieldSample h = sample_field(lambda, dist, derive_seed(seed, static_cast<std::uint64_t>(i)));
    const double a = delta_A(A, h, p);
    const auto u = static_cast<std::size_t>(i);
    dA[u] = a;
    dDiff[u] = a - delta_A(Ap, h, p);
    anti[u] = std::abs(a + delta_A(A, flip_field(h, A), p));
  }

  ConcentrationReport rep;
  rep.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    rep.antisymmetry_error = std::max(rep.antisymmetry_error, anti[i]);
    rep.max_abs_delta = std::max(rep.max_abs_delta, std::abs(dA[i]));
  }
  const double e2 = p.eps * p.eps;
  const double nA = static_cast<double>(A.size());
  const double nD = static_cast<double>(A.sym_diff(Ap).size());
  const double widest = std::max({nA, nD, 1.0});
  const double lam_max = std::max(std::sqrt(8.0 * e2 * widest * std::log(2000.0)), 1e-12);
  auto bound = [&](double lam, double n) {
    if (n == 0 || e2 == 0) return 0.0;
    return 2.0 * std::exp(-lam * lam / (8.0 * e2 * n));
  };
  auto slack = [&](double q) {
    q = std::min(q, 1.0);
    return 3.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(samples));
  };
  for (std::size_t k = 1; k <= points; ++k) {
    TailPoint t;
    t.lambda = lam_max * static_cast<double>(k) / static_cast<double>(points);
    std::size_t ca = 0, cd = 0;
    for (std::size_t i = 0; i < samples; ++i) {
      ca += std::abs(dA[i]) > t.lambda;
      cd += std::abs(dDiff[i]) > t.lambda;
    }
    t.tail_A = static_cast<double>(ca) / static_cast<double>(samples);
    t.tail_diff = static_cast<double>(cd) / static_cast<double>(samples);
    t.bound_A = bound(t.lambda, nA);
    t.bound_diff = bound(t.lambda, nD);
    t.slack_A = slack(t.bound_A);
    t.slack_diff = slack(t.bound_diff);
    if (!t.ok()) ++rep.violations;
    rep.grid.push_back(t);
  }
  return rep;
}

DensityRatio density_ratio(const Configuration& sigma, const Contour& gamma, const FieldSample& h, const Params& p,
                           const ConstantTable& k) {
  const Configuration tau = erase_contour(sigma, gamma, p, EraseMode::Strict);
  const FieldSample th = flip_field(h, gamma.I_minus);
  const double H = rel_energy(sigma, h, p) + plus_state_field_energy(h, p);
  const double Ht = rel_energy(tau, th, p) + plus_state_field_energy(th, p);
  const double lz = log_z_abs(h, p), lzt = log_z_abs(th, p);

  double sp_minus = 0;
  for (const Site& x : gamma.support)
    if (sigma.region.contains(x) && sigma.spin(x) == -1) sp_minus += h.at(x);

  DensityRatio out;
  out.log_ratio = -p.beta * (H - Ht) + lzt - lz;
  out.log_bound = -p.beta * k.c2 * static_cast<double>(gamma.size()) - 2.0 * p.beta * p.eps * sp_minus + lzt - lz;
  out.check = make_check("density_ratio", out.log_ratio, out.log_bound, k.kappa_defined && k.feasible);
  return out;
}

BadEventEstimate bad_event_probability(const Region& lambda, const Params& p, std::size_t n_max, std::size_t samples,
                                       std::uint64_t seed, FieldDistribution dist) {
  const ConstantTable k = compute_constants(p);
  if (!k.kappa_defined) throw std::invalid_argument("c2 is undefined for these parameters");
  require_exact(lambda);
  BadEventEstimate out;
  out.eps = p.eps;
  out.samples = samples;
  const auto sets = minus_sets(lambda, p, 1, n_max, out.contours);
  if (sets.empty() || samples == 0) return out;
  std::vector<double> hit(samples, 0.0);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i) {
    const FieldSample h = sample_field(lambda, dist, derive_seed(seed, static_cast<std::uint64_t>(i)));
    const double lz = log_z_abs(h, p);
    for (const auto& [A, size] : sets) {
      const double d = -(lz - log_z_abs(flip_field(h, A), p)) / p.beta;
      if (d / (k.c2 * static_cast<double>(size)) > 0.25) {
        hit[static_cast<std::size_t>(i)] = 1.0;
        break;
      }
    }
  }
  const Estimate e = mean_se(hit);
  out.probability = e.mean;
  out.se = e.se;
  return out;
}

BadEventSweep bad_event_sweep(const Region& lambda, const Params& p, const std::vector<double>& eps,
                              std::size_t n_max, std::size_t samples, std::uint64_t seed, FieldDistribution dist) {
  BadEventSweep out;
  std::vector<double> xs, ys;
  for (double e : eps) {
    Params q = p;
    q.eps = e;
    out.points.push_back(bad_event_probability(lambda, q, n_max, samples, seed, dist));
    if (out.points.back().probability > 0 && e > 0) {
      xs.push_back(1.0 / (e * e));
      ys.push_back(std::log(out.points.back().probability));
    }
  }
  out.fitted = xs.size();
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    out.slope = sxx > 0 ? sxy / sxx : 0.0;
  }
  return out;
}

// ---------------------------------------------------------------- animals

std::vector<Region> fixed_animals(int d, std::size_t k_max) {
  std::vector<Region> out;
  if (k_max == 0) return out;
  const int R = static_cast<int>(k_max);
  const Site lo = [&] {
    Site s = Site::origin(d);
    for (int i = 0; i < d; ++i) s[i] = -R;
    return s;
  }();
  const Site hi = [&] {
    Site s = Site::origin(d);
    for (int i = 0; i < d; ++i) s[i] = R;
    return s;
  }();
  const GridIndex grid(lo, hi);
  const Site origin = Site::origin(d);
  std::vector<std::uint8_t> seen(grid.size(), 0);
  std::vector<Site> animal;

  std::function<void(std::vector<std::size_t>)> grow = [&](std::vector<std::size_t> untried) {
    while (!untried.empty()) {
      const std::size_t c = untried.back();
      untried.pop_back();
      animal.push_back(grid.site(c));
      out.emplace_back(d, animal);
      if (animal.size() < k_max) {
        std::vector<std::size_t> fresh;
        grid.for_each_neighbor(c, [&](std::size_t n) {
          if (!seen[n] && grid.site(n) > origin) fresh.push_back(n);
        });
        for (auto n : fresh) seen[n] = 1;
        std::vector<std::size_t> next = untried;
        next.insert(next.end(), fresh.begin(), fresh.end());
        grow(std::move(next));
        for (auto n : fresh) seen[n] = 0;
      }
      animal.pop_back();
    }
  };
  const std::size_t o = grid.index(origin);
  seen[o] = 1;
  grow({o});
  return out;
}

namespace {

void consider(AnimalResult& best, bool& have, const Region& A, double num, double den) {
  ++best.candidates;
  const double s = num / den;
  const bool better = !have || s > best.score ||
                      (s == best.score && (A.size() < best.best_region.size() ||
                                           (A.size() == best.best_region.size() && A < best.best_region)));
  if (!better) return;
  have = true;
  best.best_region = A;
  best.score = s;
  best.numerator = num;
  best.normalization = den;
}

Region translate(const Region& A, const Site& by, bool subtract) {
  std::vector<Site> s;
  s.reserve(A.size());
  for (Site x : A) {
    for (int i = 0; i < A.dim(); ++i) x[i] += subtract ? -by[i] : by[i];
    s.push_back(x);
  }
  return Region(A.dim(), std::move(s));
}

}  // namespace

AnimalResult greedy_animal(const FieldSample& h, std::size_t k_max, AnimalVariant variant, const Params& p) {
  AnimalResult best;
  bool have = false;
  const int d = h.region.dim();
  if (variant == AnimalVariant::ContourInteriors) {
    for (const Contour& g : enumerate_C0_all(h.region, p).contours) {
      if (k_max > 0 && g.size() > k_max) continue;
      consider(best, have, g.I_minus, sum_over(h, g.I_minus), static_cast<double>(g.size()));
    }
    return best;
  }
  if (k_max == 0 || k_max > 10) throw std::invalid_argument("k_max must be in [1, 10]");
  for (const Region& A : fixed_animals(d, k_max)) {
    const double den = static_cast<double>(edge_boundary_size(A));
    for (const Site& c : A) {
      const Region T = translate(A, c, true);
      consider(best, have, T, sum_over(h, T), den);
    }
  }
  return best;
}

AnimalResult greedy_animal_bruteforce(const FieldSample& h, std::size_t k_max) {
  const int d = h.region.dim();
  const int R = static_cast<int>(k_max) - 1;
  std::vector<Site> ball;
  {
    Site lo = Site::origin(d), hi = Site::origin(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = -R;
      hi[i] = R;
    }
    for (const Site& s : Region::box(lo, hi))
      if (l1_distance(s, Site::origin(d)) <= R && s != Site::origin(d)) ball.push_back(s);
  }
  AnimalResult best;
  bool have = false;
  std::vector<Site> pick{Site::origin(d)};
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    const Region A(d, pick);
    if (is_connected(A)) consider(best, have, A, sum_over(h, A), static_cast<double>(edge_boundary_size(A)));
    if (pick.size() == k_max) return;
    for (std::size_t i = from; i < ball.size(); ++i) {
      pick.push_back(ball[i]);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

SupEstimate estimate_sup_expectation(std::size_t n, const Region& lambda, const Params& p, std::size_t samples,
                                     std::uint64_t seed, FieldDistribution dist) {
  require_exact(lambda);
  SupEstimate out;
  out.n = n;
  const auto sets = minus_sets(lambda, p, n, n, out.contours);
  if (sets.empty() || samples == 0) return out;
  std::vector<double> sup(samples, 0.0);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i) {
    const FieldSample h = sample_field(lambda, dist, derive_seed(seed, static_cast<std::uint64_t>(i)));
    const double lz = log_z_abs(h, p);
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& kv : sets) m = std::max(m, -(lz - log_z_abs(flip_field(h, kv.first), p)) / p.beta);
    sup[static_cast<std::size_t>(i)] = m;
  }
  out.sup = mean_se(sup);
  return out;
}

Region cornerless_box(int d, int side) {
  Region b = Region::centered_box(d, side);
  std::vector<Site> corners;
  for (const Site& x : b) {
    bool corner = true;
    for (int i = 0; i < d; ++i) corner = corner && (x[i] == -(side / 2) || x[i] == side - 1 - side / 2);
    if (corner) corners.push_back(x);
  }
  return b.minus(Region(d, corners));
}

}  // namespace lrfim
