#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "lrfim/constants.hpp"
#include "lrfim/model.hpp"
#include "lrfim/numerics.hpp"

using namespace lrfim;

namespace {

Params make(int d, double alpha, double beta, double eps) {
  ParamSpec s;
  s.d = d;
  s.alpha = alpha;
  s.beta = beta;
  s.eps = eps;
  return resolve(s);
}

Configuration random_config(const Region& r, std::mt19937_64& rng, int boundary = +1) {
  Configuration c = Configuration::uniform(r, +1, boundary);
  for (auto& s : c.spins) s = (rng() & 1u) ? 1 : -1;
  return c;
}

// Absolute energy difference by direct summation, outside sites truncated at l1 radius R.
double truncated_rel_energy(const Configuration& sigma, const FieldSample& h, const Params& p, int R) {
  const Region& lam = sigma.region;
  const int eta = sigma.boundary;
  double e = 0;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    for (std::size_t j = i + 1; j < lam.size(); ++j)
      e += coupling(lam[i], lam[j], p) * (1 - sigma.spins[i] * sigma.spins[j]);
    if (sigma.spins[i] != eta) {
      double out = 0;
      for (int dx = -R; dx <= R; ++dx)
        for (int dy = -(R - std::abs(dx)); dy <= R - std::abs(dx); ++dy) {
          const Site y{lam[i][0] + dx, lam[i][1] + dy};
          if (!lam.contains(y)) out += coupling(lam[i], y, p);
        }
      e += 2 * out;
    }
    e -= p.eps * h.values[i] * (sigma.spins[i] - eta);
  }
  return e;
}

}  // namespace

TEST_CASE("parameters") {
  const Params p = make(3, 4, 1, 0.5);
  CHECK(p.a == doctest::Approx(12));
  CHECK(p.delta == doctest::Approx(4));
  CHECK(p.r == 20);
  CHECK_FALSE(p.non_paper());
  ParamSpec bad;
  bad.alpha = 3;
  CHECK_THROWS_AS(resolve(bad), std::invalid_argument);
  bad.alpha = 4;
  bad.d = 5;
  CHECK_THROWS_AS(resolve(bad), std::invalid_argument);
  CHECK(small_override_params(2, 4).non_paper());
  CHECK(small_override_params(2, 4).r == 2);
}

TEST_CASE("coupling") {
  const Params p = make(2, 4, 1, 0);
  CHECK(coupling(Site{0, 0}, Site{0, 0}, p) == 0.0);
  CHECK(coupling(Site{0, 0}, Site{1, 1}, p) == doctest::Approx(0.0625));
  CHECK(coupling(Site{0, 0}, Site{-2, 0}, p) == doctest::Approx(0.0625));
}

TEST_CASE("zeta and sphere counts") {
  CHECK(zeta(2) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6).epsilon(1e-13));
  CHECK(zeta(4) == doctest::Approx(std::pow(std::numbers::pi, 4) / 90).epsilon(1e-13));
  for (int d = 1; d <= 4; ++d) {
    const auto poly = sphere_count_polynomial(d);
    for (int n = 1; n <= 12; ++n) {
      // brute-force shell count over the cube [-n, n]^d
      std::int64_t cnt = 0;
      std::vector<int> x(static_cast<std::size_t>(d), -n);
      while (true) {
        int s = 0;
        for (int v : x) s += std::abs(v);
        if (s == n) ++cnt;
        int k = 0;
        while (k < d && x[static_cast<std::size_t>(k)] == n) x[static_cast<std::size_t>(k++)] = -n;
        if (k == d) break;
        ++x[static_cast<std::size_t>(k)];
      }
      CHECK(sphere_count(d, n) == doctest::Approx(static_cast<double>(cnt)));
      double pv = 0;
      for (std::size_t j = 0; j < poly.size(); ++j) pv += poly[j] * std::pow(n, static_cast<double>(j));
      CHECK(pv == doctest::Approx(static_cast<double>(cnt)));
    }
  }
}

TEST_CASE("lattice constant") {
  const LatticeConstant c = lattice_constant(1, 2.0);
  CHECK(std::abs(c.value - std::numbers::pi * std::numbers::pi / 3) <= 1e-10);
  CHECK(c.tail_bound <= 1e-10);
  const LatticeConstant s = lattice_constant_shells(1, 2.0, 1e-6);
  CHECK(std::abs(s.value - c.value) <= 1e-6);
  const LatticeConstant s2 = lattice_constant_shells(2, 4.0, 1e-6);
  CHECK(std::abs(s2.value - lattice_constant(2, 4.0).value) <= 1e-6);
  const LatticeConstant s3 = lattice_constant_shells(3, 6.0, 1e-8);
  CHECK(std::abs(s3.value - lattice_constant(3, 6.0).value) <= 1e-8);
}

TEST_CASE("relative energy closed forms") {
  const Params p = make(2, 4, 1, 0.5);
  const Region one(2, {Site{0, 0}});
  const FieldSample h0 = zero_field(one);
  CHECK(rel_energy(Configuration::uniform(one, +1), h0, p) == 0.0);
  const double ca = lattice_constant(p).value;
  CHECK(std::abs(rel_energy(Configuration::uniform(one, -1), h0, p) - 2 * ca) <= 2e-10);
  const Region box = Region::centered_box(2, 3);
  CHECK(rel_energy(Configuration::uniform(box, +1), sample_field(box, FieldDistribution::Gaussian, 3), p) == 0.0);
}

TEST_CASE("relative energy against truncated double sum") {
  // alpha = 8 keeps the truncation error below 1e-17
  const Params p = make(2, 8, 1, 0.7);
  const Region box = Region::centered_box(2, 3);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 3; ++t) {
    const Configuration s = random_config(box, rng);
    const FieldSample h = sample_field(box, FieldDistribution::Gaussian, rng());
    CHECK(std::abs(rel_energy(s, h, p) - truncated_rel_energy(s, h, p, 1000)) <= 1e-9);
  }
}

TEST_CASE("global spin flip symmetry") {
  const Params p = make(2, 4, 1, 0.8);
  const Region box = Region::centered_box(2, 4);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const Configuration s = random_config(box, rng, +1);
    Configuration m = s;
    m.boundary = -1;
    for (auto& v : m.spins) v = static_cast<std::int8_t>(-v);
    const FieldSample h = sample_field(box, FieldDistribution::Gaussian, rng());
    FieldSample mh = h;
    for (auto& v : mh.values) v = -v;
    CHECK(rel_energy(m, mh, p) == doctest::Approx(rel_energy(s, h, p)).epsilon(1e-12));
  }
}

TEST_CASE("partition function") {
  const Params p = make(2, 4, 0.7, 0.5);
  const Region one(2, {Site{0, 0}});
  const double ca = lattice_constant(p).value;
  CHECK(partition_function(one, zero_field(one), p) == doctest::Approx(1 + std::exp(-2 * p.beta * ca)));

  Params b0 = p;
  b0.beta = 0;
  const Region box = Region::centered_box(2, 3);
  CHECK(log_partition_function(box, sample_field(box, FieldDistribution::Gaussian, 1), b0) ==
        doctest::Approx(9 * std::log(2.0)));

  // 16-state hand enumeration on 2x2
  const Region sq = Region::box(Site{0, 0}, Site{1, 1});
  const FieldSample h = sample_field(sq, FieldDistribution::Gaussian, 9);
  double z = 0;
  for (int m = 0; m < 16; ++m) {
    Configuration c = Configuration::uniform(sq, +1);
    for (int b = 0; b < 4; ++b) c.spins[static_cast<std::size_t>(b)] = (m >> b & 1) ? -1 : 1;
    z += std::exp(-p.beta * rel_energy(c, h, p));
  }
  CHECK(partition_function(sq, h, p) == doctest::Approx(z).epsilon(1e-12));

  CHECK_THROWS(log_partition_function(Region::centered_box(2, 5), zero_field(Region::centered_box(2, 5)), p,
                                      Constraint::None, 20));
}

TEST_CASE("parallel kernel equals serial reference") {
  const Params p = make(2, 4, 1.3, 0.9);
  for (int side : {2, 3, 4}) {
    const Region box = Region::centered_box(2, side);
    const FieldSample h = sample_field(box, FieldDistribution::Gaussian, static_cast<std::uint64_t>(side));
    for (Constraint c : {Constraint::None, Constraint::Theta}) {
      const double a = log_partition_function(box, h, p, c);
      const double b = log_partition_function_reference(box, h, p, c);
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
  }
}

TEST_CASE("gibbs probabilities") {
  const Params p = make(2, 4, 1.0, 0.0);
  const Region box = Region::centered_box(2, 3);
  const FieldSample h = zero_field(box);
  CHECK(gibbs_probability([](const Configuration&) { return true; }, box, h, p, false) == doctest::Approx(1.0));

  Params b0 = p;
  b0.beta = 0;
  auto minus0 = [](const Configuration& c) { return c.spin(Site{0, 0}) == -1; };
  CHECK(gibbs_probability(minus0, box, h, b0, false) == doctest::Approx(0.5));

  // enumeration oracle, with every energy shifted by a constant
  for (double shift : {0.0, 37.5}) {
    double num = 0, den = 0;
    const std::size_t o = static_cast<std::size_t>(box.index_of(Site{0, 0}));
    for_each_state(box, h, p, Constraint::None, [&](std::span<const std::int8_t> s, double e) {
      const double w = std::exp(-p.beta * (e + shift));
      den += w;
      if (s[o] == -1) num += w;
    });
    CHECK(std::abs(gibbs_probability(minus0, box, h, p, false) - num / den) <= 1e-12);
  }
  const ExactMarginals em = exact_marginals(box, h, p);
  CHECK(std::abs(em.p_minus[static_cast<std::size_t>(box.index_of(Site{0, 0}))] -
                 gibbs_probability(minus0, box, h, p, false)) <= 1e-12);
}

TEST_CASE("theta frozen sites") {
  const Region box = Region::centered_box(2, 3);
  CHECK(theta_frozen_sites(box) == box);
  const Region big = Region::centered_box(2, 6);
  const Region f = theta_frozen_sites(big);
  CHECK(f.size() == 36 - 4);
}

TEST_CASE("fields") {
  const Region box = Region::centered_box(2, 4);
  CHECK(sample_field(box, FieldDistribution::Gaussian, 5).values ==
        sample_field(box, FieldDistribution::Gaussian, 5).values);
  for (double v : sample_field(box, FieldDistribution::Bernoulli, 8).values) CHECK((v == 1.0 || v == -1.0));
  const Region big = Region::box(Site{0, 0}, Site{999, 999});
  const FieldSample g = sample_field(big, FieldDistribution::Gaussian, 1);
  double m = 0;
  for (double v : g.values) m += v;
  CHECK(std::abs(m / 1e6) <= 4.0 / 1000.0);
  const FieldSample f = flip_field(sample_field(box, FieldDistribution::Gaussian, 2), Region(2, {Site{0, 0}}));
  CHECK(f.at(Site{0, 0}) == -sample_field(box, FieldDistribution::Gaussian, 2).at(Site{0, 0}));
}

TEST_CASE("metropolis local energies") {
  const Params p = make(2, 4, 0.8, 0.6);
  const Region box = Region::centered_box(2, 4);
  const CouplingMatrix K(box, p);
  const FieldSample h = sample_field(box, FieldDistribution::Gaussian, 4);
  MetropolisChain chain(K, h, p, false, 17);
  for (int t = 0; t < 20; ++t) chain.sweep();
  for (std::size_t i = 0; i < box.size(); ++i) {
    Configuration a = Configuration::uniform(box, +1);
    a.spins.assign(chain.spins().begin(), chain.spins().end());
    Configuration b = a;
    b.spins[i] = static_cast<std::int8_t>(-b.spins[i]);
    CHECK(chain.delta_energy(i) == doctest::Approx(rel_energy(b, h, p) - rel_energy(a, h, p)).epsilon(1e-10));
  }
}

TEST_CASE("metropolis against exact enumeration") {
  const Region box = Region::centered_box(2, 3);
  {
    const Params p = make(2, 4, 0.0, 0.0);
    MetropolisOptions o;
    o.sweeps = 4000;
    o.burn_in = 100;
    o.seed = 3;
    const MetropolisResult r = metropolis_run(box, zero_field(box), p, o);
    CHECK(std::abs(r.magnetization.mean) <= 3 * r.magnetization.se + 1e-12);
  }
  const Params p = make(2, 4, 0.5, 0.5);
  const FieldSample h = sample_field(box, FieldDistribution::Gaussian, 12);
  const ExactMarginals em = exact_marginals(box, h, p);
  MetropolisOptions o;
  o.sweeps = 20000;
  o.burn_in = 1000;
  o.seed = 5;
  o.tracked = {Site{0, 0}, Site{1, 1}};
  const MetropolisResult r = metropolis_run(box, h, p, o);
  for (std::size_t k = 0; k < o.tracked.size(); ++k) {
    const double exact = em.p_minus[static_cast<std::size_t>(box.index_of(o.tracked[k]))];
    CHECK(std::abs(r.p_minus[k].mean - exact) <= 3 * r.p_minus[k].se);
    CHECK(std::abs(r.p_minus_indicator[k].mean - exact) <= 3 * r.p_minus_indicator[k].se);
  }
  const MetropolisResult again = metropolis_run(box, h, p, o);
  CHECK(again.p_minus[0].mean == r.p_minus[0].mean);
}

TEST_CASE("constants") {
  const ConstantTable k = compute_constants(paper_params(3, 4));
  CHECK(c_projection(2, 7.0 / 8) == 4.0);
  for (double lam : {0.5, 7.0 / 8, 0.9}) {
    CHECK(c_projection(3, lam) == doctest::Approx(6 + 12 / (1 - lam)));
    for (int d = 2; d <= 4; ++d)
      CHECK(c_projection(d, lam) == doctest::Approx(2 * d + (d - 2) * d * std::exp2(d - 1) / (1 - lam)));
  }
  CHECK(k.b5 == doctest::Approx(61 * std::log(2.0) + 2 + 3 * std::log(3.0)));
  CHECK(k.b1 == doctest::Approx(6 * k.b));
  CHECK(k.b1_as_printed == doctest::Approx(6 / k.b));
  CHECK(k.feasible);
  CHECK(k.kappa_defined);
  for (const auto& row : k.rows()) CHECK_MESSAGE(std::isfinite(row.value), row.name);
  CHECK(compute_constants(paper_params(3, 4)).hash() == k.hash());
  Params q = paper_params(3, 4);
  q.M = 1;
  const ConstantTable ki = compute_constants(q);
  CHECK_FALSE(ki.feasible);
  CHECK(ki.hash() != k.hash());
  CHECK(std::pow(k.m_threshold, k.params.decay_gap()) ==
        doctest::Approx(24 * k.kappa2 * std::exp2(5) * 7).epsilon(1e-9));
}
