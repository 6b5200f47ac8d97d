#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lrfim/campaigns.hpp"
#include "lrfim/disorder.hpp"
#include "lrfim/numerics.hpp"

using namespace lrfim;

namespace {

Params make(int d, double beta, double eps) {
  ParamSpec s;
  s.d = d;
  s.alpha = 4;
  s.beta = beta;
  s.eps = eps;
  return resolve(s);
}

Region ball_box(int d, int k) {
  Site lo = Site::origin(d), hi = Site::origin(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = -k;
    hi[i] = k;
  }
  return Region::box(lo, hi);
}

}  // namespace

TEST_CASE("delta of the empty set and antisymmetry") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 1000; ++t) {
    const Params p = make(2, 0.3 + (rng() % 20) / 10.0, 0.1 + (rng() % 10) / 10.0);
    const Region box = (t % 2) ? Region::centered_box(2, 3) : Region::centered_box(2, 2);
    const FieldSample h =
        sample_field(box, t % 3 ? FieldDistribution::Gaussian : FieldDistribution::Bernoulli, rng());
    CHECK(delta_A(Region(2), h, p) == 0.0);
    std::vector<Site> a;
    for (const Site& s : box)
      if (rng() & 1u) a.push_back(s);
    const Region A(2, a);
    CHECK(std::abs(delta_A(A, h, p) + delta_A(A, flip_field(h, A), p)) <= 1e-10);
  }
}

TEST_CASE("single site closed form") {
  for (double beta : {0.2, 1.0, 3.0})
    for (double eps : {0.0, 0.4, 1.5})
      for (double hv : {-1.3, 0.0, 0.7}) {
        const Params p = make(2, beta, eps);
        const Region one(2, {Site{0, 0}});
        const FieldSample h = custom_field(one, {hv});
        const double jc = p.J * lattice_constant(p).value;
        const double expect = -std::log(std::cosh(beta * (jc + eps * hv)) / std::cosh(beta * (jc - eps * hv))) / beta;
        CHECK(delta_A(one, h, p) == doctest::Approx(expect).epsilon(1e-10));
      }
}

TEST_CASE("delta is linear in eps at small beta eps") {
  const Region box = Region::centered_box(2, 2);
  const FieldSample h = sample_field(box, FieldDistribution::Gaussian, 4);
  const Region A(2, {Site{0, 0}, Site{-1, 0}});
  const double d1 = delta_A(A, h, make(2, 1.0, 1e-4));
  const double d2v = delta_A(A, h, make(2, 1.0, 2e-4));
  CHECK(d2v == doctest::Approx(2 * d1).epsilon(1e-3));
}

TEST_CASE("concentration") {
  const Region box = Region::box(Site{-1, -1}, Site{0, 0});
  const Region A(2, {Site{-1, -1}, Site{0, -1}});
  const Region Ap(2, {Site{0, -1}, Site{0, 0}});
  const ConcentrationReport zero = verify_concentration(A, Ap, box, make(2, 1, 0), FieldDistribution::Gaussian, 500, 1);
  CHECK(zero.violations == 0);
  CHECK(zero.max_abs_delta == 0.0);
  const ConcentrationReport same = verify_concentration(A, A, box, make(2, 1, 0.5), FieldDistribution::Bernoulli, 500, 2);
  for (const TailPoint& t : same.grid) CHECK(t.tail_diff == 0.0);
  const ConcentrationReport g = verify_concentration(A, Ap, box, make(2, 1, 0.5), FieldDistribution::Gaussian, 2000, 3);
  CHECK(g.grid.size() == 20);
  CHECK(g.violations == 0);
  CHECK(g.antisymmetry_error <= 1e-10);
}

TEST_CASE("density ratio") {
  const Params p0 = paper_params(2, 4);
  Params p = p0;
  p.eps = 0;
  const ConstantTable k = compute_constants(p);
  const Region box = Region::centered_box(2, 4);
  std::mt19937_64 rng(5);
  int seen = 0;
  for (int t = 0; t < 300; ++t) {
    Configuration s = Configuration::uniform(box, +1);
    for (auto& v : s.spins) v = (rng() % 3 == 0) ? -1 : 1;
    const ContourFamily f = contours_of(s, p);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!f.external[i]) continue;
      const DensityRatio r = density_ratio(s, f.contours[i], zero_field(box), p, k);
      const PeierlsGap gap = peierls_gap(s, f.contours[i], p, k);
      CHECK(r.log_ratio == doctest::Approx(-p.beta * gap.delta_h).epsilon(1e-9));
      CHECK_FALSE(r.check.violated());
      ++seen;
    }
  }
  CHECK(seen > 100);
  Params q = p0;
  q.eps = 0.7;
  const ConstantTable kq = compute_constants(q);
  for (int t = 0; t < 100; ++t) {
    Configuration s = Configuration::uniform(box, +1);
    for (auto& v : s.spins) v = (rng() % 3 == 0) ? -1 : 1;
    const FieldSample h = sample_field(box, FieldDistribution::Gaussian, rng());
    const ContourFamily f = contours_of(s, q);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f.external[i]) CHECK_FALSE(density_ratio(s, f.contours[i], h, q, kq).check.violated());
  }
  // single flipped spin at zero field: ratio e^{-2 β J c_α}
  const Configuration one = [&] {
    Configuration c = Configuration::uniform(box, +1);
    c.set(Site{0, 0}, -1);
    return c;
  }();
  const DensityRatio r1 = density_ratio(one, contours_of(one, p).contours[0], zero_field(box), p, k);
  CHECK(r1.log_ratio == doctest::Approx(-2 * p.beta * p.J * lattice_constant(p).value));
}

TEST_CASE("bad event probability") {
  // the smallest contour with a non-empty minus interior has 20 sites
  const Region box = cornerless_box(2, 5);
  REQUIRE(box.size() == 21);
  CHECK_THROWS_AS(bad_event_probability(Region::centered_box(2, 5), paper_params(2, 4), 20, 4, 1),
                  std::invalid_argument);
  const Params p = paper_params(2, 4);
  const BadEventEstimate none = bad_event_probability(box, p, 3, 50, 1);
  CHECK(none.contours == 0);
  CHECK(none.probability == 0.0);
  Params tiny = p;
  tiny.eps = 1e-6;
  CHECK(bad_event_probability(box, tiny, 20, 20, 2).probability == 0.0);
  const BadEventSweep s = bad_event_sweep(box, p, {0.003, 0.01, 0.03, 0.25}, 20, 50, 3);
  REQUIRE(s.points.size() == 4);
  for (std::size_t i = 1; i < s.points.size(); ++i) {
    const auto& a = s.points[i - 1];
    const auto& b = s.points[i];
    CHECK(a.probability <= b.probability + 3 * std::hypot(a.se, b.se));
  }
  const auto& lo = s.points.front();
  const auto& hi = s.points.back();
  CHECK(hi.probability > lo.probability + 3 * std::hypot(lo.se, hi.se));
}

TEST_CASE("fixed animal counts") {
  const std::vector<std::size_t> d2{1, 2, 6, 19, 63, 216, 760};
  const auto a2 = fixed_animals(2, 7);
  std::vector<std::size_t> c2(8, 0);
  for (const Region& r : a2) {
    ++c2[r.size()];
    CHECK(r[0] == Site::origin(2));
    CHECK(is_connected(r));
  }
  for (std::size_t n = 1; n <= 7; ++n) CHECK(c2[n] == d2[n - 1]);
  const std::vector<std::size_t> d3{1, 3, 15, 86, 534};
  std::vector<std::size_t> c3(6, 0);
  for (const Region& r : fixed_animals(3, 5)) ++c3[r.size()];
  for (std::size_t n = 1; n <= 5; ++n) CHECK(c3[n] == d3[n - 1]);
}

TEST_CASE("greedy animal") {
  const Params p = paper_params(2, 4);
  const Region box = ball_box(2, 6);
  const FieldSample ones = custom_field(box, std::vector<double>(box.size(), 1.0));
  const AnimalResult r = greedy_animal(ones, 6, AnimalVariant::Connected, p);
  CHECK(r.score == doctest::Approx(0.6));
  CHECK(r.best_region.size() == 6);
  CHECK(r.best_region.contains(Site{0, 0}));
  CHECK(is_connected(r.best_region));

  const FieldSample neg = custom_field(box, std::vector<double>(box.size(), -1.0));
  const AnimalResult rn = greedy_animal(neg, 5, AnimalVariant::Connected, p);
  CHECK(rn.score == doctest::Approx(-0.25));
  CHECK(rn.best_region == Region(2, {Site{0, 0}}));

  std::mt19937_64 rng(9);
  for (int t = 0; t < 40; ++t) {
    const int d = 2 + t % 2;
    const std::size_t k = 1 + static_cast<std::size_t>(t % 4);
    const Region b = ball_box(d, 4);
    const FieldSample h = sample_field(b, FieldDistribution::Gaussian, rng());
    const AnimalResult fast = greedy_animal(h, k, AnimalVariant::Connected, p);
    const AnimalResult slow = greedy_animal_bruteforce(h, k);
    CHECK(fast.score == doctest::Approx(slow.score).epsilon(1e-12));
    CHECK(fast.best_region == slow.best_region);
  }
  CHECK_THROWS(greedy_animal(ones, 11, AnimalVariant::Connected, p));

  const Region small = Region::centered_box(2, 4);
  const FieldSample hs = sample_field(small, FieldDistribution::Gaussian, 3);
  const AnimalResult ci = greedy_animal(hs, 0, AnimalVariant::ContourInteriors, p);
  CHECK(ci.candidates > 0);
  CHECK(ci.normalization >= 5);
}

TEST_CASE("sup expectation") {
  const Region box = cornerless_box(2, 5);
  Params p = paper_params(2, 4);
  p.eps = 0;
  const SupEstimate z = estimate_sup_expectation(20, box, p, 20, 1);
  CHECK(z.sup.mean == 0.0);
  p.eps = 0.5;
  const SupEstimate s = estimate_sup_expectation(20, box, p, 50, 1);
  CHECK(s.contours > 0);
  CHECK(s.sup.mean > 0.0);
}
