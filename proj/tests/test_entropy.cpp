#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lrfim/campaigns.hpp"
#include "lrfim/entropy.hpp"
#include "lrfim/generators.hpp"

using namespace lrfim;

TEST_CASE("binomials against Pascal's triangle") {
  std::vector<std::vector<BigInt>> pascal(70);
  for (std::size_t n = 0; n < pascal.size(); ++n) {
    pascal[n].assign(n + 1, 1);
    for (std::size_t k = 1; k < n; ++k) pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
  }
  for (std::size_t n = 0; n < pascal.size(); ++n)
    for (std::size_t k = 0; k <= n; ++k) CHECK(binomial(n, k) == pascal[n][k]);
  CHECK(binomial(3, 5) == 0);
}

TEST_CASE("subordinated collections") {
  const CubeCollection coarse = make_collection(2, 1, {Cube{1, Site{0, 0}}});
  CHECK(count_subordinated(coarse, 0, 0).exact == 1);
  CHECK(count_subordinated(coarse, 0, 2).exact == 6);
  CHECK(count_subordinated(coarse, 0, 5).exact == 0);
  const SubordinatedCount s = count_subordinated(coarse, 0, 3);
  CHECK(s.log_exact <= s.log_bound);

  // explicit enumeration: subsets of the fine cubes inside two coarse cubes
  const CubeCollection two = make_collection(2, 2, {Cube{2, Site{0, 0}}, Cube{2, Site{1, 0}}});
  std::vector<Cube> fine;
  for (const Site& x : Region::box(Site{0, 0}, Site{3, 1})) fine.push_back(Cube{1, x});
  REQUIRE(fine.size() == 8);
  std::vector<std::size_t> by_size(9, 0);
  for (unsigned m = 0; m < 256; ++m) {
    std::vector<Cube> pick;
    for (unsigned b = 0; b < 8; ++b)
      if (m >> b & 1u) pick.push_back(fine[b]);
    if (is_subordinated(make_collection(2, 1, pick), two)) ++by_size[static_cast<std::size_t>(std::popcount(m))];
  }
  for (std::int64_t V = 0; V <= 8; ++V) CHECK(count_subordinated(two, 1, V).exact == by_size[static_cast<std::size_t>(V)]);
  CHECK_FALSE(is_subordinated(make_collection(2, 1, {Cube{1, Site{4, 0}}}), two));
  CHECK_FALSE(is_subordinated(two, make_collection(2, 1, {Cube{1, Site{0, 0}}})));

  const Campaign c = subordination_campaign();
  CHECK(c.ok());
  CHECK(c.summary.pass > 100);
}

TEST_CASE("n_r and partial volume") {
  const Params p = small_override_params(2, 4);  // r = 2
  const Region one(2, {Site{3, 3}});
  CHECK(n_r(one, p.r) == 0);
  for (int l = 0; l <= 0; ++l) CHECK(partial_volume(one, l, p) == n_r(one, p.r) - l + 1);

  const Region pair(2, {Site{0, 0}, Site{5, 0}});
  CHECK(n_r(pair, p.r) == 2);
  CHECK(partial_volume(pair, 0, p) == 2 + 2 + 1);
  CHECK(partial_volume(pair, 1, p) == 2 + 1);

  const Region cube = Region::box(Site{0, 0}, Site{3, 3});
  CHECK(n_r(cube, p.r) == 2);
  CHECK(partial_volume(cube, 1, p) == 1 + 1);
  CHECK(partial_volume(cube, 0, p) == 16 + 1 + 1);
  CHECK_THROWS(partial_volume(Region(2), 0, p));
}

TEST_CASE("graph covering") {
  Graph path(5);
  for (std::size_t i = 0; i + 1 < 5; ++i) path.add_edge(i, i + 1);
  const auto cover = cover_graph_by_subgraphs(path, 2);
  CHECK(cover.size() <= 3);
  std::vector<int> seen(5, 0);
  for (const auto& g : cover) {
    CHECK(g.size() <= 4);
    CHECK(path.connected(g));
    for (std::size_t v : g) seen[v] = 1;
  }
  CHECK(std::count(seen.begin(), seen.end(), 1) == 5);
  CHECK(cover_graph_by_subgraphs(path, 5).size() == 1);
  CHECK(cover_graph_by_subgraphs(path, 9).size() == 1);
  Graph split(4);
  split.add_edge(0, 1);
  split.add_edge(2, 3);
  CHECK_THROWS_AS(cover_graph_by_subgraphs(split, 2), std::invalid_argument);
  CHECK_THROWS_AS(cover_graph_by_subgraphs(path, 0), std::invalid_argument);

  // star graphs are the worst case for naive splitting
  Graph star(21);
  for (std::size_t i = 1; i < 21; ++i) star.add_edge(0, i);
  for (std::size_t k = 1; k <= 21; ++k) {
    const auto c = cover_graph_by_subgraphs(star, k);
    CHECK(c.size() <= (21 + k - 1) / k);
    for (const auto& g : c) CHECK(g.size() <= 2 * k);
  }
  const Campaign camp = graph_cover_campaign(1000, 40, 7);
  CHECK(camp.ok());
  CHECK(camp.summary.pass == 4000);
}

TEST_CASE("volume and covering bounds") {
  const Params p = small_override_params(2, 4);
  const ConstantTable k = compute_constants(p);
  const C0Enumeration e = enumerate_C0_all(Region::centered_box(2, 5), p);
  for (const Contour& g : e.contours) {
    for (int l = 0; l <= 2; ++l) {
      CHECK_FALSE(check_volume_bound(g, l, p, k).violated());
      CHECK_FALSE(check_covering_bound(g, l, 1, p, k).violated());
    }
    const CheckReport c0 = check_covering_bound(g, 0, 1, p, k);
    CHECK(c0.lhs == doctest::Approx(static_cast<double>(g.size())));
  }
  const Contour single = e.contours.front();
  const CheckReport v = check_volume_bound(single, 0, p, k);
  CHECK(v.lhs == static_cast<double>(partial_volume(single.support, 0, p)));
}

TEST_CASE("coverings and C0 counts") {
  const Params p = small_override_params(2, 4);
  const ConstantTable k = compute_constants(p);
  const C0Enumeration e = enumerate_C0_all(Region::centered_box(2, 5), p);
  CHECK(check_coverings_of_C0(e.contours, 1, 0, p, k).coverings == 0);
  std::set<Region> supports;
  for (const Contour& g : e.contours)
    if (g.size() == 12) supports.insert(g.support);
  CHECK(check_coverings_of_C0(e.contours, 12, 0, p, k).coverings == supports.size());
  CHECK_FALSE(check_C0_count(e.contours.size(), 12, k).violated());
}

TEST_CASE("family bound") {
  const Params p = small_override_params(2, 4);
  const FamilyCount one = check_family_bound(0, 1, p);
  CHECK(one.count == 1);
  CHECK_FALSE(one.check.violated());
  const FamilyCount three = check_family_bound(0, 3, p);
  CHECK(three.count > one.count);
  CHECK_FALSE(three.check.violated());
  CHECK_THROWS_AS(check_family_bound(0, 4, p, 10), std::length_error);
}

TEST_CASE("entropy campaign on a small box") {
  const Campaign c = entropy_campaign(Region::centered_box(2, 4), small_override_params(2, 4), 2, "t");
  CHECK(c.ok());
  CHECK(c.summary.pass > 0);
}
