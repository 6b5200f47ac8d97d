#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lrfim/campaigns.hpp"
#include "lrfim/constants.hpp"
#include "lrfim/contour.hpp"
#include "lrfim/generators.hpp"

using namespace lrfim;

namespace {

// Cube-graph threshold M 2^{ar} = 32 at step 1, so moderate separations split parts.
Params split_params() {
  ParamSpec s;
  s.d = 2;
  s.alpha = 4;
  s.M = 2;
  s.a = 2;
  s.r = 2;
  return resolve(s);
}

Configuration with_minus(const Region& box, const Region& minus) {
  Configuration c = Configuration::uniform(box, +1);
  for (const Site& s : minus) c.set(s, -1);
  return c;
}

Region incorrect_oracle(const Configuration& c) {
  const Region& lam = c.region;
  std::vector<Site> out;
  const Region around = lam.unite(external_boundary(lam));
  for (const Site& x : around) {
    const int s = c.spin(x);
    bool constant = true;
    for (int i = 0; i < lam.dim(); ++i)
      for (int dlt : {-1, 1})
        if (c.spin(x.shifted(i, dlt)) != s) constant = false;
    if (!constant) out.push_back(x);
  }
  return Region(lam.dim(), out);
}

Region square(int cx, int cy, int half) {
  return Region::box(Site{cx - half, cy - half}, Site{cx + half, cy + half});
}

}  // namespace

TEST_CASE("incorrect points") {
  const Region box = Region::centered_box(2, 5);
  CHECK(boundary_of_config(Configuration::uniform(box, +1)).empty());
  CHECK(boundary_of_config(with_minus(box, Region(2, {Site{0, 0}}))).size() == 5);
  std::mt19937_64 rng(1);
  const Region b4 = Region::centered_box(2, 4);
  for (int t = 0; t < 200; ++t) {
    Configuration c = Configuration::uniform(b4, +1);
    for (auto& s : c.spins) s = (rng() & 1u) ? 1 : -1;
    CHECK(boundary_of_config(c) == incorrect_oracle(c));
  }
}

TEST_CASE("gamma_r partition examples") {
  const Params p = small_override_params(2, 4);
  const Region one_cube(2, {Site{0, 0}, Site{1, 0}, Site{0, 1}});
  const Partition a = gamma_r_partition(one_cube, p);
  REQUIRE(a.parts.size() == 1);
  CHECK(a.step_of_part[0] == 1);
  const double far = p.M * std::exp2(p.a * p.r) + 10;
  const Region two(2, {Site{0, 0}, Site{static_cast<int>(far), 0}});
  const Partition b = gamma_r_partition(two, p);
  REQUIRE(b.parts.size() == 2);
  CHECK(b.step_of_part == std::vector<int>{1, 1});
  CHECK(gamma_r_partition(two, paper_params(2, 4)).parts.size() == 1);
}

TEST_CASE("gamma_r partitions satisfy (A), (B) and the step volume bound") {
  std::mt19937_64 rng(2);
  for (int d : {2, 3})
    for (const Params& p : {paper_params(d, 4), small_override_params(d, 4)})
      for (int t = 0; t < 60; ++t) {
        const Region A = random_region(d, 60, rng());
        const Partition P = gamma_r_partition(A, p);
        const PartitionCheck c = check_partition(A, P, p);
        CHECK(c.exact_cover);
        CHECK(c.b_violations == 0);
        CHECK(c.step_volume_violations == 0);
        for (std::size_t i = 0; i < P.parts.size(); ++i) CHECK(check_big_clusters(P.parts[i], P.step_of_part[i], p) == 0);
      }
}

TEST_CASE("finest partition") {
  ParamSpec s;
  s.d = 2;
  s.alpha = 4;
  s.M = 3;
  s.a = 3;
  s.r = 2;
  const Params p = resolve(s);
  // (B) needs distance > M min|V|^{a/δ} = 3
  const Region at4(2, {Site{0, 0}, Site{4, 0}});
  CHECK(finest_partition_bruteforce(at4, p).parts.size() == 2);
  const Region at3(2, {Site{0, 0}, Site{3, 0}});
  CHECK(finest_partition_bruteforce(at3, p).parts.size() == 1);
  const Region adj(2, {Site{0, 0}, Site{1, 0}});
  CHECK(finest_partition_bruteforce(adj, p).parts.size() == 1);

  std::mt19937_64 rng(3);
  const Params q = small_override_params(2, 4);
  for (int t = 0; t < 20; ++t) {
    std::vector<Site> pts;
    while (pts.size() < 7) pts.push_back(Site{static_cast<int>(rng() % 40), static_cast<int>(rng() % 40)});
    const Region A(2, pts);
    const Partition fin = finest_partition_bruteforce(A, q);
    const Partition gr = gamma_r_partition(A, q);
    CHECK(refines(fin.parts, gr.parts));
    for (const auto& v : valid_partitions(A, q)) CHECK(refines(fin.parts, v));
    for (std::size_t i = 0; i < fin.parts.size(); ++i)
      for (std::size_t j = 0; j < fin.parts.size(); ++j)
        if (i != j) {
          CHECK(condition_B(fin.parts[i], fin.parts[j], q));
          CHECK(condition_A1(fin.parts[i], fin.parts[j]));
        }
  }
  CHECK_THROWS(finest_partition_bruteforce(random_region(2, 40, 1).unite(Region::centered_box(2, 4)), q));
}

TEST_CASE("labels of a single island") {
  const Params p = paper_params(2, 4);
  const Region box = Region::centered_box(2, 9);
  const Configuration c = with_minus(box, square(0, 0, 1));
  const ContourFamily f = contours_of(c, p);
  REQUIRE(f.size() == 1);
  CHECK(f.external[0]);
  CHECK(f.origin_label == +1);
  const Contour& g = f.contours[0];
  CHECK(g.outer_label == +1);
  CHECK(g.I_minus == Region(2, {Site{0, 0}}));
  CHECK(g.I_plus.empty());
  CHECK(g.volume == g.support.unite(g.interior));
  CHECK(contours_of(Configuration::uniform(box, +1), p).size() == 0);
}

TEST_CASE("nested rings alternate labels") {
  const Params p = paper_params(2, 4);
  const Region box = Region::centered_box(2, 15);
  const Configuration c = with_minus(box, square(0, 0, 4).minus(square(0, 0, 1)));
  const ContourFamily f = contours_of(c, p);
  REQUIRE(f.size() == 1);
  const Contour& g = f.contours[0];
  CHECK(g.outer_label == +1);
  REQUIRE(g.interior_components.size() == 2);
  CHECK(g.I_plus == Region(2, {Site{0, 0}}));
  CHECK(g.I_minus.size() == 9 * 9 - 25 - 16 - 3 * 4);
  // one ring site carries the other sign, so the outer read set is mixed
  const Configuration mixed = with_minus(box, Region(2, {Site{0, 0}, Site{1, 1}}));
  CHECK_THROWS_WITH(label_contour(mixed, square(0, 0, 1).minus(Region(2, {Site{0, 0}}))),
                    doctest::Contains("not a valid contour"));
}

TEST_CASE("two far islands give two external contours") {
  const Params p = split_params();
  const Region box = Region::box(Site{-5, -5}, Site{65, 5});
  const Configuration c = with_minus(box, Region(2, {Site{0, 0}, Site{60, 0}}));
  const ContourFamily f = contours_of(c, p);
  REQUIRE(f.size() == 2);
  CHECK(f.external[0]);
  CHECK(f.external[1]);
  const Configuration e = erase_contour(c, f.contours[0], p);
  const ContourFamily rest = contours_of(e, p);
  REQUIRE(rest.size() == 1);
  CHECK(rest.contours[0] == f.contours[1]);
}

TEST_CASE("erasing the external contour exposes the internal one") {
  const Params p = split_params();
  const Region box = Region::centered_box(2, 101);
  const Configuration c = with_minus(box, square(0, 0, 45).minus(Region(2, {Site{0, 0}})));
  const ContourFamily f = contours_of(c, p);
  REQUIRE(f.size() == 2);
  std::size_t ext = f.external[0] ? 0 : 1, in = 1 - ext;
  CHECK_FALSE(f.external[in]);
  CHECK(f.contours[in].outer_label == -1);
  Configuration e = c;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.external[i]) e = erase_contour(e, f.contours[i], p);
  const ContourFamily rest = contours_of(e, p);
  REQUIRE(rest.size() == 1);
  CHECK(rest.contours[0].support == f.contours[in].support);
  CHECK(rest.contours[0].outer_label == +1);
  CHECK(rest.contours[0].I_minus.empty());
  CHECK(e.spin(Site{0, 0}) == -1);
  CHECK(erase_contour(e, rest.contours[0], p) == Configuration::uniform(box, +1));
}

TEST_CASE("erase modes") {
  const Params p = paper_params(2, 4);
  const Region box = Region::centered_box(2, 7);
  const Configuration c = with_minus(box, square(0, 0, 1));
  const Contour g = contours_of(c, p).contours[0];
  REQUIRE(g.I_minus.size() == 1);
  const Configuration plus = erase_contour(c, g, p);
  CHECK(plus == Configuration::uniform(box, +1));
  CHECK_THROWS(erase_contour(plus, g, p, EraseMode::Strict));
  CHECK(erase_contour(plus, g, p, EraseMode::Lenient) == plus);
  CHECK_FALSE(erase_contour(plus, g, p, EraseMode::Unchecked) == plus);
}

TEST_CASE("interaction sums") {
  const Params p = paper_params(2, 4);
  const double ca = lattice_constant(p).value;
  CHECK(interaction_F(Region(2, {Site{0, 0}}), p) == doctest::Approx(ca));
  CHECK(interaction_F(Region(2, {Site{0, 0}, Site{1, 0}}), p) == doctest::Approx(2 * ca - 2));
  // 3x3 block against a radius-1000 truncated sum at alpha = 8
  ParamSpec s;
  s.d = 2;
  s.alpha = 8;
  const Params q = resolve(s);
  const Region B = Region::centered_box(2, 3);
  double oracle = 0;
  const int R = 1000;
  for (const Site& x : B)
    for (int dx = -R; dx <= R; ++dx)
      for (int dy = -(R - std::abs(dx)); dy <= R - std::abs(dx); ++dy) {
        const Site y{x[0] + dx, x[1] + dy};
        if (!B.contains(y)) oracle += coupling(x, y, q);
      }
  CHECK(std::abs(interaction_F(B, q) - oracle) <= 1e-9);
}

TEST_CASE("peierls gap of a single flipped spin") {
  const Params p = paper_params(2, 4);
  const ConstantTable k = compute_constants(p);
  const Region box = Region::centered_box(2, 5);
  const Configuration c = with_minus(box, Region(2, {Site{0, 0}}));
  const ContourFamily f = contours_of(c, p);
  const PeierlsGap g = peierls_gap(c, f.contours[0], p, k);
  CHECK(g.delta_h == doctest::Approx(2 * lattice_constant(p).value));
  CHECK(g.delta_h >= g.rhs);
  const auto aux = check_aux_interaction_bounds(f, 0, p, k);
  for (const auto& r : aux) {
    CHECK(r.lhs == 0.0);
    CHECK_FALSE(r.violated());
  }
}

TEST_CASE("C0 enumeration") {
  const Params p = paper_params(2, 4);
  const Region box = Region::centered_box(2, 5);
  CHECK(enumerate_C0(box, 1, p).empty());
  CHECK(enumerate_C0(box, 5, p).size() == 5);
  const C0Enumeration all = enumerate_C0_all(box, p);
  for (const Contour& g : all.contours) {
    CHECK(g.volume.contains(Site{0, 0}));
    CHECK(g.size() >= 5);
  }
}

TEST_CASE("serialization round trip") {
  const Params p = paper_params(2, 4);
  const Region box = Region::centered_box(2, 15);
  const Configuration c = with_minus(box, square(0, 0, 4).minus(square(0, 0, 1)));
  const Contour g = contours_of(c, p).contours[0];
  const std::string line = serialize(g);
  CHECK(line.rfind("support=[(", 0) == 0);
  const Contour back = parse_contour(line, 2);
  CHECK(back == g);
  CHECK(back.I_minus == g.I_minus);
  CHECK_THROWS(parse_contour("support=[(0,0] labels=[(0,+1)]", 2));
}

TEST_CASE("dense extractor agrees with the generic path") {
  const Params p = paper_params(2, 4);
  const Region box = Region::centered_box(2, 4);
  REQUIRE(single_part_regime(box, p));
  DenseContourExtractor ex(box);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 2000; ++t) {
    Configuration c = Configuration::uniform(box, +1);
    for (auto& s : c.spins) s = (rng() % 3 == 0) ? -1 : 1;
    DenseContourExtractor::Key key;
    const bool has = ex.extract(c.spins, key);
    const ContourFamily f = contours_of(c, p);
    REQUIRE(has == (f.size() == 1));
    if (has) CHECK(ex.to_contour(key) == f.contours[0]);
  }
  const Campaign cc = sweep_crosscheck_campaign(Region::centered_box(2, 3), p, "3x3");
  CHECK(cc.ok());
  CHECK(cc.summary.pass == 2);
}
