#include "lrfim/campaigns.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "lrfim/coarse.hpp"
#include "lrfim/constants.hpp"
#include "lrfim/disorder.hpp"
#include "lrfim/entropy.hpp"
#include "lrfim/generators.hpp"
#include "lrfim/numerics.hpp"

namespace lrfim {

void Campaign::add(std::uint64_t seed, const std::string& tag, const CheckReport& r, bool asserted) {
  if (asserted) summary.add(r);
  records.push_back(CheckRecord{seed, tag, r, asserted});
}

void Campaign::absorb(const Campaign& other) {
  summary.merge(other.summary);
  records.insert(records.end(), other.records.begin(), other.records.end());
  data.insert(data.end(), other.data.begin(), other.data.end());
}

CsvWriter campaign_csv(const Campaign& c) {
  CsvWriter w({"seed", "tag", "lemma", "lhs", "rhs", "margin", "status", "asserted"});
  for (const auto& rec : c.records)
    w.row({CsvWriter::num(rec.seed), rec.tag, rec.report.id, CsvWriter::num(rec.report.lhs),
           CsvWriter::num(rec.report.rhs), CsvWriter::num(rec.report.margin()), to_string(rec.report.status),
           rec.asserted ? "1" : "0"});
  return w;
}

namespace {

CheckReport count_check(const std::string& id, double bad) { return make_check(id, bad, 0.0); }

CheckReport strict_positive(const std::string& id, double value) {
  CheckReport r;
  r.id = id;
  r.lhs = 0.0;
  r.rhs = value;
  r.status = value > 0.0 ? CheckStatus::Pass : CheckStatus::Violation;
  return r;
}

std::string fmt(double v) { return CsvWriter::num(v); }

/// Per-instance campaigns in parallel, merged in index order.
template <class F>
Campaign run_instances(const std::string& name, std::size_t instances, F&& body) {
  std::vector<Campaign> parts(instances);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(instances); ++i) body(static_cast<std::size_t>(i), parts[static_cast<std::size_t>(i)]);
  Campaign out;
  out.name = name;
  for (const auto& c : parts) out.absorb(c);
  return out;
}

Region translate(const Region& A, const Site& by) {
  std::vector<Site> s;
  s.reserve(A.size());
  for (Site x : A) {
    for (int i = 0; i < A.dim(); ++i) x[i] += by[i];
    s.push_back(x);
  }
  return Region(A.dim(), std::move(s));
}

}  // namespace

// ---------------------------------------------------------------- partitions

Campaign partitions_campaign(int d, const Params& p, std::size_t instances, std::size_t max_size, std::uint64_t seed,
                             const std::string& tag) {
  return run_instances("partitions", instances, [&](std::size_t i, Campaign& c) {
    const std::uint64_t s = derive_seed(seed, i);
    const Region A = random_region(d, max_size, s);
    const Partition P = gamma_r_partition(A, p);
    const PartitionCheck chk = check_partition(A, P, p);
    c.add(s, tag, count_check("partition_A", chk.exact_cover ? 0.0 : 1.0));
    c.add(s, tag, count_check("partition_B", static_cast<double>(chk.b_violations)));
    c.add(s, tag, count_check("partition_step_volume", static_cast<double>(chk.step_volume_violations)));
    c.add(s, tag, count_check("partition_A1", static_cast<double>(chk.a1_violations)), false);
    std::size_t big = 0;
    for (std::size_t k = 0; k < P.parts.size(); ++k) big += check_big_clusters(P.parts[k], P.step_of_part[k], p);
    c.add(s, tag, count_check("big_clusters", static_cast<double>(big)));
  });
}

Campaign finest_campaign(const Params& p, std::size_t instances, std::size_t max_size, std::uint64_t seed,
                         const std::string& tag) {
  Campaign out = run_instances("finest", instances, [&](std::size_t i, Campaign& c) {
    const std::uint64_t s = derive_seed(seed, i);
    const Region A = random_region(2, std::min(max_size, kFinestCap), s);
    const Partition F = finest_partition_bruteforce(A, p);
    std::size_t b = 0, a1 = 0;
    for (std::size_t x = 0; x < F.parts.size(); ++x)
      for (std::size_t y = 0; y < F.parts.size(); ++y) {
        if (x == y) continue;
        if (x < y && !condition_B(F.parts[x], F.parts[y], p)) ++b;
        if (!condition_A1(F.parts[x], F.parts[y])) ++a1;
      }
    const auto valid = valid_partitions(A, p);
    std::size_t not_refining = 0;
    for (const auto& P : valid)
      if (!refines(F.parts, P)) ++not_refining;
    c.add(s, tag, count_check("finest_B", static_cast<double>(b)));
    c.add(s, tag, count_check("finest_A1", static_cast<double>(a1)));
    c.add(s, tag, count_check("finest_refines_valid", static_cast<double>(not_refining)));
    const Partition G = gamma_r_partition(A, p);
    c.add(s, tag, count_check("gamma_r_equals_finest", G.parts == F.parts ? 0.0 : 1.0), false);
  });
  return out;
}

// ---------------------------------------------------------------- coarse graining

Campaign coarse_identity_campaign(const Region& lambda, const Params& p, const std::string& tag) {
  Campaign c;
  c.name = "coarse_identity";
  const MinusSetSweep sweep = sweep_minus_interiors(lambda, p, lambda.size());
  std::size_t bad = 0;
  for (const Region& m : sweep.minus_sets)
    if (admissible_cover(m, 0, p).B != m) ++bad;
  c.add(0, tag, count_check("B0_equals_I_minus", static_cast<double>(bad)));
  c.note(tag + "_configurations", std::to_string(sweep.configurations));
  c.note(tag + "_with_contour", std::to_string(sweep.with_contour));
  c.note(tag + "_distinct_minus_sets", std::to_string(sweep.minus_sets.size()));
  return c;
}

Campaign sweep_crosscheck_campaign(const Region& lambda, const Params& p, const std::string& tag) {
  Campaign c;
  c.name = "sweep_crosscheck";
  const AllContours all = enumerate_all_contours(lambda, p, lambda.size());
  std::set<Region> generic;
  std::size_t bad = 0;
  for (const Contour& g : all.contours) {
    generic.insert(g.I_minus);
    if (admissible_cover(g, 0, p).B != g.I_minus) ++bad;
  }
  const MinusSetSweep sweep = sweep_minus_interiors(lambda, p, lambda.size());
  const std::set<Region> dense(sweep.minus_sets.begin(), sweep.minus_sets.end());
  c.add(0, tag, count_check("B0_equals_I_minus_generic", static_cast<double>(bad)));
  c.add(0, tag, count_check("sweep_matches_generic", generic == dense ? 0.0 : 1.0));
  c.note(tag + "_contours", std::to_string(all.contours.size()));
  c.note(tag + "_distinct_minus_sets", std::to_string(generic.size()));
  return c;
}

Campaign prop1_campaign(const std::vector<Contour>& contours, const Params& p, const std::string& tag) {
  const ConstantTable k = compute_constants(p);
  Campaign out = run_instances("prop1", contours.size(), [&](std::size_t i, Campaign& c) {
    const Contour& g = contours[i];
    const int top = proposition1_cutoff(g.size(), p, k);
    for (int l = 0; l <= top; ++l) {
      const Prop1Report r = check_proposition1(g, l, p, k);
      c.add(i, tag, r.inner_vs_exterior);
      c.add(i, tag, r.exterior_vs_size);
      c.add(i, tag, r.symmetric_difference);
      c.add(i, tag, r.cutoff_empty);
      c.add(i, tag, r.inner_vs_exterior_printed, false);
    }
  });
  std::size_t printed = 0;
  for (const auto& rec : out.records)
    if (!rec.asserted && rec.report.violated()) ++printed;
  out.note(tag + "_printed_b1_violations", std::to_string(printed));
  return out;
}

Campaign approximation_campaign(const std::vector<Contour>& contours, const Params& p, int max_level,
                                const std::string& tag) {
  const ConstantTable k = compute_constants(p);
  Campaign c;
  c.name = "approximation";
  std::size_t pairs = 0;
  for (int l = 0; l <= max_level; ++l) {
    std::map<std::pair<std::size_t, Region>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < contours.size(); ++i)
      groups[{contours[i].size(), admissible_cover(contours[i], l, p).B}].push_back(i);
    for (const auto& [key, members] : groups) {
      const std::size_t m = std::min<std::size_t>(members.size(), 40);
      for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = x + 1; y < m; ++y) {
          c.add(members[x], tag, approximation_radius(contours[members[x]], contours[members[y]], l, p, k).check);
          ++pairs;
        }
    }
  }
  c.note(tag + "_pairs", std::to_string(pairs));
  return c;
}

Campaign projection_campaign(int d, double lambda, std::size_t instances, std::uint64_t seed) {
  const std::string tag = "d=" + std::to_string(d);
  return run_instances("projection", instances, [&](std::size_t i, Campaign& c) {
    const std::uint64_t s = derive_seed(seed, i);
    std::mt19937_64 rng(s);
    Rectangle R;
    R.dim = d;
    R.corner = Site::origin(d);
    const int rmin = std::uniform_int_distribution<int>(2, d == 2 ? 8 : 5)(rng);
    for (int a = 0; a < d; ++a) R.extent[static_cast<std::size_t>(a)] = std::uniform_int_distribution<int>(rmin, 2 * rmin)(rng);
    Region A;
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
      case 0:
        A = random_percolation(d, 2 * rmin + 2, std::uniform_real_distribution<double>(0.02, 0.5)(rng), rng);
        A = translate(A, [&] { Site t = Site::origin(d); for (int a = 0; a < d; ++a) t[a] = -1; return t; }());
        break;
      case 1: {
        const auto size = std::uniform_int_distribution<std::size_t>(1, static_cast<std::size_t>(std::pow(rmin, d)))(rng);
        Site t = Site::origin(d);
        for (int a = 0; a < d; ++a) t[a] = std::uniform_int_distribution<int>(0, R.extent[static_cast<std::size_t>(a)] - 1)(rng);
        A = translate(random_eden(d, size, rng), t);
        break;
      }
      default:
        A = random_cube_union(d, std::uniform_int_distribution<int>(1, 4)(rng), rmin, 2 * rmin, rng);
        break;
    }
    c.add(s, tag, check_projection_lemma(A, R, lambda));
  });
}

Campaign cube_pair_campaign(int d, const std::vector<int>& levels, const Params& p, std::size_t instances,
                            std::uint64_t seed) {
  const ConstantTable k = compute_constants(p);
  return run_instances("cube_pair", instances, [&](std::size_t i, Campaign& c) {
    const std::uint64_t s = derive_seed(seed, i);
    std::mt19937_64 rng(s);
    const int l = levels[std::uniform_int_distribution<std::size_t>(0, levels.size() - 1)(rng)];
    const int scale = p.r * l;
    const Cube C{scale, Site::origin(d)};
    const int axis = std::uniform_int_distribution<int>(0, d - 1)(rng);
    const int dir = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
    const Cube Cp{scale, Site::origin(d).shifted(axis, dir)};
    const std::int64_t side = C.side();
    const Region U = C.points().unite(Cp.points());
    std::vector<Site> pts;
    const int mode = std::uniform_int_distribution<int>(0, 2)(rng);
    if (mode == 0) {
      const double qc = std::uniform_real_distribution<double>(0.5, 1.0)(rng);
      const double qp = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
      for (const Site& x : U) {
        const double q = C.contains(x) ? qc : qp;
        if (std::bernoulli_distribution(q)(rng)) pts.push_back(x);
      }
    } else if (mode == 1) {
      // tilted half-space through U, mostly covering C
      std::vector<double> w(static_cast<std::size_t>(d));
      for (int a = 0; a < d; ++a) w[static_cast<std::size_t>(a)] = std::normal_distribution<double>(0.0, 0.3)(rng);
      w[static_cast<std::size_t>(axis)] = static_cast<double>(dir);
      const double t = std::uniform_real_distribution<double>(-0.2, 0.8)(rng) * static_cast<double>(side);
      for (const Site& x : U) {
        double v = 0;
        for (int a = 0; a < d; ++a) v += w[static_cast<std::size_t>(a)] * (x[a] - (side - 1) / 2.0);
        if (v < t) pts.push_back(x);
      }
    } else {
      const auto size = static_cast<std::size_t>(
          std::uniform_real_distribution<double>(0.5, 1.3)(rng) * static_cast<double>(side) * static_cast<double>(std::pow(side, d - 1)));
      Site t = Site::origin(d);
      for (int a = 0; a < d; ++a) t[a] = static_cast<int>(side / 2);
      for (const Site& x : translate(random_eden(d, std::max<std::size_t>(size, 1), rng), t)) pts.push_back(x);
    }
    const Region A(d, std::move(pts));
    c.add(s, "d=" + std::to_string(d) + " l=" + std::to_string(l), check_cube_pair_lemma(A, C, Cp, k.b));
  });
}

// ---------------------------------------------------------------- Peierls

Campaign peierls_campaign(const Region& lambda, const Params& p) {
  const ConstantTable k = compute_constants(p);
  const std::size_t n = lambda.size();
  if (n > kExactCap) throw std::invalid_argument("enumeration exceeds the exact cap");
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t chunks = std::min<std::uint64_t>(total, 64);
  std::vector<Campaign> parts(chunks);
  std::vector<double> min_ratio(chunks, INFINITY);
  std::vector<std::size_t> pairs(chunks, 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(chunks); ++ci) {
    const auto cu = static_cast<std::size_t>(ci);
    Configuration sigma = Configuration::uniform(lambda, +1, +1);
    for (std::uint64_t m = total * cu / chunks; m < total * (cu + 1) / chunks; ++m) {
      for (std::size_t b = 0; b < n; ++b) sigma.spins[b] = (m >> b & 1u) ? -1 : +1;
      const ContourFamily fam = contours_of(sigma, p);
      for (std::size_t g = 0; g < fam.size(); ++g) {
        if (!fam.external[g]) continue;
        const PeierlsGap gap = peierls_gap(sigma, fam.contours[g], p, k);
        ++pairs[cu];
        min_ratio[cu] = std::min(min_ratio[cu], gap.ratio);
        const CheckReport pos = strict_positive("peierls_positive", gap.delta_h);
        const CheckReport bnd = make_check("peierls_bound", gap.rhs, gap.delta_h, k.kappa_defined && k.feasible);
        // exhaustive: keep the summary, store only violations
        parts[cu].summary.add(pos);
        parts[cu].summary.add(bnd);
        if (pos.violated()) parts[cu].records.push_back({m, "sigma_mask", pos, true});
        if (bnd.violated()) parts[cu].records.push_back({m, "sigma_mask", bnd, true});
      }
    }
  }
  Campaign out;
  out.name = "peierls";
  double mr = INFINITY;
  std::size_t np = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    out.absorb(parts[c]);
    mr = std::min(mr, min_ratio[c]);
    np += pairs[c];
  }
  out.note("pairs", std::to_string(np));
  out.note("min_ratio", fmt(mr));
  out.note("c2", fmt(k.c2));
  out.note("bound_asserted", k.kappa_defined && k.feasible ? "1" : "0");
  return out;
}

// ---------------------------------------------------------------- entropy

Campaign entropy_campaign(const Region& lambda, const Params& p, int max_level, const std::string& tag) {
  const ConstantTable k = compute_constants(p);
  const C0Enumeration e = enumerate_C0_all(lambda, p);
  Campaign c;
  c.name = "entropy";
  std::map<std::size_t, std::vector<Contour>> by_size;
  for (const Contour& g : e.contours) by_size[g.size()].push_back(g);
  for (const auto& [n, gs] : by_size) {
    c.add(n, tag, check_C0_count(gs.size(), n, k));
    c.note(tag + "_C0_growth_n=" + std::to_string(n), fmt(std::log(static_cast<double>(gs.size())) / static_cast<double>(n)));
    for (int l = 0; l <= max_level; ++l) {
      const CoveringCount cc = check_coverings_of_C0(gs, n, l, p, k);
      c.add(n, tag + " l=" + std::to_string(l), cc.check);
      if (l >= 1) c.add(n, tag + " l=" + std::to_string(l), count_Bell_images(gs, n, l, p, k).check);
    }
  }
  for (std::size_t i = 0; i < e.contours.size(); ++i) {
    const Contour& g = e.contours[i];
    const Partition P = gamma_r_partition(g.support, p);
    const int step = P.parts.size() == 1 ? P.step_of_part[0] : 1;
    for (int l = 0; l <= max_level; ++l) {
      c.add(i, tag, check_volume_bound(g, l, p, k));
      c.add(i, tag, check_covering_bound(g, l, step, p, k));
    }
  }
  c.note(tag + "_contours", std::to_string(e.contours.size()));
  return c;
}

Campaign family_campaign(const Params& p, int level, std::int64_t v_max) {
  Campaign c;
  c.name = "family";
  for (std::int64_t V = 1; V <= v_max; ++V) {
    const FamilyCount f = check_family_bound(level, V, p);
    c.add(static_cast<std::uint64_t>(V), "l=" + std::to_string(level), f.check);
    c.note("family_count_l=" + std::to_string(level) + "_V=" + std::to_string(V), std::to_string(f.count));
  }
  return c;
}

Campaign graph_cover_campaign(std::size_t instances, std::size_t max_vertices, std::uint64_t seed) {
  return run_instances("graph_cover", instances, [&](std::size_t i, Campaign& c) {
    const std::uint64_t s = derive_seed(seed, i);
    std::mt19937_64 rng(s);
    const auto n = std::uniform_int_distribution<std::size_t>(1, max_vertices)(rng);
    const auto kk = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const Graph g = random_connected_graph(n, std::uniform_real_distribution<double>(0.0, 0.2)(rng), rng);
    const auto groups = cover_graph_by_subgraphs(g, kk);
    std::size_t too_big = 0, disconnected = 0;
    std::vector<char> covered(n, 0);
    for (const auto& grp : groups) {
      too_big += grp.size() > 2 * kk;
      disconnected += !g.connected(grp);
      for (auto v : grp) covered[v] = 1;
    }
    const double missing = static_cast<double>(std::count(covered.begin(), covered.end(), 0));
    c.add(s, "graph", make_check("cover_count", static_cast<double>(groups.size()),
                                 std::ceil(static_cast<double>(n) / static_cast<double>(kk))));
    c.add(s, "graph", count_check("cover_size", static_cast<double>(too_big)));
    c.add(s, "graph", count_check("cover_connected", static_cast<double>(disconnected)));
    c.add(s, "graph", count_check("cover_union", missing));
  });
}

Campaign subordination_campaign() {
  Campaign c;
  c.name = "subordination";
  for (int d = 1; d <= 3; ++d)
    for (int gap = 0; gap * d <= 8; ++gap)
      for (int count = 1; count <= 2; ++count) {
        const int m = gap + 1, n = 1;
        std::vector<Cube> coarse_cubes{Cube{m, Site::origin(d)}};
        if (count == 2) coarse_cubes.push_back(Cube{m, Site::origin(d).shifted(0, 2)});
        const CubeCollection coarse = make_collection(d, m, coarse_cubes);
        // candidate n-cubes: bounding box of the coarse cubes plus one n-cube margin
        const Region span = coarse.covered();
        Site lo = span.lo(), hi = span.hi();
        const int side = 1 << n;
        for (int a = 0; a < d; ++a) {
          lo[a] = lo[a] / side - 1;
          hi[a] = hi[a] / side + 1;
        }
        std::vector<Cube> inside;
        std::size_t candidates = 0;
        for (const Site& anchor : Region::box(lo, hi)) {
          ++candidates;
          const Cube q{n, anchor};
          if (is_subordinated(make_collection(d, n, {q}), coarse)) inside.push_back(q);
        }
        for (std::int64_t V = 0; V <= 5; ++V) {
          const SubordinatedCount sc = count_subordinated(coarse, n, V);
          // Pascal-triangle count over the individually subordinated cubes
          std::vector<BigInt> row(static_cast<std::size_t>(V) + 1, 0);
          row[0] = 1;
          for (std::size_t t = 0; t < inside.size(); ++t)
            for (std::size_t j = row.size() - 1; j >= 1; --j) row[j] += row[j - 1];
          const std::string tag = "d=" + std::to_string(d) + " gap=" + std::to_string(gap) +
                                  " cubes=" + std::to_string(count) + " V=" + std::to_string(V);
          c.add(0, tag, count_check("subordinated_exact", sc.exact == row.back() ? 0.0 : 1.0));
          c.add(0, tag, make_check("subordinated_bound", sc.log_exact, sc.log_bound + 1e-9));
          // explicit subsets of every candidate when small enough
          if (static_cast<double>(binomial(candidates, static_cast<std::uint64_t>(V)).convert_to<double>()) <= 2e5) {
            std::vector<Cube> all;
            for (const Site& anchor : Region::box(lo, hi)) all.push_back(Cube{n, anchor});
            std::uint64_t hits = 0;
            std::vector<std::size_t> idx;
            std::function<void(std::size_t)> rec = [&](std::size_t from) {
              if (idx.size() == static_cast<std::size_t>(V)) {
                std::vector<Cube> pick;
                for (auto t : idx) pick.push_back(all[t]);
                hits += is_subordinated(make_collection(d, n, pick), coarse);
                return;
              }
              for (std::size_t t = from; t < all.size(); ++t) {
                idx.push_back(t);
                rec(t + 1);
                idx.pop_back();
              }
            };
            rec(0);
            c.add(0, tag, count_check("subordinated_enumerated", sc.exact == hits ? 0.0 : 1.0));
          }
        }
      }
  return c;
}

// ---------------------------------------------------------------- concentration

Campaign concentration_campaign(const Params& p, std::size_t samples, std::uint64_t seed) {
  Campaign c;
  c.name = "concentration";
  const Region box = Region::box(Site{-1, -1}, Site{0, 0});
  const Region A(2, {Site{-1, -1}, Site{0, -1}});
  const Region Ap(2, {Site{0, -1}, Site{0, 0}});
  const FieldSample h0 = sample_field(box, FieldDistribution::Gaussian, seed);
  c.add(seed, "empty", make_check("delta_empty", std::abs(delta_A(Region(2), h0, p)), 0.0));
  for (auto dist : {FieldDistribution::Gaussian, FieldDistribution::Bernoulli}) {
    const std::string tag = dist == FieldDistribution::Gaussian ? "gaussian" : "bernoulli";
    const ConcentrationReport r = verify_concentration(A, Ap, box, p, dist, samples, seed);
    for (const TailPoint& t : r.grid) {
      c.add(seed, tag + " lambda=" + fmt(t.lambda), make_check("tail_A", t.tail_A, t.bound_A + t.slack_A));
      c.add(seed, tag + " lambda=" + fmt(t.lambda), make_check("tail_diff", t.tail_diff, t.bound_diff + t.slack_diff));
    }
    c.add(seed, tag, make_check("antisymmetry", r.antisymmetry_error, 1e-10));
    c.note(tag + "_max_abs_delta", fmt(r.max_abs_delta));
  }
  return c;
}

}  // namespace lrfim
