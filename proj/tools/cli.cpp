#include "cli.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lrfim/campaigns.hpp"
#include "lrfim/coarse.hpp"
#include "lrfim/constants.hpp"
#include "lrfim/contour.hpp"
#include "lrfim/disorder.hpp"
#include "lrfim/model.hpp"
#include "lrfim/numerics.hpp"
#include "lrfim/params.hpp"

namespace lrfim::cli {

namespace {

struct Options {
  ParamSpec spec;
  std::string out_dir;
  int jobs = 0;
  bool json = false;
  bool require_feasible = false;
  std::optional<std::size_t> instances, samples, sweeps, burn_in, k_max, n_max, side;
  int level = 3;
  std::string eps_grid, beta_grid;
  std::string field = "ones";
  std::string variant = "connected";
  std::string contour, contour_file, spins;
  bool unconditioned = false;
  std::string suite, action;
};

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad grid value: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty grid");
  return out;
}

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string num(double v) { return CsvWriter::num(v); }
std::string num(std::size_t v) { return CsvWriter::num(static_cast<std::uint64_t>(v)); }

class Context {
 public:
  Context(const Options& o, Params p, std::string command, std::ostream& out)
      : o_(o), p_(std::move(p)), command_(std::move(command)), out_(out) {
    dir_ = o.out_dir;
    if (dir_.empty()) {
      const char* env = std::getenv("LRFIM_OUT");
      dir_ = env && *env ? env : ".";
    }
  }

  const Params& params() const { return p_; }

  void stamp(CsvWriter& w) const {
    w.meta("tool_version", kToolVersion);
    w.meta("schema_version", std::to_string(kSchemaVersion));
    w.meta("command", command_);
    w.meta("params", p_.describe());
    w.meta("constants_hash", hex(compute_constants(p_).hash()));
    w.meta("seed", std::to_string(p_.seed));
  }

  void write(const std::string& name, CsvWriter& w) const {
    stamp(w);
    std::filesystem::create_directories(dir_);
    const auto path = std::filesystem::path(dir_) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    w.write(f);
    out_ << "wrote " << path.string() << '\n';
  }

 private:
  const Options& o_;
  Params p_;
  std::string command_;
  std::string dir_;
  std::ostream& out_;
};

Region box_for(int d, std::size_t side) { return Region::centered_box(d, static_cast<int>(side)); }

// ---------------------------------------------------------------- constants

int cmd_constants(const Options& o, const Context& ctx, std::ostream& out, std::ostream& err) {
  const ConstantTable k = compute_constants(ctx.params());
  const auto rows = k.rows();
  if (o.json) {
    nlohmann::ordered_json j;
    j["tool_version"] = kToolVersion;
    j["params"] = ctx.params().describe();
    j["feasible"] = k.feasible;
    j["kappa_defined"] = k.kappa_defined;
    j["constants_hash"] = hex(k.hash());
    auto& arr = j["constants"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json e;
      e["name"] = r.name;
      if (std::isfinite(r.value)) e["value"] = r.value;
      else e["value"] = nullptr;
      e["formula"] = r.formula;
      arr.push_back(e);
    }
    out << j.dump(2) << '\n';
  } else {
    for (const auto& r : rows) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%-16s %-24.12g ", r.name.c_str(), r.value);
      out << buf << r.formula << '\n';
    }
    out << "feasible " << (k.feasible ? "yes" : "no") << '\n';
  }
  CsvWriter w({"name", "value", "formula"});
  for (const auto& r : rows) w.row({r.name, num(r.value), r.formula});
  ctx.write("constants.csv", w);
  if (!k.feasible) {
    err << "warning: M is not above the feasibility threshold\n";
    if (o.require_feasible) return kInfeasible;
  }
  return kOk;
}

// ---------------------------------------------------------------- verify

void report(const Campaign& c, std::ostream& out) {
  out << c.name << ": pass=" << c.summary.pass << " violations=" << c.summary.violations
      << " hypothesis_not_met=" << c.summary.not_met << '\n';
  for (const auto& [k, v] : c.data) out << "  " << k << " = " << v << '\n';
}

int cmd_verify(const Options& o, const Context& ctx, std::ostream& out, std::ostream& err) {
  const Params& p = ctx.params();
  const std::uint64_t seed = p.seed;
  Campaign all;
  all.name = o.suite;
  std::vector<Campaign> parts;
  const int d = p.d;
  if (o.suite == "partitions") {
    const std::size_t n = o.instances.value_or(500);
    parts.push_back(partitions_campaign(d, p, n, 60, derive_seed(seed, 1), "user"));
    parts.push_back(partitions_campaign(d, small_override_params(d, p.alpha), n, 60, derive_seed(seed, 2), "small"));
    if (d == 2) parts.push_back(finest_campaign(p, std::min<std::size_t>(n, 100), 8, derive_seed(seed, 3), "user"));
  } else if (o.suite == "geometry") {
    const std::size_t n = o.instances.value_or(10000);
    for (int dd : {2, 3}) parts.push_back(projection_campaign(dd, 7.0 / 8.0, n, derive_seed(seed, 10 + dd)));
    for (int dd : {2, 3})
      parts.push_back(cube_pair_campaign(dd, {1, 2}, small_override_params(dd, p.alpha), n, derive_seed(seed, 20 + dd)));
    if (d >= 2) {
      const Params q = small_override_params(d, p.alpha);
      const auto c0 = enumerate_C0_all(box_for(d, o.side.value_or(d == 2 ? 5 : 3)), q);
      parts.push_back(prop1_campaign(c0.contours, q, "small"));
      parts.push_back(approximation_campaign(c0.contours, q, 3, "small"));
      const Region lam = box_for(d, o.side.value_or(d == 2 ? 4 : 2));
      if (lam.size() <= kExactCap && single_part_regime(lam, p)) parts.push_back(coarse_identity_campaign(lam, p, "user"));
    }
  } else if (o.suite == "peierls") {
    const ConstantTable k = compute_constants(p);
    if (!(k.kappa_defined && k.feasible))
      err << "warning: c2 bound not asserted (M infeasible or kappa undefined); ratios are reported\n";
    parts.push_back(peierls_campaign(box_for(d, o.side.value_or(d == 2 ? 4 : 2)), p));
  } else if (o.suite == "entropy") {
    const Region lam = box_for(d, o.side.value_or(d == 2 ? 5 : 3));
    parts.push_back(entropy_campaign(lam, p, o.level, "user"));
    parts.push_back(entropy_campaign(lam, small_override_params(d, p.alpha), o.level, "small"));
    parts.push_back(family_campaign(small_override_params(2, p.alpha), 0, 4));
    parts.push_back(graph_cover_campaign(o.instances.value_or(1000), 40, derive_seed(seed, 30)));
    parts.push_back(subordination_campaign());
  } else if (o.suite == "concentration") {
    ParamSpec s2 = o.spec;
    s2.d = 2;
    parts.push_back(concentration_campaign(resolve(s2), o.samples.value_or(10000), seed));
  } else {
    err << "unknown suite '" << o.suite << "' (partitions, geometry, peierls, entropy, concentration)\n";
    return kUnknown;
  }
  for (auto& c : parts) {
    report(c, out);
    all.absorb(c);
  }
  CsvWriter w = campaign_csv(all);
  for (const auto& [k, v] : all.data) w.meta(k, v);
  ctx.write("verify_" + o.suite + ".csv", w);
  out << "summary: pass=" << all.summary.pass << " violations=" << all.summary.violations
      << " hypothesis_not_met=" << all.summary.not_met << '\n';
  return verify_exit_code(all);
}

// ---------------------------------------------------------------- phase

int cmd_phase(const Options& o, const Context& ctx, std::ostream& out) {
  const Params& p = ctx.params();
  const auto betas = parse_grid(o.beta_grid.empty() ? "0,0.5,1,2" : o.beta_grid);
  const auto epss = parse_grid(o.eps_grid.empty() ? "0,0.5,1" : o.eps_grid);
  const std::size_t reps = o.samples.value_or(20);
  const std::size_t sweeps = o.sweeps.value_or(2000);
  const std::size_t burn = o.burn_in.value_or(sweeps / 10);
  const Region lam = box_for(p.d, o.side.value_or(4));
  if (!lam.contains(Site::origin(p.d))) throw std::invalid_argument("box must contain the origin");

  CsvWriter w({"beta", "eps", "realizations", "mean_p_minus", "std_p_minus", "se_mean", "mean_chain_se",
               "acceptance"});
  std::size_t gi = 0;
  for (double beta : betas)
    for (double eps : epss) {
      Params q = p;
      q.beta = beta;
      q.eps = eps;
      std::vector<double> val(reps), se(reps), acc(reps);
#pragma omp parallel for schedule(dynamic, 1)
      for (std::int64_t r = 0; r < static_cast<std::int64_t>(reps); ++r) {
        const auto u = static_cast<std::size_t>(r);
        const FieldSample h = sample_field(lam, FieldDistribution::Gaussian, derive_seed(p.seed, u));
        MetropolisOptions mo;
        mo.sweeps = sweeps;
        mo.burn_in = burn;
        mo.batches = std::min<std::size_t>(20, sweeps);
        mo.seed = derive_seed(derive_seed(p.seed, 1000 + gi), u);
        mo.conditioned = !o.unconditioned;
        mo.tracked = {Site::origin(p.d)};
        const MetropolisResult res = metropolis_run(lam, h, q, mo);
        val[u] = res.p_minus[0].mean;
        se[u] = res.p_minus[0].se;
        acc[u] = res.acceptance;
      }
      double m = 0, s2 = 0, cse = 0, ac = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        m += val[r];
        cse += se[r];
        ac += acc[r];
      }
      const double n = static_cast<double>(reps);
      m /= n;
      for (double v : val) s2 += (v - m) * (v - m);
      const double sd = reps > 1 ? std::sqrt(s2 / (n - 1)) : 0.0;
      w.row({num(beta), num(eps), num(reps), num(m), num(sd), num(sd / std::sqrt(n)), num(cse / n), num(ac / n)});
      out << "beta=" << beta << " eps=" << eps << " mean P(sigma_0=-1)=" << m << " +- " << sd / std::sqrt(n) << '\n';
      ++gi;
    }
  w.meta("conditioned", o.unconditioned ? "0" : "1");
  w.meta("box_side", std::to_string(o.side.value_or(4)));
  w.meta("sweeps", std::to_string(sweeps));
  ctx.write("phase.csv", w);
  return kOk;
}

// ---------------------------------------------------------------- animal

FieldSample make_field(const Region& r, const std::string& kind, std::uint64_t seed) {
  if (kind == "ones") return custom_field(r, std::vector<double>(r.size(), 1.0));
  if (kind == "gaussian") return sample_field(r, FieldDistribution::Gaussian, seed);
  if (kind == "bernoulli") return sample_field(r, FieldDistribution::Bernoulli, seed);
  throw std::invalid_argument("unknown field '" + kind + "' (ones, gaussian, bernoulli)");
}

int cmd_animal(const Options& o, const Context& ctx, std::ostream& out) {
  const Params& p = ctx.params();
  const std::size_t k = o.k_max.value_or(6);
  AnimalVariant variant;
  Region lam;
  if (o.variant == "connected") {
    variant = AnimalVariant::Connected;
    Site lo = Site::origin(p.d), hi = Site::origin(p.d);
    for (int i = 0; i < p.d; ++i) {
      lo[i] = -static_cast<int>(k);
      hi[i] = static_cast<int>(k);
    }
    lam = Region::box(lo, hi);
  } else if (o.variant == "interiors") {
    variant = AnimalVariant::ContourInteriors;
    lam = box_for(p.d, o.side.value_or(5));
  } else {
    throw std::invalid_argument("unknown variant '" + o.variant + "' (connected, interiors)");
  }
  const FieldSample h = make_field(lam, o.field, p.seed);
  const AnimalResult r = greedy_animal(h, variant == AnimalVariant::Connected ? k : 0, variant, p);
  CsvWriter w({"variant", "k_max", "field", "score", "numerator", "normalization", "size", "candidates", "region"});
  w.row({o.variant, num(k), o.field, num(r.score), num(r.numerator), num(r.normalization), num(r.best_region.size()),
         num(r.candidates), to_string(r.best_region)});
  out << "score=" << num(r.score) << " region=" << to_string(r.best_region) << '\n';
  ctx.write("animal.csv", w);
  return kOk;
}

// ---------------------------------------------------------------- badevent

int cmd_badevent(const Options& o, const Context& ctx, std::ostream& out) {
  const Params& p = ctx.params();
  const auto eps = parse_grid(o.eps_grid.empty() ? "0.003,0.01,0.03,0.1" : o.eps_grid);
  // a full 4x4 box only has contours with empty I-, and 5x5 is past the exact cap
  const Region lam = o.side ? box_for(p.d, *o.side) : cornerless_box(p.d, 5);
  const BadEventSweep s =
      bad_event_sweep(lam, p, eps, o.n_max.value_or(20), o.samples.value_or(100), p.seed, FieldDistribution::Gaussian);
  CsvWriter w({"eps", "probability", "se", "samples", "contours"});
  for (const auto& pt : s.points) {
    w.row({num(pt.eps), num(pt.probability), num(pt.se), num(pt.samples), num(pt.contours)});
    out << "eps=" << pt.eps << " P=" << pt.probability << " +- " << pt.se << '\n';
  }
  w.meta("region", o.side ? "box side " + std::to_string(*o.side) : "5-box without corners");
  w.meta("fit_slope_logP_vs_inv_eps2", num(s.slope));
  w.meta("fit_points", std::to_string(s.fitted));
  out << "slope of log P against 1/eps^2: " << s.slope << " (" << s.fitted << " points)\n";
  ctx.write("badevent.csv", w);
  return kOk;
}

// ---------------------------------------------------------------- coarsen

std::string read_contour_line(const Options& o) {
  if (!o.contour.empty()) return o.contour;
  if (o.contour_file.empty()) throw std::invalid_argument("coarsen needs --contour or --contour-file");
  std::ifstream f(o.contour_file);
  if (!f) throw std::invalid_argument("cannot read " + o.contour_file);
  std::string line;
  while (std::getline(f, line))
    if (!line.empty() && line[0] != '#') return line;
  throw std::invalid_argument("no contour in " + o.contour_file);
}

int cmd_coarsen(const Options& o, const Context& ctx, std::ostream& out) {
  const Params& p = ctx.params();
  const Contour g = parse_contour(read_contour_line(o), p.d);
  CsvWriter w({"level", "cubes", "inner_boundary", "edge_boundary", "B_size", "B_equals_I_minus", "B"});
  for (int l = 0; l <= o.level; ++l) {
    const AdmissibleCover c = admissible_cover(g, l, p);
    w.row({std::to_string(l), num(c.cubes.size()), num(c.inner_boundary.size()), num(c.edge_boundary.size()),
           num(c.B.size()), c.B == g.I_minus ? "1" : "0", to_string(c.B)});
    out << "level " << l << ": |B|=" << c.B.size() << (c.B == g.I_minus ? " (= I-)" : "") << '\n';
  }
  w.meta("I_minus", to_string(g.I_minus));
  ctx.write("coarsen.csv", w);
  return kOk;
}

// ---------------------------------------------------------------- contours

int cmd_contours(const Options& o, const Context& ctx, std::ostream& out, std::ostream& err) {
  const Params& p = ctx.params();
  const Region lam = box_for(p.d, o.side.value_or(5));
  if (o.action == "dump") {
    const C0Enumeration e = enumerate_C0_all(lam, p);
    CsvWriter w({"index", "size", "outer_label", "interior_components", "contour"});
    for (std::size_t i = 0; i < e.contours.size(); ++i) {
      const Contour& g = e.contours[i];
      w.row({num(i), num(g.size()), std::to_string(g.outer_label), num(g.interior_components.size()), serialize(g)});
    }
    w.meta("configurations", std::to_string(e.configurations));
    out << e.contours.size() << " contours in C0 of the side-" << o.side.value_or(5) << " box\n";
    ctx.write("contours_dump.csv", w);
    return kOk;
  }
  if (o.action == "extract") {
    if (o.spins.size() != lam.size()) throw std::invalid_argument("--spins needs one +/- per box site");
    Configuration sigma = Configuration::uniform(lam, +1, +1);
    for (std::size_t i = 0; i < lam.size(); ++i) {
      if (o.spins[i] != '+' && o.spins[i] != '-') throw std::invalid_argument("--spins takes only + and -");
      sigma.spins[i] = o.spins[i] == '+' ? 1 : -1;
    }
    const ContourFamily fam = contours_of(sigma, p);
    CsvWriter w({"index", "external", "size", "contour"});
    for (std::size_t i = 0; i < fam.size(); ++i) {
      w.row({num(i), fam.external[i] ? "1" : "0", num(fam.contours[i].size()), serialize(fam.contours[i])});
      out << serialize(fam.contours[i]) << '\n';
    }
    ctx.write("contours_extract.csv", w);
    return kOk;
  }
  err << "unknown contours action '" << o.action << "' (dump, extract)\n";
  return kUnknown;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Verification lab for the long-range random field Ising model", "lrfim"};
  app.set_config("--config", "", "flat key=value file; command line flags take precedence");
  app.fallthrough();
  app.add_option("--d", o.spec.d, "lattice dimension");
  app.add_option("--alpha", o.spec.alpha, "decay exponent, must exceed d");
  app.add_option("--J", o.spec.J, "coupling strength");
  app.add_option("--beta", o.spec.beta, "inverse temperature");
  app.add_option("--eps", o.spec.eps, "field strength");
  app.add_option("--M", o.spec.M, "multiscale distance constant");
  app.add_option("--a", o.spec.a, "multiscale exponent");
  app.add_option("--delta", o.spec.delta, "volume exponent");
  app.add_option("--r", o.spec.r, "scale step");
  app.add_option("--tol", o.spec.tol, "lattice constant tolerance");
  app.add_option("--seed", o.spec.seed, "master seed");
  app.add_option("--out", o.out_dir, "output directory (default $LRFIM_OUT or .)");
  app.add_option("--jobs", o.jobs, "worker threads (0 = runtime default)");
  app.add_flag("--json", o.json, "machine readable output where supported");
  app.add_flag("--require-feasible", o.require_feasible, "exit 2 when M is below its threshold");
  app.add_option("--instances", o.instances, "fuzz campaign size");
  app.add_option("--samples", o.samples, "field draws or realizations");
  app.add_option("--sweeps", o.sweeps, "Metropolis sweeps per chain");
  app.add_option("--burn-in", o.burn_in, "Metropolis burn-in sweeps");
  app.add_option("--k-max", o.k_max, "largest animal size");
  app.add_option("--n-max", o.n_max, "largest contour size");
  app.add_option("--side", o.side, "box side");
  app.add_option("--level", o.level, "largest coarse-graining level");
  app.add_option("--eps-grid", o.eps_grid, "comma separated eps values");
  app.add_option("--beta-grid", o.beta_grid, "comma separated beta values");
  app.add_option("--field", o.field, "ones, gaussian or bernoulli");
  app.add_option("--variant", o.variant, "connected or interiors");
  app.add_option("--contour", o.contour, "serialized contour");
  app.add_option("--contour-file", o.contour_file, "file whose first line is a serialized contour");
  app.add_option("--spins", o.spins, "+/- string in box site order");
  app.add_flag("--unconditioned", o.unconditioned, "sample the plus state instead of the Theta-conditioned one");

  auto* c_const = app.add_subcommand("constants", "derived constant table");
  auto* c_verify = app.add_subcommand("verify", "run a verification suite");
  c_verify->add_option("suite", o.suite, "partitions, geometry, peierls, entropy or concentration")->required();
  auto* c_phase = app.add_subcommand("phase", "P(sigma_0 = -1) over a (beta, eps) grid");
  auto* c_animal = app.add_subcommand("animal", "greedy lattice animal");
  auto* c_bad = app.add_subcommand("badevent", "bad event probability across eps");
  auto* c_coarsen = app.add_subcommand("coarsen", "admissible covers of a stored contour");
  auto* c_contours = app.add_subcommand("contours", "dump C0 or extract contours of a configuration");
  c_contours->add_option("action", o.action, "dump or extract")->required();
  app.require_subcommand(0, 1);
  app.allow_extras();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }
  if (app.get_subcommands().empty()) {
    if (!app.remaining().empty()) {
      err << "unknown subcommand '" << app.remaining().front() << "'\n";
      return kUnknown;
    }
    err << app.help();
    return kUsage;
  }
  for (auto* sub : app.get_subcommands())
    if (!sub->remaining().empty()) {
      err << "unexpected argument '" << sub->remaining().front() << "'\n";
      return kUsage;
    }
  if (!app.remaining().empty()) {
    err << "unexpected argument '" << app.remaining().front() << "'\n";
    return kUsage;
  }
  if (o.jobs > 0) omp_set_num_threads(o.jobs);

  CLI::App* sub = app.get_subcommands().front();
  // the bad-event scenario is two-dimensional unless asked otherwise
  if (sub == c_bad && app.count("--d") == 0) o.spec.d = 2;

  try {
    const Params p = resolve(o.spec);
    std::string command = sub->get_name();
    if (sub == c_verify) command += " " + o.suite;
    if (sub == c_contours) command += " " + o.action;
    const Context ctx(o, p, command, out);
    if (sub == c_const) return cmd_constants(o, ctx, out, err);
    if (sub == c_verify) return cmd_verify(o, ctx, out, err);
    if (sub == c_phase) return cmd_phase(o, ctx, out);
    if (sub == c_animal) return cmd_animal(o, ctx, out);
    if (sub == c_bad) return cmd_badevent(o, ctx, out);
    if (sub == c_coarsen) return cmd_coarsen(o, ctx, out);
    if (sub == c_contours) return cmd_contours(o, ctx, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace lrfim::cli
