#include "lpplab/bounds.hpp"
#include "lpplab/experiment.hpp"
#include "lpplab/mixing.hpp"
#include "lpplab/stats.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace lpp;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << text;
}

int cmd_simulate(const RunConfig& cfg) {
  const auto values = simulate_lpp(cfg);
  if (!cfg.output.empty()) write_sample_csv(cfg.output, values, cfg.provenance());
  std::cout << (cfg.format == "json" ? summary_json(cfg, values)
                                     : summary_csv(cfg, values))
            << "\n";
  return 0;
}

SubsetSystem load_system(const std::string& path, const MarginalPtr& f) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open system file: " + path);
  SubsetSystem sys;
  for (std::string line; std::getline(is, line);) {
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("malformed system line: " + line);
    std::istringstream row(line.substr(colon + 1));
    std::vector<int> subset;
    for (int e; row >> e;) {
      subset.push_back(e);
      sys.n = std::max(sys.n, e);
    }
    sys.subsets.push_back(std::move(subset));
  }
  sys.marginals.assign(static_cast<std::size_t>(sys.n), f);
  sys.validate();
  return sys;
}

int cmd_bound(const std::string& marginal, const std::string& lattice,
              const std::string& system_file, int grid, double xmin, double xmax,
              const std::string& out) {
  const auto f = parse_marginal(marginal);
  std::ostringstream os;
  if (!system_file.empty()) {
    const SubsetSystem sys = load_system(system_file, f);
    if (std::isnan(xmin) || std::isnan(xmax)) {
      double smin = 0.0, top = 0.0;
      for (const auto& m : sys.marginals) {
        smin += m->support_min();
        top += m->upper_quantile(1e-3);
      }
      if (std::isnan(xmin)) xmin = smin;
      if (std::isnan(xmax)) xmax = top;
    }
    std::vector<double> xs;
    for (int k = 0; k < grid; ++k)
      xs.push_back(xmin + (xmax - xmin) * k / std::max(1, grid - 1));
    const BoundCurve curve = generic_bound(sys, xs);
    os << "# x0=" << fmt(curve.x0) << " bound_x0=" << fmt(curve.bound_x0) << "\n";
    os << "x,bound,slope,linear_extension,converged\n";
    for (const auto& p : curve.points)
      os << fmt(p.x) << "," << fmt(p.bound) << "," << fmt(p.slope) << ","
         << p.linear_extension << "," << p.converged << "\n";
  } else {
    const LatticeSpec spec = parse_lattice(lattice);
    const auto law = worst_case_law(spec, f);
    if (std::isnan(xmin)) xmin = law->support_min();
    if (std::isnan(xmax)) xmax = law->upper_quantile(1e-3);
    os << "x,premium,survival\n";
    for (int k = 0; k < grid; ++k) {
      const double x = xmin + (xmax - xmin) * k / std::max(1, grid - 1);
      os << fmt(x) << "," << fmt(law->premium(x)) << "," << fmt(law->survival(x))
         << "\n";
    }
  }
  emit(os.str(), out);
  return 0;
}

int cmd_shape(int points, const std::string& out) {
  std::ostringstream os;
  os << "gamma,convex_bound,rost\n";
  for (int k = 1; k <= points; ++k) {
    const double g = static_cast<double>(k) / (points + 1);
    os << fmt(g) << "," << fmt(shape_convex_bound(g)) << "," << fmt(shape_rost(g))
       << "\n";
  }
  emit(os.str(), out);
  return 0;
}

int cmd_dominance(const std::string& a_path, const std::string& b_path,
                  const std::string& marginal, const std::string& lattice,
                  double slack, const std::string& out) {
  const EmpiricalSample a(read_sample_csv(a_path));
  std::ostringstream os;
  VerdictReport convex;
  if (!b_path.empty()) {
    const EmpiricalSample b(read_sample_csv(b_path));
    const auto grid = pooled_quantile_grid(a, b);
    convex = convex_dominates(empirical_premium(a, grid), empirical_premium(b, grid),
                              slack);
    const auto stoch = stochastic_dominates(a, b, slack);
    const double d = ks_distance_two_sample(a, b);
    os << "# stochastic=" << verdict_name(stoch.verdict)
       << " convex=" << verdict_name(convex.verdict) << " ks=" << fmt(d)
       << " ks_critical=" << fmt(ks_critical_two_sample(a.count(), b.count())) << "\n";
  } else {
    const auto law = worst_case_law(parse_lattice(lattice), parse_marginal(marginal));
    const EmpiricalSample* one[1] = {&a};
    const auto grid =
        pooled_quantile_grid(std::span<const EmpiricalSample* const>(one, 1));
    convex = convex_dominates(empirical_premium(a, grid), analytic_premium(*law, grid),
                              slack);
    const double d = ks_distance(a, *law);
    os << "# convex=" << verdict_name(convex.verdict) << " ks=" << fmt(d)
       << " ks_critical=" << fmt(ks_critical(a.count())) << "\n";
  }
  os << "x,H_a,se_a,H_b,se_b,margin_in_se\n";
  for (const auto& r : convex.rows)
    os << fmt(r.x) << "," << fmt(r.h_a) << "," << fmt(r.se_a) << "," << fmt(r.h_b)
       << "," << fmt(r.se_b) << "," << fmt(r.margin_in_se) << "\n";
  emit(os.str(), out);
  return 0;
}

int cmd_mix(const std::string& marginal, int n, std::vector<double> bs, long long reps,
            std::uint64_t seed, int atoms, const std::string& out) {
  const auto f = parse_marginal(marginal);
  std::ostringstream os;
  os << "N,b,analytic_V,empirical_V,stderr\n";
  auto empirical = [&](auto&& draw_sum, int dim) {
    std::vector<double> sums(static_cast<std::size_t>(reps));
    for (long long r = 0; r < reps; ++r) {
      RngStream rng(seed, static_cast<std::uint64_t>(r));
      sums[static_cast<std::size_t>(r)] = draw_sum(rng, dim);
    }
    return moment_summary(EmpiricalSample(std::move(sums)));
  };
  if (f->family() == Family::Exponential && !bs.empty()) {
    for (const double b : bs) {
      const BlockSchemeExponential scheme(b, atoms);
      const double analytic =
          variance_law(*f, b, scheme.n()) + scheme.residual_variance();
      const auto m = empirical(
          [&](RngStream& rng, int) {
            double s = 0.0;
            for (const double w : scheme.sample(rng)) s += w;
            return s;
          },
          scheme.n());
      os << scheme.n() << "," << fmt(b) << "," << fmt(analytic) << ","
         << fmt(m.variance) << "," << fmt(m.se_variance) << "\n";
    }
  } else if (bs.empty()) {
    MixCopula copula{f->family() == Family::UniformBeta && n % 2 == 0
                         ? CopulaKind::AntitheticPairs
                         : CopulaKind::QuantileBalancer,
                     n, 0.0, atoms};
    const auto m = empirical(
        [&](RngStream& rng, int dim) {
          const auto u = sample_copula(copula, rng);
          double s = 0.0;
          for (int i = 0; i < dim; ++i) s += f->upper_quantile(
              std::min(std::max(u[static_cast<std::size_t>(i)], 1e-15), 1.0 - 1e-15));
          return s;
        },
        n);
    os << n << ",0," << fmt(0.0) << "," << fmt(m.variance) << ","
       << fmt(m.se_variance) << "\n";
  } else {
    // non-exponential families over a b-grid: analytic law only
    for (const double b : bs) {
      const double below = (f->mean() - f->survival(b) * (b + f->mean_residual(b))) /
                           (1.0 - f->survival(b));
      const int dim = std::max(2, static_cast<int>(std::lround(b / below)));
      os << dim << "," << fmt(b) << "," << fmt(variance_law(*f, b, dim)) << ",nan,nan\n";
    }
  }
  emit(os.str(), out);
  return 0;
}

int cmd_selftest() {
  RunConfig cfg;
  cfg.marginal = "exp:theta=1";
  cfg.lattice = "line:10";
  cfg.coupling = "flat:polya";
  cfg.reps = 100000;
  cfg.seed = 7;
  const auto dir = std::filesystem::temp_directory_path();
  const auto p1 = (dir / "lpplab_selftest_t1.csv").string();
  const auto p8 = (dir / "lpplab_selftest_t8.csv").string();
  cfg.threads = 1;
  write_sample_csv(p1, simulate_lpp(cfg), cfg.provenance());
  cfg.threads = 8;
  const auto values = simulate_lpp(cfg);
  write_sample_csv(p8, values, cfg.provenance());
  std::ifstream f1(p1, std::ios::binary), f8(p8, std::ios::binary);
  std::stringstream b1, b8;
  b1 << f1.rdbuf();
  b8 << f8.rdbuf();
  const bool identical = b1.str() == b8.str() && !b1.str().empty();
  std::cout << "determinism across 1 and 8 threads: " << (identical ? "pass" : "FAIL")
            << "\n";
  const auto m = moment_summary(EmpiricalSample(values));
  const double target = 10.0 + std::lgamma(11.0);
  const bool mean_ok = std::abs(m.mean - target) < 4.0 * m.se_mean;
  const bool var_ok = std::abs(m.variance - 100.0) < 4.0 * m.se_variance;
  std::cout << "mean " << fmt(m.mean) << " vs " << fmt(target) << ": "
            << (mean_ok ? "pass" : "FAIL") << "\n";
  std::cout << "variance " << fmt(m.variance) << " vs 100: "
            << (var_ok ? "pass" : "FAIL") << "\n";
  return identical && mean_ok && var_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LPP coupling laboratory"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto* sim = app.add_subcommand("simulate", "draw replicated LPP samples");
  sim->add_option("--marginal", cfg.marginal);
  sim->add_option("--lattice", cfg.lattice);
  sim->add_option("--coupling", cfg.coupling);
  sim->add_option("--reps", cfg.reps)->check(CLI::PositiveNumber);
  sim->add_option("--seed", cfg.seed);
  sim->add_option("--threads", cfg.threads);
  sim->add_option("--out", cfg.output, "sample CSV path");
  sim->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));

  std::string marginal = "exp:theta=1", lattice = "line:8", system_file, out;
  int grid = 99;
  double xmin = NAN, xmax = NAN;
  auto* bnd = app.add_subcommand("bound", "analytic worst-case or generic bound curve");
  bnd->add_option("--marginal", marginal);
  bnd->add_option("--lattice", lattice);
  bnd->add_option("--system", system_file, "subset-system file: lines `k: n1 n2 ...`");
  bnd->add_option("--grid", grid);
  bnd->add_option("--xmin", xmin);
  bnd->add_option("--xmax", xmax);
  bnd->add_option("--out", out);

  int points = 99;
  auto* shp = app.add_subcommand("shape", "shape functions on a gamma grid");
  shp->add_option("--points", points);
  shp->add_option("--out", out);

  std::string a_path, b_path;
  double slack = 4.0;
  auto* dom = app.add_subcommand("dominance", "order verdicts for two samples");
  dom->add_option("--a", a_path)->required();
  dom->add_option("--b", b_path, "second sample; omit to compare against the law");
  dom->add_option("--marginal", marginal);
  dom->add_option("--lattice", lattice);
  dom->add_option("--slack", slack);
  dom->add_option("--out", out);

  int n = 4, atoms = 999;
  std::vector<double> bs;
  long long reps = 20000;
  std::uint64_t seed = 1;
  auto* mix = app.add_subcommand("mix", "analytic vs empirical mixing variance");
  mix->add_option("--marginal", marginal);
  mix->add_option("--n", n);
  mix->add_option("--b", bs, "block thresholds (repeatable)");
  mix->add_option("--reps", reps);
  mix->add_option("--seed", seed);
  mix->add_option("--atoms", atoms);
  mix->add_option("--out", out);

  auto* self = app.add_subcommand("selftest", "determinism and closed-form checks");

  CLI11_PARSE(app, argc, argv);
  try {
    if (sim->parsed()) return cmd_simulate(cfg);
    if (bnd->parsed()) return cmd_bound(marginal, lattice, system_file, grid, xmin, xmax, out);
    if (shp->parsed()) return cmd_shape(points, out);
    if (dom->parsed()) return cmd_dominance(a_path, b_path, marginal, lattice, slack, out);
    if (mix->parsed()) return cmd_mix(marginal, n, bs, reps, seed, atoms, out);
    if (self->parsed()) return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
