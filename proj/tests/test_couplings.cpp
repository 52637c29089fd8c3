#include <doctest.h>

#include "lpplab/bounds.hpp"
#include "lpplab/couplings.hpp"
#include "lpplab/stats.hpp"

#include <cmath>
#include <map>
#include <numeric>

using namespace lpp;

namespace {

// per-diagonal position distribution of an exactly enumerated walk; the
// probabilities are rationals num/den
std::vector<std::map<int, double>> position_laws(const std::vector<WalkAtom>& atoms,
                                                 int n) {
  std::vector<std::map<int, double>> laws(static_cast<std::size_t>(n));
  for (const auto& a : atoms) {
    const double p = static_cast<double>(a.num) / static_cast<double>(a.den);
    for (int d = 0; d < n; ++d)
      laws[static_cast<std::size_t>(d)][a.path.v[static_cast<std::size_t>(d)].first] += p;
  }
  return laws;
}

std::vector<double> collect_lpp(const CouplingSpec& cs, int reps, std::uint64_t seed) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    out.push_back(lpp::lpp(cs.lattice, sample_coupling(cs, rng).field));
  }
  return out;
}

}  // namespace

TEST_CASE("urn walk sections are exactly uniform") {
  for (int n = 2; n <= 6; ++n) {
    const LatticeSpec spec{GraphKind::Line, n, n};
    const auto atoms = enumerate_flat_walk(WalkKind::Polya, spec);
    double total = 0.0;
    for (const auto& a : atoms)
      total += static_cast<double>(a.num) / static_cast<double>(a.den);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    const auto laws = position_laws(atoms, n);
    for (int d = 1; d <= n; ++d) {
      REQUIRE(static_cast<int>(laws[static_cast<std::size_t>(d - 1)].size()) == d);
      for (const auto& [i, p] : laws[static_cast<std::size_t>(d - 1)])
        CHECK(p == doctest::Approx(1.0 / d).epsilon(1e-12));
    }
  }
}

TEST_CASE("rectangle walk sections are exactly uniform") {
  CHECK_THROWS((void)enumerate_flat_walk(WalkKind::Rectangle,
                                         LatticeSpec{GraphKind::PointToPoint, 6, 2}));
  for (const auto& [n, m] : {std::pair{5, 3}, std::pair{6, 4}, std::pair{7, 4}}) {
    const LatticeSpec spec{GraphKind::PointToPoint, n, m};
    const auto atoms = enumerate_flat_walk(WalkKind::Rectangle, spec);
    double total = 0.0;
    for (const auto& a : atoms)
      total += static_cast<double>(a.num) / static_cast<double>(a.den);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    const auto laws = position_laws(atoms, n);
    for (int d = 1; d <= n; ++d) {
      const int len = spec.diag_len(d);
      REQUIRE(static_cast<int>(laws[static_cast<std::size_t>(d - 1)].size()) == len);
      for (const auto& [i, p] : laws[static_cast<std::size_t>(d - 1)])
        CHECK(p == doctest::Approx(1.0 / len).epsilon(1e-12));
    }
  }
}

TEST_CASE("natural walks are flat too") {
  const LatticeSpec line{GraphKind::Line, 5, 5};
  for (const auto& [i, p] :
       position_laws(enumerate_flat_walk(WalkKind::NaturalComplete, line), 5)[4])
    CHECK(p == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("every site of a flat coupling keeps the prescribed marginal") {
  const auto f = make_exponential();
  const LatticeSpec spec{GraphKind::Line, 6, 6};
  const int reps = 20000;
  std::vector<double> site11, site23, site61;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(41, static_cast<std::uint64_t>(r));
    const auto fs = sample_flat_coupling(WalkKind::Polya, f, spec, rng);
    site11.push_back(fs.field.at(1, 1));
    site23.push_back(fs.field.at(2, 3));
    site61.push_back(fs.field.at(6, 1));
  }
  for (auto* s : {&site11, &site23, &site61})
    CHECK(ks_distance(EmpiricalSample(*s), *f) < ks_critical(reps));
}

TEST_CASE("the walk path of a flat coupling is the geodesic") {
  const auto f = make_uniform();
  for (const auto& [kind, spec] :
       {std::pair{WalkKind::Polya, LatticeSpec{GraphKind::Line, 7, 7}},
        std::pair{WalkKind::Rectangle, LatticeSpec{GraphKind::PointToPoint, 7, 3}}}) {
    for (int r = 0; r < 200; ++r) {
      RngStream rng(42, static_cast<std::uint64_t>(r));
      const auto fs = sample_flat_coupling(kind, f, spec, rng);
      CHECK(path_weight(fs.path, fs.field) ==
            doctest::Approx(lpp::lpp(spec, fs.field)).epsilon(1e-12));
    }
  }
}

TEST_CASE("free-endpoint flat couplings match the complete-graph convex maximum in law") {
  const auto f = make_exponential();
  const int reps = 30000;
  const CouplingSpec a = parse_coupling("flat:polya", f, parse_lattice("line:8"));
  const CouplingSpec b = parse_coupling("convexmax", f, parse_lattice("complete:8"));
  const EmpiricalSample sa(collect_lpp(a, reps, 43));
  const EmpiricalSample sb(collect_lpp(b, reps, 44));
  CHECK(ks_distance_two_sample(sa, sb) < ks_critical_two_sample(reps, reps));
}

TEST_CASE("the convex maximum on the complete graph follows the closed-form law") {
  const auto f = make_exponential();
  const LatticeSpec spec = parse_lattice("complete:8");
  const auto law = worst_case_law(spec, f);
  const int reps = 30000;
  const CouplingSpec cs = parse_coupling("convexmax", f, spec);
  CHECK(ks_distance(EmpiricalSample(collect_lpp(cs, reps, 45)), *law) <
        ks_critical(reps));
}

TEST_CASE("exactly one maximally dependent coordinate clears the threshold") {
  const auto f = make_exponential();
  const int n = 4;
  const double w = f->upper_quantile(1.0 / n);
  std::vector<double> maxima;
  for (int r = 0; r < 20000; ++r) {
    RngStream rng(46, static_cast<std::uint64_t>(r));
    const auto x = sample_maximally_dependent(f, n, rng);
    REQUIRE(static_cast<int>(x.size()) == n);
    int above = 0;
    for (const double xi : x) above += xi > w;
    CHECK(above == 1);
    maxima.push_back(*std::max_element(x.begin(), x.end()));
  }
  const auto envelope = frechet_envelope(f, n);
  CHECK(ks_distance(EmpiricalSample(maxima), *envelope) < ks_critical(20000));
}

TEST_CASE("constant-diagonal couplings keep diagonals constant") {
  const auto f = make_uniform();
  const LatticeSpec spec = parse_lattice("line:5");
  RngStream rng(47, 0);
  const auto field = sample_min_mean(f, spec, {CopulaKind::Comonotone, 5}, rng);
  for (int d = 2; d <= 5; ++d)
    for (int i = 2; i <= d; ++i)
      CHECK(field.at(i, d + 1 - i) == doctest::Approx(field.at(1, d)).epsilon(1e-12));
}

TEST_CASE("coupling strings parse and reject what the recipe cannot do") {
  const auto f = make_exponential();
  const auto line = parse_lattice("line:6");
  CHECK(parse_coupling("iid", f, line).name == CouplingSpec::Name::IID);
  CHECK(parse_coupling("flat:natural", f, line).walk == WalkKind::NaturalComplete);
  CHECK(parse_coupling("flat:natural", f, parse_lattice("point:6,2")).walk ==
        WalkKind::NaturalPoint);
  CHECK(parse_coupling("minmean:antithetic", f, line).copula ==
        CopulaKind::AntitheticPairs);
  CHECK_THROWS((void)parse_coupling("convexmin", f, line));
  CHECK_THROWS((void)parse_coupling("maxmeanmixed", make_uniform(),
                                    parse_lattice("complete:8")));
  CHECK_THROWS((void)parse_coupling("maxmeanmixed", f, line));
}
