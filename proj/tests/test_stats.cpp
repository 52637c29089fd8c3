#include <doctest.h>

#include "lpplab/bounds.hpp"
#include "lpplab/rng.hpp"
#include "lpplab/stats.hpp"

#include <cmath>

using namespace lpp;

namespace {

std::vector<double> draw(const Marginal& f, int n, std::uint64_t seed, double shift = 0.0) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  RngStream rng(seed, 0);
  for (int i = 0; i < n; ++i) out.push_back(f.upper_quantile(rng.uniform()) + shift);
  return out;
}

}  // namespace

TEST_CASE("premium of a constant sample is the hinge exactly") {
  const EmpiricalSample s(std::vector<double>(50, 2.5));
  const std::vector<double> grid = {0.0, 1.0, 2.5, 3.0};
  const auto curve = empirical_premium(s, grid);
  CHECK(curve.h[0] == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(curve.h[1] == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(curve.h[2] == doctest::Approx(0.0));
  CHECK(curve.h[3] == doctest::Approx(0.0));
  CHECK(curve.se[1] == doctest::Approx(0.0));
}

TEST_CASE("premium below the sample minimum is mean minus x") {
  const auto f = make_exponential();
  const auto s = EmpiricalSample(draw(*f, 5000, 1));
  const double mean = moment_summary(s).mean;
  const std::vector<double> grid = {-2.0};
  const auto curve = empirical_premium(s, grid);
  CHECK(curve.h[0] == doctest::Approx(mean + 2.0).epsilon(1e-12));
}

TEST_CASE("large-sample premium sits within four errors of the analytic value") {
  const auto f = make_exponential();
  const auto s = EmpiricalSample(draw(*f, 100000, 2));
  const std::vector<double> grid = {1.0};
  const auto curve = empirical_premium(s, grid);
  CHECK(std::abs(curve.h[0] - std::exp(-1.0)) < 4.0 * curve.se[0]);
}

TEST_CASE("a law matches the empirical premium of its own samples on a whole grid") {
  const LinearLaw law(3.0, 1.0, make_exponential());
  const auto s = EmpiricalSample(draw(law, 50000, 3));
  const EmpiricalSample* one[1] = {&s};
  const auto grid = pooled_quantile_grid(std::span<const EmpiricalSample* const>(one, 1));
  const auto emp = empirical_premium(s, grid);
  const auto ana = analytic_premium(law, grid);
  const auto rep = convex_dominates(emp, ana);
  CHECK((rep.verdict == Verdict::Dominates || rep.verdict == Verdict::Dominated ||
         rep.verdict == Verdict::Inconclusive));
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(emp.h[i] - ana.h[i]) < 4.0 * emp.se[i] + 1e-9);
}

TEST_CASE("comparing a curve with itself never reports domination either way") {
  const auto f = make_uniform();
  const auto s = EmpiricalSample(draw(*f, 2000, 4));
  const EmpiricalSample* one[1] = {&s};
  const auto grid = pooled_quantile_grid(std::span<const EmpiricalSample* const>(one, 1));
  const auto curve = empirical_premium(s, grid);
  CHECK(convex_dominates(curve, curve).verdict == Verdict::Dominates);
}

TEST_CASE("clearly separated curves give antisymmetric verdicts") {
  const auto f = make_exponential();
  const auto a = EmpiricalSample(draw(*f, 20000, 5, 1.0));
  const auto b = EmpiricalSample(draw(*f, 20000, 6));
  const auto grid = pooled_quantile_grid(a, b);
  const auto ca = empirical_premium(a, grid);
  const auto cb = empirical_premium(b, grid);
  CHECK(convex_dominates(ca, cb).verdict == Verdict::Dominates);
  CHECK(convex_dominates(cb, ca).verdict == Verdict::Dominated);
  CHECK(stochastic_dominates(a, b).verdict == Verdict::Dominates);
  CHECK(stochastic_dominates(b, a).verdict == Verdict::Dominated);
}

TEST_CASE("a shifted copy dominates stochastically, interleaving crosses") {
  std::vector<double> lo, hi, inter_a, inter_b;
  for (int i = 0; i < 3000; ++i) {
    lo.push_back(i * 1e-3);
    hi.push_back(i * 1e-3 + 0.4);
  }
  CHECK(stochastic_dominates(EmpiricalSample(hi), EmpiricalSample(lo)).verdict ==
        Verdict::Dominates);
  // disjoint blocks alternating far apart force survival curves to cross
  for (int i = 0; i < 2000; ++i) {
    inter_a.push_back(i < 1000 ? 0.0 + i * 1e-4 : 10.0 + i * 1e-4);
    inter_b.push_back(5.0 + i * 1e-4);
  }
  CHECK(stochastic_dominates(EmpiricalSample(inter_a), EmpiricalSample(inter_b)).verdict ==
        Verdict::Crossing);
}

TEST_CASE("mismatched grids are rejected") {
  PremiumCurve a, b;
  a.x = {0.0, 1.0};
  a.h = {1.0, 0.5};
  a.se = {0.0, 0.0};
  b = a;
  b.x = {0.0, 1.5};
  CHECK_THROWS((void)convex_dominates(a, b));
  b.x = {0.0};
  b.h = {1.0};
  b.se = {0.0};
  CHECK_THROWS((void)convex_dominates(a, b));
}

TEST_CASE("distance to the generating law stays below the critical value") {
  const auto f = make_pareto(2.0);
  const int n = 100000;
  const auto s = EmpiricalSample(draw(*f, n, 7));
  CHECK(ks_distance(s, *f) < ks_critical(n));
  const auto shifted = EmpiricalSample(draw(*f, n, 7, 0.2));
  CHECK(ks_distance(shifted, *f) > ks_critical(n));
}

TEST_CASE("two-sample distance separates equal laws from shifted ones") {
  const auto f = make_uniform();
  const auto a = EmpiricalSample(draw(*f, 30000, 8));
  const auto b = EmpiricalSample(draw(*f, 30000, 9));
  CHECK(ks_distance_two_sample(a, b) < ks_critical_two_sample(30000, 30000));
  const auto c = EmpiricalSample(draw(*f, 30000, 10, 0.05));
  CHECK(ks_distance_two_sample(a, c) > ks_critical_two_sample(30000, 30000));
}

TEST_CASE("moment summaries are exact on small hand samples") {
  const EmpiricalSample s({1.0, 2.0, 3.0, 4.0});
  const auto m = moment_summary(s);
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.variance == doctest::Approx(5.0 / 3.0));
  CHECK(m.se_mean == doctest::Approx(std::sqrt(5.0 / 12.0)));
  const auto c = moment_summary(EmpiricalSample(std::vector<double>(10, 3.0)));
  CHECK(c.variance == doctest::Approx(0.0));
  CHECK(c.se_mean == doctest::Approx(0.0));
}

TEST_CASE("sample quantiles and survival behave at the edges") {
  const EmpiricalSample s({1.0, 2.0, 3.0, 4.0});
  CHECK(s.survival(0.5) == doctest::Approx(1.0));
  CHECK(s.survival(4.5) == doctest::Approx(0.0));
  CHECK(s.survival(2.0) == doctest::Approx(0.5));
  CHECK(s.quantile(0.5) == doctest::Approx(2.5));
  CHECK_THROWS((void)s.quantile(0.0));
  CHECK_THROWS((void)EmpiricalSample({1.0}));
}
