#include <doctest.h>

#include "lpplab/marginals.hpp"

#include <cmath>
#include <vector>

using namespace lpp;

namespace {

const std::vector<MarginalPtr>& all_families() {
  static const std::vector<MarginalPtr> fams = {
      make_exponential(1.0),       make_exponential(2.5), make_uniform(),
      make_uniform_beta(0.5, 2.0), make_pareto(2.0),      make_pareto(3.0, 0.5),
      make_pareto_shifted(2.0),
  };
  return fams;
}

// E[(W-x)^+] as an integral of the quantile function, midpoint rule after
// the substitution u = s^4 that tames heavy upper tails
double premium_by_quadrature(const Marginal& f, double x) {
  const int steps = 400000;
  const double h = 1.0 / steps;
  double acc = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double s = (k + 0.5) * h;
    const double u = s * s * s * s;
    acc += std::max(0.0, f.upper_quantile(u) - x) * 4.0 * s * s * s;
  }
  return acc * h;
}

}  // namespace

TEST_CASE("quantile and survival round trip") {
  for (const auto& f : all_families()) {
    for (double u = 1e-6; u < 1.0; u += 0.007) {
      const double x = f->upper_quantile(u);
      CHECK(f->survival(x) == doctest::Approx(u).epsilon(1e-10));
      CHECK(f->cdf(x) + f->survival(x) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("quantile rejects u outside the open unit interval") {
  const auto f = make_exponential();
  CHECK_THROWS_AS((void)f->upper_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS((void)f->upper_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS((void)f->upper_quantile(-0.3), std::domain_error);
  CHECK_THROWS_AS((void)f->upper_quantile(1.7), std::domain_error);
}

TEST_CASE("premium matches the integrated survival function") {
  for (const auto& f : all_families()) {
    for (const double u : {0.9, 0.5, 0.1, 0.01}) {
      const double x = f->upper_quantile(u);
      CHECK(f->premium(x) == doctest::Approx(premium_by_quadrature(*f, x)).epsilon(1e-6));
    }
    const double below = f->support_min() - 1.0;
    CHECK(f->premium(below) == doctest::Approx(f->mean() - below).epsilon(1e-9));
  }
}

TEST_CASE("mean residual is premium over survival") {
  for (const auto& f : all_families()) {
    const double x = f->upper_quantile(0.3);
    CHECK(f->mean_residual(x) ==
          doctest::Approx(f->premium(x) / f->survival(x)).epsilon(1e-12));
  }
}

TEST_CASE("closed-form moments") {
  CHECK(make_exponential(1.0)->mean() == doctest::Approx(1.0));
  CHECK(make_exponential(2.0)->variance() == doctest::Approx(0.25));
  CHECK(make_uniform()->mean() == doctest::Approx(0.5));
  CHECK(make_uniform()->variance() == doctest::Approx(1.0 / 12.0));
  CHECK(make_pareto(3.0)->mean() == doctest::Approx(0.5));
  CHECK(make_pareto_shifted(3.0)->mean() == doctest::Approx(1.5));
}

TEST_CASE("the scaled lack-of-memory identity holds across the presets") {
  std::vector<std::pair<double, double>> grid;
  for (double x = 0.05; x < 0.9; x += 0.11)
    for (double s = 0.05; s < 0.9; s += 0.13) grid.emplace_back(x, s);
  for (const auto& f : {make_exponential(1.7), make_uniform(),
                        make_uniform_beta(0.5, 2.0), make_pareto(2.5)}) {
    CHECK(verify_memoryless_identity(*f, grid) < 1e-10);
  }
  CHECK_THROWS(
      (void)verify_memoryless_identity(*make_empirical({0.1, 0.5, 0.9}), grid));
}

TEST_CASE("right conditional is the law beyond the 1/n upper quantile") {
  for (const auto& base : {make_exponential(), make_uniform(), make_pareto(2.0)}) {
    const int n = 5;
    const auto r = conditional_right(base, n);
    const double w = base->upper_quantile(1.0 / n);
    CHECK(r->support_min() == doctest::Approx(w).epsilon(1e-10));
    for (double u = 0.01; u < 1.0; u += 0.04)
      CHECK(r->upper_quantile(u) ==
            doctest::Approx(base->upper_quantile(u / n)).epsilon(1e-10));
    for (double x = w * 0.5; x < base->upper_quantile(0.01); x += 0.21)
      CHECK(r->survival(x) ==
            doctest::Approx(std::min(1.0, n * base->survival(x))).epsilon(1e-10));
    CHECK(conditional_right(base, 1)->mean() == doctest::Approx(base->mean()));
  }
}

TEST_CASE("left and right conditionals reassemble the base law") {
  for (const auto& base : {make_exponential(), make_uniform(), make_pareto(2.0)}) {
    const int n = 4;
    const auto r = conditional_right(base, n);
    const auto l = conditional_left_at(base, n);
    const double w = base->upper_quantile(1.0 / n);
    for (double x = w * 0.25; x < base->upper_quantile(0.02); x += 0.17) {
      const double mix = (1.0 - 1.0 / n) * l->cdf(x) + (1.0 / n) * r->cdf(x);
      CHECK(mix == doctest::Approx(base->cdf(x)).epsilon(1e-9));
    }
    const double mean_mix = (1.0 - 1.0 / n) * l->mean() + (1.0 / n) * r->mean();
    CHECK(mean_mix == doctest::Approx(base->mean()).epsilon(1e-8));
  }
}

TEST_CASE("left conditional premium agrees with quadrature") {
  const auto base = make_exponential();
  const auto l = conditional_left(base, 2.0);
  for (const double x : {0.1, 0.5, 1.0, 1.9})
    CHECK(l->premium(x) == doctest::Approx(premium_by_quadrature(*l, x)).epsilon(1e-6));
  CHECK(l->support_max() == doctest::Approx(2.0));
}

TEST_CASE("marginal strings parse to the right presets") {
  CHECK(parse_marginal("exp:theta=2")->survival(1.0) ==
        doctest::Approx(std::exp(-2.0)));
  CHECK(parse_marginal("unif")->cdf(0.25) == doctest::Approx(0.25));
  CHECK(parse_marginal("pareto:alpha=2")->survival(1.0) == doctest::Approx(0.25));
  CHECK(parse_marginal("pareto1:alpha=2")->survival(2.0) == doctest::Approx(0.25));
  CHECK_THROWS((void)parse_marginal("cauchy"));
  CHECK_THROWS((void)parse_marginal("pareto:alpha=0.5"));
}
