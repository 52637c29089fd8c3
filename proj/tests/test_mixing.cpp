#include <doctest.h>

#include "lpplab/mixing.hpp"
#include "lpplab/stats.hpp"

#include <cmath>
#include <numeric>

using namespace lpp;

namespace {

std::vector<std::vector<double>> draw_many(const MixCopula& c, int reps,
                                           std::uint64_t seed) {
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    out.push_back(sample_copula(c, rng));
  }
  return out;
}

double sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

TEST_CASE("every copula keeps uniform coordinate marginals") {
  const auto unif = make_uniform();
  const int reps = 20000;
  for (const auto kind :
       {CopulaKind::Independent, CopulaKind::Comonotone, CopulaKind::AntitheticPairs,
        CopulaKind::GaussianExchangeable, CopulaKind::QuantileBalancer}) {
    const MixCopula c{kind, 5};
    const auto draws = draw_many(c, reps, 71);
    for (int i = 0; i < 5; ++i) {
      std::vector<double> coord;
      coord.reserve(static_cast<std::size_t>(reps));
      for (const auto& d : draws) coord.push_back(d[static_cast<std::size_t>(i)]);
      CHECK(ks_distance(EmpiricalSample(coord), *unif) < ks_critical(reps));
    }
  }
}

TEST_CASE("antithetic pairs cancel exactly for even dimension") {
  const MixCopula c{CopulaKind::AntitheticPairs, 6};
  for (const auto& d : draw_many(c, 500, 72))
    CHECK(sum(d) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("exchangeable gaussian coordinates carry the extreme common correlation") {
  const int n = 5, reps = 40000;
  const MixCopula c{CopulaKind::GaussianExchangeable, n};
  double sxy = 0.0, sx = 0.0, sxx = 0.0;
  long long pairs = 0;
  for (const auto& d : draw_many(c, reps, 73)) {
    const auto& z = d;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        sxy += z[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(j)];
        ++pairs;
      }
    for (int i = 0; i < n; ++i) {
      sx += z[static_cast<std::size_t>(i)];
      sxx += z[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
    }
  }
  const double mean = sx / (reps * n);
  const double var = sxx / (reps * n) - mean * mean;
  const double cov = sxy / pairs - mean * mean;
  const double rho = cov / var;
  // the uniforms inherit the negative exchangeable dependence; for the
  // grade correlation of the gaussian structure rho is close to -1/(n-1)
  CHECK(rho < -0.15);
  CHECK(rho > -0.35);
  CHECK(mean == doctest::Approx(0.5).epsilon(2e-3));
}

TEST_CASE("the balancer keeps row sums nearly constant and samples exactly marginal") {
  const QuantileBalancer flat(make_uniform(), 400, 4);
  CHECK(flat.max_row_deviation() < 1e-3);
  // an unbounded upper tail caps how flat the rows can get: the row holding
  // the top atom must exceed the mean row; measured and computed agree anyway
  const auto exp1 = make_exponential();
  const QuantileBalancer bal(exp1, 400, 4);
  CHECK(bal.max_row_deviation() < 5.0);
  const int reps = 20000;
  std::vector<double> coord, sums;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(74, static_cast<std::uint64_t>(r));
    const auto d = bal.sample(rng);
    coord.push_back(d[2]);
    sums.push_back(sum(d));
  }
  CHECK(ks_distance(EmpiricalSample(coord), *exp1) < ks_critical(reps));
  const auto m = moment_summary(EmpiricalSample(sums));
  CHECK(m.mean == doctest::Approx(4.0 * exp1->mean()).epsilon(0.02));
  CHECK(std::abs(m.variance - bal.residual_variance()) < 4.0 * m.se_variance + 1e-3);
}

TEST_CASE("odd-dimensional uniform mixing still has tiny sum variance") {
  const int n = 5, reps = 20000;
  std::vector<double> sums;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(75, static_cast<std::uint64_t>(r));
    sums.push_back(sum(mixable_sum_uniform(n, rng)));
  }
  const auto m = moment_summary(EmpiricalSample(sums));
  CHECK(m.mean == doctest::Approx(n / 2.0).epsilon(1e-2));
  CHECK(m.variance < 0.01 * n / 12.0);  // far below the independent value
}

TEST_CASE("the recursive block coupling is marginally exponential") {
  const BlockSchemeExponential scheme(5.0);
  CHECK(scheme.n() == 5);
  const int reps = 20000;
  std::vector<double> coord;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(76, static_cast<std::uint64_t>(r));
    coord.push_back(scheme.sample(rng)[3]);
  }
  CHECK(ks_distance(EmpiricalSample(coord), *make_exponential()) < ks_critical(reps));
}

TEST_CASE("block sums follow the two-point variance law plus the balancer residual") {
  for (const double b : {3.0, 5.0}) {
    const BlockSchemeExponential scheme(b);
    const double analytic = variance_law(*make_exponential(), b, scheme.n()) +
                            scheme.residual_variance();
    const int reps = 40000;
    std::vector<double> sums;
    for (int r = 0; r < reps; ++r) {
      RngStream rng(77, static_cast<std::uint64_t>(r));
      sums.push_back(sum(scheme.sample(rng)));
    }
    const auto m = moment_summary(EmpiricalSample(sums));
    CHECK(std::abs(m.variance - analytic) < 4.0 * m.se_variance);
    CHECK(m.mean == doctest::Approx(static_cast<double>(scheme.n())).epsilon(0.02));
  }
}

TEST_CASE("the calibrated threshold inverts the block size") {
  for (const int n : {4, 5, 12}) {
    const double b = BlockSchemeExponential::b_for_n(n);
    CHECK(BlockSchemeExponential(b).n() == n);
  }
}

TEST_CASE("the two-point variance law decreases in the threshold") {
  const auto f = make_exponential();
  double prev = variance_law(*f, 2.0, 6);
  for (double b = 3.0; b < 10.0; b += 1.0) {
    const double v = variance_law(*f, b, 6);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("antithetic pairing of one marginal has the announced minimal variance") {
  // for exponential weights the antithetic pair sum has variance about 0.7101
  const int reps = 200000;
  const auto f = make_exponential();
  std::vector<double> sums;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(78, static_cast<std::uint64_t>(r));
    const auto [a, b] = min_variance_pair(*f, rng);
    sums.push_back(a + b);
  }
  const auto m = moment_summary(EmpiricalSample(sums));
  CHECK(m.mean == doctest::Approx(2.0).epsilon(5e-3));
  CHECK(std::abs(m.variance - 0.7101) < 4.0 * m.se_variance + 1e-3);
}

TEST_CASE("copula names round trip") {
  for (const auto kind :
       {CopulaKind::Independent, CopulaKind::Comonotone, CopulaKind::AntitheticPairs,
        CopulaKind::GaussianExchangeable, CopulaKind::MixableBlock,
        CopulaKind::QuantileBalancer})
    CHECK(parse_copula(copula_name(kind)) == kind);
  CHECK_THROWS((void)parse_copula("clayton"));
}
