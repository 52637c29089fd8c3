#pragma once

#include "lpplab/marginals.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lpp {

// An immutable sorted sample with its generating provenance.
class EmpiricalSample {
 public:
  EmpiricalSample(std::vector<double> values, std::uint64_t seed = 0,
                  std::string provenance = {});

  const std::vector<double>& values() const { return values_; }  // ascending
  int count() const { return static_cast<int>(values_.size()); }
  std::uint64_t seed() const { return seed_; }
  const std::string& provenance() const { return provenance_; }

  double survival(double x) const;  // fraction strictly above x
  double quantile(double p) const;  // p in (0,1), lower interpolation

 private:
  std::vector<double> values_;
  std::uint64_t seed_;
  std::string provenance_;
};

struct PremiumCurve {
  std::vector<double> x;   // grid, ascending
  std::vector<double> h;   // E[(V - x)^+]
  std::vector<double> se;  // zero for analytic curves
};

// 99 pooled-sample quantile levels by default.
std::vector<double> pooled_quantile_grid(std::span<const EmpiricalSample* const> samples,
                                         int levels = 99);
std::vector<double> pooled_quantile_grid(const EmpiricalSample& a,
                                         const EmpiricalSample& b, int levels = 99);

PremiumCurve empirical_premium(const EmpiricalSample& s, std::span<const double> grid);
PremiumCurve analytic_premium(const Marginal& law, std::span<const double> grid);

enum class Verdict { Dominates, Dominated, Crossing, Inconclusive };
std::string verdict_name(Verdict v);

struct VerdictReport {
  Verdict verdict = Verdict::Inconclusive;
  double worst_x = 0.0;       // grid point with the most adverse margin
  double worst_margin = 0.0;  // (a - b) in combined-se units at worst_x
  struct Row {
    double x, h_a, se_a, h_b, se_b, margin_in_se;
  };
  std::vector<Row> rows;
};

// Pointwise premium comparison: does a convexly dominate b?
VerdictReport convex_dominates(const PremiumCurve& a, const PremiumCurve& b,
                               double slack_in_se = 4.0);
// Pointwise survival comparison on the merged support grid.
VerdictReport stochastic_dominates(const EmpiricalSample& a, const EmpiricalSample& b,
                                   double slack_in_se = 4.0);

double ks_distance(const EmpiricalSample& s, const Marginal& law);
double ks_distance_two_sample(const EmpiricalSample& a, const EmpiricalSample& b);
// 1% critical values for the KS statistics above.
double ks_critical(int n);
double ks_critical_two_sample(int n, int m);

struct MomentSummary {
  int n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double se_mean = 0.0;
  double se_variance = 0.0;  // jackknife
};

MomentSummary moment_summary(const EmpiricalSample& s);

}  // namespace lpp
