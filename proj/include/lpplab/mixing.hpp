#pragma once

#include "lpplab/marginals.hpp"
#include "lpplab/rng.hpp"

#include <string>
#include <vector>

namespace lpp {

enum class CopulaKind {
  Independent,
  Comonotone,
  AntitheticPairs,
  GaussianExchangeable,
  MixableBlock,
  QuantileBalancer,
};

CopulaKind parse_copula(const std::string& name);
std::string copula_name(CopulaKind kind);

// A recipe for a vector (U_1..U_N) with uniform(0,1) marginals.
struct MixCopula {
  CopulaKind kind = CopulaKind::Independent;
  int n = 2;
  double block_b = 0.0;  // MixableBlock; 0 means calibrate from n
  int atoms = 999;       // QuantileBalancer / MixableBlock discretization
};

std::vector<double> sample_copula(const MixCopula& c, RngStream& rng);

// Discretizes a marginal into m equiprobable atoms and arranges n columns as
// atom permutations so row sums stay near n times the mean; sampling picks a
// uniform row and jitters within atoms, which keeps each coordinate exactly
// marginal. See the class notes for the balancing rule.
class QuantileBalancer {
 public:
  QuantileBalancer(MarginalPtr marginal, int atoms, int n);

  std::vector<double> sample(RngStream& rng) const;
  // Exact variance of the row sum (row uniform, jitter independent):
  // across-row variance of atom-mean sums plus the average within-atom part.
  double residual_variance() const { return residual_variance_; }
  double max_row_deviation() const { return max_row_deviation_; }
  int n() const { return n_; }

 private:
  MarginalPtr marginal_;
  int atoms_, n_;
  std::vector<int> assign_;  // atoms_ x n_, column-major permutations
  double residual_variance_ = 0.0;
  double max_row_deviation_ = 0.0;
};

// n uniform(0,1) weights with (near-)constant sum n/2: antithetic pairs for
// even n, balancer-backed for odd n.
std::vector<double> mixable_sum_uniform(int n, RngStream& rng, int atoms = 999);

// The recursive constant-sum-below-threshold coupling of Exp(1) weights:
// with probability exp(-b) every coordinate shifts by b and the scheme
// recurses; otherwise the vector comes from the balancer over the
// conditional law below b. N = round(b / E[W | W < b]).
class BlockSchemeExponential {
 public:
  explicit BlockSchemeExponential(double b, int atoms = 1000, int depth_cap = 64);

  std::vector<double> sample(RngStream& rng) const;
  int n() const { return balancer_.n(); }
  double b() const { return b_; }
  double residual_variance() const { return balancer_.residual_variance(); }

  // Threshold whose induced N equals the given n.
  static double b_for_n(int n);

 private:
  double b_;
  int depth_cap_;
  QuantileBalancer balancer_;
};

// Analytic block-scheme variance N^2 F*(b) (E[W|W>b] - E[W|W<=b])^2.
double variance_law(const Marginal& f, double b, int n);

// Antithetic pair (Q(u), Q(1-u)), each marginally F.
std::pair<double, double> min_variance_pair(const Marginal& f, RngStream& rng);

double normal_cdf(double x);

}  // namespace lpp
