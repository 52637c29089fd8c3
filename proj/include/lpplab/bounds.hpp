#pragma once

#include "lpplab/lattice.hpp"
#include "lpplab/marginals.hpp"

#include <span>
#include <vector>

namespace lpp {

// Law of a*W + b with W ~ base; the closed-form shape of the worst-case
// LPP times for the memoryless families.
class LinearLaw final : public Marginal {
 public:
  LinearLaw(double slope, double intercept, MarginalPtr base);

  double slope() const { return a_; }
  double intercept() const { return b_; }
  const MarginalPtr& base() const { return base_; }

  Family family() const override { return Family::Derived; }
  double cdf(double x) const override;
  double survival(double x) const override;
  double premium(double x) const override;
  double support_min() const override;
  double support_max() const override;
  double variance() const override { return a_ * a_ * base_->variance(); }
  std::string describe() const override;

 protected:
  double upper_quantile_impl(double u) const override;

 private:
  double a_, b_;
  MarginalPtr base_;
};

// The U-parameterized worst-case law sum_j Q_F(U / n_j), evaluated
// numerically when no closed form applies.
class QuantileSumLaw final : public Marginal {
 public:
  QuantileSumLaw(std::vector<int> lengths, MarginalPtr f);

  double value(double u) const;  // decreasing in u
  const std::vector<int>& lengths() const { return lengths_; }

  Family family() const override { return Family::Derived; }
  double cdf(double x) const override { return 1.0 - survival(x); }
  double survival(double x) const override;
  double premium(double x) const override;  // 1-D quadrature over U
  double support_min() const override;
  double support_max() const override;
  std::string describe() const override;

 protected:
  double upper_quantile_impl(double u) const override { return value(u); }

 private:
  std::vector<int> lengths_;
  MarginalPtr f_;
};

// Anti-diagonal section lengths n_j of the graph, the multiset entering the
// worst-case law.
std::vector<int> diag_lengths(const LatticeSpec& spec);

// Law of the stochastically maximal max of n F-distributed r.v.:
// survival min(1, n F*(x)), essential infimum Q_F(1/n).
MarginalPtr frechet_envelope(const MarginalPtr& f, int n);

// Exact law of the convexly maximal LPP time on the given graph. Memoryless
// families (and the multiplicative Pareto preset) come back as a LinearLaw;
// anything else as the QuantileSumLaw.
MarginalPtr worst_case_law(const LatticeSpec& spec, const MarginalPtr& f);
// Uniform-family coefficients: point-to-line slope J_N, point-to-point
// slope N/M + 2(J_M - 1).
LinearLaw worst_case_law_uniform(const LatticeSpec& spec);

double harmonic(int n);  // J_n = sum 1/i

// Asymptotic worst-case point-to-point shape log(min(g,1-g)) - 2 min(g,1-g).
double shape_convex_bound(double gamma);
// The i.i.d. shape (sqrt(g) + sqrt(1-g))^2.
double shape_rost(double gamma);

// N elements with marginals F_n; K nonempty subsets; M = max_k sum_{I_k} X_n.
struct SubsetSystem {
  int n = 0;
  std::vector<std::vector<int>> subsets;  // 1-based element ids
  std::vector<MarginalPtr> marginals;

  void validate() const;
};

// Anti-diagonal path system of C_N: one element per site, one subset per
// complete-graph path.
SubsetSystem complete_graph_system(int n, const MarginalPtr& f);

struct BoundPoint {
  double x = 0.0;
  double bound = 0.0;           // B(x)
  double slope = 0.0;           // sum of multipliers, negated
  std::vector<double> v;        // optimal clip vector
  std::vector<double> lambda;   // multipliers, one per subset
  bool linear_extension = false;
  bool converged = true;
  double feasibility_residual = 0.0;
  double dual_gap = 0.0;
};

struct BoundCurve {
  std::vector<BoundPoint> points;
  double x0 = 0.0;       // where the slope reaches -1
  double bound_x0 = 0.0; // B(x0)
};

struct SolverOptions {
  double feasibility_tol = 1e-10;
  double gap_tol = 1e-8;
  int max_iterations = 200000;
};

// The generic convex upper bound B(x) on the premium of M, by dual ascent
// on the K constraint multipliers; below x0 the curve continues linearly
// with slope -1.
BoundCurve generic_bound(const SubsetSystem& system, std::span<const double> x_grid,
                         const SolverOptions& options = {});

// The a.s. pointwise inequality behind the bound, checked on one concrete
// weight vector.
bool pointwise_chain_check(const SubsetSystem& system, std::span<const double> x_values,
                           std::span<const double> v, double x);

}  // namespace lpp
