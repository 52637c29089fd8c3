#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lpp {

enum class Family {
  Exponential,    // survival exp(-theta x) on (0, inf)
  UniformBeta,    // survival (1 - |c| x)^beta on (0, 1/|c|)
  Pareto,         // survival (1 + c x)^(-alpha) on (0, inf), alpha > 1
  ParetoShifted,  // survival x^(-alpha) on (1, inf), alpha > 1
  Empirical,      // step functions over a sorted sample
  Derived,        // conditionals, linear laws, quantile sums
};

// Scaling constant of the identity F*(x + s + c x s) = F*(x) F*(s).
// c < 0 is the beta family, c = 0 exponential, c > 0 Pareto.
struct MemorylessParams {
  double c = 0.0;
  double shape = 1.0;  // beta, theta or alpha per case
  double scaling(double x) const { return 1.0 + c * x; }
};

// A continuous weight distribution: cdf, survival, upper-quantile,
// premium E[(W-x)^+] and mean residual. Immutable after construction.
class Marginal {
 public:
  virtual ~Marginal() = default;

  virtual Family family() const = 0;
  virtual double cdf(double x) const = 0;
  virtual double survival(double x) const { return 1.0 - cdf(x); }
  // Inverse of the survival function; rejects u outside (0,1).
  double upper_quantile(double u) const;
  virtual double premium(double x) const = 0;
  virtual double support_min() const = 0;
  virtual double support_max() const = 0;  // may be +inf

  double mean() const { return premium(0.0); }
  // Numeric by default; closed-form families override.
  virtual double variance() const;
  double mean_residual(double x) const;

  virtual std::optional<MemorylessParams> memoryless() const {
    return std::nullopt;
  }
  virtual std::string describe() const = 0;

 protected:
  virtual double upper_quantile_impl(double u) const = 0;
};

using MarginalPtr = std::shared_ptr<const Marginal>;

MarginalPtr make_exponential(double theta = 1.0);
MarginalPtr make_uniform();  // uniform(0,1): |c| = 1, beta = 1
MarginalPtr make_uniform_beta(double abs_c, double beta);
MarginalPtr make_pareto(double alpha, double c = 1.0);
MarginalPtr make_pareto_shifted(double alpha);  // support (1, inf)
MarginalPtr make_empirical(std::vector<double> sorted_values);

// Conditional law of W given W > w_n, with w_n = Q_F(1/n); its survival is
// min(1, n F*(x)). n = 1 returns the original marginal.
MarginalPtr conditional_right(MarginalPtr m, int n);
// Conditional law of W given W < v, for v inside the open support.
MarginalPtr conditional_left(MarginalPtr m, double v);
// conditional_left at the 1/n-upper-quantile w_n.
MarginalPtr conditional_left_at(MarginalPtr m, int n);

inline double sample(const Marginal& m, double u) { return m.upper_quantile(u); }

// Sup over the grid of |F*(x+s+cxs) - F*(x) F*(s)|. Rejects marginals
// outside the memoryless-up-to-scaling family.
double verify_memoryless_identity(const Marginal& m,
                                  std::span<const std::pair<double, double>> grid);

// Parses "exp:theta=1", "unif", "beta:c=1,beta=2", "pareto:alpha=2,c=1",
// "pareto1:alpha=2" (the support-(1,inf) preset).
MarginalPtr parse_marginal(const std::string& text);

}  // namespace lpp
