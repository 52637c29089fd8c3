#include "lpplab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lpp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LinearLaw::LinearLaw(double slope, double intercept, MarginalPtr base)
    : a_(slope), b_(intercept), base_(std::move(base)) {
  if (!(a_ >= 1.0)) throw std::invalid_argument("linear law: slope must be >= 1");
  if (!(b_ >= 0.0)) throw std::invalid_argument("linear law: intercept must be >= 0");
}

double LinearLaw::cdf(double x) const { return base_->cdf((x - b_) / a_); }
double LinearLaw::survival(double x) const { return base_->survival((x - b_) / a_); }
double LinearLaw::premium(double x) const {
  if (x < support_min()) return a_ * base_->mean() + b_ - x;
  return a_ * base_->premium((x - b_) / a_);
}
double LinearLaw::support_min() const { return a_ * base_->support_min() + b_; }
double LinearLaw::support_max() const { return a_ * base_->support_max() + b_; }
double LinearLaw::upper_quantile_impl(double u) const {
  return a_ * base_->upper_quantile(u) + b_;
}
std::string LinearLaw::describe() const {
  std::ostringstream os;
  os << "linear:" << a_ << "*(" << base_->describe() << ")+" << b_;
  return os.str();
}

QuantileSumLaw::QuantileSumLaw(std::vector<int> lengths, MarginalPtr f)
    : lengths_(std::move(lengths)), f_(std::move(f)) {
  if (lengths_.empty()) throw std::invalid_argument("quantile sum law: no lengths");
  for (const int n : lengths_)
    if (n < 1) throw std::invalid_argument("quantile sum law: lengths must be >= 1");
}

double QuantileSumLaw::value(double u) const {
  double s = 0.0;
  for (const int n : lengths_) s += f_->upper_quantile(u / n);
  return s;
}

double QuantileSumLaw::support_min() const {
  double s = 0.0;
  for (const int n : lengths_)
    s += n == 1 ? f_->support_min() : f_->upper_quantile(1.0 / n);
  return s;
}

double QuantileSumLaw::support_max() const {
  return static_cast<double>(lengths_.size()) * f_->support_max();
}

double QuantileSumLaw::survival(double x) const {
  if (x <= support_min()) return 1.0;
  double lo = 1e-16, hi = 1.0 - 1e-16;
  if (x >= value(lo)) return lo;
  // value is decreasing in u; bisect value(u) = x
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (value(mid) > x ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double QuantileSumLaw::premium(double x) const {
  const double ux = x <= support_min() ? 1.0 : survival(x);
  // integral of value(u) over (0, ux), termwise via the tail identity
  // int_0^s Q_F(t) dt = H_F(Q_F(s)) + s Q_F(s)
  double acc = 0.0;
  for (const int n : lengths_) {
    const double s = ux / n;
    const double q = s >= 1.0 ? f_->support_min() : f_->upper_quantile(s);
    acc += n * (f_->premium(q) + s * q);
  }
  return acc - x * ux;
}

std::string QuantileSumLaw::describe() const {
  std::ostringstream os;
  os << "qsum:" << lengths_.size() << " diagonals over " << f_->describe();
  return os.str();
}

std::vector<int> diag_lengths(const LatticeSpec& spec) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(spec.n));
  for (int d = 1; d <= spec.n; ++d) out.push_back(spec.diag_len(d));
  return out;
}

MarginalPtr frechet_envelope(const MarginalPtr& f, int n) {
  return conditional_right(f, n);
}

double harmonic(int n) {
  double s = 0.0;
  for (int i = 1; i <= n; ++i) s += 1.0 / i;
  return s;
}

MarginalPtr worst_case_law(const LatticeSpec& spec, const MarginalPtr& f) {
  const auto lengths = diag_lengths(spec);
  auto quantile_at = [&](int n) {
    return n == 1 ? f->support_min() : f->upper_quantile(1.0 / n);
  };
  if (const auto mp = f->memoryless()) {
    // Q_F(U/j) = w_j + (1 + c w_j) W(1,1) a.s., so the sum is linear in W.
    double a = 0.0, b = 0.0;
    for (const int n : lengths) {
      const double w = quantile_at(n);
      a += mp->scaling(w);
      b += w;
    }
    return std::make_shared<LinearLaw>(a, b, f);
  }
  if (f->family() == Family::ParetoShifted) {
    // Q_F(U/j) = j^(1/alpha) W(1,1); the coefficient is Q_F(1/j) itself.
    double a = 0.0;
    for (const int n : lengths) a += quantile_at(n);
    return std::make_shared<LinearLaw>(a, 0.0, f);
  }
  return std::make_shared<QuantileSumLaw>(lengths, f);
}

LinearLaw worst_case_law_uniform(const LatticeSpec& spec) {
  const int n = spec.n;
  double slope = 0.0;
  if (spec.kind == GraphKind::PointToPoint) {
    const int m = std::min(spec.m, n + 1 - spec.m);
    slope = static_cast<double>(n) / m + 2.0 * (harmonic(m) - 1.0);
  } else {
    slope = harmonic(n);
  }
  return LinearLaw(slope, n - slope, make_uniform());
}

double shape_convex_bound(double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw std::domain_error("shape_convex_bound: gamma must lie in (0,1)");
  const double g = std::min(gamma, 1.0 - gamma);
  const double lg = std::log(g);
  if (std::isinf(lg)) return -kInf;
  return lg - 2.0 * g;
}

double shape_rost(double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::domain_error("shape_rost: gamma must lie in [0,1]");
  const double r = std::sqrt(gamma) + std::sqrt(1.0 - gamma);
  return r * r;
}

void SubsetSystem::validate() const {
  if (n < 1) throw std::invalid_argument("subset system: need n >= 1");
  if (static_cast<int>(marginals.size()) != n)
    throw std::invalid_argument("subset system: one marginal per element");
  if (subsets.empty()) throw std::invalid_argument("subset system: need K >= 1");
  for (const auto& s : subsets) {
    if (s.empty()) throw std::invalid_argument("subset system: subsets must be nonempty");
    for (const int e : s)
      if (e < 1 || e > n)
        throw std::invalid_argument("subset system: element id out of range");
  }
}

SubsetSystem complete_graph_system(int n, const MarginalPtr& f) {
  SubsetSystem sys;
  sys.n = n * (n + 1) / 2;
  sys.marginals.assign(static_cast<std::size_t>(sys.n), f);
  // site (i,j) -> 1-based row-major triangular id
  auto id = [n](int i, int j) { return (i - 1) * n - (i - 1) * (i - 2) / 2 + j; };
  LatticeSpec spec{GraphKind::Complete, n, n};
  for (const auto& path : enumerate_paths(spec)) {
    std::vector<int> subset;
    for (const auto& [i, j] : path.v) subset.push_back(id(i, j));
    sys.subsets.push_back(std::move(subset));
  }
  return sys;
}

namespace {

struct DualState {
  std::vector<double> lambda;     // K
  std::vector<double> cover;      // per-element sum of lambdas
  std::vector<double> v;          // per-element clip point
  std::vector<double> grad;       // K
  double value = -kInf;
  double max_violation = kInf;
};

class DualSolver {
 public:
  DualSolver(const SubsetSystem& sys, const SolverOptions& opts)
      : sys_(sys), opts_(opts), covering_(static_cast<std::size_t>(sys.n)) {
    for (std::size_t k = 0; k < sys_.subsets.size(); ++k)
      for (const int e : sys_.subsets[k])
        covering_[static_cast<std::size_t>(e - 1)].push_back(k);
    v_cap_.reserve(static_cast<std::size_t>(sys_.n));
    for (const auto& m : sys_.marginals)
      v_cap_.push_back(std::isfinite(m->support_max()) ? m->support_max()
                                                       : m->upper_quantile(1e-14));
  }

  BoundPoint solve(double x, std::vector<double> warm_lambda = {}) const {
    const auto k_count = sys_.subsets.size();
    DualState s;
    s.lambda = warm_lambda.size() == k_count ? std::move(warm_lambda)
                                             : std::vector<double>(k_count, 0.5 / k_count);
    evaluate(x, s);
    BoundPoint out;
    out.x = x;
    out.converged = false;
    const int max_sweeps =
        std::max(64, opts_.max_iterations / std::max<int>(1, static_cast<int>(k_count)));
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      // exact concave 1-D maximization over each multiplier in turn; the
      // derivative sum_{I_k} v_n(cover) - x is decreasing in lambda_k
      double moved = 0.0;
      for (std::size_t k = 0; k < k_count; ++k) {
        const auto& subset = sys_.subsets[k];
        const double old = s.lambda[k];
        double hi = kInf;
        for (const int e : subset)
          hi = std::min(hi, old + 1.0 - s.cover[static_cast<std::size_t>(e - 1)]);
        hi = std::max(hi, 0.0);
        auto deriv = [&](double t) {
          double d = -x;
          for (const int e : subset) {
            const auto& m = *sys_.marginals[static_cast<std::size_t>(e - 1)];
            const double c = s.cover[static_cast<std::size_t>(e - 1)] - old + t;
            if (c >= 1.0 - 1e-15) d += m.support_min();
            else if (c <= 1e-14) d += v_cap_[static_cast<std::size_t>(e - 1)];
            else d += m.upper_quantile(c);
          }
          return d;
        };
        double t;
        if (deriv(hi) >= 0.0) {
          t = hi;
        } else if (deriv(0.0) <= 0.0) {
          t = 0.0;
        } else {
          double a = 0.0, b = hi;
          for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (a + b);
            (deriv(mid) > 0.0 ? a : b) = mid;
          }
          t = 0.5 * (a + b);
        }
        if (t != old) {
          for (const int e : subset) s.cover[static_cast<std::size_t>(e - 1)] += t - old;
          s.lambda[k] = t;
          moved = std::max(moved, std::abs(t - old));
        }
      }
      evaluate(x, s);
      double primal = 0.0;  // feasible after shifting v down by the violation
      for (int e = 0; e < sys_.n; ++e)
        primal += sys_.marginals[static_cast<std::size_t>(e)]->premium(
            s.v[static_cast<std::size_t>(e)] - s.max_violation);
      out.feasibility_residual = s.max_violation;
      out.dual_gap = primal - s.value;
      if (s.max_violation <= opts_.feasibility_tol && out.dual_gap <= opts_.gap_tol) {
        out.converged = true;
        break;
      }
      if (moved < 1e-15) break;  // stalled (typically on the coverage boundary)
    }

    const double viol = s.max_violation;
    out.v.resize(static_cast<std::size_t>(sys_.n));
    double primal = 0.0;
    for (int e = 0; e < sys_.n; ++e) {
      out.v[static_cast<std::size_t>(e)] = s.v[static_cast<std::size_t>(e)] - viol;
      primal += sys_.marginals[static_cast<std::size_t>(e)]->premium(
          out.v[static_cast<std::size_t>(e)]);
    }
    out.bound = primal;
    out.lambda = s.lambda;
    double lsum = 0.0;
    for (const double l : s.lambda) lsum += l;
    out.slope = -std::min(1.0, lsum);
    return out;
  }

  // Sum of multipliers at the solution; decreasing in x.
  double multiplier_sum(double x, std::vector<double>& warm) const {
    const auto p = solve(x, warm);
    warm = p.lambda;
    double s = 0.0;
    for (const double l : p.lambda) s += l;
    return s;
  }

  double infimum_floor() const {
    // a.s. lower bound of M: the largest subset sum of essential infima
    double best = -kInf;
    for (const auto& subset : sys_.subsets) {
      double s = 0.0;
      for (const int e : subset)
        s += sys_.marginals[static_cast<std::size_t>(e - 1)]->support_min();
      best = std::max(best, s);
    }
    return best;
  }

 private:
  void evaluate(double x, DualState& s) const {
    const auto k_count = sys_.subsets.size();
    s.cover.assign(static_cast<std::size_t>(sys_.n), 0.0);
    for (std::size_t k = 0; k < k_count; ++k)
      for (const int e : sys_.subsets[k])
        s.cover[static_cast<std::size_t>(e - 1)] += s.lambda[k];
    // keep the dual finite: min_v {H(v) + s v} is -inf once s > 1
    double worst = 0.0;
    for (const double c : s.cover) worst = std::max(worst, c);
    if (worst > 1.0) {
      for (auto& l : s.lambda) l /= worst;
      for (auto& c : s.cover) c /= worst;
    }
    s.v.resize(static_cast<std::size_t>(sys_.n));
    double value = 0.0;
    for (int e = 0; e < sys_.n; ++e) {
      const auto& m = *sys_.marginals[static_cast<std::size_t>(e)];
      const double c = s.cover[static_cast<std::size_t>(e)];
      double v;
      if (c >= 1.0 - 1e-15) {
        v = m.support_min();
      } else if (c <= 1e-14) {
        v = v_cap_[static_cast<std::size_t>(e)];
      } else {
        v = m.upper_quantile(c);
      }
      s.v[static_cast<std::size_t>(e)] = v;
      value += m.premium(v) + c * v;
    }
    s.grad.assign(k_count, 0.0);
    s.max_violation = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      double sum_v = 0.0;
      for (const int e : sys_.subsets[k])
        sum_v += s.v[static_cast<std::size_t>(e - 1)];
      s.grad[k] = sum_v - x;
      value -= s.lambda[k] * x;
      s.max_violation = std::max(s.max_violation, s.grad[k]);
    }
    s.value = value;
  }

  const SubsetSystem& sys_;
  const SolverOptions& opts_;
  std::vector<std::vector<std::size_t>> covering_;
  std::vector<double> v_cap_;
};

}  // namespace

BoundCurve generic_bound(const SubsetSystem& system, std::span<const double> x_grid,
                         const SolverOptions& options) {
  system.validate();
  DualSolver solver(system, options);

  // locate x0, where the multiplier sum crosses 1 (slope -1)
  constexpr double kSlopeTol = 1e-6;
  std::vector<double> warm0;
  double lo = solver.infimum_floor() + 1e-9;
  double hi = lo + 1.0;
  while (solver.multiplier_sum(hi, warm0) >= 1.0 - kSlopeTol) hi = lo + 2.0 * (hi - lo);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (solver.multiplier_sum(mid, warm0) >= 1.0 - kSlopeTol ? lo : hi) = mid;
  }
  BoundCurve curve;
  curve.x0 = 0.5 * (lo + hi);
  const BoundPoint at_x0 = solver.solve(curve.x0);
  curve.bound_x0 = at_x0.bound;

  std::vector<double> warm = at_x0.lambda;
  for (const double x : x_grid) {
    if (x < curve.x0) {
      BoundPoint p = at_x0;
      p.x = x;
      p.bound = curve.bound_x0 + (curve.x0 - x);
      p.slope = -1.0;
      p.linear_extension = true;
      curve.points.push_back(std::move(p));
      continue;
    }
    BoundPoint p = solver.solve(x, warm);
    warm = p.lambda;
    curve.points.push_back(std::move(p));
  }
  return curve;
}

bool pointwise_chain_check(const SubsetSystem& system, std::span<const double> x_values,
                           std::span<const double> v, double x) {
  double max_sum = -kInf, max_clip = -kInf;
  for (const auto& subset : system.subsets) {
    double s = 0.0, c = 0.0;
    for (const int e : subset) {
      s += x_values[static_cast<std::size_t>(e - 1)];
      c += v[static_cast<std::size_t>(e - 1)];
    }
    max_sum = std::max(max_sum, s);
    max_clip = std::max(max_clip, c);
  }
  const double lhs = std::max(0.0, max_sum - x);
  double rhs = std::max(0.0, max_clip - x);
  for (int e = 0; e < system.n; ++e)
    rhs += std::max(0.0, x_values[static_cast<std::size_t>(e)] -
                             v[static_cast<std::size_t>(e)]);
  return lhs <= rhs + 1e-9;
}

}  // namespace lpp
