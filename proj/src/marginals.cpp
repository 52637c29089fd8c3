#include "lpplab/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 32-point Gauss-Legendre nodes/weights on (0,1), for moments via Q(u).
struct GaussLegendre {
  std::vector<double> node, weight;
  GaussLegendre() {
    constexpr int n = 32;
    node.resize(n);
    weight.resize(n);
    for (int i = 0; i < n; ++i) {
      // Newton iteration from the Chebyshev initial guess, on [-1,1].
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      node[i] = 0.5 * (x + 1.0);
      weight[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre& gl32() {
  static const GaussLegendre g;
  return g;
}

class Exponential final : public Marginal {
 public:
  explicit Exponential(double theta) : theta_(theta) {
    if (!(theta > 0)) throw std::invalid_argument("exponential: theta must be > 0");
  }
  Family family() const override { return Family::Exponential; }
  double cdf(double x) const override { return x <= 0 ? 0.0 : -std::expm1(-theta_ * x); }
  double survival(double x) const override { return x <= 0 ? 1.0 : std::exp(-theta_ * x); }
  double upper_quantile_impl(double u) const override { return -std::log(u) / theta_; }
  double premium(double x) const override {
    if (x < 0) return 1.0 / theta_ - x;
    return survival(x) / theta_;
  }
  double support_min() const override { return 0.0; }
  double support_max() const override { return kInf; }
  double variance() const override { return 1.0 / (theta_ * theta_); }
  std::optional<MemorylessParams> memoryless() const override {
    return MemorylessParams{0.0, theta_};
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "exp:theta=" << theta_;
    return os.str();
  }

 private:
  double theta_;
};

class UniformBeta final : public Marginal {
 public:
  UniformBeta(double abs_c, double beta) : c_(abs_c), beta_(beta) {
    if (!(abs_c > 0) || !(beta > 0))
      throw std::invalid_argument("beta family: need |c| > 0 and beta > 0");
  }
  Family family() const override { return Family::UniformBeta; }
  double survival(double x) const override {
    if (x <= 0) return 1.0;
    if (x >= 1.0 / c_) return 0.0;
    return std::pow(1.0 - c_ * x, beta_);
  }
  double cdf(double x) const override { return 1.0 - survival(x); }
  double upper_quantile_impl(double u) const override {
    return (1.0 - std::pow(u, 1.0 / beta_)) / c_;
  }
  double premium(double x) const override {
    if (x >= 1.0 / c_) return 0.0;
    if (x < 0) return mean_() - x;
    return std::pow(1.0 - c_ * x, beta_ + 1.0) / (c_ * (beta_ + 1.0));
  }
  double support_min() const override { return 0.0; }
  double support_max() const override { return 1.0 / c_; }
  double variance() const override {
    // (1 - V^{1/beta})/c with V uniform: Beta(1, beta)/c moments.
    const double m1 = 1.0 / (beta_ + 1.0);
    const double m2 = 2.0 / ((beta_ + 1.0) * (beta_ + 2.0));
    return (m2 - m1 * m1) / (c_ * c_);
  }
  std::optional<MemorylessParams> memoryless() const override {
    return MemorylessParams{-c_, beta_};
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "beta:c=" << c_ << ",beta=" << beta_;
    return os.str();
  }

 private:
  double mean_() const { return 1.0 / (c_ * (beta_ + 1.0)); }
  double c_, beta_;
};

class Pareto final : public Marginal {
 public:
  Pareto(double alpha, double c) : alpha_(alpha), c_(c) {
    if (!(alpha > 1)) throw std::invalid_argument("pareto: alpha must be > 1 for a finite mean");
    if (!(c > 0)) throw std::invalid_argument("pareto: c must be > 0");
  }
  Family family() const override { return Family::Pareto; }
  double survival(double x) const override {
    return x <= 0 ? 1.0 : std::pow(1.0 + c_ * x, -alpha_);
  }
  double cdf(double x) const override { return 1.0 - survival(x); }
  double upper_quantile_impl(double u) const override {
    return (std::pow(u, -1.0 / alpha_) - 1.0) / c_;
  }
  double premium(double x) const override {
    if (x < 0) return mean_() - x;
    return std::pow(1.0 + c_ * x, 1.0 - alpha_) / (c_ * (alpha_ - 1.0));
  }
  double support_min() const override { return 0.0; }
  double support_max() const override { return kInf; }
  double variance() const override {
    if (alpha_ <= 2) return kInf;
    const double m1 = 1.0 / (c_ * (alpha_ - 1.0));
    const double m2 = 2.0 / (c_ * c_ * (alpha_ - 1.0) * (alpha_ - 2.0));
    return m2 - m1 * m1;
  }
  std::optional<MemorylessParams> memoryless() const override {
    return MemorylessParams{c_, alpha_};
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "pareto:alpha=" << alpha_ << ",c=" << c_;
    return os.str();
  }

 private:
  double mean_() const { return 1.0 / (c_ * (alpha_ - 1.0)); }
  double alpha_, c_;
};

// Survival t^(-alpha) on (1, inf). The classical Pareto; not additive
// memoryless (its structure is multiplicative), so memoryless() is empty.
class ParetoShifted final : public Marginal {
 public:
  explicit ParetoShifted(double alpha) : alpha_(alpha) {
    if (!(alpha > 1)) throw std::invalid_argument("pareto1: alpha must be > 1");
  }
  Family family() const override { return Family::ParetoShifted; }
  double survival(double x) const override {
    return x <= 1 ? 1.0 : std::pow(x, -alpha_);
  }
  double cdf(double x) const override { return 1.0 - survival(x); }
  double upper_quantile_impl(double u) const override { return std::pow(u, -1.0 / alpha_); }
  double premium(double x) const override {
    if (x <= 1) return alpha_ / (alpha_ - 1.0) - x;
    return std::pow(x, 1.0 - alpha_) / (alpha_ - 1.0);
  }
  double support_min() const override { return 1.0; }
  double support_max() const override { return kInf; }
  double variance() const override {
    if (alpha_ <= 2) return kInf;
    const double m1 = alpha_ / (alpha_ - 1.0);
    const double m2 = alpha_ / (alpha_ - 2.0);
    return m2 - m1 * m1;
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "pareto1:alpha=" << alpha_;
    return os.str();
  }

 private:
  double alpha_;
};

class Empirical final : public Marginal {
 public:
  explicit Empirical(std::vector<double> sorted) : v_(std::move(sorted)) {
    if (v_.size() < 2) throw std::invalid_argument("empirical: need at least 2 values");
    if (!std::is_sorted(v_.begin(), v_.end()))
      throw std::invalid_argument("empirical: values must be sorted");
  }
  Family family() const override { return Family::Empirical; }
  double cdf(double x) const override {
    const auto it = std::upper_bound(v_.begin(), v_.end(), x);
    return static_cast<double>(it - v_.begin()) / static_cast<double>(v_.size());
  }
  // Right-continuous inverse with midpoint tie handling.
  double upper_quantile_impl(double u) const override {
    const auto n = static_cast<double>(v_.size());
    const double pos = (1.0 - u) * n;
    auto k = static_cast<std::size_t>(pos);
    if (k >= v_.size()) k = v_.size() - 1;
    if (k > 0 && pos == std::floor(pos)) {
      return 0.5 * (v_[k - 1] + v_[k]);
    }
    return v_[k];
  }
  double premium(double x) const override {
    double s = 0.0;
    for (auto it = std::upper_bound(v_.begin(), v_.end(), x); it != v_.end(); ++it)
      s += *it - x;
    return s / static_cast<double>(v_.size());
  }
  double support_min() const override { return v_.front(); }
  double support_max() const override { return v_.back(); }
  std::string describe() const override {
    std::ostringstream os;
    os << "empirical:n=" << v_.size();
    return os.str();
  }

 private:
  std::vector<double> v_;
};

class ConditionalRight final : public Marginal {
 public:
  ConditionalRight(MarginalPtr base, int n)
      : base_(std::move(base)), n_(n), wn_(base_->upper_quantile(1.0 / n)) {}
  Family family() const override { return Family::Derived; }
  double survival(double x) const override {
    return std::min(1.0, n_ * base_->survival(x));
  }
  double cdf(double x) const override { return 1.0 - survival(x); }
  double upper_quantile_impl(double u) const override {
    return base_->upper_quantile(u / n_);
  }
  double premium(double x) const override {
    if (x >= wn_) return n_ * base_->premium(x);
    return wn_ + n_ * base_->premium(wn_) - x;
  }
  double support_min() const override { return wn_; }
  double support_max() const override { return base_->support_max(); }
  std::string describe() const override {
    std::ostringstream os;
    os << base_->describe() << "|right:" << n_;
    return os.str();
  }

 private:
  MarginalPtr base_;
  double n_;
  double wn_;
};

class ConditionalLeft final : public Marginal {
 public:
  ConditionalLeft(MarginalPtr base, double v)
      : base_(std::move(base)), v_(v), fv_(base_->cdf(v)) {}
  Family family() const override { return Family::Derived; }
  double cdf(double x) const override {
    return std::min(1.0, base_->cdf(x) / fv_);
  }
  double upper_quantile_impl(double u) const override {
    // guard against 1 - (1-u) F(v) rounding up to exactly 1
    const double s = 1.0 - (1.0 - u) * fv_;
    if (s >= 1.0) return base_->support_min();
    return base_->upper_quantile(s);
  }
  double premium(double x) const override {
    if (x >= v_) return 0.0;
    if (x < base_->support_min()) return premium(base_->support_min()) + (base_->support_min() - x);
    // integral of (1 - F/F(v)) over [x, v]
    return (base_->premium(x) - base_->premium(v_) -
            (1.0 - fv_) * (v_ - x)) / fv_;
  }
  double support_min() const override { return base_->support_min(); }
  double support_max() const override { return v_; }
  std::string describe() const override {
    std::ostringstream os;
    os << base_->describe() << "|left@" << v_;
    return os.str();
  }

 private:
  MarginalPtr base_;
  double v_, fv_;
};

}  // namespace

double Marginal::upper_quantile(double u) const {
  if (!(u > 0.0) || !(u < 1.0))
    throw std::domain_error("upper_quantile: u must lie in (0,1)");
  return upper_quantile_impl(u);
}

double Marginal::variance() const {
  const auto& g = gl32();
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < g.node.size(); ++i) {
    const double q = upper_quantile(g.node[i]);
    m1 += g.weight[i] * q;
    m2 += g.weight[i] * q * q;
  }
  return m2 - m1 * m1;
}

double Marginal::mean_residual(double x) const {
  const double s = survival(x);
  if (!(s > 0)) throw std::domain_error("mean_residual: survival is zero at x");
  return premium(x) / s;
}

MarginalPtr make_exponential(double theta) {
  return std::make_shared<Exponential>(theta);
}
MarginalPtr make_uniform() { return std::make_shared<UniformBeta>(1.0, 1.0); }
MarginalPtr make_uniform_beta(double abs_c, double beta) {
  return std::make_shared<UniformBeta>(abs_c, beta);
}
MarginalPtr make_pareto(double alpha, double c) {
  return std::make_shared<Pareto>(alpha, c);
}
MarginalPtr make_pareto_shifted(double alpha) {
  return std::make_shared<ParetoShifted>(alpha);
}
MarginalPtr make_empirical(std::vector<double> sorted_values) {
  return std::make_shared<Empirical>(std::move(sorted_values));
}

MarginalPtr conditional_right(MarginalPtr m, int n) {
  if (n < 1) throw std::invalid_argument("conditional_right: n must be >= 1");
  if (n == 1) return m;
  return std::make_shared<ConditionalRight>(std::move(m), n);
}

MarginalPtr conditional_left(MarginalPtr m, double v) {
  if (!(v > m->support_min()) || !(v < m->support_max()))
    throw std::invalid_argument("conditional_left: v must be inside the open support");
  return std::make_shared<ConditionalLeft>(std::move(m), v);
}

MarginalPtr conditional_left_at(MarginalPtr m, int n) {
  if (n < 1) throw std::invalid_argument("conditional_left_at: n must be >= 1");
  const double wn = m->upper_quantile(1.0 / n);
  return std::make_shared<ConditionalLeft>(std::move(m), wn);
}

double verify_memoryless_identity(
    const Marginal& m, std::span<const std::pair<double, double>> grid) {
  const auto params = m.memoryless();
  if (!params)
    throw std::invalid_argument("verify_memoryless_identity: not a memoryless-up-to-scaling family");
  const double c = params->c;
  double worst = 0.0;
  for (const auto& [x, s] : grid) {
    const double lhs = m.survival(x + s + c * x * s);
    const double rhs = m.survival(x) * m.survival(s);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

namespace {

std::vector<std::pair<std::string, double>> parse_params(const std::string& text) {
  std::vector<std::pair<std::string, double>> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("marginal parameter must be key=value: " + item);
    out.emplace_back(item.substr(0, eq), std::stod(item.substr(eq + 1)));
  }
  return out;
}

double get_param(const std::vector<std::pair<std::string, double>>& ps,
                 const std::string& key, double fallback) {
  for (const auto& [k, v] : ps)
    if (k == key) return v;
  return fallback;
}

}  // namespace

MarginalPtr parse_marginal(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const auto ps = colon == std::string::npos
                      ? std::vector<std::pair<std::string, double>>{}
                      : parse_params(text.substr(colon + 1));
  if (name == "exp") return make_exponential(get_param(ps, "theta", 1.0));
  if (name == "unif") return make_uniform();
  if (name == "beta")
    return make_uniform_beta(std::abs(get_param(ps, "c", 1.0)),
                             get_param(ps, "beta", 1.0));
  if (name == "pareto")
    return make_pareto(get_param(ps, "alpha", 2.0), get_param(ps, "c", 1.0));
  if (name == "pareto1") return make_pareto_shifted(get_param(ps, "alpha", 2.0));
  throw std::invalid_argument("unknown marginal family: " + name);
}

}  // namespace lpp
