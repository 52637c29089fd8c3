#include "lpplab/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace lpp {

CopulaKind parse_copula(const std::string& name) {
  if (name == "independent") return CopulaKind::Independent;
  if (name == "comonotone") return CopulaKind::Comonotone;
  if (name == "antithetic") return CopulaKind::AntitheticPairs;
  if (name == "gaussian") return CopulaKind::GaussianExchangeable;
  if (name == "mixable") return CopulaKind::MixableBlock;
  if (name == "balancer") return CopulaKind::QuantileBalancer;
  throw std::invalid_argument("unknown copula: " + name);
}

std::string copula_name(CopulaKind kind) {
  switch (kind) {
    case CopulaKind::Independent: return "independent";
    case CopulaKind::Comonotone: return "comonotone";
    case CopulaKind::AntitheticPairs: return "antithetic";
    case CopulaKind::GaussianExchangeable: return "gaussian";
    case CopulaKind::MixableBlock: return "mixable";
    case CopulaKind::QuantileBalancer: return "balancer";
  }
  throw std::logic_error("unreachable");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

namespace {

struct AtomStats {
  double mu, var;
};

// Moments of one equiprobable atom {F(W) in (p_lo, p_hi)}. The mean comes
// exactly from the premium identity int_a^b Q(u) du = G(b) - G(a) with
// G(u) = H(Q(u)) + u Q(u); the second moment by midpoint quadrature after
// the substitution u = a + (b-a) s^4 that tames the upper-tail singularity.
AtomStats atom_stats(const Marginal& f, double p_lo, double p_hi) {
  const double a = std::max(1.0 - p_hi, 1e-15);
  const double b = std::max(1.0 - p_lo, 2e-15);
  const double scale = 1.0 / (p_hi - p_lo);
  auto g = [&](double u) {
    const double q = f.upper_quantile(std::min(u, 1.0 - 1e-15));
    return f.premium(q) + u * q;
  };
  const double mu = scale * (g(b) - g(a));
  const int steps = 64;
  const double h = 1.0 / steps;
  double acc = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double s = (k + 0.5) * h;
    const double s3 = s * s * s;
    const double u = a + (b - a) * s3 * s;
    const double q = f.upper_quantile(std::min(u, 1.0 - 1e-15));
    acc += q * q * 4.0 * s3;
  }
  const double m2 = scale * (b - a) * acc * h;
  return {mu, std::max(0.0, m2 - mu * mu)};
}

std::vector<double> gaussian_exchangeable(int n, RngStream& rng) {
  std::vector<double> z(n);
  double q = 0.0;
  for (auto& zi : z) {
    zi = rng.normal();
    q += zi;
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n) * (n - 1));
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = normal_cdf((n * z[i] - q) * scale);
  return u;
}

}  // namespace

QuantileBalancer::QuantileBalancer(MarginalPtr marginal, int atoms, int n)
    : marginal_(std::move(marginal)), atoms_(atoms), n_(n) {
  if (n_ < 2) throw std::invalid_argument("balancer: need n >= 2");
  if (atoms_ < n_) throw std::invalid_argument("balancer: need atoms >= n");
  const int m = atoms_;

  // Atom means and within-atom variances.
  std::vector<double> mu(m), var(m);
  for (int i = 0; i < m; ++i) {
    const auto st = atom_stats(*marginal_, static_cast<double>(i) / m,
                               static_cast<double>(i + 1) / m);
    mu[i] = st.mu;
    var[i] = st.var;
  }

  // Rearrangement: start from alternating identity / reversal columns, then
  // repeatedly re-match each column counter-monotonically against the sum of
  // the others until the arrangement is stable. This flattens the row sums
  // of atom means for arbitrary (not just symmetric) marginals.
  assign_.assign(static_cast<std::size_t>(m) * n_, 0);
  auto col = [&](int j) { return assign_.begin() + static_cast<std::ptrdiff_t>(j) * m; };
  for (int j = 0; j < n_; ++j)
    for (int r = 0; r < m; ++r) col(j)[r] = j % 2 == 0 ? r : m - 1 - r;
  std::vector<double> rowsum(m, 0.0);
  for (int j = 0; j < n_; ++j)
    for (int r = 0; r < m; ++r) rowsum[r] += mu[col(j)[r]];
  std::vector<int> order(static_cast<std::size_t>(m));
  for (int pass = 0; pass < 200; ++pass) {
    bool changed = false;
    for (int j = 0; j < n_; ++j) {
      for (int r = 0; r < m; ++r) rowsum[r] -= mu[col(j)[r]];
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return rowsum[a] > rowsum[b] || (rowsum[a] == rowsum[b] && a < b);
      });
      // largest complement row gets the smallest atom
      for (int rank = 0; rank < m; ++rank) {
        const int r = order[static_cast<std::size_t>(rank)];
        if (col(j)[r] != rank) {
          col(j)[r] = rank;
          changed = true;
        }
      }
      for (int r = 0; r < m; ++r) rowsum[r] += mu[col(j)[r]];
    }
    if (!changed) break;
  }

  const double target =
      std::accumulate(rowsum.begin(), rowsum.end(), 0.0) / m;
  double acc = 0.0;
  for (const double s : rowsum) {
    acc += (s - target) * (s - target);
    max_row_deviation_ = std::max(max_row_deviation_, std::abs(s - target));
  }
  double within = 0.0;
  for (const double v : var) within += v;
  residual_variance_ = acc / m + n_ * within / m;
}

std::vector<double> QuantileBalancer::sample(RngStream& rng) const {
  const int m = atoms_;
  const int r = rng.uniform_int(m);
  std::vector<double> out(n_);
  for (int j = 0; j < n_; ++j) {
    const int atom = assign_[static_cast<std::size_t>(j) * m + r];
    const double p = (atom + rng.uniform()) / m;
    out[j] = marginal_->upper_quantile(
        std::min(std::max(1.0 - p, 1e-15), 1.0 - 1e-15));
  }
  return out;
}

std::vector<double> mixable_sum_uniform(int n, RngStream& rng, int atoms) {
  if (n < 2) throw std::invalid_argument("mixable_sum_uniform: need n >= 2");
  if (n % 2 == 0) {
    std::vector<double> out(n);
    for (int i = 0; i < n; i += 2) {
      const double u = rng.uniform();
      out[i] = u;
      out[i + 1] = 1.0 - u;
    }
    return out;
  }
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const QuantileBalancer>> cache;
  std::shared_ptr<const QuantileBalancer> bal;
  {
    std::scoped_lock lock(mu);
    auto& slot = cache[{n, atoms}];
    if (!slot) slot = std::make_shared<QuantileBalancer>(make_uniform(), atoms, n);
    bal = slot;
  }
  return bal->sample(rng);
}

BlockSchemeExponential::BlockSchemeExponential(double b, int atoms, int depth_cap)
    : b_(b),
      depth_cap_(depth_cap),
      balancer_(conditional_left(make_exponential(1.0), b), atoms, [&] {
        const double m = (1.0 - (1.0 + b) * std::exp(-b)) / (1.0 - std::exp(-b));
        return std::max(2, static_cast<int>(std::lround(b / m)));
      }()) {
  if (!(b > 0)) throw std::invalid_argument("block scheme: b must be > 0");
}

std::vector<double> BlockSchemeExponential::sample(RngStream& rng) const {
  const double p_high = std::exp(-b_);
  double shift = 0.0;
  int depth = 0;
  while (rng.uniform() < p_high) {
    shift += b_;
    if (++depth > depth_cap_)
      throw std::runtime_error("block scheme: recursion depth cap breached");
  }
  auto w = balancer_.sample(rng);
  for (auto& wi : w) wi += shift;
  return w;
}

double BlockSchemeExponential::b_for_n(int n) {
  if (n < 2) throw std::invalid_argument("b_for_n: need n >= 2");
  // b / E[W|W<b] is increasing in b; bisect.
  auto ratio = [](double b) {
    const double m = (1.0 - (1.0 + b) * std::exp(-b)) / (1.0 - std::exp(-b));
    return b / m;
  };
  double lo = 1e-3, hi = 2.0 * n + 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ratio(mid) < n ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double variance_law(const Marginal& f, double b, int n) {
  const double p = f.survival(b);
  const double mean_above = b + f.mean_residual(b);
  const double mean_below = (f.mean() - p * mean_above) / (1.0 - p);
  const double delta = mean_above - mean_below;
  return static_cast<double>(n) * n * p * delta * delta;
}

std::pair<double, double> min_variance_pair(const Marginal& f, RngStream& rng) {
  const double u = rng.uniform();
  return {f.upper_quantile(u), f.upper_quantile(1.0 - u)};
}

std::vector<double> sample_copula(const MixCopula& c, RngStream& rng) {
  const int n = c.n;
  if (n < 2 && c.kind != CopulaKind::Independent && c.kind != CopulaKind::Comonotone)
    throw std::invalid_argument("copula: need n >= 2");
  switch (c.kind) {
    case CopulaKind::Independent: {
      std::vector<double> u(n);
      for (auto& ui : u) ui = rng.uniform();
      return u;
    }
    case CopulaKind::Comonotone:
      return std::vector<double>(n, rng.uniform());
    case CopulaKind::AntitheticPairs: {
      std::vector<double> u;
      u.reserve(n);
      int i = 0;
      if (n % 2 == 1) {
        u = gaussian_exchangeable(3, rng);
        i = 3;
      }
      for (; i < n; i += 2) {
        const double v = rng.uniform();
        u.push_back(v);
        u.push_back(1.0 - v);
      }
      return u;
    }
    case CopulaKind::GaussianExchangeable:
      return gaussian_exchangeable(n, rng);
    case CopulaKind::MixableBlock: {
      static std::mutex mu;
      static std::map<std::pair<double, int>,
                      std::shared_ptr<const BlockSchemeExponential>> cache;
      const double b = c.block_b > 0 ? c.block_b
                                     : BlockSchemeExponential::b_for_n(n);
      std::shared_ptr<const BlockSchemeExponential> scheme;
      {
        std::scoped_lock lock(mu);
        auto& slot = cache[{b, c.atoms}];
        if (!slot) slot = std::make_shared<BlockSchemeExponential>(b, c.atoms);
        scheme = slot;
      }
      if (scheme->n() != n)
        throw std::invalid_argument("mixable copula: block threshold b induces N=" +
                                    std::to_string(scheme->n()) +
                                    ", not the requested " + std::to_string(n));
      auto x = scheme->sample(rng);
      std::vector<double> u(n);
      for (int i = 0; i < n; ++i) u[i] = std::exp(-x[i]);
      return u;
    }
    case CopulaKind::QuantileBalancer:
      return mixable_sum_uniform(n, rng, c.atoms);
  }
  throw std::logic_error("unreachable");
}

}  // namespace lpp
