#include "lpplab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpp {

EmpiricalSample::EmpiricalSample(std::vector<double> values, std::uint64_t seed,
                                 std::string provenance)
    : values_(std::move(values)), seed_(seed), provenance_(std::move(provenance)) {
  if (values_.size() < 2)
    throw std::invalid_argument("empirical sample: need at least 2 values");
  std::sort(values_.begin(), values_.end());
}

double EmpiricalSample::survival(double x) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(values_.end() - it) / values_.size();
}

double EmpiricalSample::quantile(double p) const {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::domain_error("sample quantile: p must lie in (0,1)");
  const auto n = values_.size();
  const double pos = p * (n - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const double frac = pos - lo;
  if (lo + 1 >= n) return values_.back();
  return values_[lo] * (1.0 - frac) + values_[lo + 1] * frac;
}

std::vector<double> pooled_quantile_grid(std::span<const EmpiricalSample* const> samples,
                                         int levels) {
  std::vector<double> pooled;
  for (const auto* s : samples)
    pooled.insert(pooled.end(), s->values().begin(), s->values().end());
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(levels));
  const auto n = pooled.size();
  for (int k = 1; k <= levels; ++k) {
    const double pos = static_cast<double>(k) / (levels + 1) * (n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - lo;
    grid.push_back(lo + 1 >= n ? pooled.back()
                               : pooled[lo] * (1.0 - frac) + pooled[lo + 1] * frac);
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<double> pooled_quantile_grid(const EmpiricalSample& a,
                                         const EmpiricalSample& b, int levels) {
  const EmpiricalSample* both[2] = {&a, &b};
  return pooled_quantile_grid(std::span<const EmpiricalSample* const>(both, 2), levels);
}

PremiumCurve empirical_premium(const EmpiricalSample& s, std::span<const double> grid) {
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("premium grid must be sorted");
  PremiumCurve out;
  out.x.assign(grid.begin(), grid.end());
  const auto& v = s.values();
  const auto n = v.size();
  // suffix sums over the sorted sample give each H(x) in O(log n)
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + v[i];
  for (const double x : grid) {
    const auto it = std::upper_bound(v.begin(), v.end(), x);
    const auto i = static_cast<std::size_t>(it - v.begin());
    const double tail = static_cast<double>(n - i);
    const double h = (suffix[i] - tail * x) / n;
    // second moment of (v-x)^+ for the standard-error of the mean
    double m2 = 0.0;
    for (std::size_t k = i; k < n; ++k) {
      const double e = v[k] - x;
      m2 += e * e;
    }
    m2 /= n;
    const double var = std::max(0.0, m2 - h * h);
    out.h.push_back(h);
    out.se.push_back(std::sqrt(var / n));
  }
  return out;
}

PremiumCurve analytic_premium(const Marginal& law, std::span<const double> grid) {
  PremiumCurve out;
  out.x.assign(grid.begin(), grid.end());
  for (const double x : grid) {
    out.h.push_back(law.premium(x));
    out.se.push_back(0.0);
  }
  return out;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Dominates: return "dominates";
    case Verdict::Dominated: return "dominated";
    case Verdict::Crossing: return "crossing";
    case Verdict::Inconclusive: return "inconclusive";
  }
  throw std::logic_error("unreachable");
}

namespace {

VerdictReport compare_curves(const std::vector<double>& x, const std::vector<double>& ha,
                             const std::vector<double>& sea, const std::vector<double>& hb,
                             const std::vector<double>& seb, double slack) {
  VerdictReport rep;
  bool sig_above = false, sig_below = false;
  bool raw_above = true, raw_below = true;  // a >= b resp. b >= a pointwise
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double se = std::sqrt(sea[i] * sea[i] + seb[i] * seb[i]);
    const double diff = ha[i] - hb[i];
    const double margin = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : diff / 1e-300);
    rep.rows.push_back({x[i], ha[i], sea[i], hb[i], seb[i], margin});
    if (margin > slack) sig_above = true;
    if (margin < -slack) sig_below = true;
    if (diff < -1e-12) raw_above = false;
    if (diff > 1e-12) raw_below = false;
    if (margin < worst) {
      worst = margin;
      rep.worst_x = x[i];
      rep.worst_margin = margin;
    }
  }
  if (sig_above && sig_below) rep.verdict = Verdict::Crossing;
  else if (sig_above) rep.verdict = Verdict::Dominates;
  else if (sig_below) rep.verdict = Verdict::Dominated;
  else if (raw_above) rep.verdict = Verdict::Dominates;
  else if (raw_below) rep.verdict = Verdict::Dominated;
  else rep.verdict = Verdict::Inconclusive;
  return rep;
}

}  // namespace

VerdictReport convex_dominates(const PremiumCurve& a, const PremiumCurve& b,
                               double slack_in_se) {
  if (a.x.size() != b.x.size())
    throw std::invalid_argument("convex_dominates: grids differ in size");
  for (std::size_t i = 0; i < a.x.size(); ++i)
    if (std::abs(a.x[i] - b.x[i]) > 1e-12)
      throw std::invalid_argument("convex_dominates: grids differ");
  return compare_curves(a.x, a.h, a.se, b.h, b.se, slack_in_se);
}

VerdictReport stochastic_dominates(const EmpiricalSample& a, const EmpiricalSample& b,
                                   double slack_in_se) {
  const auto grid = pooled_quantile_grid(a, b);
  std::vector<double> sa, ea, sb, eb;
  auto push = [](const EmpiricalSample& s, double x, std::vector<double>& p,
                 std::vector<double>& se) {
    const double v = s.survival(x);
    p.push_back(v);
    se.push_back(std::sqrt(v * (1.0 - v) / s.count()));
  };
  for (const double x : grid) {
    push(a, x, sa, ea);
    push(b, x, sb, eb);
  }
  return compare_curves(grid, sa, ea, sb, eb, slack_in_se);
}

double ks_distance(const EmpiricalSample& s, const Marginal& law) {
  const auto& v = s.values();
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = law.cdf(v[i]);
    d = std::max(d, std::max(std::abs((i + 1) / n - f), std::abs(i / n - f)));
  }
  return d;
}

double ks_distance_two_sample(const EmpiricalSample& a, const EmpiricalSample& b) {
  const auto& va = a.values();
  const auto& vb = b.values();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < va.size() && j < vb.size()) {
    const double x = std::min(va[i], vb[j]);
    while (i < va.size() && va[i] <= x) ++i;
    while (j < vb.size() && vb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / va.size() -
                             static_cast<double>(j) / vb.size()));
  }
  return d;
}

double ks_critical(int n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

double ks_critical_two_sample(int n, int m) {
  return 1.628 * std::sqrt((static_cast<double>(n) + m) / (static_cast<double>(n) * m));
}

MomentSummary moment_summary(const EmpiricalSample& s) {
  MomentSummary out;
  const auto& v = s.values();
  const int n = static_cast<int>(v.size());
  out.n = n;
  double sum = 0.0;
  for (const double x : v) sum += x;
  out.mean = sum / n;
  double ss = 0.0, s4 = 0.0;
  for (const double x : v) {
    const double d = x - out.mean;
    ss += d * d;
    s4 += d * d * d * d;
  }
  out.variance = ss / (n - 1);
  out.se_mean = std::sqrt(out.variance / n);
  // jackknife over leave-one-out variances, in closed form
  const double q = ss;  // sum of squared deviations
  if (n > 2) {
    std::vector<double> theta(static_cast<std::size_t>(n));
    double tbar = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = v[static_cast<std::size_t>(i)] - out.mean;
      const double ss_i = q - d * d * n / (n - 1.0);
      theta[static_cast<std::size_t>(i)] = ss_i / (n - 2.0);
      tbar += theta[static_cast<std::size_t>(i)];
    }
    tbar /= n;
    double acc = 0.0;
    for (const double t : theta) acc += (t - tbar) * (t - tbar);
    out.se_variance = std::sqrt((n - 1.0) / n * acc);
  }
  return out;
}

}  // namespace lpp
