#include "lpplab/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace lpp {

namespace {

// Quantile of the conditional law below w_len, evaluated at survival level u:
// Q_{F_L^{(len)}}(u) = Q_F(1 - (1-u)(1 - 1/len)).
double left_section_quantile(const Marginal& f, int len, double u) {
  return f.upper_quantile(1.0 - (1.0 - u) * (1.0 - 1.0 / len));
}

LatticePath path_from_steps(const std::vector<char>& steps) {
  LatticePath p;
  int i = 1, j = 1;
  p.v.emplace_back(i, j);
  for (const char s : steps) {
    if (s == 'U') ++j; else ++i;
    p.v.emplace_back(i, j);
  }
  return p;
}

FlatWalk polya_walk(const LatticeSpec& spec, RngStream& rng) {
  const int n = spec.n;
  const int ordinal = 1 + rng.uniform_int(n);  // O_N, uniform on {1..N}
  std::vector<char> urn;
  urn.insert(urn.end(), ordinal - 1, 'U');
  urn.insert(urn.end(), n - ordinal, 'R');
  rng.shuffle(urn);
  std::reverse(urn.begin(), urn.end());  // balls read backwards give the steps
  return {WalkKind::Polya, path_from_steps(urn)};
}

std::vector<char> shuffled_urn(int ups, int rights, RngStream& rng) {
  std::vector<char> urn;
  urn.insert(urn.end(), ups, 'U');
  urn.insert(urn.end(), rights, 'R');
  rng.shuffle(urn);
  return urn;
}

// Rectangle walk for M >= (N+1)/2: uniform vertex on sub-diagonal A = N-M+1,
// vertical connection to sub-diagonal M, urn fillings toward both corners.
FlatWalk rectangle_walk_canonical(const LatticeSpec& spec, RngStream& rng) {
  const int n = spec.n, m = spec.m, a_len = n + 1 - m;
  const int a = 1 + rng.uniform_int(a_len);  // chosen vertex (a, A+1-a)
  auto lower = shuffled_urn(a_len - a, a - 1, rng);
  std::reverse(lower.begin(), lower.end());
  std::vector<char> steps = lower;
  steps.insert(steps.end(), m - a_len, 'U');
  auto upper = shuffled_urn(a - 1, a_len - a, rng);
  steps.insert(steps.end(), upper.begin(), upper.end());
  return {WalkKind::Rectangle, path_from_steps(steps)};
}

LatticePath transpose_path(const LatticePath& p) {
  LatticePath t = p;
  for (auto& [i, j] : t.v) std::swap(i, j);
  return t;
}

}  // namespace

FlatWalk sample_flat_walk(WalkKind kind, const LatticeSpec& spec, RngStream& rng) {
  switch (kind) {
    case WalkKind::NaturalComplete: {
      if (spec.kind != GraphKind::Complete)
        throw std::invalid_argument("natural-complete walk needs a complete lattice");
      FlatWalk w{kind, {}};
      for (int d = 1; d <= spec.n; ++d) {
        const int j = 1 + rng.uniform_int(d);
        w.path.v.emplace_back(d + 1 - j, j);
      }
      return w;
    }
    case WalkKind::NaturalPoint: {
      if (spec.kind != GraphKind::PointToPoint)
        throw std::invalid_argument("natural-point walk needs a point lattice");
      FlatWalk w{kind, {}};
      for (int d = 1; d <= spec.n; ++d) {
        const auto [jlo, jhi] = spec.diag_cols(d);
        const int j = jlo + rng.uniform_int(jhi - jlo + 1);
        w.path.v.emplace_back(d + 1 - j, j);
      }
      return w;
    }
    case WalkKind::Polya:
      if (spec.kind != GraphKind::Line)
        throw std::invalid_argument("polya walk needs a line lattice");
      return polya_walk(spec, rng);
    case WalkKind::Rectangle: {
      if (spec.kind != GraphKind::PointToPoint)
        throw std::invalid_argument("rectangle walk needs a point lattice");
      if (2 * spec.m >= spec.n + 1) return rectangle_walk_canonical(spec, rng);
      // transpose symmetry M <-> N+1-M
      LatticeSpec t = spec;
      t.m = spec.n + 1 - spec.m;
      FlatWalk w = rectangle_walk_canonical(t, rng);
      w.path = transpose_path(w.path);
      return w;
    }
  }
  throw std::logic_error("unreachable");
}

WeightField sample_iid(const MarginalPtr& m, const LatticeSpec& spec, RngStream& rng) {
  WeightField w(spec.n);
  for (int i = 1; i <= spec.n; ++i)
    for (int j = 1; j <= spec.n + 1 - i; ++j)
      w.at(i, j) = m->upper_quantile(rng.uniform());
  return w;
}

namespace {

// Fill the graph sites of each anti-diagonal: the site carried by `path`
// gets the right-conditional quantile at U, every other section site the
// left-conditional quantile.
FieldSample fill_from_path(const MarginalPtr& m, const LatticeSpec& spec,
                           const LatticePath& path, double u) {
  WeightField w(spec.n);
  for (int d = 1; d <= spec.n; ++d) {
    const int len = spec.diag_len(d);
    const auto [jlo, jhi] = spec.diag_cols(d);
    const auto [pi, pj] = path.v[static_cast<std::size_t>(d - 1)];
    const double right = m->upper_quantile(u / len);
    for (int j = jlo; j <= jhi; ++j) {
      const int i = d + 1 - j;
      if (i == pi && j == pj) {
        w.at(i, j) = right;
      } else {
        w.at(i, j) = left_section_quantile(*m, len, u);
      }
    }
  }
  return {std::move(w), path, u};
}

}  // namespace

FieldSample sample_flat_coupling(WalkKind kind, const MarginalPtr& m,
                                 const LatticeSpec& spec, RngStream& rng) {
  const FlatWalk walk = sample_flat_walk(kind, spec, rng);
  const double u = rng.uniform();
  return fill_from_path(m, spec, walk.path, u);
}

FieldSample sample_convex_max(const MarginalPtr& m, const LatticeSpec& spec,
                              RngStream& rng) {
  switch (spec.kind) {
    case GraphKind::Complete: {
      // Independent uniform picks per diagonal are enough on the complete
      // graph: every sequence of per-diagonal maxima is a C_N path.
      const FlatWalk walk = sample_flat_walk(WalkKind::NaturalComplete, spec, rng);
      const double u = rng.uniform();
      return fill_from_path(m, spec, walk.path, u);
    }
    case GraphKind::Line:
      return sample_flat_coupling(WalkKind::Polya, m, spec, rng);
    case GraphKind::PointToPoint:
      return sample_flat_coupling(WalkKind::Rectangle, m, spec, rng);
  }
  throw std::logic_error("unreachable");
}

WeightField sample_min_mean(const MarginalPtr& m, const LatticeSpec& spec,
                            const MixCopula& copula, RngStream& rng) {
  MixCopula c = copula;
  c.n = spec.n;
  const auto u = spec.n >= 2 ? sample_copula(c, rng)
                             : std::vector<double>{rng.uniform()};
  WeightField w(spec.n);
  for (int d = 1; d <= spec.n; ++d) {
    const double wd = m->upper_quantile(
        std::min(std::max(u[static_cast<std::size_t>(d - 1)], 1e-15), 1.0 - 1e-15));
    for (int j = 1; j <= d; ++j) w.at(d + 1 - j, j) = wd;
  }
  return w;
}

FieldSample sample_max_mean_mixed(const MarginalPtr& m, const LatticeSpec& spec,
                                  RngStream& rng) {
  if (m->family() != Family::Exponential)
    throw std::invalid_argument("maxmeanmixed: exponential marginals only");
  if (spec.kind != GraphKind::Complete)
    throw std::invalid_argument("maxmeanmixed: complete lattice only");
  if (spec.n < 2) throw std::invalid_argument("maxmeanmixed: need N >= 2");

  static std::mutex mu;
  static std::map<int, std::shared_ptr<const BlockSchemeExponential>> cache;
  std::shared_ptr<const BlockSchemeExponential> scheme;
  {
    std::scoped_lock lock(mu);
    auto& slot = cache[spec.n];
    if (!slot)
      slot = std::make_shared<BlockSchemeExponential>(
          BlockSchemeExponential::b_for_n(spec.n));
    scheme = slot;
  }
  const auto x = scheme->sample(rng);  // Exp(1), near-constant sum

  WeightField w(spec.n);
  LatticePath path;
  for (int d = 1; d <= spec.n; ++d) {
    const double ud = std::min(std::max(std::exp(-x[static_cast<std::size_t>(d - 1)]),
                                        1e-300), 1.0 - 1e-16);
    const int pick = 1 + rng.uniform_int(d);
    for (int j = 1; j <= d; ++j) {
      const int i = d + 1 - j;
      w.at(i, j) = j == pick ? m->upper_quantile(ud / d)
                             : left_section_quantile(*m, d, ud);
    }
    path.v.emplace_back(d + 1 - pick, pick);
  }
  return {std::move(w), std::move(path), 0.0};
}

std::vector<double> sample_maximally_dependent(const MarginalPtr& m, int n,
                                               RngStream& rng) {
  if (n < 1) throw std::invalid_argument("maximally dependent: need n >= 1");
  std::vector<double> x(n);
  if (n == 1) {
    x[0] = m->upper_quantile(rng.uniform());
    return x;
  }
  const int high = rng.uniform_int(n);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    x[static_cast<std::size_t>(i)] =
        i == high ? m->upper_quantile(u / n) : left_section_quantile(*m, n, u);
  }
  return x;
}

std::string CouplingSpec::describe() const {
  switch (name) {
    case Name::IID: return "iid";
    case Name::ConvexMax: return "convexmax";
    case Name::FlatWalk:
      switch (walk) {
        case WalkKind::NaturalComplete:
        case WalkKind::NaturalPoint: return "flat:natural";
        case WalkKind::Polya: return "flat:polya";
        case WalkKind::Rectangle: return "flat:rectangle";
      }
      break;
    case Name::MinMeanConstantDiagonal: return "minmean:" + copula_name(copula);
    case Name::MaxMeanMixed: return "maxmeanmixed";
  }
  throw std::logic_error("unreachable");
}

CouplingSpec parse_coupling(const std::string& text, MarginalPtr marginal,
                            const LatticeSpec& lattice) {
  CouplingSpec c;
  c.marginal = std::move(marginal);
  c.lattice = lattice;
  if (text == "iid") {
    c.name = CouplingSpec::Name::IID;
  } else if (text == "convexmax") {
    c.name = CouplingSpec::Name::ConvexMax;
  } else if (text == "maxmeanmixed") {
    c.name = CouplingSpec::Name::MaxMeanMixed;
    if (c.marginal->family() != Family::Exponential)
      throw std::invalid_argument("maxmeanmixed: exponential marginals only");
    if (lattice.kind != GraphKind::Complete)
      throw std::invalid_argument("maxmeanmixed: complete lattice only");
  } else if (text.rfind("flat:", 0) == 0) {
    c.name = CouplingSpec::Name::FlatWalk;
    const std::string kind = text.substr(5);
    if (kind == "polya") {
      c.walk = WalkKind::Polya;
    } else if (kind == "rectangle") {
      c.walk = WalkKind::Rectangle;
    } else if (kind == "natural") {
      c.walk = lattice.kind == GraphKind::PointToPoint ? WalkKind::NaturalPoint
                                                       : WalkKind::NaturalComplete;
    } else {
      throw std::invalid_argument("unknown flat walk kind: " + kind);
    }
  } else if (text.rfind("minmean:", 0) == 0) {
    c.name = CouplingSpec::Name::MinMeanConstantDiagonal;
    c.copula = parse_copula(text.substr(8));
  } else {
    throw std::invalid_argument("unknown coupling: " + text);
  }
  return c;
}

FieldSample sample_coupling(const CouplingSpec& spec, RngStream& rng) {
  switch (spec.name) {
    case CouplingSpec::Name::IID:
      return {sample_iid(spec.marginal, spec.lattice, rng), {}, 0.0};
    case CouplingSpec::Name::ConvexMax:
      return sample_convex_max(spec.marginal, spec.lattice, rng);
    case CouplingSpec::Name::FlatWalk:
      return sample_flat_coupling(spec.walk, spec.marginal, spec.lattice, rng);
    case CouplingSpec::Name::MinMeanConstantDiagonal: {
      MixCopula c;
      c.kind = spec.copula;
      return {sample_min_mean(spec.marginal, spec.lattice, c, rng), {}, 0.0};
    }
    case CouplingSpec::Name::MaxMeanMixed:
      return sample_max_mean_mixed(spec.marginal, spec.lattice, rng);
  }
  throw std::logic_error("unreachable");
}

namespace {

long long binom(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void reduce(long long& num, long long& den) {
  const long long g = std::gcd(num, den);
  num /= g;
  den /= g;
}

// All up/right step sequences of given length with the given up count.
std::vector<std::vector<char>> step_sequences(int length, int ups) {
  std::vector<std::vector<char>> out;
  std::vector<char> cur;
  auto rec = [&](auto&& self, int pos, int left_ups) -> void {
    if (pos == length) {
      if (left_ups == 0) out.push_back(cur);
      return;
    }
    if (left_ups > 0) {
      cur.push_back('U');
      self(self, pos + 1, left_ups - 1);
      cur.pop_back();
    }
    if (length - pos > left_ups) {
      cur.push_back('R');
      self(self, pos + 1, left_ups);
      cur.pop_back();
    }
  };
  rec(rec, 0, ups);
  return out;
}

}  // namespace

std::vector<WalkAtom> enumerate_flat_walk(WalkKind kind, const LatticeSpec& spec) {
  std::vector<WalkAtom> out;
  switch (kind) {
    case WalkKind::Polya: {
      if (spec.kind != GraphKind::Line)
        throw std::invalid_argument("polya walk needs a line lattice");
      const int n = spec.n;
      for (int ordinal = 1; ordinal <= n; ++ordinal) {
        const long long den = n * binom(n - 1, ordinal - 1);
        for (auto& seq : step_sequences(n - 1, ordinal - 1)) {
          long long num = 1, d = den;
          reduce(num, d);
          out.push_back({path_from_steps(seq), num, d});
        }
      }
      return out;
    }
    case WalkKind::Rectangle: {
      if (spec.kind != GraphKind::PointToPoint || 2 * spec.m < spec.n + 1)
        throw std::invalid_argument("rectangle enumeration needs point:N,M with M >= (N+1)/2");
      const int a_len = spec.n + 1 - spec.m;
      for (int a = 1; a <= a_len; ++a) {
        const long long den = static_cast<long long>(a_len) *
                              binom(a_len - 1, a - 1) * binom(a_len - 1, a - 1);
        for (auto& lower : step_sequences(a_len - 1, a_len - a)) {
          for (auto& upper : step_sequences(a_len - 1, a - 1)) {
            std::vector<char> steps = lower;
            steps.insert(steps.end(), spec.m - a_len, 'U');
            steps.insert(steps.end(), upper.begin(), upper.end());
            long long num = 1, d = den;
            reduce(num, d);
            out.push_back({path_from_steps(steps), num, d});
          }
        }
      }
      return out;
    }
    case WalkKind::NaturalComplete:
    case WalkKind::NaturalPoint: {
      long long den = 1;
      for (int d = 1; d <= spec.n; ++d) den *= spec.diag_len(d);
      std::vector<WalkAtom> acc;
      LatticePath cur;
      auto rec = [&](auto&& self, int d) -> void {
        if (d > spec.n) {
          acc.push_back({cur, 1, den});
          return;
        }
        const auto [jlo, jhi] = spec.diag_cols(d);
        for (int j = jlo; j <= jhi; ++j) {
          cur.v.emplace_back(d + 1 - j, j);
          self(self, d + 1);
          cur.v.pop_back();
        }
      };
      rec(rec, 1);
      return acc;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace lpp
