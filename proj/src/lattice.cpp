#include "lpplab/lattice.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lpp {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

int LatticeSpec::diag_len(int d) const {
  if (kind == GraphKind::PointToPoint) {
    const int a = n + 1 - m;
    return std::min(std::min(d, n + 1 - d), std::min(a, m));
  }
  return d;
}

std::pair<int, int> LatticeSpec::diag_cols(int d) const {
  int i_max = n, j_max = n;
  if (kind == GraphKind::PointToPoint) {
    i_max = n + 1 - m;
    j_max = m;
  }
  return {std::max(1, d + 1 - i_max), std::min(j_max, d)};
}

bool LatticeSpec::contains(int i, int j) const {
  if (i < 1 || j < 1 || i + j > n + 1) return false;
  if (kind == GraphKind::PointToPoint) return i <= n + 1 - m && j <= m;
  return true;
}

std::string LatticeSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case GraphKind::Complete: os << "complete:" << n; break;
    case GraphKind::Line: os << "line:" << n; break;
    case GraphKind::PointToPoint: os << "point:" << n << "," << m; break;
  }
  return os.str();
}

LatticeSpec parse_lattice(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("lattice must be kind:N or point:N,M: " + text);
  const std::string name = text.substr(0, colon);
  LatticeSpec spec;
  if (name == "complete") {
    spec.kind = GraphKind::Complete;
  } else if (name == "line") {
    spec.kind = GraphKind::Line;
  } else if (name == "point") {
    spec.kind = GraphKind::PointToPoint;
  } else {
    throw std::invalid_argument("unknown lattice kind: " + name);
  }
  std::istringstream is(text.substr(colon + 1));
  char comma = 0;
  if (!(is >> spec.n)) throw std::invalid_argument("bad lattice size: " + text);
  if (spec.kind == GraphKind::PointToPoint) {
    if (!(is >> comma >> spec.m) || comma != ',')
      throw std::invalid_argument("point lattice needs point:N,M: " + text);
    if (spec.m < 1 || spec.m > spec.n)
      throw std::invalid_argument("point lattice needs 1 <= M <= N");
  } else {
    spec.m = spec.n;
  }
  if (spec.n < 1) throw std::invalid_argument("lattice needs N >= 1");
  return spec;
}

void WeightField::write_csv(std::ostream& os) const {
  os << "i,j,w\n";
  char buf[40];
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_ + 1 - i; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", at(i, j));
      os << i << "," << j << "," << buf << "\n";
    }
}

WeightField WeightField::read_csv(std::istream& is) {
  std::string line;
  std::getline(is, line);  // header
  struct Row { int i, j; double w; };
  std::vector<Row> rows;
  int n = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Row r;
    char c1, c2;
    if (!(ls >> r.i >> c1 >> r.j >> c2 >> r.w))
      throw std::runtime_error("bad weight field row: " + line);
    n = std::max(n, r.i + r.j - 1);
    rows.push_back(r);
  }
  WeightField w(n);
  for (const auto& r : rows) w.at(r.i, r.j) = r.w;
  return w;
}

double path_weight(const LatticePath& p, const WeightField& w) {
  double s = 0.0;
  for (const auto& [i, j] : p.v) s += w.at(i, j);
  return s;
}

double lpp_line(int n, const WeightField& w) {
  WeightField best(n);
  best.at(1, 1) = w.at(1, 1);
  for (int d = 2; d <= n; ++d) {
    for (int j = 1; j <= d; ++j) {
      const int i = d + 1 - j;
      double prev = kNegInf;
      if (j > 1) prev = std::max(prev, best.at(i, j - 1));   // "up" into (i,j)
      if (i > 1) prev = std::max(prev, best.at(i - 1, j));   // "right"
      best.at(i, j) = w.at(i, j) + prev;
    }
  }
  double r = kNegInf;
  for (int j = 1; j <= n; ++j) r = std::max(r, best.at(n + 1 - j, j));
  return r;
}

double lpp_point(int n, int m, const WeightField& w) {
  if (m < 1 || m > n) throw std::invalid_argument("lpp_point: need 1 <= M <= N");
  const int a = n + 1 - m;
  WeightField best(n);
  best.at(1, 1) = w.at(1, 1);
  for (int d = 2; d <= n; ++d) {
    for (int j = std::max(1, d + 1 - a); j <= std::min(m, d); ++j) {
      const int i = d + 1 - j;
      double prev = kNegInf;
      if (j > 1 && j - 1 >= d - a) prev = std::max(prev, best.at(i, j - 1));
      if (i > 1 && i - 1 >= d - m) prev = std::max(prev, best.at(i - 1, j));
      best.at(i, j) = w.at(i, j) + prev;
    }
  }
  return best.at(a, m);
}

double lpp_complete(int n, const WeightField& w) {
  double s = 0.0;
  for (int d = 1; d <= n; ++d) {
    double mx = kNegInf;
    for (int j = 1; j <= d; ++j) mx = std::max(mx, w.at(d + 1 - j, j));
    s += mx;
  }
  return s;
}

double lpp(const LatticeSpec& spec, const WeightField& w) {
  switch (spec.kind) {
    case GraphKind::Complete: return lpp_complete(spec.n, w);
    case GraphKind::Line: return lpp_line(spec.n, w);
    case GraphKind::PointToPoint: return lpp_point(spec.n, spec.m, w);
  }
  throw std::logic_error("unreachable");
}

namespace {

void enumerate_steps(const LatticeSpec& spec, LatticePath& cur,
                     std::vector<LatticePath>& out) {
  if (static_cast<int>(cur.v.size()) == spec.n) {
    out.push_back(cur);
    return;
  }
  const auto [i, j] = cur.v.back();
  if (spec.contains(i, j + 1)) {
    cur.v.emplace_back(i, j + 1);
    enumerate_steps(spec, cur, out);
    cur.v.pop_back();
  }
  if (spec.contains(i + 1, j)) {
    cur.v.emplace_back(i + 1, j);
    enumerate_steps(spec, cur, out);
    cur.v.pop_back();
  }
}

void enumerate_complete(int n, int d, LatticePath& cur,
                        std::vector<LatticePath>& out) {
  if (d > n) {
    out.push_back(cur);
    return;
  }
  for (int j = 1; j <= d; ++j) {
    cur.v.emplace_back(d + 1 - j, j);
    enumerate_complete(n, d + 1, cur, out);
    cur.v.pop_back();
  }
}

}  // namespace

std::vector<LatticePath> enumerate_paths(const LatticeSpec& spec) {
  if (spec.kind == GraphKind::Complete && spec.n > 8)
    throw std::invalid_argument("enumerate_paths: Complete capped at N <= 8");
  if (spec.kind != GraphKind::Complete && spec.n > 12)
    throw std::invalid_argument("enumerate_paths: capped at N <= 12");
  std::vector<LatticePath> out;
  LatticePath cur;
  cur.v.emplace_back(1, 1);
  if (spec.kind == GraphKind::Complete) {
    cur.v.clear();
    enumerate_complete(spec.n, 1, cur, out);
  } else {
    enumerate_steps(spec, cur, out);
  }
  return out;
}

LatticePath geodesic(const LatticeSpec& spec, const WeightField& w) {
  LatticePath path;
  if (spec.kind == GraphKind::Complete) {
    // Per-diagonal argmax; ties take the smallest i (the "up"-most vertex
    // comes last in i order, so order by i ascending and keep strict max).
    for (int d = 1; d <= spec.n; ++d) {
      int bi = 1, bj = d;
      double mx = kNegInf;
      for (int i = 1; i <= d; ++i) {
        const int j = d + 1 - i;
        if (w.at(i, j) > mx) {
          mx = w.at(i, j);
          bi = i;
          bj = j;
        }
      }
      path.v.emplace_back(bi, bj);
    }
    return path;
  }
  // Suffix values val(i,j) = w(i,j) + best continuation; walk forward
  // preferring "up" on ties.
  WeightField val(spec.n);
  for (int d = spec.n; d >= 1; --d) {
    const auto [jlo, jhi] = spec.diag_cols(d);
    for (int j = jlo; j <= jhi; ++j) {
      const int i = d + 1 - j;
      double next = d == spec.n ? 0.0 : kNegInf;
      if (d < spec.n) {
        if (spec.contains(i, j + 1)) next = std::max(next, val.at(i, j + 1));
        if (spec.contains(i + 1, j)) next = std::max(next, val.at(i + 1, j));
      }
      val.at(i, j) = w.at(i, j) + next;
    }
  }
  int i = 1, j = 1;
  path.v.emplace_back(i, j);
  for (int d = 2; d <= spec.n; ++d) {
    const bool up_ok = spec.contains(i, j + 1);
    const bool right_ok = spec.contains(i + 1, j);
    if (up_ok && (!right_ok || val.at(i, j + 1) >= val.at(i + 1, j))) {
      ++j;
    } else {
      ++i;
    }
    path.v.emplace_back(i, j);
  }
  return path;
}

WeightField transpose(const WeightField& w) {
  WeightField t(w.n());
  for (int i = 1; i <= w.n(); ++i)
    for (int j = 1; j <= w.n() + 1 - i; ++j) t.at(j, i) = w.at(i, j);
  return t;
}

}  // namespace lpp
