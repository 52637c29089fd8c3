#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lpp {

enum class GraphKind { Complete, Line, PointToPoint };

// Which oriented N-partite graph, and its dimensions. Vertices are the sites
// (i,j), 1 <= i,j, i+j <= N+1; anti-diagonal d = i+j-1 runs over 1..N.
// PointToPoint restricts to the rectangle i <= N+1-M, j <= M with the single
// terminal (N+1-M, M).
struct LatticeSpec {
  GraphKind kind = GraphKind::Line;
  int n = 1;
  int m = 1;  // PointToPoint target column

  // Number of graph vertices on anti-diagonal d (the "pertinent section").
  int diag_len(int d) const;
  // Column range [j_lo, j_hi] of graph vertices on anti-diagonal d.
  std::pair<int, int> diag_cols(int d) const;
  bool contains(int i, int j) const;

  std::string describe() const;
};

LatticeSpec parse_lattice(const std::string& text);  // "line:8", "complete:4", "point:9,3"

// Triangular array of site weights, i+j <= N+1, stored densely row-major:
// row i holds columns j = 1 .. N+1-i.
class WeightField {
 public:
  explicit WeightField(int n) : n_(n), w_(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0) {}

  int n() const { return n_; }
  double& at(int i, int j) { return w_[index(i, j)]; }
  double at(int i, int j) const { return w_[index(i, j)]; }

  void write_csv(std::ostream& os) const;          // header "i,j,w"
  static WeightField read_csv(std::istream& is);

 private:
  std::size_t index(int i, int j) const {
    // rows above row i hold (i-1) blocks of sizes N, N-1, .., N-i+2
    return static_cast<std::size_t>(i - 1) * n_ -
           static_cast<std::size_t>(i - 1) * (i - 2) / 2 + (j - 1);
  }
  int n_;
  std::vector<double> w_;
};

// Vertex v_d on anti-diagonal d for d = 1..N, starting at (1,1).
struct LatticePath {
  std::vector<std::pair<int, int>> v;
  bool operator==(const LatticePath&) const = default;
};

double path_weight(const LatticePath& p, const WeightField& w);

// Point-to-line LPP on L_N: max weight sum over up/right paths of length N.
double lpp_line(int n, const WeightField& w);
// Point-to-point LPP on P_{N,M}: paths from (1,1) to (N+1-M, M).
double lpp_point(int n, int m, const WeightField& w);
// LPP on C_N: exactly the sum of per-anti-diagonal maxima.
double lpp_complete(int n, const WeightField& w);
double lpp(const LatticeSpec& spec, const WeightField& w);

// All valid paths, exactly once. Test oracle; capped at N <= 12 for Line /
// PointToPoint and N <= 8 for Complete.
std::vector<LatticePath> enumerate_paths(const LatticeSpec& spec);

// An argmax path. Ties prefer the "up" step, then the lexicographically
// smallest vertex.
LatticePath geodesic(const LatticeSpec& spec, const WeightField& w);

WeightField transpose(const WeightField& w);

}  // namespace lpp
