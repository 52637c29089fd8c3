#pragma once

#include "lpplab/lattice.hpp"
#include "lpplab/marginals.hpp"
#include "lpplab/mixing.hpp"
#include "lpplab/rng.hpp"

#include <string>
#include <vector>

namespace lpp {

enum class WalkKind { NaturalComplete, NaturalPoint, Polya, Rectangle };

// A path-valued process whose position on each anti-diagonal (or pertinent
// section) is uniformly distributed.
struct FlatWalk {
  WalkKind kind;
  LatticePath path;
};

FlatWalk sample_flat_walk(WalkKind kind, const LatticeSpec& spec, RngStream& rng);

// Exact distribution of a flat walk: probability of each full trajectory,
// by enumeration over the walk's discrete choices. Rational arithmetic;
// desk sizes only.
struct WalkAtom {
  LatticePath path;
  long long num, den;  // probability num/den
};
std::vector<WalkAtom> enumerate_flat_walk(WalkKind kind, const LatticeSpec& spec);

// A named joint-distribution recipe producing WeightField samples whose
// sites are all marginally `marginal`.
struct CouplingSpec {
  enum class Name { IID, ConvexMax, FlatWalk, MinMeanConstantDiagonal, MaxMeanMixed };
  Name name = Name::IID;
  WalkKind walk = WalkKind::Polya;          // FlatWalk
  CopulaKind copula = CopulaKind::Independent;  // MinMeanConstantDiagonal
  MarginalPtr marginal;
  LatticeSpec lattice;

  std::string describe() const;
};

// "iid" | "convexmax" | "flat:polya" | "flat:natural" | "flat:rectangle" |
// "minmean:<copula>" | "maxmeanmixed"
CouplingSpec parse_coupling(const std::string& text, MarginalPtr marginal,
                            const LatticeSpec& lattice);

struct FieldSample {
  WeightField field;
  // Realized walk path for the flat couplings (geodesic by construction),
  // empty otherwise.
  LatticePath path;
  double u = 0.0;  // the shared uniform, when the recipe has one
};

WeightField sample_iid(const MarginalPtr& m, const LatticeSpec& spec, RngStream& rng);
FieldSample sample_convex_max(const MarginalPtr& m, const LatticeSpec& spec, RngStream& rng);
FieldSample sample_flat_coupling(WalkKind kind, const MarginalPtr& m,
                                 const LatticeSpec& spec, RngStream& rng);
WeightField sample_min_mean(const MarginalPtr& m, const LatticeSpec& spec,
                            const MixCopula& copula, RngStream& rng);
// Exponential marginal on the complete graph only: convex-max diagonal
// structure with near-constant-sum uniforms across diagonals.
FieldSample sample_max_mean_mixed(const MarginalPtr& m, const LatticeSpec& spec,
                                  RngStream& rng);

FieldSample sample_coupling(const CouplingSpec& spec, RngStream& rng);

// One draw of the maximally dependent coupling of n F-distributed r.v.:
// exactly one coordinate exceeds w_n = Q_F(1/n).
std::vector<double> sample_maximally_dependent(const MarginalPtr& m, int n,
                                               RngStream& rng);

}  // namespace lpp
