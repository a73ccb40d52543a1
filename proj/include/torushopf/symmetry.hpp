#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torushopf/lattice.hpp"

namespace torushopf {

struct PeriodicOrbit;

// Element of the per-axis dihedral group acting on lattice indices.  Per
// axis the index map is alpha -> eps*alpha + rot (mod n), eps = -1 when the
// flip bit is set.  Acting on a state: (g.s)_alpha = s_{map(alpha)}, applied
// in each axis and identically to x and y.  The cyclic lattice group is the
// subset with all flip bits clear.
struct GroupElement {
  std::array<int, 3> rot{0, 0, 0};
  std::array<bool, 3> flip{false, false, false};

  static GroupElement identity() { return {}; }
  static GroupElement shift(int axis, int amount);
  static GroupElement reflect(int axis);
};

// Group product g*h, acting as (g*h).s = g.(h.s).
GroupElement compose(const GroupElement& g, const GroupElement& h, int n);
GroupElement inverse(const GroupElement& g, int n);
bool equal_elements(const GroupElement& g, const GroupElement& h, int n);

LatticeState act(const GroupElement& g, const LatticeParams& p,
                 const LatticeState& s);
Eigen::VectorXd act_stacked(const GroupElement& g, const LatticeParams& p,
                            const Eigen::VectorXd& v);
// The site permutation realising g: new[s] = old[perm[s]].
std::vector<int> site_permutation(const GroupElement& g, int n);

// One factor of a twisted subgroup of the symmetry group times the circle.
//  CyclicTwisted : all rotations of the axis, rotation by k paired with
//                  temporal phase 2*pi*k*twist/n.
//  ReflectionPlus/Minus : {identity, axis flip}, flip paired with phase 0
//                  (plus) or pi (minus).
//  FullDihedral  : all rotations and flips of the axis, phase 0 throughout.
enum class FactorKind { CyclicTwisted, ReflectionPlus, ReflectionMinus, FullDihedral };

struct SubgroupFactor {
  FactorKind kind = FactorKind::FullDihedral;
  int twist = 0;  // used by CyclicTwisted only

  long order(int n) const;
  std::string display(int n) const;   // e.g. "Z3", "D1", "D3"
  std::string twist_label() const;    // e.g. "2", "+", "-", "1"
};

// Product of three per-axis factors together with its temporal pairing.
struct TwistedSubgroup {
  std::array<SubgroupFactor, 3> factor;
  int n = 3;

  long order() const;
  // Display name, e.g. "(Z3 x D1 x D3)^(1,-,1)".
  std::string name() const;
  // Generators with their temporal phases in [0, 2*pi).
  std::vector<std::pair<GroupElement, double>> generators() const;
  // Phase paired with g if g belongs to the spatial part, else nullopt.
  std::optional<double> phase_of(const GroupElement& g) const;
  // Strictly larger groups obtainable by widening factors to the full
  // dihedral axis group (only untwisted cyclic and plus-reflection factors
  // widen).  Used for minimality checks.
  std::vector<TwistedSubgroup> enlargements() const;
  bool contains(const TwistedSubgroup& other) const;
  bool operator==(const TwistedSubgroup& o) const;
};

TwistedSubgroup parse_subgroup(const std::string& name, int n);

// The symmetry classes predicted along the mode-t bifurcation branch.
// Dihedral variant: the Cartesian product over axes of
//   { FullDihedral }                       if t_i = 0,
//   { CyclicTwisted(t_i), ReflectionPlus, ReflectionMinus }  otherwise.
// Cyclic variant: the single class with all factors CyclicTwisted(t_i).
std::vector<TwistedSubgroup> symmetry_classes(const LatticeParams& p,
                                              const ModeIndex& t);

// Number of bifurcating branches with the given symmetry: 8*n^3 / |H|.
long branch_count(const TwistedSubgroup& H);

// Sup-norm deviation of the orbit from the symmetry g.x(t + theta*T/2pi)
// = x(t), per generator.
struct SymmetryReport {
  bool holds = false;
  bool minimal = false;
  double max_defect = 0.0;
  double tolerance = 0.0;   // absolute threshold actually applied
  double amplitude = 0.0;
  std::vector<std::pair<std::string, double>> generator_defects;
};

// Checks the spatio-temporal symmetry of a periodic orbit by cubic
// interpolation of its sample grid.  `tol` is relative to the orbit
// amplitude.  Refuses orbits whose closure residual is above 1e-6.
SymmetryReport verify_orbit_symmetry(const PeriodicOrbit& orbit,
                                     const TwistedSubgroup& H,
                                     double tol = 1e-4);

}  // namespace torushopf
