#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "torushopf/lattice.hpp"
#include "torushopf/modes.hpp"
#include "torushopf/ode.hpp"
#include "torushopf/orbit.hpp"

namespace torushopf {

enum class VerdictKind {
  EquilibriumStable,
  EquilibriumUnstable,
  OrbitStable,
  OrbitUnstable,
  Inconclusive,
};

std::string verdict_name(VerdictKind k);

struct Witness {
  std::string label;
  std::optional<ModeIndex> mode;
  std::optional<Complex> multiplier;
  double value = 0.0;
};

struct StabilityVerdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::vector<Witness> witnesses;  // never empty
  double threshold = 0.0;
};

// Origin instability from coupling strengths alone (bidirectional variant).
// Scans the 8 axis subsets (k1,k2,k3) in {0,1}^3; if the selected coupling
// sum drops below 1/(2*(cos(theta_n)-1)) with theta_n = (n-1)*pi/n, the
// extreme mode t = (k1*(n-1)/2, ...) has K_t < 0 and the equilibrium is
// unstable for every a (real eigenvalue sqrt(-b*K_t) at a = 0).  Otherwise
// inconclusive: the verdict then depends on a.
StabilityVerdict vdp_instability_criterion(const LatticeParams& p);

// Last equilibrium eigenvalue crossing of the unidirectional variant:
// a_star = max over modes of critical_a_vdpl, attained at the mode with
// t_i = (n-1)/2 on axes with positive coupling and 0 elsewhere.
struct ThresholdResult {
  double a_star = 0.0;
  ModeIndex leading_mode;
};

ThresholdResult vdpl_threshold(const LatticeParams& p);

// Full-spectrum verdict at a given a (closed-form spectrum, both variants).
StabilityVerdict equilibrium_stability(const LatticeParams& p, double a,
                                       double margin = 1e-9);

// First Lyapunov coefficient of the single van der Pol-like oscillator
//   x' = a*x - y - x^2 - x^3,  y' = b*x
// at its Hopf point a = 0, via the planar normal-form formula on the system
// rotated to x' = -omega*y + f, y' = omega*x + g (omega = sqrt(b), then time
// rescaled to unit frequency).  Derivatives by Richardson-extrapolated
// central differences with step h.  Result is -3/8, independent of b.
double lyapunov_coefficient_vdpl_single(double b = 1.0, double h = 1e-2);

// Floquet multipliers: dense eigensolve of the monodromy matrix, obtained by
// integrating the variational equation along the orbit with tolerances
// tightened 10x relative to `opt`.  Sorted by descending modulus.
std::vector<Complex> floquet_multipliers(const PeriodicOrbit& orbit,
                                         const IntegratorOptions& opt = {});

struct FloquetResult {
  std::vector<Complex> multipliers;  // descending modulus
  double trivial_defect = 0.0;       // distance of the nearest multiplier to 1
  StabilityVerdict verdict;          // orbit verdict from nontrivial multipliers
};

FloquetResult floquet_analysis(const PeriodicOrbit& orbit,
                               const IntegratorOptions& opt = {},
                               double margin = 1e-6);

Eigen::MatrixXd monodromy(const LatticeParams& p, const Eigen::VectorXd& x0,
                          double period, const IntegratorOptions& opt = {});

}  // namespace torushopf
