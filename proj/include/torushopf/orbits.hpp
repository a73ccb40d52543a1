#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torushopf/lattice.hpp"
#include "torushopf/modes.hpp"
#include "torushopf/ode.hpp"
#include "torushopf/orbit.hpp"
#include "torushopf/symmetry.hpp"

namespace torushopf {

struct Trajectory {
  Eigen::VectorXd times;
  Eigen::MatrixXd states;  // 2n^3 rows, one column per sample time
};

// Endpoint of the flow map phi(t1 - t0) applied to `initial`.
LatticeState integrate(const LatticeParams& p, const LatticeState& initial,
                       std::pair<double, double> t_span,
                       const IntegratorOptions& opt = {});

// Uniformly sampled trajectory over [0, t_final], samples+1 columns
// (both endpoints included).
Trajectory integrate_trajectory(const LatticeParams& p,
                                const Eigen::VectorXd& x0, double t_final,
                                int samples, const IntegratorOptions& opt = {});

// Endpoint of the flow together with the solution of the variational
// equation along it (the flow map's derivative with respect to x0).
std::pair<Eigen::VectorXd, Eigen::MatrixXd> flow_with_jacobian(
    const LatticeParams& p, const Eigen::VectorXd& x0, double t,
    const IntegratorOptions& opt = {});

enum class ShootStatus {
  Converged,
  MaxIterations,
  RejectedConstant,
  IntegratorFailure,
};

std::string shoot_status_name(ShootStatus s);

struct ShootOptions {
  int max_iterations = 30;
  double tolerance = 1e-10;          // Newton target on the return defect
  double accept_residual = 1e-8;     // convergence bar for the final orbit
  double min_amplitude = 1e-6;       // below this the orbit is constant
  int samples = 256;
  int jobs = 1;  // worker threads for grid sweeps (0 = hardware concurrency)
  IntegratorOptions integrator{};
};

struct ShootResult {
  ShootStatus status = ShootStatus::MaxIterations;
  PeriodicOrbit orbit;  // populated when Converged
  int iterations = 0;
  double residual = 0.0;
  double nu = 0.0;  // parameter found by the fixed-period solve
};

// Newton on (x0, T): return defect phi_T(x0) - x0 bordered with a phase
// condition (update orthogonal to the flow direction at x0).
ShootResult find_orbit_shooting(const LatticeParams& p,
                                const Eigen::VectorXd& guess, double t_guess,
                                const ShootOptions& opt = {});

// Period held fixed, nu free: Newton on (x0, nu).  Used by the
// prescribed-period search.
ShootResult find_orbit_fixed_period(const LatticeParams& p,
                                    const Eigen::VectorXd& guess,
                                    double period,
                                    const ShootOptions& opt = {});

// Initial guess in the fixed-point subspace of the class (factor recipe:
// twisted cyclic -> complex wave, reflections -> cosine/sine wave, full
// dihedral -> constant), amplitude following the square-root law from the
// onset at a_c.
struct BranchSeed {
  Eigen::VectorXd state;
  double period_guess = 0.0;
};

BranchSeed seed_from_class(const LatticeParams& p, const ModeIndex& t,
                           const TwistedSubgroup& h, double a_onset);

struct BranchPoint {
  double a = 0.0;
  PeriodicOrbit orbit;
  double amplitude = 0.0;
  SymmetryReport symmetry_report;
};

struct BranchTrace {
  ModeIndex mode;
  TwistedSubgroup subgroup;
  double a_onset = 0.0;
  std::vector<BranchPoint> points;
  bool truncated = false;     // symmetry broke or shooting failed mid-branch
  std::string diagnostic;
  double sqrt_coefficient = 0.0;  // c in amplitude = c*sqrt(a - a_onset)
  double fit_r2 = 0.0;            // of the amplitude^2 vs (a - a_onset) fit
  double period_at_onset = 0.0;   // extrapolated from the first points
};

// Natural-parameter continuation from just above the onset, verifying the
// requested symmetry at every point.
BranchTrace trace_branch(const LatticeParams& p, const BifurcationRecord& rec,
                         const TwistedSubgroup& h,
                         std::pair<double, double> a_range, int steps,
                         const ShootOptions& opt = {});

// Prescribed-period catalog: modes whose linear frequency sqrt(b*K_t)
// exceeds 2*pi/p, i.e. b*K_t > (2*pi/p)^2, each with its class list.
// Throws PreconditionError when some K_t vanishes or p sits within 1e-9 of
// an excluded resonance 2*pi*(2k-1)/sqrt(b*K_t) of an admissible mode.
struct AdmissibleEntry {
  ModeIndex mode;
  double k = 0.0;
  double limit_period = 0.0;  // 2*pi/sqrt(b*K_t)
  std::vector<SymmetryClassCount> classes;
};

std::vector<AdmissibleEntry> admissible_period_catalog(const LatticeParams& p,
                                                       double period);

// nu sweep for an orbit of the prescribed period in the given class.  The
// underlying existence statement is non-constructive in nu, so a miss on a
// finite grid refutes nothing; the report says so.
struct ExistenceResult {
  bool found = false;
  double nu = 0.0;
  PeriodicOrbit orbit;  // populated when found
  SymmetryReport symmetry_report;
  std::vector<std::pair<double, double>> scan;  // (nu, settled period)
  std::string report;
};

std::vector<double> default_nu_grid();  // 30 log points in [0.05, 5]

ExistenceResult existence_search(const LatticeParams& p, double period,
                                 const ModeIndex& t, const TwistedSubgroup& h,
                                 const std::vector<double>& nu_grid,
                                 const ShootOptions& opt = {});

}  // namespace torushopf
