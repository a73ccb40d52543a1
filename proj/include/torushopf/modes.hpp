#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "torushopf/lattice.hpp"
#include "torushopf/symmetry.hpp"

namespace torushopf {

// Closed-form spectral data of the origin linearisation, per mode t.  With
// phi_i = 2*pi*t_i/n and couplings (delta, zeta, epsilon):
//
//   K_t   = 1 + 2*delta*(1-cos phi_1) + 2*zeta*(1-cos phi_2)
//             + 2*epsilon*(1-cos phi_3)          (bidirectional y-coupling)
//   G_t   = delta*sin phi_1 + zeta*sin phi_2 + epsilon*sin phi_3
//   H_t(a)= a - delta*(1-cos phi_1) - zeta*(1-cos phi_2)
//             - epsilon*(1-cos phi_3)            (unidirectional x-coupling)
//
// Mode-t eigenvalues:
//   bidirectional:  lambda = (nu*a +- sqrt((nu*a)^2 - 4*b*K_t)) / 2
//   unidirectional: lambda = (H-iG +- sqrt((H-iG)^2 - 4*b)) / 2,
// the full real spectrum being these together with their conjugates.

using Complex = std::complex<double>;

double k_of_mode(const LatticeParams& p, const ModeIndex& t);
double g_of_mode(const LatticeParams& p, const ModeIndex& t);
double h_of_mode(const LatticeParams& p, const ModeIndex& t, double a);

// Coupling-strength threshold a^z_t = delta*(1-cos phi_1) + ... at which the
// mode-t eigenvalue pair of the unidirectional variant crosses the
// imaginary axis.
double critical_a_vdpl(const LatticeParams& p, const ModeIndex& t);

std::array<Complex, 2> eigenvalues_vdp(const LatticeParams& p,
                                       const ModeIndex& t, double a);
std::array<Complex, 2> eigenvalues_vdpl(const LatticeParams& p,
                                        const ModeIndex& t, double a);

// Periods of the two solution branches emerging at critical_a_vdpl:
//   P1 = 4*pi / (G + sqrt(G^2+4b)),  P2 = 4*pi / (sqrt(G^2+4b) - G).
std::pair<double, double> limit_periods(double G, double b);
std::pair<double, double> limit_periods_vdpl(const LatticeParams& p,
                                             const ModeIndex& t);

// All modes / canonical representatives under t ~ -t, lexicographic order.
std::vector<ModeIndex> all_modes(int n);
std::vector<ModeIndex> canonical_modes(int n);

// Union over all n^3 modes of the closed-form eigenvalues (size 2n^3);
// equals the spectrum of jacobian() at the origin.
std::vector<Complex> closed_form_spectrum(const LatticeParams& p, double a);

// Orthonormal basis of the mode-t subspace of R^{n^3}.  Raw vectors are
// cos/sin of 2*pi*(alpha*t1+beta*t2+gamma*t3)/n; the bidirectional variant
// adjoins the sign-flipped wave vectors (t1,-t2,t3), (t1,t2,-t3),
// (t1,-t2,-t3).  Rank-revealing orthonormalisation, drop threshold 1e-10.
struct ModeBasis {
  ModeIndex mode;
  Eigen::MatrixXd vectors;  // n^3 rows, one orthonormal column per dimension
  int dimension() const { return static_cast<int>(vectors.cols()); }
};

ModeBasis mode_basis(const LatticeParams& p, const ModeIndex& t);

// Coefficients of the x and y components of `s` in the basis columns.
std::pair<Eigen::VectorXd, Eigen::VectorXd> mode_project(
    const ModeBasis& basis, const LatticeState& s);

// Raw wave vectors (cos and sin), handy for seeding and tests.
Eigen::VectorXd mode_wave_cos(int n, const ModeIndex& t);
Eigen::VectorXd mode_wave_sin(int n, const ModeIndex& t);

// One catalog entry per canonical mode.
struct SymmetryClassCount {
  TwistedSubgroup subgroup;
  long branches = 0;
};

struct BifurcationRecord {
  ModeIndex mode;
  Variant variant;
  double critical_a = 0.0;
  double k = 0.0;            // K_t (eigenvalue of C, bidirectional)
  double g = 0.0;            // G_t
  double limit_frequency = 0.0;
  double period1 = 0.0;
  double period2 = 0.0;      // == period1 for the bidirectional variant
  bool resonant = false;     // period1/period2 within 1e-9 of p/q, q <= 64
  std::optional<std::pair<long, long>> resonance_ratio;
  std::vector<SymmetryClassCount> classes;
};

// Hopf catalog over canonical modes, sorted by (critical_a, mode).
// Bidirectional: only modes with K_t > 0 appear; onset at a = 0 with
// frequency sqrt(b*K_t) and the dihedral class list.  Unidirectional: onset
// at critical_a_vdpl with the two limit periods and the single cyclic
// class; branches per class drop to 1 when the periods are resonant.
std::vector<BifurcationRecord> bifurcation_catalog(const LatticeParams& p);

// Nearest rational p/q with q <= max_den if within tol of `value`.
std::optional<std::pair<long, long>> nearest_rational(double value,
                                                      long max_den,
                                                      double tol);

}  // namespace torushopf
