#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>
#include <string>

namespace torushopf {

// Which of the two oscillator families lives on the lattice.
//  VdpBidirectionalY:   van der Pol nodes, symmetric y-coupling to both
//                       neighbours along each axis.
//  VdplUnidirectionalX: van der Pol-like nodes, x-coupling to the forward
//                       neighbour along each axis only.
enum class Variant { VdpBidirectionalY, VdplUnidirectionalX };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameters of an n x n x n periodic lattice of oscillators.
// delta, zeta, epsilon couple along the three axes; a is the bifurcation
// parameter, nu scales the van der Pol nonlinearity, b the restoring force.
struct LatticeParams {
  int n = 3;
  double delta = 0.0;
  double zeta = 0.0;
  double epsilon = 0.0;
  double nu = 1.0;
  double a = 0.0;
  double b = 1.0;
  Variant variant = Variant::VdpBidirectionalY;
  // Use x^3/3 instead of x^3 in the van der Pol nonlinearity.  Only the
  // prescribed-period search cares; the linearisation is unchanged.
  bool cubic_over_three = false;

  int sites() const { return n * n * n; }
  int dim() const { return 2 * n * n * n; }
  double coupling(int axis) const {
    return axis == 0 ? delta : (axis == 1 ? zeta : epsilon);
  }
  void validate() const;
};

// State split into the two per-node variables, each indexed by
// site(alpha,beta,gamma) = alpha*n^2 + beta*n + gamma.
struct LatticeState {
  Eigen::VectorXd x;
  Eigen::VectorXd y;

  LatticeState() = default;
  explicit LatticeState(int sites)
      : x(Eigen::VectorXd::Zero(sites)), y(Eigen::VectorXd::Zero(sites)) {}

  Eigen::VectorXd stacked() const;
  static LatticeState from_stacked(const Eigen::VectorXd& v);
};

inline int site_index(int n, int alpha, int beta, int gamma) {
  return (alpha * n + beta) * n + gamma;
}

inline std::array<int, 3> site_coords(int n, int s) {
  return {s / (n * n), (s / n) % n, s % n};
}

inline int mod(int v, int n) {
  int r = v % n;
  return r < 0 ? r + n : r;
}

// Discrete wave vector (t1,t2,t3), entries taken mod n.  Modes t and -t span
// the same subspace; the canonical representative is the lexicographically
// smaller of the two.
struct ModeIndex {
  int t1 = 0, t2 = 0, t3 = 0;

  int operator[](int i) const { return i == 0 ? t1 : (i == 1 ? t2 : t3); }
  bool operator==(const ModeIndex& o) const {
    return t1 == o.t1 && t2 == o.t2 && t3 == o.t3;
  }
  bool operator<(const ModeIndex& o) const {
    if (t1 != o.t1) return t1 < o.t1;
    if (t2 != o.t2) return t2 < o.t2;
    return t3 < o.t3;
  }
  std::string str() const {
    return "(" + std::to_string(t1) + "," + std::to_string(t2) + "," +
           std::to_string(t3) + ")";
  }
};

inline ModeIndex reduce_mode(const ModeIndex& t, int n) {
  return {mod(t.t1, n), mod(t.t2, n), mod(t.t3, n)};
}

inline ModeIndex negate_mode(const ModeIndex& t, int n) {
  return {mod(-t.t1, n), mod(-t.t2, n), mod(-t.t3, n)};
}

inline ModeIndex canonical_mode(const ModeIndex& t, int n) {
  const ModeIndex r = reduce_mode(t, n);
  const ModeIndex m = negate_mode(r, n);
  return m < r ? m : r;
}

}  // namespace torushopf
