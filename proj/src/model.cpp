#include "torushopf/model.hpp"

#include <vector>

namespace torushopf {

namespace {

// Neighbour tables per axis; avoids modular arithmetic in the hot loop.
struct Stencil {
  int n;
  std::vector<int> fwd, bwd;  // index shifts within the flattened array
  explicit Stencil(int n_) : n(n_), fwd(n_), bwd(n_) {
    for (int i = 0; i < n; ++i) {
      fwd[i] = mod(i + 1, n);
      bwd[i] = mod(i - 1, n);
    }
  }
};

}  // namespace

void rhs_stacked(const LatticeParams& p, const Eigen::VectorXd& v,
                 Eigen::VectorXd& out) {
  const int m = p.sites();
  if (v.size() != 2 * m)
    throw std::invalid_argument("state dimension mismatch in rhs");
  out.resize(2 * m);
  const Stencil st(p.n);
  const int n = p.n;
  const double d = p.delta, z = p.zeta, e = p.epsilon;

  if (p.variant == Variant::VdpBidirectionalY) {
    const auto y = [&](int s) { return v[m + s]; };
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be)
        for (int ga = 0; ga < n; ++ga) {
          const int s = site_index(n, al, be, ga);
          const double xs = v[s], ys = y(s);
          // Symmetric stencils keep the field exactly equivariant under
          // index reflections: both neighbours are summed before use.
          double cy = ys;
          cy += d * (2.0 * ys - (y(site_index(n, st.fwd[al], be, ga)) +
                                 y(site_index(n, st.bwd[al], be, ga))));
          cy += z * (2.0 * ys - (y(site_index(n, al, st.fwd[be], ga)) +
                                 y(site_index(n, al, st.bwd[be], ga))));
          cy += e * (2.0 * ys - (y(site_index(n, al, be, st.fwd[ga])) +
                                 y(site_index(n, al, be, st.bwd[ga]))));
          const double cubic =
              p.cubic_over_three ? xs * xs * xs / 3.0 : xs * xs * xs;
          out[s] = p.nu * (p.a * xs - cubic) - cy;
          out[m + s] = p.b * xs;
        }
  } else {
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be)
        for (int ga = 0; ga < n; ++ga) {
          const int s = site_index(n, al, be, ga);
          const double xs = v[s], ys = v[m + s];
          double cx = 0.0;
          cx += d * (xs - v[site_index(n, st.fwd[al], be, ga)]);
          cx += z * (xs - v[site_index(n, al, st.fwd[be], ga)]);
          cx += e * (xs - v[site_index(n, al, be, st.fwd[ga])]);
          out[s] = p.a * xs - ys - xs * xs * xs - xs * xs - cx;
          out[m + s] = p.b * xs;
        }
  }
}

LatticeState rhs(const LatticeParams& p, const LatticeState& s) {
  if (s.x.size() != p.sites() || s.y.size() != p.sites())
    throw std::invalid_argument("state dimension mismatch in rhs");
  Eigen::VectorXd out;
  rhs_stacked(p, s.stacked(), out);
  return LatticeState::from_stacked(out);
}

CouplingMatrix coupling_matrix(const LatticeParams& p) {
  const int m = p.sites();
  const int n = p.n;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(7 * m);
  const Stencil st(n);
  for (int al = 0; al < n; ++al)
    for (int be = 0; be < n; ++be)
      for (int ga = 0; ga < n; ++ga) {
        const int s = site_index(n, al, be, ga);
        if (p.variant == Variant::VdpBidirectionalY) {
          trip.emplace_back(s, s,
                            1.0 + 2.0 * (p.delta + p.zeta + p.epsilon));
          trip.emplace_back(s, site_index(n, st.fwd[al], be, ga), -p.delta);
          trip.emplace_back(s, site_index(n, st.bwd[al], be, ga), -p.delta);
          trip.emplace_back(s, site_index(n, al, st.fwd[be], ga), -p.zeta);
          trip.emplace_back(s, site_index(n, al, st.bwd[be], ga), -p.zeta);
          trip.emplace_back(s, site_index(n, al, be, st.fwd[ga]), -p.epsilon);
          trip.emplace_back(s, site_index(n, al, be, st.bwd[ga]), -p.epsilon);
        } else {
          trip.emplace_back(s, s, p.delta + p.zeta + p.epsilon);
          trip.emplace_back(s, site_index(n, st.fwd[al], be, ga), -p.delta);
          trip.emplace_back(s, site_index(n, al, st.fwd[be], ga), -p.zeta);
          trip.emplace_back(s, site_index(n, al, be, st.fwd[ga]), -p.epsilon);
        }
      }
  CouplingMatrix C(m, m);
  C.setFromTriplets(trip.begin(), trip.end());
  return C;
}

Eigen::MatrixXd jacobian(const LatticeParams& p, const LatticeState& s) {
  if (s.x.size() != p.sites() || s.y.size() != p.sites())
    throw std::invalid_argument("state dimension mismatch in jacobian");
  const int m = p.sites();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  const Eigen::MatrixXd C = Eigen::MatrixXd(coupling_matrix(p));
  if (p.variant == Variant::VdpBidirectionalY) {
    for (int i = 0; i < m; ++i) {
      const double dcubic = p.cubic_over_three ? s.x[i] * s.x[i]
                                               : 3.0 * s.x[i] * s.x[i];
      J(i, i) = p.nu * (p.a - dcubic);
    }
    J.topRightCorner(m, m) = -C;
  } else {
    J.topLeftCorner(m, m) = -C;
    for (int i = 0; i < m; ++i)
      J(i, i) += p.a - 3.0 * s.x[i] * s.x[i] - 2.0 * s.x[i];
    J.topRightCorner(m, m) = -Eigen::MatrixXd::Identity(m, m);
  }
  J.bottomLeftCorner(m, m) = p.b * Eigen::MatrixXd::Identity(m, m);
  return J;
}

}  // namespace torushopf
