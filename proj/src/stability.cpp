#include "torushopf/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "torushopf/model.hpp"

namespace torushopf {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

}  // namespace

std::string verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::EquilibriumStable:
      return "equilibrium-stable";
    case VerdictKind::EquilibriumUnstable:
      return "equilibrium-unstable";
    case VerdictKind::OrbitStable:
      return "orbit-stable";
    case VerdictKind::OrbitUnstable:
      return "orbit-unstable";
    case VerdictKind::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

StabilityVerdict vdp_instability_criterion(const LatticeParams& p) {
  if (p.variant != Variant::VdpBidirectionalY)
    throw ConfigError("instability criterion applies to the bidirectional "
                      "variant only");
  const double theta = (p.n - 1) * kPi / p.n;
  const double threshold = 1.0 / (2.0 * (std::cos(theta) - 1.0));
  const double c[3] = {p.delta, p.zeta, p.epsilon};

  double worst = 0.0;
  std::array<int, 3> worst_sel = {0, 0, 0};
  for (int mask = 0; mask < 8; ++mask) {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i)
      if (mask & (1 << i)) sum += c[i];
    if (sum < worst) {
      worst = sum;
      for (int i = 0; i < 3; ++i) worst_sel[i] = (mask >> i) & 1;
    }
  }

  ModeIndex witness{worst_sel[0] * (p.n - 1) / 2, worst_sel[1] * (p.n - 1) / 2,
                    worst_sel[2] * (p.n - 1) / 2};
  const double k = k_of_mode(p, witness);

  StabilityVerdict v;
  v.threshold = threshold;
  if (worst < threshold) {
    v.kind = VerdictKind::EquilibriumUnstable;
    v.witnesses.push_back({"K of extreme mode", witness, std::nullopt, k});
    v.witnesses.push_back({"real eigenvalue at a=0", witness, std::nullopt,
                           std::sqrt(-p.b * k)});
  } else {
    v.kind = VerdictKind::Inconclusive;
    v.witnesses.push_back({"worst coupling sum", witness, std::nullopt, worst});
  }
  return v;
}

ThresholdResult vdpl_threshold(const LatticeParams& p) {
  if (p.variant != Variant::VdplUnidirectionalX)
    throw ConfigError("equilibrium threshold applies to the unidirectional "
                      "variant only");
  const double c[3] = {p.delta, p.zeta, p.epsilon};
  ThresholdResult r;
  int t[3];
  for (int i = 0; i < 3; ++i) t[i] = c[i] > 0.0 ? (p.n - 1) / 2 : 0;
  r.leading_mode = {t[0], t[1], t[2]};
  r.a_star = critical_a_vdpl(p, r.leading_mode);
  return r;
}

StabilityVerdict equilibrium_stability(const LatticeParams& p, double a,
                                       double margin) {
  double max_re = -std::numeric_limits<double>::infinity();
  Complex leading;
  ModeIndex leading_mode;
  for (const auto& t : all_modes(p.n)) {
    const auto pair = p.variant == Variant::VdpBidirectionalY
                          ? eigenvalues_vdp(p, t, a)
                          : eigenvalues_vdpl(p, t, a);
    for (const auto& lam : pair) {
      if (lam.real() > max_re) {
        max_re = lam.real();
        leading = lam;
        leading_mode = t;
      }
    }
  }
  StabilityVerdict v;
  v.threshold = 0.0;
  if (max_re > margin)
    v.kind = VerdictKind::EquilibriumUnstable;
  else if (max_re < -margin)
    v.kind = VerdictKind::EquilibriumStable;
  else
    v.kind = VerdictKind::Inconclusive;
  v.witnesses.push_back({"leading eigenvalue", leading_mode, leading, max_re});
  return v;
}

namespace {

// Right-hand side of the single van der Pol-like oscillator, read off the
// synchronized subspace of a small lattice so the planar reduction shares
// its arithmetic with the full model.
std::pair<double, double> vdpl_single_rhs(double x, double y, double b) {
  LatticeParams p;
  p.n = 3;
  p.variant = Variant::VdplUnidirectionalX;
  p.a = 0.0;
  p.b = b;
  const int m = p.sites();
  Eigen::VectorXd v(2 * m), out(2 * m);
  v.head(m).setConstant(x);
  v.tail(m).setConstant(y);
  rhs_stacked(p, v, out);
  return {out[0], out[m]};
}

}  // namespace

double lyapunov_coefficient_vdpl_single(double b, double h) {
  const double omega = std::sqrt(b);

  // In coordinates (u, v) = (x, y/omega) the system takes the normal-form
  // frame u' = -omega*v + f(u,v), v' = omega*u + g(u,v).
  const auto f = [&](double u, double v) {
    return vdpl_single_rhs(u, omega * v, b).first + omega * v;
  };
  const auto g = [&](double u, double v) {
    return vdpl_single_rhs(u, omega * v, b).second / omega - omega * u;
  };

  const auto coefficient = [&](double s) {
    // Second and third partials at the origin by central differences.
    const auto dxx = [&](const auto& w) {
      return (w(s, 0.0) - 2.0 * w(0.0, 0.0) + w(-s, 0.0)) / (s * s);
    };
    const auto dyy = [&](const auto& w) {
      return (w(0.0, s) - 2.0 * w(0.0, 0.0) + w(0.0, -s)) / (s * s);
    };
    const auto dxy = [&](const auto& w) {
      return (w(s, s) - w(s, -s) - w(-s, s) + w(-s, -s)) / (4.0 * s * s);
    };
    const auto dxxx = [&](const auto& w) {
      return (w(2.0 * s, 0.0) - 2.0 * w(s, 0.0) + 2.0 * w(-s, 0.0) -
              w(-2.0 * s, 0.0)) /
             (2.0 * s * s * s);
    };
    const auto dyyy = [&](const auto& w) {
      return (w(0.0, 2.0 * s) - 2.0 * w(0.0, s) + 2.0 * w(0.0, -s) -
              w(0.0, -2.0 * s)) /
             (2.0 * s * s * s);
    };
    const auto dxyy = [&](const auto& w) {
      return ((w(s, s) - 2.0 * w(s, 0.0) + w(s, -s)) -
              (w(-s, s) - 2.0 * w(-s, 0.0) + w(-s, -s))) /
             (2.0 * s * s * s);
    };
    const auto dxxy = [&](const auto& w) {
      return ((w(s, s) - 2.0 * w(0.0, s) + w(-s, s)) -
              (w(s, -s) - 2.0 * w(0.0, -s) + w(-s, -s))) /
             (2.0 * s * s * s);
    };

    const double fxx = dxx(f), fyy = dyy(f), fxy = dxy(f);
    const double gxx = dxx(g), gyy = dyy(g), gxy = dxy(g);
    const double fxxx = dxxx(f), fxyy = dxyy(f);
    const double gxxy = dxxy(g), gyyy = dyyy(g);

    return (fxxx + fxyy + gxxy + gyyy) / 16.0 +
           (fxy * (fxx + fyy) - gxy * (gxx + gyy) - fxx * gxx + fyy * gyy) /
               (16.0 * omega);
  };

  // Richardson extrapolation kills the O(h^2) error of the stencils.
  const double coarse = coefficient(h);
  const double fine = coefficient(h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

Eigen::MatrixXd monodromy(const LatticeParams& p, const Eigen::VectorXd& x0,
                          double period, const IntegratorOptions& opt) {
  const int dim = 2 * p.sites();
  Eigen::VectorXd z(dim + dim * dim);
  z.head(dim) = x0;
  Eigen::Map<Eigen::MatrixXd>(z.data() + dim, dim, dim).setIdentity();

  LatticeState s;
  const OdeRhs rhs = [&](double, const Eigen::VectorXd& zz,
                         Eigen::VectorXd& out) {
    out.resize(zz.size());
    Eigen::VectorXd state = zz.head(dim);
    Eigen::VectorXd ds(dim);
    rhs_stacked(p, state, ds);
    out.head(dim) = ds;
    s = LatticeState::from_stacked(state);
    const Eigen::MatrixXd j = jacobian(p, s);
    Eigen::Map<const Eigen::MatrixXd> m(zz.data() + dim, dim, dim);
    Eigen::Map<Eigen::MatrixXd>(out.data() + dim, dim, dim) = j * m;
  };

  IntegratorOptions tight = opt;
  tight.atol = opt.atol / 10.0;
  tight.rtol = opt.rtol / 10.0;
  integrate_ode(rhs, z, 0.0, period, tight);
  return Eigen::Map<Eigen::MatrixXd>(z.data() + dim, dim, dim);
}

std::vector<Complex> floquet_multipliers(const PeriodicOrbit& orbit,
                                         const IntegratorOptions& opt) {
  const Eigen::MatrixXd m =
      monodromy(orbit.params, orbit.initial_state(), orbit.period, opt);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  std::vector<Complex> mult(solver.eigenvalues().data(),
                            solver.eigenvalues().data() +
                                solver.eigenvalues().size());
  std::sort(mult.begin(), mult.end(), [](const Complex& a, const Complex& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return mult;
}

FloquetResult floquet_analysis(const PeriodicOrbit& orbit,
                               const IntegratorOptions& opt, double margin) {
  FloquetResult r;
  r.multipliers = floquet_multipliers(orbit, opt);

  size_t trivial = 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < r.multipliers.size(); ++i) {
    const double d = std::abs(r.multipliers[i] - Complex(1.0, 0.0));
    if (d < best) {
      best = d;
      trivial = i;
    }
  }
  r.trivial_defect = best;

  double top = 0.0;
  Complex top_mult;
  for (size_t i = 0; i < r.multipliers.size(); ++i) {
    if (i == trivial) continue;
    const double mod = std::abs(r.multipliers[i]);
    if (mod > top) {
      top = mod;
      top_mult = r.multipliers[i];
    }
  }

  r.verdict.threshold = 1.0;
  if (top > 1.0 + margin)
    r.verdict.kind = VerdictKind::OrbitUnstable;
  else if (top < 1.0 - margin)
    r.verdict.kind = VerdictKind::OrbitStable;
  else
    r.verdict.kind = VerdictKind::Inconclusive;
  r.verdict.witnesses.push_back(
      {"largest nontrivial multiplier", std::nullopt, top_mult, top});
  r.verdict.witnesses.push_back(
      {"trivial multiplier defect", std::nullopt,
       r.multipliers.empty() ? Complex(0, 0) : r.multipliers[trivial], best});
  return r;
}

}  // namespace torushopf
