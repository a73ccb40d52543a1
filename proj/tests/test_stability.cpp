#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "torushopf/lattice.hpp"
#include "torushopf/model.hpp"
#include "torushopf/modes.hpp"
#include "torushopf/orbits.hpp"
#include "torushopf/stability.hpp"
#include "torushopf/symmetry.hpp"

using namespace torushopf;

namespace {

constexpr double kPi = 3.14159265358979323846;

LatticeParams vdpl_params(double d, double z, double e) {
  LatticeParams p;
  p.variant = Variant::VdplUnidirectionalX;
  p.delta = d;
  p.zeta = z;
  p.epsilon = e;
  return p;
}

double max_spectral_re(const LatticeParams& p, double a) {
  double worst = -1e300;
  for (const auto& l : closed_form_spectrum(p, a))
    worst = std::max(worst, l.real());
  return worst;
}

PeriodicOrbit synchronized_orbit(const LatticeParams& p) {
  const auto classes = symmetry_classes(p, {0, 0, 0});
  const double onset = vdpl_threshold(p).a_star;
  const BranchSeed seed = seed_from_class(p, {0, 0, 0}, classes[0], onset);
  const ShootResult res =
      find_orbit_shooting(p, seed.state, seed.period_guess);
  REQUIRE(res.status == ShootStatus::Converged);
  return res.orbit;
}

}  // namespace

TEST_CASE("coupling-sum criterion flags the extreme wave") {
  LatticeParams p;
  p.delta = -1.0;
  const StabilityVerdict v = vdp_instability_criterion(p);
  CHECK(v.kind == VerdictKind::EquilibriumUnstable);
  REQUIRE(v.witnesses.size() >= 2);
  REQUIRE(v.witnesses[0].mode.has_value());
  CHECK(*v.witnesses[0].mode == ModeIndex{1, 0, 0});
  CHECK(v.witnesses[0].value == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(v.witnesses[1].value ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK(max_spectral_re(p, 0.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("coupling-sum criterion threshold is sharp at one third") {
  LatticeParams p;
  p.delta = -0.34;
  CHECK(vdp_instability_criterion(p).kind == VerdictKind::EquilibriumUnstable);
  p.delta = -0.33;
  CHECK(vdp_instability_criterion(p).kind == VerdictKind::Inconclusive);
  p.delta = 0.0;
  CHECK(vdp_instability_criterion(p).kind == VerdictKind::Inconclusive);
  p.variant = Variant::VdplUnidirectionalX;
  CHECK_THROWS_AS(vdp_instability_criterion(p), ConfigError);
}

TEST_CASE("flagged parameter draws really destabilize the origin") {
  std::mt19937 rng(83);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int flagged = 0;
  while (flagged < 20) {
    LatticeParams p;
    p.n = 3;
    p.delta = u(rng);
    p.zeta = u(rng);
    p.epsilon = u(rng);
    p.b = 0.5 + std::abs(u(rng));
    const StabilityVerdict v = vdp_instability_criterion(p);
    if (v.kind != VerdictKind::EquilibriumUnstable) continue;
    ++flagged;
    CHECK(max_spectral_re(p, 0.0) > 0.0);
    REQUIRE(v.witnesses[0].mode.has_value());
    CHECK(k_of_mode(p, *v.witnesses[0].mode) < 0.0);
  }
}

TEST_CASE("threshold table over all sign patterns") {
  std::mt19937 rng(89);
  std::uniform_real_distribution<double> mag(0.05, 1.0);
  for (int n : {3, 5, 7}) {
    for (int pattern = 0; pattern < 8; ++pattern) {
      const double d = ((pattern & 1) ? 1.0 : -1.0) * mag(rng);
      const double z = ((pattern & 2) ? 1.0 : -1.0) * mag(rng);
      const double e = ((pattern & 4) ? 1.0 : -1.0) * mag(rng);
      LatticeParams p = vdpl_params(d, z, e);
      p.n = n;
      const ThresholdResult res = vdpl_threshold(p);
      const int half = (n - 1) / 2;
      const ModeIndex lead{d > 0 ? half : 0, z > 0 ? half : 0,
                           e > 0 ? half : 0};
      CHECK(res.leading_mode == lead);
      CHECK(res.a_star == critical_a_vdpl(p, lead));
      const double theta = (n - 1) * kPi / n;
      const double analytic = (d > 0 ? d * (1 - std::cos(theta)) : 0.0) +
                              (z > 0 ? z * (1 - std::cos(theta)) : 0.0) +
                              (e > 0 ? e * (1 - std::cos(theta)) : 0.0);
      CHECK(res.a_star == doctest::Approx(analytic).epsilon(1e-14));
      if (pattern == 0) {
        CHECK(res.a_star == 0.0);
        CHECK(!std::signbit(res.a_star));
      }
    }
  }
}

TEST_CASE("threshold equals the brute-force crossing maximum") {
  std::mt19937 rng(97);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {3, 5}) {
    for (int draw = 0; draw < 20; ++draw) {
      LatticeParams p = vdpl_params(u(rng), u(rng), u(rng));
      p.n = n;
      const ThresholdResult res = vdpl_threshold(p);
      double best = -1e300;
      for (const auto& t : all_modes(n))
        best = std::max(best, critical_a_vdpl(p, t));
      CHECK(res.a_star == best);
      CHECK(critical_a_vdpl(p, res.leading_mode) == best);
    }
  }
}

TEST_CASE("zero coupling breaks threshold ties toward the constant mode") {
  LatticeParams p = vdpl_params(0.0, 0.4, -0.2);
  const ThresholdResult res = vdpl_threshold(p);
  CHECK(res.leading_mode == ModeIndex{0, 1, 0});
}

TEST_CASE("equilibrium verdicts from the full spectrum") {
  // uncoupled symmetric variant: sign of a decides
  LatticeParams p;
  CHECK(equilibrium_stability(p, -0.1).kind == VerdictKind::EquilibriumStable);
  CHECK(equilibrium_stability(p, 0.1).kind == VerdictKind::EquilibriumUnstable);

  // negative-K wave keeps the origin unstable for every a
  LatticeParams q;
  q.delta = -1.0;
  for (double a : {-5.0, -1.0, 0.0, 1.0})
    CHECK(equilibrium_stability(q, a).kind == VerdictKind::EquilibriumUnstable);

  // directed variant destabilizes at the first crossing, not the last
  LatticeParams r = vdpl_params(-0.1, -0.1, -0.1);
  double first = 1e300;
  for (const auto& t : all_modes(3))
    first = std::min(first, critical_a_vdpl(r, t));
  CHECK(first == doctest::Approx(-0.45).epsilon(1e-14));
  CHECK(equilibrium_stability(r, first - 0.05).kind ==
        VerdictKind::EquilibriumStable);
  CHECK(equilibrium_stability(r, first + 0.05).kind ==
        VerdictKind::EquilibriumUnstable);
  CHECK(equilibrium_stability(r, 0.05).kind ==
        VerdictKind::EquilibriumUnstable);
  const auto verdict = equilibrium_stability(r, first + 0.05);
  REQUIRE(!verdict.witnesses.empty());
  CHECK(verdict.witnesses[0].value > 0.0);
}

TEST_CASE("spectrum sign scan brackets the two thresholds") {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {3, 5}) {
    for (int draw = 0; draw < 5; ++draw) {
      LatticeParams p = vdpl_params(u(rng), u(rng), u(rng));
      p.n = n;
      double lo = 1e300, hi = -1e300;
      for (const auto& t : all_modes(n)) {
        lo = std::min(lo, critical_a_vdpl(p, t));
        hi = std::max(hi, critical_a_vdpl(p, t));
      }
      CHECK(max_spectral_re(p, lo - 1e-3) < 0.0);
      CHECK(max_spectral_re(p, hi + 1e-3) > 0.0);
    }
  }
}

TEST_CASE("first curvature coefficient of the single oscillator") {
  for (double b : {0.5, 1.0, 2.0})
    CHECK(lyapunov_coefficient_vdpl_single(b) ==
          doctest::Approx(-0.375).epsilon(1e-6));
  const double coarse = lyapunov_coefficient_vdpl_single(1.0, 1e-2);
  const double fine = lyapunov_coefficient_vdpl_single(1.0, 5e-3);
  CHECK(std::abs(fine - coarse) / std::abs(coarse) < 1e-4);
}

TEST_CASE("negative curvature means a settling square-root amplitude") {
  // uncoupled lattice, synchronized start: every node is the same oscillator
  auto settled_amplitude = [&](double a, double t_settle) {
    LatticeParams p = vdpl_params(0.0, 0.0, 0.0);
    p.a = a;
    LatticeState s0(27);
    s0.x.setConstant(0.05);
    const LatticeState s1 = integrate(p, s0, {0.0, t_settle});
    const Trajectory tr =
        integrate_trajectory(p, s1.stacked(), 30.0, 300);
    const double hi = tr.states.row(0).maxCoeff();
    const double lo = tr.states.row(0).minCoeff();
    return hi - lo;
  };
  const double big = settled_amplitude(0.04, 400.0);
  const double small = settled_amplitude(0.01, 1200.0);
  CHECK(big / small == doctest::Approx(2.0).epsilon(0.2));

  LatticeParams p = vdpl_params(0.0, 0.0, 0.0);
  p.a = -0.05;
  LatticeState s0(27);
  s0.x.setConstant(0.05);
  const LatticeState end = integrate(p, s0, {0.0, 400.0});
  CHECK(end.x.cwiseAbs().maxCoeff() < 1e-3);
  CHECK(end.y.cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("synchronized branch stability tracks the coupling signs") {
  // identical positive couplings: orbit born past the last crossing is stable
  LatticeParams stable = vdpl_params(0.1, 0.1, 0.1);
  stable.a = vdpl_threshold(stable).a_star + 0.02;
  const PeriodicOrbit good = synchronized_orbit(stable);
  const FloquetResult fr = floquet_analysis(good);
  CHECK(fr.trivial_defect < 1e-4);
  CHECK(fr.verdict.kind == VerdictKind::OrbitStable);
  REQUIRE(fr.multipliers.size() == 54);
  int near_one = 0;
  for (const auto& m : fr.multipliers) {
    if (std::abs(m - std::complex<double>(1.0, 0.0)) < 1e-4) {
      ++near_one;
      continue;
    }
    CHECK(std::abs(m) < 1.0 - 1e-3);
  }
  CHECK(near_one == 1);

  // flipping one coupling negative pushes a multiplier outside the disk
  LatticeParams mixed = vdpl_params(-0.1, 0.1, 0.1);
  mixed.a = vdpl_threshold(mixed).a_star + 0.02;
  const PeriodicOrbit bad = synchronized_orbit(mixed);
  const FloquetResult fm = floquet_analysis(bad);
  CHECK(fm.verdict.kind == VerdictKind::OrbitUnstable);
  double worst = 0.0;
  for (const auto& m : fm.multipliers) worst = std::max(worst, std::abs(m));
  CHECK(worst > 1.0 + 1e-3);
}

TEST_CASE("multiplier product obeys the trace integral") {
  LatticeParams p = vdpl_params(0.1, 0.1, 0.1);
  p.a = vdpl_threshold(p).a_star + 0.02;
  const PeriodicOrbit orbit = synchronized_orbit(p);
  const FloquetResult fr = floquet_analysis(orbit);

  double log_det = 0.0;
  for (const auto& m : fr.multipliers) log_det += std::log(std::abs(m));

  const int quad = 4000;
  double integral = 0.0;
  for (int j = 0; j < quad; ++j) {
    const double tau = orbit.period * j / quad;
    const LatticeState s = LatticeState::from_stacked(orbit.state_at(tau));
    integral += jacobian(p, s).trace();
  }
  integral *= orbit.period / quad;
  CHECK(log_det == doctest::Approx(integral).epsilon(1e-3));
}

TEST_CASE("verdict names are stable strings") {
  CHECK(verdict_name(VerdictKind::EquilibriumStable) == "equilibrium-stable");
  CHECK(verdict_name(VerdictKind::EquilibriumUnstable) ==
        "equilibrium-unstable");
  CHECK(verdict_name(VerdictKind::OrbitStable) == "orbit-stable");
  CHECK(verdict_name(VerdictKind::OrbitUnstable) == "orbit-unstable");
  CHECK(verdict_name(VerdictKind::Inconclusive) == "inconclusive");
}
