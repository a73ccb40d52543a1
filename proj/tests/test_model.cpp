#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "torushopf/lattice.hpp"
#include "torushopf/model.hpp"
#include "torushopf/modes.hpp"
#include "torushopf/symmetry.hpp"

using namespace torushopf;

namespace {

LatticeState random_state(int n, std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  LatticeState s(n * n * n);
  for (int i = 0; i < s.x.size(); ++i) {
    s.x[i] = u(rng);
    s.y[i] = u(rng);
  }
  return s;
}

// Largest nearest-neighbour distance between two equally sized spectra.
double spectral_mismatch(std::vector<std::complex<double>> a,
                         std::vector<std::complex<double>> b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (const auto& za : a) {
    double best = 1e300;
    size_t arg = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      const double d = std::abs(za - b[j]);
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    worst = std::max(worst, best);
    b.erase(b.begin() + static_cast<long>(arg));
  }
  return worst;
}

std::vector<std::complex<double>> dense_origin_spectrum(
    const LatticeParams& p, double a) {
  LatticeParams q = p;
  q.a = a;
  const LatticeState origin(p.sites());
  const Eigen::MatrixXd J = jacobian(q, origin);
  Eigen::EigenSolver<Eigen::MatrixXd> es(J);
  std::vector<std::complex<double>> out;
  out.reserve(J.rows());
  for (int i = 0; i < J.rows(); ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

}  // namespace

TEST_CASE("variant names round-trip") {
  CHECK(variant_name(Variant::VdpBidirectionalY) == "vdp");
  CHECK(variant_name(Variant::VdplUnidirectionalX) == "vdpl");
  CHECK(variant_from_name("vdp") == Variant::VdpBidirectionalY);
  CHECK(variant_from_name("vdpl") == Variant::VdplUnidirectionalX);
  CHECK_THROWS_AS(variant_from_name("vdq"), ConfigError);
}

TEST_CASE("parameter validation rejects bad shapes and scales") {
  LatticeParams p;
  CHECK_NOTHROW(p.validate());
  p.n = 4;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.n = 1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.n = 5;
  CHECK_NOTHROW(p.validate());
  p.nu = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.nu = 1.0;
  p.b = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("site indexing round-trips") {
  for (int n : {3, 5}) {
    for (int s = 0; s < n * n * n; ++s) {
      const auto c = site_coords(n, s);
      CHECK(site_index(n, c[0], c[1], c[2]) == s);
    }
    CHECK(site_index(n, 0, 0, 0) == 0);
    CHECK(site_index(n, 1, 0, 0) == n * n);
  }
}

TEST_CASE("canonical mode picks the smaller of t and -t") {
  CHECK(canonical_mode({2, 0, 0}, 3) == ModeIndex{1, 0, 0});
  CHECK(canonical_mode({1, 0, 0}, 3) == ModeIndex{1, 0, 0});
  CHECK(canonical_mode({2, 2, 1}, 3) == ModeIndex{1, 1, 2});
  CHECK(canonical_mode({0, 0, 0}, 3) == ModeIndex{0, 0, 0});
  CHECK(canonical_mode({-1, 4, 7}, 3) == ModeIndex{1, 2, 2});
  for (int n : {3, 5})
    for (const auto& t : all_modes(n))
      CHECK(canonical_mode(t, n) == canonical_mode(negate_mode(t, n), n));
}

TEST_CASE("stacked state round-trips and rejects odd length") {
  std::mt19937 rng(7);
  const LatticeState s = random_state(3, rng);
  const LatticeState back = LatticeState::from_stacked(s.stacked());
  CHECK(back.x == s.x);
  CHECK(back.y == s.y);
  CHECK_THROWS(LatticeState::from_stacked(Eigen::VectorXd::Zero(5)));
}

// Independent re-evaluation of the two vector fields, written directly from
// the node equations with explicit modular indexing.
TEST_CASE("rhs matches a direct stencil evaluation") {
  std::mt19937 rng(11);
  for (auto variant : {Variant::VdpBidirectionalY, Variant::VdplUnidirectionalX}) {
    LatticeParams p;
    p.n = 3;
    p.delta = 0.3;
    p.zeta = -0.2;
    p.epsilon = 0.1;
    p.nu = 1.7;
    p.a = 0.4;
    p.b = 2.0;
    p.variant = variant;
    const LatticeState s = random_state(p.n, rng);
    const LatticeState f = rhs(p, s);
    const int n = p.n;
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be)
        for (int ga = 0; ga < n; ++ga) {
          const int idx = site_index(n, al, be, ga);
          const double xs = s.x[idx];
          double expect_x;
          if (variant == Variant::VdpBidirectionalY) {
            double cy = s.y[idx];
            cy += p.delta * (2 * s.y[idx] -
                             s.y[site_index(n, mod(al + 1, n), be, ga)] -
                             s.y[site_index(n, mod(al - 1, n), be, ga)]);
            cy += p.zeta * (2 * s.y[idx] -
                            s.y[site_index(n, al, mod(be + 1, n), ga)] -
                            s.y[site_index(n, al, mod(be - 1, n), ga)]);
            cy += p.epsilon * (2 * s.y[idx] -
                               s.y[site_index(n, al, be, mod(ga + 1, n))] -
                               s.y[site_index(n, al, be, mod(ga - 1, n))]);
            expect_x = p.nu * (p.a * xs - xs * xs * xs) - cy;
          } else {
            double cx = 0.0;
            cx += p.delta * (xs - s.x[site_index(n, mod(al + 1, n), be, ga)]);
            cx += p.zeta * (xs - s.x[site_index(n, al, mod(be + 1, n), ga)]);
            cx += p.epsilon * (xs - s.x[site_index(n, al, be, mod(ga + 1, n))]);
            expect_x = p.a * xs - s.y[idx] - xs * xs * xs - xs * xs - cx;
          }
          CHECK(f.x[idx] == doctest::Approx(expect_x).epsilon(1e-14));
          CHECK(f.y[idx] == doctest::Approx(p.b * xs).epsilon(1e-14));
        }
  }
}

TEST_CASE("softened cubic only changes the odd nonlinearity") {
  LatticeParams p;
  p.cubic_over_three = true;
  std::mt19937 rng(13);
  const LatticeState s = random_state(p.n, rng);
  LatticeParams q = p;
  q.cubic_over_three = false;
  const LatticeState f3 = rhs(p, s), f1 = rhs(q, s);
  CHECK(f3.y == f1.y);
  for (int i = 0; i < s.x.size(); ++i) {
    const double xi = s.x[i];
    CHECK(f1.x[i] - f3.x[i] ==
          doctest::Approx(-p.nu * (xi * xi * xi - xi * xi * xi / 3.0))
              .epsilon(1e-12));
  }
}

TEST_CASE("jacobian matches central finite differences") {
  std::mt19937 rng(17);
  for (auto variant : {Variant::VdpBidirectionalY, Variant::VdplUnidirectionalX}) {
    LatticeParams p;
    p.delta = 0.25;
    p.zeta = -0.15;
    p.epsilon = 0.05;
    p.nu = 1.3;
    p.a = 0.2;
    p.b = 1.5;
    p.variant = variant;
    const LatticeState s = random_state(p.n, rng, 0.5);
    const Eigen::MatrixXd J = jacobian(p, s);
    const Eigen::VectorXd v0 = s.stacked();
    const double h = 1e-6;
    Eigen::VectorXd fp, fm;
    double worst = 0.0;
    for (int j = 0; j < v0.size(); ++j) {
      Eigen::VectorXd v = v0;
      v[j] = v0[j] + h;
      rhs_stacked(p, v, fp);
      v[j] = v0[j] - h;
      rhs_stacked(p, v, fm);
      const Eigen::VectorXd col = (fp - fm) / (2 * h);
      worst = std::max(worst, (J.col(j) - col).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("coupling matrix applies the closed-form multiplier to each wave") {
  LatticeParams p;
  p.delta = 0.3;
  p.zeta = -0.2;
  p.epsilon = 0.1;
  const CouplingMatrix C = coupling_matrix(p);
  for (const auto& t : all_modes(p.n)) {
    const Eigen::VectorXd c = mode_wave_cos(p.n, t);
    const Eigen::VectorXd s = mode_wave_sin(p.n, t);
    const double K = k_of_mode(p, t);
    CHECK((C * c - K * c).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((C * s - K * s).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("symmetric coupling spectrum is the K multiset") {
  LatticeParams p;
  p.delta = 0.4;
  p.zeta = 0.15;
  p.epsilon = -0.1;
  const Eigen::MatrixXd C = Eigen::MatrixXd(coupling_matrix(p));
  CHECK((C - C.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  std::vector<double> dense(es.eigenvalues().data(),
                            es.eigenvalues().data() + es.eigenvalues().size());
  std::vector<double> closed;
  for (const auto& t : all_modes(p.n)) closed.push_back(k_of_mode(p, t));
  std::sort(closed.begin(), closed.end());
  for (size_t i = 0; i < dense.size(); ++i)
    CHECK(dense[i] == doctest::Approx(closed[i]).epsilon(1e-12));
}

TEST_CASE("directed coupling spectrum matches the complex mode multipliers") {
  LatticeParams p;
  p.variant = Variant::VdplUnidirectionalX;
  p.delta = 0.3;
  p.zeta = -0.2;
  p.epsilon = 0.1;
  const Eigen::MatrixXd C = Eigen::MatrixXd(coupling_matrix(p));
  Eigen::EigenSolver<Eigen::MatrixXd> es(C);
  std::vector<std::complex<double>> dense;
  for (int i = 0; i < C.rows(); ++i) dense.push_back(es.eigenvalues()[i]);
  std::vector<std::complex<double>> closed;
  for (const auto& t : all_modes(p.n))
    closed.emplace_back(critical_a_vdpl(p, t), g_of_mode(p, t));
  CHECK(spectral_mismatch(dense, closed) < 1e-10);
}

TEST_CASE("closed-form origin spectrum equals the dense eigensolve") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (auto variant : {Variant::VdpBidirectionalY, Variant::VdplUnidirectionalX}) {
    for (int draw = 0; draw < 2; ++draw) {
      LatticeParams p;
      p.variant = variant;
      p.delta = u(rng);
      p.zeta = u(rng);
      p.epsilon = u(rng);
      p.nu = 0.8 + 0.4 * draw;
      p.b = 1.0 + 0.5 * draw;
      const double a = u(rng) * 0.2;
      CHECK(spectral_mismatch(dense_origin_spectrum(p, a),
                              closed_form_spectrum(p, a)) < 1e-7);
    }
  }
}

TEST_CASE("rhs commutes with the lattice action bit-exactly") {
  std::mt19937 rng(29);
  LatticeParams vdp;
  vdp.delta = 0.3;
  vdp.zeta = -0.2;
  vdp.epsilon = 0.1;
  vdp.a = 0.4;
  vdp.nu = 1.5;
  LatticeParams vdpl = vdp;
  vdpl.variant = Variant::VdplUnidirectionalX;

  std::vector<GroupElement> dihedral, cyclic;
  for (int axis = 0; axis < 3; ++axis) {
    for (int r = 1; r < 3; ++r) {
      dihedral.push_back(GroupElement::shift(axis, r));
      cyclic.push_back(GroupElement::shift(axis, r));
    }
    dihedral.push_back(GroupElement::reflect(axis));
  }
  // A couple of mixed products exercise composed index maps.
  dihedral.push_back(compose(GroupElement::shift(0, 1),
                             GroupElement::reflect(2), 3));
  cyclic.push_back(compose(GroupElement::shift(0, 1),
                           GroupElement::shift(1, 2), 3));

  for (int k = 0; k < 100; ++k) {
    const LatticeState s = random_state(3, rng);
    for (const auto& g : dihedral) {
      const LatticeState lhs = rhs(vdp, act(g, vdp, s));
      const LatticeState rhs_ = act(g, vdp, rhs(vdp, s));
      CHECK(lhs.x == rhs_.x);
      CHECK(lhs.y == rhs_.y);
    }
    for (const auto& g : cyclic) {
      const LatticeState lhs = rhs(vdpl, act(g, vdpl, s));
      const LatticeState rhs_ = act(g, vdpl, rhs(vdpl, s));
      CHECK(lhs.x == rhs_.x);
      CHECK(lhs.y == rhs_.y);
    }
  }
}

TEST_CASE("directed field is not reflection symmetric") {
  LatticeParams p;
  p.variant = Variant::VdplUnidirectionalX;
  p.delta = 0.3;
  std::mt19937 rng(31);
  const LatticeState s = random_state(3, rng);
  const GroupElement g = GroupElement::reflect(0);
  const LatticeState lhs = rhs(p, act(g, p, s));
  const LatticeState rhs_ = act(g, p, rhs(p, s));
  CHECK((lhs.x - rhs_.x).cwiseAbs().maxCoeff() > 1e-3);
}
