#include "torushopf/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace torushopf {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;

std::array<double, 3> mode_angles(const LatticeParams& p, const ModeIndex& t) {
  return {kTwoPi * t.t1 / p.n, kTwoPi * t.t2 / p.n, kTwoPi * t.t3 / p.n};
}

}  // namespace

double k_of_mode(const LatticeParams& p, const ModeIndex& t) {
  const auto phi = mode_angles(p, t);
  return 1.0 + 2.0 * p.delta * (1.0 - std::cos(phi[0])) +
         2.0 * p.zeta * (1.0 - std::cos(phi[1])) +
         2.0 * p.epsilon * (1.0 - std::cos(phi[2]));
}

double g_of_mode(const LatticeParams& p, const ModeIndex& t) {
  const auto phi = mode_angles(p, t);
  return p.delta * std::sin(phi[0]) + p.zeta * std::sin(phi[1]) +
         p.epsilon * std::sin(phi[2]);
}

double critical_a_vdpl(const LatticeParams& p, const ModeIndex& t) {
  const auto phi = mode_angles(p, t);
  // + 0.0 folds a signed zero (negative coupling times exact zero) to +0.
  return p.delta * (1.0 - std::cos(phi[0])) +
         p.zeta * (1.0 - std::cos(phi[1])) +
         p.epsilon * (1.0 - std::cos(phi[2])) + 0.0;
}

double h_of_mode(const LatticeParams& p, const ModeIndex& t, double a) {
  return a - critical_a_vdpl(p, t);
}

std::array<Complex, 2> eigenvalues_vdp(const LatticeParams& p,
                                       const ModeIndex& t, double a) {
  const double mu = p.nu * a;
  const Complex disc(mu * mu - 4.0 * p.b * k_of_mode(p, t), 0.0);
  const Complex s = std::sqrt(disc);
  return {(mu + s) / 2.0, (mu - s) / 2.0};
}

std::array<Complex, 2> eigenvalues_vdpl(const LatticeParams& p,
                                        const ModeIndex& t, double a) {
  const Complex w(h_of_mode(p, t, a), -g_of_mode(p, t));
  const Complex s = std::sqrt(w * w - 4.0 * p.b);
  return {(w + s) / 2.0, (w - s) / 2.0};
}

std::pair<double, double> limit_periods(double G, double b) {
  const double r = std::sqrt(G * G + 4.0 * b);
  return {4.0 * kPi / (G + r), 4.0 * kPi / (r - G)};
}

std::pair<double, double> limit_periods_vdpl(const LatticeParams& p,
                                             const ModeIndex& t) {
  return limit_periods(g_of_mode(p, t), p.b);
}

std::vector<ModeIndex> all_modes(int n) {
  std::vector<ModeIndex> out;
  out.reserve(static_cast<size_t>(n) * n * n);
  for (int t1 = 0; t1 < n; ++t1)
    for (int t2 = 0; t2 < n; ++t2)
      for (int t3 = 0; t3 < n; ++t3) out.push_back({t1, t2, t3});
  return out;
}

std::vector<ModeIndex> canonical_modes(int n) {
  std::vector<ModeIndex> out;
  for (const auto& t : all_modes(n))
    if (canonical_mode(t, n) == t) out.push_back(t);
  return out;
}

std::vector<Complex> closed_form_spectrum(const LatticeParams& p, double a) {
  std::vector<Complex> out;
  out.reserve(2 * static_cast<size_t>(p.sites()));
  for (const auto& t : all_modes(p.n)) {
    const auto pair = p.variant == Variant::VdpBidirectionalY
                          ? eigenvalues_vdp(p, t, a)
                          : eigenvalues_vdpl(p, t, a);
    out.push_back(pair[0]);
    out.push_back(pair[1]);
  }
  return out;
}

Eigen::VectorXd mode_wave_cos(int n, const ModeIndex& t) {
  Eigen::VectorXd v(n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        v[site_index(n, a, b, c)] =
            std::cos(kTwoPi * (t.t1 * a + t.t2 * b + t.t3 * c) / n);
  return v;
}

Eigen::VectorXd mode_wave_sin(int n, const ModeIndex& t) {
  Eigen::VectorXd v(n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        v[site_index(n, a, b, c)] =
            std::sin(kTwoPi * (t.t1 * a + t.t2 * b + t.t3 * c) / n);
  return v;
}

ModeBasis mode_basis(const LatticeParams& p, const ModeIndex& t) {
  const ModeIndex r = reduce_mode(t, p.n);
  std::vector<ModeIndex> waves;
  if (p.variant == Variant::VdplUnidirectionalX) {
    waves = {r};
  } else {
    waves = {r,
             reduce_mode({r.t1, -r.t2, r.t3}, p.n),
             reduce_mode({r.t1, r.t2, -r.t3}, p.n),
             reduce_mode({r.t1, -r.t2, -r.t3}, p.n)};
  }

  const int m = p.sites();
  std::vector<Eigen::VectorXd> raw;
  for (const auto& w : waves) {
    raw.push_back(mode_wave_cos(p.n, w));
    raw.push_back(mode_wave_sin(p.n, w));
  }

  ModeBasis basis;
  basis.mode = r;
  std::vector<Eigen::VectorXd> kept;
  for (auto& v : raw) {
    for (const auto& q : kept) v -= q.dot(v) * q;
    const double norm = v.norm();
    if (norm > 1e-10) kept.push_back(v / norm);
  }
  basis.vectors.resize(m, static_cast<int>(kept.size()));
  for (size_t j = 0; j < kept.size(); ++j)
    basis.vectors.col(static_cast<int>(j)) = kept[j];
  return basis;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> mode_project(
    const ModeBasis& basis, const LatticeState& s) {
  return {basis.vectors.transpose() * s.x, basis.vectors.transpose() * s.y};
}

std::optional<std::pair<long, long>> nearest_rational(double value,
                                                      long max_den,
                                                      double tol) {
  if (!std::isfinite(value)) return std::nullopt;
  for (long q = 1; q <= max_den; ++q) {
    const long p = std::lround(value * q);
    if (std::abs(value - static_cast<double>(p) / q) <= tol) {
      const long g = std::gcd(std::abs(p), q);
      return std::make_pair(p / g, q / g);
    }
  }
  return std::nullopt;
}

std::vector<BifurcationRecord> bifurcation_catalog(const LatticeParams& p) {
  std::vector<BifurcationRecord> out;
  for (const auto& t : canonical_modes(p.n)) {
    BifurcationRecord rec;
    rec.mode = t;
    rec.variant = p.variant;
    if (p.variant == Variant::VdpBidirectionalY) {
      const double k = k_of_mode(p, t);
      if (k <= 0.0) continue;  // eigenvalues stay real, no onset in a
      rec.critical_a = 0.0;
      rec.k = k;
      rec.g = 0.0;
      rec.limit_frequency = std::sqrt(p.b * k);
      rec.period1 = kTwoPi / rec.limit_frequency;
      rec.period2 = rec.period1;
      for (const auto& h : symmetry_classes(p, t))
        rec.classes.push_back({h, branch_count(h)});
    } else {
      rec.critical_a = critical_a_vdpl(p, t);
      rec.k = 0.0;
      rec.g = g_of_mode(p, t);
      const auto periods = limit_periods(rec.g, p.b);
      rec.period1 = periods.first;
      rec.period2 = periods.second;
      rec.limit_frequency = kTwoPi / rec.period1;
      const double ratio = rec.period1 >= rec.period2
                               ? rec.period1 / rec.period2
                               : rec.period2 / rec.period1;
      rec.resonance_ratio = nearest_rational(ratio, 64, 1e-9);
      rec.resonant = rec.resonance_ratio.has_value();
      const auto classes = symmetry_classes(p, t);
      rec.classes.push_back({classes.front(), rec.resonant ? 1L : 2L});
    }
    out.push_back(std::move(rec));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const BifurcationRecord& a, const BifurcationRecord& b) {
                     if (a.critical_a != b.critical_a)
                       return a.critical_a < b.critical_a;
                     return a.mode < b.mode;
                   });
  return out;
}

}  // namespace torushopf
