#include "torushopf/symmetry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "torushopf/orbit.hpp"

namespace torushopf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

int mod_n(int v, int n) {
  int r = v % n;
  return r < 0 ? r + n : r;
}

double mod_two_pi(double v) {
  double r = std::fmod(v, kTwoPi);
  return r < 0 ? r + kTwoPi : r;
}

}  // namespace

GroupElement GroupElement::shift(int axis, int amount) {
  GroupElement g;
  g.rot[axis] = amount;
  return g;
}

GroupElement GroupElement::reflect(int axis) {
  GroupElement g;
  g.flip[axis] = true;
  return g;
}

// Index maps compose as m_{gh} = m_h o m_g, so that acting with gh equals
// acting with h first inside the lookup: (gh.s)_a = s_{m_h(m_g(a))}.
GroupElement compose(const GroupElement& g, const GroupElement& h, int n) {
  GroupElement r;
  for (int i = 0; i < 3; ++i) {
    r.flip[i] = g.flip[i] != h.flip[i];
    int rg = h.flip[i] ? -g.rot[i] : g.rot[i];
    r.rot[i] = mod_n(rg + h.rot[i], n);
  }
  return r;
}

GroupElement inverse(const GroupElement& g, int n) {
  GroupElement r;
  for (int i = 0; i < 3; ++i) {
    r.flip[i] = g.flip[i];
    r.rot[i] = g.flip[i] ? g.rot[i] : mod_n(-g.rot[i], n);
  }
  return r;
}

bool equal_elements(const GroupElement& g, const GroupElement& h, int n) {
  for (int i = 0; i < 3; ++i) {
    if (g.flip[i] != h.flip[i]) return false;
    if (mod_n(g.rot[i], n) != mod_n(h.rot[i], n)) return false;
  }
  return true;
}

std::vector<int> site_permutation(const GroupElement& g, int n) {
  std::vector<int> perm(static_cast<size_t>(n) * n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        std::array<int, 3> src = {a, b, c};
        std::array<int, 3> dst;
        for (int i = 0; i < 3; ++i) {
          int v = g.flip[i] ? -src[i] : src[i];
          dst[i] = mod_n(v + g.rot[i], n);
        }
        perm[site_index(n, a, b, c)] = site_index(n, dst[0], dst[1], dst[2]);
      }
    }
  }
  return perm;
}

LatticeState act(const GroupElement& g, const LatticeParams& p,
                 const LatticeState& s) {
  const auto perm = site_permutation(g, p.n);
  const int m = p.sites();
  LatticeState out;
  out.x.resize(m);
  out.y.resize(m);
  for (int i = 0; i < m; ++i) {
    out.x[i] = s.x[perm[i]];
    out.y[i] = s.y[perm[i]];
  }
  return out;
}

Eigen::VectorXd act_stacked(const GroupElement& g, const LatticeParams& p,
                            const Eigen::VectorXd& v) {
  const auto perm = site_permutation(g, p.n);
  const int m = p.sites();
  Eigen::VectorXd out(2 * m);
  for (int i = 0; i < m; ++i) {
    out[i] = v[perm[i]];
    out[m + i] = v[m + perm[i]];
  }
  return out;
}

long SubgroupFactor::order(int n) const {
  switch (kind) {
    case FactorKind::CyclicTwisted:
      return n;
    case FactorKind::ReflectionPlus:
    case FactorKind::ReflectionMinus:
      return 2;
    case FactorKind::FullDihedral:
      return 2L * n;
  }
  return 0;
}

std::string SubgroupFactor::display(int n) const {
  switch (kind) {
    case FactorKind::CyclicTwisted:
      return "Z" + std::to_string(n);
    case FactorKind::ReflectionPlus:
    case FactorKind::ReflectionMinus:
      return "D1";
    case FactorKind::FullDihedral:
      return "D" + std::to_string(n);
  }
  return "?";
}

std::string SubgroupFactor::twist_label() const {
  switch (kind) {
    case FactorKind::CyclicTwisted:
      return std::to_string(twist);
    case FactorKind::ReflectionPlus:
      return "+";
    case FactorKind::ReflectionMinus:
      return "-";
    case FactorKind::FullDihedral:
      return "1";
  }
  return "?";
}

long TwistedSubgroup::order() const {
  return factor[0].order(n) * factor[1].order(n) * factor[2].order(n);
}

std::string TwistedSubgroup::name() const {
  std::ostringstream os;
  os << "(" << factor[0].display(n) << " x " << factor[1].display(n) << " x "
     << factor[2].display(n) << ")^(" << factor[0].twist_label() << ","
     << factor[1].twist_label() << "," << factor[2].twist_label() << ")";
  return os.str();
}

std::vector<std::pair<GroupElement, double>> TwistedSubgroup::generators()
    const {
  std::vector<std::pair<GroupElement, double>> gens;
  for (int i = 0; i < 3; ++i) {
    switch (factor[i].kind) {
      case FactorKind::CyclicTwisted:
        gens.emplace_back(GroupElement::shift(i, 1),
                          mod_two_pi(kTwoPi * factor[i].twist / n));
        break;
      case FactorKind::ReflectionPlus:
        gens.emplace_back(GroupElement::reflect(i), 0.0);
        break;
      case FactorKind::ReflectionMinus:
        gens.emplace_back(GroupElement::reflect(i), kTwoPi / 2.0);
        break;
      case FactorKind::FullDihedral:
        gens.emplace_back(GroupElement::shift(i, 1), 0.0);
        gens.emplace_back(GroupElement::reflect(i), 0.0);
        break;
    }
  }
  return gens;
}

std::optional<double> TwistedSubgroup::phase_of(const GroupElement& g) const {
  double phase = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int r = mod_n(g.rot[i], n);
    switch (factor[i].kind) {
      case FactorKind::CyclicTwisted:
        if (g.flip[i]) return std::nullopt;
        phase += kTwoPi * r * factor[i].twist / n;
        break;
      case FactorKind::ReflectionPlus:
        if (r != 0) return std::nullopt;
        break;
      case FactorKind::ReflectionMinus:
        if (r != 0) return std::nullopt;
        if (g.flip[i]) phase += kTwoPi / 2.0;
        break;
      case FactorKind::FullDihedral:
        break;
    }
  }
  return mod_two_pi(phase);
}

std::vector<TwistedSubgroup> TwistedSubgroup::enlargements() const {
  std::vector<TwistedSubgroup> out;
  for (int i = 0; i < 3; ++i) {
    const bool widens =
        (factor[i].kind == FactorKind::CyclicTwisted && factor[i].twist == 0) ||
        factor[i].kind == FactorKind::ReflectionPlus;
    if (!widens) continue;
    TwistedSubgroup h = *this;
    h.factor[i] = SubgroupFactor{FactorKind::FullDihedral, 0};
    out.push_back(h);
  }
  return out;
}

bool TwistedSubgroup::contains(const TwistedSubgroup& other) const {
  if (n != other.n) return false;
  for (int i = 0; i < 3; ++i) {
    const auto& a = factor[i];
    const auto& b = other.factor[i];
    const bool same = a.kind == b.kind &&
                      (a.kind != FactorKind::CyclicTwisted ||
                       mod_n(a.twist, n) == mod_n(b.twist, n));
    if (same) continue;
    const bool widened =
        a.kind == FactorKind::FullDihedral &&
        ((b.kind == FactorKind::CyclicTwisted && mod_n(b.twist, n) == 0) ||
         b.kind == FactorKind::ReflectionPlus);
    if (!widened) return false;
  }
  return true;
}

bool TwistedSubgroup::operator==(const TwistedSubgroup& o) const {
  if (n != o.n) return false;
  for (int i = 0; i < 3; ++i) {
    if (factor[i].kind != o.factor[i].kind) return false;
    if (factor[i].kind == FactorKind::CyclicTwisted &&
        mod_n(factor[i].twist, n) != mod_n(o.factor[i].twist, n))
      return false;
  }
  return true;
}

namespace {

void skip_ws(const std::string& s, size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
    ++pos;
}

void expect(const std::string& s, size_t& pos, char c) {
  skip_ws(s, pos);
  if (pos >= s.size() || s[pos] != c)
    throw ConfigError("malformed subgroup name, expected '" +
                      std::string(1, c) + "' in \"" + s + "\"");
  ++pos;
}

std::string read_token(const std::string& s, size_t& pos) {
  skip_ws(s, pos);
  size_t start = pos;
  while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                            s[pos] == '+' || s[pos] == '-'))
    ++pos;
  if (pos == start)
    throw ConfigError("malformed subgroup name \"" + s + "\"");
  return s.substr(start, pos - start);
}

}  // namespace

TwistedSubgroup parse_subgroup(const std::string& name, int n) {
  size_t pos = 0;
  std::array<std::string, 3> group_tok;
  std::array<std::string, 3> twist_tok;
  expect(name, pos, '(');
  for (int i = 0; i < 3; ++i) {
    group_tok[i] = read_token(name, pos);
    if (i < 2) expect(name, pos, 'x');
  }
  expect(name, pos, ')');
  expect(name, pos, '^');
  expect(name, pos, '(');
  for (int i = 0; i < 3; ++i) {
    twist_tok[i] = read_token(name, pos);
    if (i < 2) expect(name, pos, ',');
  }
  expect(name, pos, ')');
  skip_ws(name, pos);
  if (pos != name.size())
    throw ConfigError("trailing characters in subgroup name \"" + name + "\"");

  TwistedSubgroup h;
  h.n = n;
  const std::string zn = "Z" + std::to_string(n);
  const std::string dn = "D" + std::to_string(n);
  for (int i = 0; i < 3; ++i) {
    const std::string& g = group_tok[i];
    const std::string& t = twist_tok[i];
    if (g == zn) {
      h.factor[i].kind = FactorKind::CyclicTwisted;
      try {
        h.factor[i].twist = mod_n(std::stoi(t), n);
      } catch (const std::exception&) {
        throw ConfigError("cyclic factor needs an integer twist, got \"" + t +
                          "\"");
      }
    } else if (g == "D1" && n != 1) {
      if (t == "+")
        h.factor[i].kind = FactorKind::ReflectionPlus;
      else if (t == "-")
        h.factor[i].kind = FactorKind::ReflectionMinus;
      else
        throw ConfigError("reflection factor needs twist + or -, got \"" + t +
                          "\"");
    } else if (g == dn) {
      if (t != "1")
        throw ConfigError("full dihedral factor carries trivial twist 1, got "
                          "\"" + t + "\"");
      h.factor[i].kind = FactorKind::FullDihedral;
    } else {
      throw ConfigError("unknown factor \"" + g + "\" for lattice size " +
                        std::to_string(n));
    }
  }
  return h;
}

std::vector<TwistedSubgroup> symmetry_classes(const LatticeParams& p,
                                              const ModeIndex& t) {
  const ModeIndex r = reduce_mode(t, p.n);
  std::vector<TwistedSubgroup> out;
  if (p.variant == Variant::VdplUnidirectionalX) {
    TwistedSubgroup h;
    h.n = p.n;
    for (int i = 0; i < 3; ++i)
      h.factor[i] = SubgroupFactor{FactorKind::CyclicTwisted, r[i]};
    out.push_back(h);
    return out;
  }
  std::array<std::vector<SubgroupFactor>, 3> options;
  for (int i = 0; i < 3; ++i) {
    if (r[i] == 0) {
      options[i] = {SubgroupFactor{FactorKind::FullDihedral, 0}};
    } else {
      options[i] = {SubgroupFactor{FactorKind::CyclicTwisted, r[i]},
                    SubgroupFactor{FactorKind::ReflectionPlus, 0},
                    SubgroupFactor{FactorKind::ReflectionMinus, 0}};
    }
  }
  for (const auto& f0 : options[0])
    for (const auto& f1 : options[1])
      for (const auto& f2 : options[2]) {
        TwistedSubgroup h;
        h.n = p.n;
        h.factor = {f0, f1, f2};
        out.push_back(h);
      }
  return out;
}

long branch_count(const TwistedSubgroup& H) {
  const long total = 8L * H.n * H.n * H.n;
  const long ord = H.order();
  if (ord <= 0 || total % ord != 0)
    throw ConfigError("subgroup order " + std::to_string(ord) +
                      " does not divide " + std::to_string(total));
  return total / ord;
}

SymmetryReport verify_orbit_symmetry(const PeriodicOrbit& orbit,
                                     const TwistedSubgroup& H,
                                     double tol) {
  if (orbit.residual > 1e-6)
    throw PreconditionError(
        "orbit closure residual too large for a symmetry check");
  if (orbit.sample_count() < 8)
    throw PreconditionError("orbit sample grid too coarse for a symmetry "
                            "check");

  SymmetryReport report;
  report.amplitude = orbit.amplitude();
  report.tolerance = tol * report.amplitude;

  const auto& p = orbit.params;
  const int m = orbit.sample_count();
  const double dt = orbit.period / m;

  auto defect_of = [&](const TwistedSubgroup& h) {
    double worst = 0.0;
    std::vector<std::pair<std::string, double>> per_gen;
    for (const auto& [g, phase] : h.generators()) {
      const auto perm = site_permutation(g, p.n);
      const int sites = p.sites();
      const double shift = phase / kTwoPi * orbit.period;
      double defect = 0.0;
      for (int j = 0; j < m; ++j) {
        const Eigen::VectorXd target = orbit.state_at(j * dt + shift);
        const auto& source = orbit.samples.col(j);
        for (int i = 0; i < sites; ++i) {
          defect = std::max(defect, std::abs(source[perm[i]] - target[i]));
          defect = std::max(
              defect, std::abs(source[sites + perm[i]] - target[sites + i]));
        }
      }
      std::ostringstream label;
      label << (g.flip[0] || g.flip[1] || g.flip[2] ? "flip" : "shift") << "(";
      for (int i = 0; i < 3; ++i)
        label << (i ? "," : "")
              << (g.flip[i] ? std::string(1, 'f') : std::to_string(g.rot[i]));
      label << ") phase " << phase;
      per_gen.emplace_back(label.str(), defect);
      worst = std::max(worst, defect);
    }
    return std::make_pair(worst, per_gen);
  };

  auto [worst, per_gen] = defect_of(H);
  report.max_defect = worst;
  report.generator_defects = std::move(per_gen);
  report.holds = worst <= report.tolerance;
  report.minimal = false;
  if (report.holds) {
    report.minimal = true;
    for (const auto& larger : H.enlargements()) {
      if (defect_of(larger).first <= report.tolerance) {
        report.minimal = false;
        break;
      }
    }
  }
  return report;
}

}  // namespace torushopf
