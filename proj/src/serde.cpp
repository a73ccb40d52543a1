#include "torushopf/serde.hpp"

#include <cstdio>
#include <limits>
#include <ostream>

namespace torushopf {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

Json complex_json(const Complex& z) {
  return Json{{"re", z.real()}, {"im", z.imag()}};
}

void csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i)
    out << (i ? "," : "") << cells[i];
  out << "\n";
}

std::string site_label(int n, char kind, int site) {
  const auto c = site_coords(n, site);
  return std::string(1, kind) + "_" + std::to_string(c[0]) +
         std::to_string(c[1]) + std::to_string(c[2]);
}

}  // namespace

Json to_json(const ModeIndex& t) { return Json::array({t.t1, t.t2, t.t3}); }

ModeIndex mode_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError("mode must be a 3-element array");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

Json to_json(const LatticeParams& p) {
  return Json{{"variant", variant_name(p.variant)},
              {"n", p.n},
              {"delta", p.delta},
              {"zeta", p.zeta},
              {"epsilon", p.epsilon},
              {"nu", p.nu},
              {"a", p.a},
              {"b", p.b}};
}

LatticeParams params_from_json(const Json& j) {
  LatticeParams p;
  p.variant = variant_from_name(j.at("variant").get<std::string>());
  p.n = j.at("n").get<int>();
  p.delta = j.at("delta").get<double>();
  p.zeta = j.at("zeta").get<double>();
  p.epsilon = j.at("epsilon").get<double>();
  p.nu = j.at("nu").get<double>();
  p.a = j.at("a").get<double>();
  p.b = j.at("b").get<double>();
  p.validate();
  return p;
}

Json to_json(const BifurcationRecord& r) {
  Json classes = Json::array();
  for (const auto& c : r.classes)
    classes.push_back(Json{{"symmetry", c.subgroup.name()},
                           {"branches", c.branches}});
  Json j{{"mode", to_json(r.mode)},
         {"variant", variant_name(r.variant)},
         {"critical_a", r.critical_a},
         {"k", r.k},
         {"g", r.g},
         {"limit_frequency", r.limit_frequency},
         {"period1", r.period1},
         {"period2", r.period2},
         {"resonant", r.resonant},
         {"classes", classes}};
  if (r.resonance_ratio)
    j["resonance_ratio"] =
        Json::array({r.resonance_ratio->first, r.resonance_ratio->second});
  return j;
}

Json to_json(const SymmetryReport& r) {
  Json gens = Json::array();
  for (const auto& [label, defect] : r.generator_defects)
    gens.push_back(Json{{"generator", label}, {"defect", defect}});
  return Json{{"holds", r.holds},
              {"minimal", r.minimal},
              {"max_defect", r.max_defect},
              {"tolerance", r.tolerance},
              {"amplitude", r.amplitude},
              {"generators", gens}};
}

Json to_json(const StabilityVerdict& v) {
  Json witnesses = Json::array();
  for (const auto& w : v.witnesses) {
    Json jw{{"label", w.label}, {"value", w.value}};
    if (w.mode) jw["mode"] = to_json(*w.mode);
    if (w.multiplier) jw["multiplier"] = complex_json(*w.multiplier);
    witnesses.push_back(jw);
  }
  return Json{{"kind", verdict_name(v.kind)},
              {"threshold", v.threshold},
              {"witnesses", witnesses}};
}

Json to_json(const AdmissibleEntry& e) {
  Json classes = Json::array();
  for (const auto& c : e.classes)
    classes.push_back(Json{{"symmetry", c.subgroup.name()},
                           {"branches", c.branches}});
  return Json{{"mode", to_json(e.mode)},
              {"k", e.k},
              {"limit_period", e.limit_period},
              {"classes", classes}};
}

Json to_json(const PeriodicOrbit& o) {
  const int m = o.sample_count();
  const int dim = static_cast<int>(o.samples.rows());
  Json samples = Json::array();
  for (int j = 0; j < m; ++j) {
    Json col = Json::array();
    for (int i = 0; i < dim; ++i) col.push_back(o.samples(i, j));
    samples.push_back(std::move(col));
  }
  return Json{{"params", to_json(o.params)},
              {"period", o.period},
              {"residual", o.residual},
              {"samples", samples}};
}

PeriodicOrbit orbit_from_json(const Json& j) {
  PeriodicOrbit o;
  o.params = params_from_json(j.at("params"));
  o.period = j.at("period").get<double>();
  o.residual = j.at("residual").get<double>();
  const auto& samples = j.at("samples");
  if (!samples.is_array() || samples.empty())
    throw ConfigError("orbit needs a nonempty sample array");
  const int m = static_cast<int>(samples.size());
  const int dim = static_cast<int>(samples[0].size());
  if (dim != 2 * o.params.sites())
    throw ConfigError("orbit sample dimension does not match the lattice");
  o.samples.resize(dim, m);
  for (int col = 0; col < m; ++col) {
    if (static_cast<int>(samples[col].size()) != dim)
      throw ConfigError("ragged orbit sample array");
    for (int i = 0; i < dim; ++i)
      o.samples(i, col) = samples[col][i].get<double>();
  }
  return o;
}

Json to_json(const ExistenceResult& r) {
  Json scan = Json::array();
  for (const auto& [nu, period] : r.scan)
    scan.push_back(Json{{"nu", nu}, {"period", period}});
  Json j{{"found", r.found}, {"scan", scan}};
  if (r.found) {
    j["nu"] = r.nu;
    j["orbit"] = to_json(r.orbit);
    j["symmetry_report"] = to_json(r.symmetry_report);
  } else {
    j["report"] = r.report;
  }
  return j;
}

namespace {

// Crossing value of a for the mode: the unidirectional variant crosses at
// a^z_t; the bidirectional variant crosses at 0 whenever K_t > 0 and never
// when K_t <= 0 (eigenvalues real, one positive for every a).
double spectrum_critical_a(const LatticeParams& p, const ModeIndex& t) {
  if (p.variant == Variant::VdplUnidirectionalX) return critical_a_vdpl(p, t);
  return k_of_mode(p, t) > 0.0
             ? 0.0
             : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void csv_spectrum(std::ostream& out, const LatticeParams& p, double a) {
  out << kCsvSchemaHeader << "\n";
  csv_row(out, {"t1", "t2", "t3", "K", "G", "critical_a", "re1", "im1", "re2",
                "im2"});
  for (const auto& t : canonical_modes(p.n)) {
    const auto eig = p.variant == Variant::VdpBidirectionalY
                         ? eigenvalues_vdp(p, t, a)
                         : eigenvalues_vdpl(p, t, a);
    csv_row(out,
            {std::to_string(t.t1), std::to_string(t.t2), std::to_string(t.t3),
             format_double(k_of_mode(p, t)), format_double(g_of_mode(p, t)),
             format_double(spectrum_critical_a(p, t)),
             format_double(eig[0].real()), format_double(eig[0].imag()),
             format_double(eig[1].real()), format_double(eig[1].imag())});
  }
}

Json json_spectrum(const LatticeParams& p, double a) {
  Json rows = Json::array();
  for (const auto& t : canonical_modes(p.n)) {
    const auto eig = p.variant == Variant::VdpBidirectionalY
                         ? eigenvalues_vdp(p, t, a)
                         : eigenvalues_vdpl(p, t, a);
    rows.push_back(Json{{"mode", to_json(t)},
                        {"k", k_of_mode(p, t)},
                        {"g", g_of_mode(p, t)},
                        {"critical_a", spectrum_critical_a(p, t)},
                        {"eigenvalues",
                         Json::array({complex_json(eig[0]),
                                      complex_json(eig[1])})}});
  }
  return Json{{"params", to_json(p)}, {"a", a}, {"modes", rows}};
}

void csv_catalog(std::ostream& out,
                 const std::vector<BifurcationRecord>& records) {
  out << kCsvSchemaHeader << "\n";
  csv_row(out, {"t1", "t2", "t3", "critical_a", "K", "G", "limit_frequency",
                "period1", "period2", "resonant", "symmetry", "branches"});
  for (const auto& r : records)
    for (const auto& c : r.classes)
      csv_row(out, {std::to_string(r.mode.t1), std::to_string(r.mode.t2),
                    std::to_string(r.mode.t3), format_double(r.critical_a),
                    format_double(r.k), format_double(r.g),
                    format_double(r.limit_frequency), format_double(r.period1),
                    format_double(r.period2), r.resonant ? "1" : "0",
                    "\"" + c.subgroup.name() + "\"",
                    std::to_string(c.branches)});
}

Json json_catalog(const std::vector<BifurcationRecord>& records) {
  Json rows = Json::array();
  for (const auto& r : records) rows.push_back(to_json(r));
  return Json{{"records", rows}};
}

void csv_trajectory(std::ostream& out, const LatticeParams& p,
                    const Trajectory& tr) {
  out << kCsvSchemaHeader << "\n";
  const int m = p.sites();
  std::vector<std::string> head{"t"};
  for (int i = 0; i < m; ++i) head.push_back(site_label(p.n, 'x', i));
  for (int i = 0; i < m; ++i) head.push_back(site_label(p.n, 'y', i));
  csv_row(out, head);
  for (int j = 0; j < tr.times.size(); ++j) {
    std::vector<std::string> row{format_double(tr.times[j])};
    for (int i = 0; i < 2 * m; ++i)
      row.push_back(format_double(tr.states(i, j)));
    csv_row(out, row);
  }
}

Json json_trajectory(const LatticeParams& p, const Trajectory& tr) {
  Json times = Json::array();
  for (int j = 0; j < tr.times.size(); ++j) times.push_back(tr.times[j]);
  Json states = Json::array();
  for (int j = 0; j < tr.states.cols(); ++j) {
    Json col = Json::array();
    for (int i = 0; i < tr.states.rows(); ++i)
      col.push_back(tr.states(i, j));
    states.push_back(std::move(col));
  }
  return Json{{"params", to_json(p)}, {"times", times}, {"states", states}};
}

void csv_branch(std::ostream& out, const BranchTrace& trace) {
  out << kCsvSchemaHeader << "\n";
  csv_row(out, {"a", "period", "amplitude", "residual", "symmetry_defect"});
  for (const auto& pt : trace.points)
    csv_row(out, {format_double(pt.a), format_double(pt.orbit.period),
                  format_double(pt.amplitude),
                  format_double(pt.orbit.residual),
                  format_double(pt.symmetry_report.max_defect)});
}

Json json_branch(const BranchTrace& trace) {
  Json points = Json::array();
  for (const auto& pt : trace.points)
    points.push_back(Json{{"a", pt.a},
                          {"period", pt.orbit.period},
                          {"amplitude", pt.amplitude},
                          {"residual", pt.orbit.residual},
                          {"symmetry_report", to_json(pt.symmetry_report)}});
  Json j{{"mode", to_json(trace.mode)},
         {"symmetry", trace.subgroup.name()},
         {"a_onset", trace.a_onset},
         {"points", points},
         {"truncated", trace.truncated},
         {"sqrt_coefficient", trace.sqrt_coefficient},
         {"fit_r2", trace.fit_r2},
         {"period_at_onset", trace.period_at_onset}};
  if (trace.truncated) j["diagnostic"] = trace.diagnostic;
  return j;
}

}  // namespace torushopf
