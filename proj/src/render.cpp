#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "conifold/run.hpp"

namespace conifold {

namespace {

using ordered = nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool all_primitive(const ordered& a) {
  for (const auto& e : a)
    if (e.is_object() || e.is_array()) return false;
  return true;
}

void write_value(const ordered& j, std::string& out, int depth);

void write_scalar(const ordered& j, std::string& out) {
  if (j.is_string()) {
    out += ordered(j.get<std::string>()).dump();
  } else if (j.is_boolean()) {
    out += j.get<bool>() ? "true" : "false";
  } else if (j.is_null()) {
    out += "null";
  } else if (j.is_number_integer()) {
    out += std::to_string(j.get<long long>());
  } else if (j.is_number_unsigned()) {
    out += std::to_string(j.get<unsigned long long>());
  } else {
    out += fmt_double(j.get<double>());
  }
}

void indent(std::string& out, int depth) { out.append(2 * size_t(depth), ' '); }

void write_value(const ordered& j, std::string& out, int depth) {
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      indent(out, depth + 1);
      out += ordered(it.key()).dump();
      out += ": ";
      write_value(it.value(), out, depth + 1);
      if (i + 1 < j.size()) out += ',';
      out += '\n';
    }
    indent(out, depth);
    out += '}';
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    if (all_primitive(j)) {
      out += '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        write_scalar(j[i], out);
      }
      out += ']';
      return;
    }
    out += "[\n";
    for (size_t i = 0; i < j.size(); ++i) {
      indent(out, depth + 1);
      write_value(j[i], out, depth + 1);
      if (i + 1 < j.size()) out += ',';
      out += '\n';
    }
    indent(out, depth);
    out += ']';
  } else {
    write_scalar(j, out);
  }
}

std::string dump_deterministic(const ordered& j) {
  std::string out;
  write_value(j, out, 0);
  out += '\n';
  return out;
}

ordered spectrum_json(const Spectrum& s) {
  ordered j;
  j["source"] = spectrum_source_name(s.source);
  j["cutoff"] = s.cutoff;
  ordered entries = ordered::array();
  for (const auto& e : s.entries)
    entries.push_back(ordered::array({e.eigenvalue, e.multiplicity}));
  j["entries"] = std::move(entries);
  return j;
}

ordered weights_json(const std::vector<WeightEntry>& ws) {
  ordered a = ordered::array();
  for (const auto& w : ws)
    a.push_back(ordered::array({w.gamma, w.multiplicity}));
  return a;
}

ordered window_json(const Window& w) {
  ordered j;
  j["lo"] = w.lo;
  j["hi"] = w.hi;
  j["include_lo"] = w.include_lo;
  j["include_hi"] = w.include_hi;
  return j;
}

ordered link_json(const LinkDescriptor& link) {
  ordered j;
  switch (link.kind) {
    case LinkDescriptor::Kind::RoundSphere:
      j["type"] = "sphere";
      j["dim"] = link.sphere_dim;
      break;
    case LinkDescriptor::Kind::FlatTorus: {
      j["type"] = "torus";
      ordered rows = ordered::array();
      for (Eigen::Index r = 0; r < link.torus_basis.rows(); ++r) {
        ordered row = ordered::array();
        for (Eigen::Index c = 0; c < link.torus_basis.cols(); ++c)
          row.push_back(link.torus_basis(r, c));
        rows.push_back(std::move(row));
      }
      j["basis"] = std::move(rows);
      break;
    }
    case LinkDescriptor::Kind::Explicit: {
      j["type"] = "explicit";
      j["cutoff"] = link.explicit_spectrum.cutoff;
      ordered entries = ordered::array();
      for (const auto& e : link.explicit_spectrum.entries)
        entries.push_back(ordered::array({e.eigenvalue, e.multiplicity}));
      j["entries"] = std::move(entries);
      break;
    }
    case LinkDescriptor::Kind::Mesh:
      j["type"] = "mesh";
      j["path"] = link.mesh_path.generic_string();
      break;
  }
  j["b1"] = link.b1;
  return j;
}

ordered scenario_json(const ScenarioConfig& cfg) {
  ordered j;
  j["schema_version"] = cfg.schema_version;
  j["m"] = cfg.m;
  j["case"] = case_tag_name(cfg.case_tag);
  ordered ends = ordered::array();
  for (const auto& e : cfg.ends) {
    ordered je;
    je["kind"] = end_kind_name(e.kind);
    je["rate"] = e.rate;
    je["sym_dim"] = e.sym_dim;
    je["link"] = link_json(e.link);
    je["link_is_sphere"] = e.sphere_link();
    ends.push_back(std::move(je));
  }
  j["ends"] = std::move(ends);
  ordered jt;
  jt["b1"] = cfg.b1;
  jt["b1_c"] = cfg.b1_c;
  if (cfg.b1_c_bullet) jt["b1_c_bullet"] = *cfg.b1_c_bullet;
  j["topology"] = std::move(jt);
  ordered jo;
  jo["require_stable"] = cfg.options.require_stable;
  jo["strict"] = cfg.options.strict;
  if (cfg.options.rate_tol) jo["rate_tol"] = *cfg.options.rate_tol;
  ordered jm;
  jm["tol"] = cfg.options.mesh.tol;
  jm["margin"] = cfg.options.mesh.margin;
  jm["min_angle_deg"] = cfg.options.mesh.min_angle_deg;
  jm["strict_quality"] = cfg.options.mesh.strict_quality;
  jo["mesh"] = std::move(jm);
  j["options"] = std::move(jo);
  return j;
}

ordered report_json(const RunReport& rep) {
  ordered j;
  j["schema_version"] = 1;
  ordered gen;
  gen["name"] = "conifold";
  gen["version"] = "0.1.0";
  j["generator"] = std::move(gen);
  j["scenario"] = scenario_json(rep.scenario);

  ordered ends = ordered::array();
  for (size_t i = 0; i < rep.ends.size(); ++i) {
    const EndReport& er = rep.ends[i];
    ordered je;
    je["index"] = int(i);
    je["kind"] = end_kind_name(er.kind);
    je["rate"] = er.rate;
    je["sym_dim"] = er.sym_dim;
    je["spectrum"] = spectrum_json(er.spectrum);
    je["window"] = window_json(er.window);
    je["weights"] = weights_json(er.weights);
    je["window_complete"] = er.window_complete;
    ends.push_back(std::move(je));
  }
  j["ends"] = std::move(ends);

  ordered stab = ordered::array();
  for (size_t i = 0; i < rep.moduli.cs_verdicts.size(); ++i) {
    const StabilityVerdict& v = rep.moduli.cs_verdicts[i];
    ordered jv;
    jv["end"] = int(i);  // CS ends precede AC ends in the canonical order
    jv["stable"] = v.stable;
    ordered checks = ordered::array();
    for (const auto& c : v.checks) {
      ordered jc;
      jc["gamma"] = c.gamma;
      jc["expected"] = c.expected;
      jc["found"] = c.found;
      checks.push_back(std::move(jc));
    }
    jv["checks"] = std::move(checks);
    jv["extra_weights"] = weights_json(v.extra_weights);
    jv["detail"] = v.detail;
    if (i < rep.moduli.cs_next_weight.size()) {
      const NextWeight& nw = rep.moduli.cs_next_weight[i];
      ordered jn;
      if (nw.gamma)
        jn["gamma"] = *nw.gamma;
      else
        jn["gamma"] = nullptr;
      jn["certified_up_to"] = nw.certified_up_to;
      jv["next_weight_above_2"] = std::move(jn);
    }
    stab.push_back(std::move(jv));
  }
  j["stability"] = std::move(stab);

  ordered jm;
  jm["case"] = case_tag_name(rep.moduli.case_tag);
  jm["regime"] = rep.moduli.regime;
  jm["dim_moduli"] = rep.moduli.dim_moduli;
  jm["obstruction_dim"] = rep.moduli.obstruction_dim;
  jm["obstruction_is_bound"] = rep.moduli.obstruction_is_bound;
  jm["smooth_guaranteed"] = rep.moduli.smooth_guaranteed;
  ordered breakdown = ordered::array();
  for (const auto& term : rep.moduli.breakdown) {
    ordered jtm;
    jtm["term"] = term.label;
    jtm["value"] = term.value;
    breakdown.push_back(std::move(jtm));
  }
  jm["breakdown"] = std::move(breakdown);
  j["moduli"] = std::move(jm);

  ordered checks = ordered::array();
  for (const auto& c : rep.cross_checks) checks.push_back(c);
  j["cross_checks"] = std::move(checks);

  ordered warn = ordered::array();
  for (const auto& w : rep.warnings) warn.push_back(w);
  for (const auto& w : rep.moduli.warnings) warn.push_back(w);
  j["warnings"] = std::move(warn);
  return j;
}

std::string describe_window(const Window& w) {
  std::string s = w.include_lo ? "[" : "(";
  s += fmt_double(w.lo) + std::string(", ") + fmt_double(w.hi);
  s += w.include_hi ? "]" : ")";
  return s;
}

// Numeric-tolerant structural comparison; returns the path of the first
// mismatch through `why`.
bool json_equiv(const ordered& a, const ordered& b, const std::string& path,
                std::string& why) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>();
    const double y = b.get<double>();
    const double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
    if (std::fabs(x - y) <= 1e-9 * scale) return true;
    why = path + ": " + fmt_double(x) + " vs " + fmt_double(y);
    return false;
  }
  if (a.type() != b.type()) {
    why = path + ": type mismatch";
    return false;
  }
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it)
      if (!b.contains(it.key())) {
        why = path + ": missing key '" + it.key() + "'";
        return false;
      }
    for (auto it = b.begin(); it != b.end(); ++it)
      if (!a.contains(it.key())) {
        why = path + ": unexpected key '" + it.key() + "'";
        return false;
      }
    for (auto it = a.begin(); it != a.end(); ++it)
      if (!json_equiv(it.value(), b.at(it.key()), path + "." + it.key(), why))
        return false;
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      why = path + ": array length " + std::to_string(a.size()) + " vs " +
            std::to_string(b.size());
      return false;
    }
    for (size_t i = 0; i < a.size(); ++i)
      if (!json_equiv(a[i], b[i], path + "[" + std::to_string(i) + "]", why))
        return false;
    return true;
  }
  if (a != b) {
    why = path + ": value mismatch";
    return false;
  }
  return true;
}

}  // namespace

std::string render_machine(const RunReport& report) {
  return dump_deterministic(report_json(report));
}

std::string render_spectrum_machine(const Spectrum& s) {
  return dump_deterministic(spectrum_json(s));
}

std::string render_spectrum_text(const Spectrum& s) {
  std::ostringstream out;
  out << "# source " << spectrum_source_name(s.source) << ", cutoff "
      << fmt_double(s.cutoff) << ", " << s.entries.size()
      << " distinct eigenvalue(s), " << s.total_count() << " in total\n";
  for (const auto& e : s.entries)
    out << fmt_double(e.eigenvalue) << " " << e.multiplicity << "\n";
  return out.str();
}

std::string render_text(const RunReport& report) {
  std::ostringstream out;
  const ScenarioConfig& cfg = report.scenario;
  int s = 0, l = 0;
  for (const auto& e : cfg.ends) (e.kind == EndKind::CS ? s : l) += 1;
  out << "scenario: m = " << cfg.m << ", case " << case_tag_name(cfg.case_tag)
      << " (" << s << " CS end(s), " << l << " AC end(s)), b1 = " << cfg.b1
      << ", b1_c = " << cfg.b1_c;
  if (cfg.b1_c_bullet) out << ", b1_c_bullet = " << *cfg.b1_c_bullet;
  out << "\n";

  for (size_t i = 0; i < report.ends.size(); ++i) {
    const EndReport& er = report.ends[i];
    out << "end " << i << ": " << end_kind_name(er.kind) << ", rate "
        << fmt_double(er.rate) << ", sym_dim " << er.sym_dim << ", spectrum "
        << spectrum_source_name(er.spectrum.source) << " (cutoff "
        << fmt_double(er.spectrum.cutoff) << ", " << er.spectrum.total_count()
        << " eigenvalue(s))\n";
    out << "  weight window " << describe_window(er.window)
        << (er.window_complete ? "" : "  [incomplete coverage]") << "\n";
    out << "  exceptional weights:";
    if (er.weights.empty()) out << " none";
    for (const auto& w : er.weights)
      out << " " << fmt_double(w.gamma) << " (x" << w.multiplicity << ")";
    out << "\n";
  }

  const ModuliReport& mr = report.moduli;
  for (size_t i = 0; i < mr.cs_verdicts.size(); ++i) {
    const StabilityVerdict& v = mr.cs_verdicts[i];
    out << "stability of CS end " << i << ": "
        << (v.stable ? "stable" : "not stable");
    if (!v.stable) out << " (" << v.detail << ")";
    out << "\n";
    if (i < mr.cs_next_weight.size()) {
      const NextWeight& nw = mr.cs_next_weight[i];
      out << "  first exceptional weight above 2: ";
      if (nw.gamma)
        out << fmt_double(*nw.gamma);
      else
        out << "none up to " << fmt_double(nw.certified_up_to);
      out << " (certified up to " << fmt_double(nw.certified_up_to) << ")\n";
    }
  }

  out << "moduli: case " << case_tag_name(mr.case_tag) << ", regime "
      << mr.regime << "\n";
  out << "  dimension " << mr.dim_moduli << "\n";
  for (const auto& term : mr.breakdown)
    out << "    " << term.label << " = " << term.value << "\n";
  out << "  obstruction " << mr.obstruction_dim
      << (mr.obstruction_is_bound ? " (upper bound)" : "") << "\n";
  out << "  smoothness "
      << (mr.smooth_guaranteed ? "guaranteed" : "not guaranteed") << "\n";

  out << "cross-checks:";
  if (report.cross_checks.empty()) out << " none";
  for (const auto& c : report.cross_checks) out << " " << c;
  out << "\n";
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
  for (const auto& w : mr.warnings) out << "warning: " << w << "\n";
  return out.str();
}

void verify_machine_report(const std::string& report_json_text,
                           const std::filesystem::path& base_dir) {
  ordered given;
  try {
    given = ordered::parse(report_json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput,
         std::string("report is not valid JSON: ") + e.what());
  }
  if (!given.is_object() || !given.contains("scenario"))
    fail(ErrorKind::InvalidInput,
         "report has no 'scenario' section to recompute from");

  ScenarioConfig cfg = parse_config(given.at("scenario").dump(),
                                    "<report scenario>", base_dir);
  RunReport rep = run(cfg);
  const std::string fresh = render_machine(rep);
  if (fresh == report_json_text) return;

  ordered want = ordered::parse(fresh);
  std::string why;
  if (!json_equiv(want, given, "report", why))
    fail(ErrorKind::InternalInconsistency,
         "report does not match recomputation at " + why);
}

}  // namespace conifold
