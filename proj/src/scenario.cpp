#include "conifold/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace conifold {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& origin, const std::string& what) {
  fail(ErrorKind::InvalidInput, origin + ": " + what);
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& origin, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      bad(origin, "unknown key '" + it.key() + "' in " + where);
}

int get_int(const json& obj, const std::string& key, const std::string& origin) {
  if (!obj.contains(key)) bad(origin, "missing key '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    bad(origin, "'" + key + "' must be an integer");
  return v.get<int>();
}

double get_num(const json& obj, const std::string& key,
               const std::string& origin) {
  if (!obj.contains(key)) bad(origin, "missing key '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) bad(origin, "'" + key + "' must be a number");
  return v.get<double>();
}

std::string get_str(const json& obj, const std::string& key,
                    const std::string& origin) {
  if (!obj.contains(key)) bad(origin, "missing key '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_string()) bad(origin, "'" + key + "' must be a string");
  return v.get<std::string>();
}

bool get_bool_or(const json& obj, const std::string& key, bool fallback,
                 const std::string& origin) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) bad(origin, "'" + key + "' must be a boolean");
  return obj.at(key).get<bool>();
}

LinkDescriptor parse_link(const json& j, int m, const std::string& origin,
                          const std::filesystem::path& base_dir) {
  if (!j.is_object()) bad(origin, "'link' must be an object");
  const std::string type = get_str(j, "type", origin);
  LinkDescriptor link;
  link.b1 = j.contains("b1") ? get_int(j, "b1", origin) : -1;
  if (type == "sphere") {
    check_keys(j, {"type", "dim", "b1"}, origin, "sphere link");
    link.kind = LinkDescriptor::Kind::RoundSphere;
    link.sphere_dim = j.contains("dim") ? get_int(j, "dim", origin) : m - 1;
    if (link.b1 < 0) link.b1 = 0;
    if (link.b1 != 0)
      bad(origin, "a sphere link of dimension >= 2 has b1 = 0");
  } else if (type == "torus") {
    check_keys(j, {"type", "basis", "b1"}, origin, "torus link");
    link.kind = LinkDescriptor::Kind::FlatTorus;
    if (!j.contains("basis") || !j.at("basis").is_array())
      bad(origin, "torus link needs a 'basis' array of rows");
    const auto& rows = j.at("basis");
    const int k = int(rows.size());
    link.torus_basis.resize(k, k);
    for (int r = 0; r < k; ++r) {
      if (!rows[r].is_array() || int(rows[r].size()) != k)
        bad(origin, "torus basis must be a square matrix");
      for (int c = 0; c < k; ++c) {
        if (!rows[r][c].is_number())
          bad(origin, "torus basis entries must be numbers");
        link.torus_basis(r, c) = rows[r][c].get<double>();
      }
    }
    if (link.b1 < 0) link.b1 = k;
    if (link.b1 != k)
      bad(origin, "a flat torus of dimension k has b1 = k");
  } else if (type == "explicit") {
    check_keys(j, {"type", "cutoff", "entries", "b1"}, origin, "explicit link");
    link.kind = LinkDescriptor::Kind::Explicit;
    const double cutoff = get_num(j, "cutoff", origin);
    if (!j.contains("entries") || !j.at("entries").is_array())
      bad(origin, "explicit link needs an 'entries' array");
    std::vector<SpectrumEntry> entries;
    for (const auto& pair : j.at("entries")) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number_integer())
        bad(origin, "spectrum entries must be [eigenvalue, multiplicity]");
      entries.push_back({pair[0].get<double>(), pair[1].get<int>()});
    }
    link.explicit_spectrum = make_explicit_spectrum(std::move(entries), cutoff);
    if (link.b1 < 0)
      bad(origin, "explicit links must state the link's 'b1'");
  } else if (type == "mesh") {
    check_keys(j, {"type", "path", "b1"}, origin, "mesh link");
    link.kind = LinkDescriptor::Kind::Mesh;
    std::filesystem::path p = get_str(j, "path", origin);
    if (p.is_relative()) p = base_dir / p;
    link.mesh_path = p.lexically_normal();
  } else {
    bad(origin, "unknown link type '" + type +
                    "' (expected sphere, torus, explicit, or mesh)");
  }
  return link;
}

EndConfig parse_end(const json& j, int m, const std::string& origin,
                    const std::filesystem::path& base_dir) {
  if (!j.is_object()) bad(origin, "each end must be an object");
  check_keys(j, {"kind", "rate", "sym_dim", "link", "link_is_sphere"}, origin,
             "end");
  EndConfig end;
  const std::string kind = get_str(j, "kind", origin);
  if (kind == "CS")
    end.kind = EndKind::CS;
  else if (kind == "AC")
    end.kind = EndKind::AC;
  else
    bad(origin, "end kind must be 'CS' or 'AC'");
  end.rate = get_num(j, "rate", origin);
  end.sym_dim = j.contains("sym_dim") ? get_int(j, "sym_dim", origin) : 0;
  if (!j.contains("link")) bad(origin, "end is missing its 'link'");
  end.link = parse_link(j.at("link"), m, origin, base_dir);
  if (j.contains("link_is_sphere")) {
    if (!j.at("link_is_sphere").is_boolean())
      bad(origin, "'link_is_sphere' must be a boolean");
    end.link_is_sphere = j.at("link_is_sphere").get<bool>();
  }
  return end;
}

}  // namespace

ConifoldTopology ScenarioConfig::topology() const {
  ConifoldTopology t;
  t.m = m;
  for (const auto& e : ends) (e.kind == EndKind::CS ? t.s : t.l) += 1;
  for (const auto& e : ends)
    if (e.kind == EndKind::CS) t.link_b1.push_back(e.link.b1);
  for (const auto& e : ends)
    if (e.kind == EndKind::AC) t.link_b1.push_back(e.link.b1);
  t.b1 = b1;
  t.b1_c = b1_c;
  t.b1_c_bullet = b1_c_bullet;
  return t;
}

ScenarioConfig parse_config(const std::string& json_text,
                            const std::string& origin,
                            const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    bad(origin, std::string("JSON parse error: ") + e.what());
  }
  if (!j.is_object()) bad(origin, "config root must be an object");
  check_keys(j, {"schema_version", "m", "case", "ends", "topology", "options"},
             origin, "config");

  ScenarioConfig cfg;
  cfg.schema_version = get_int(j, "schema_version", origin);
  if (cfg.schema_version != 1)
    bad(origin, "unsupported schema_version " +
                    std::to_string(cfg.schema_version));
  cfg.m = get_int(j, "m", origin);
  if (cfg.m < 3) bad(origin, "m must be >= 3");

  const std::string tag = get_str(j, "case", origin);
  if (tag == "compact")
    cfg.case_tag = CaseTag::Compact;
  else if (tag == "AC")
    cfg.case_tag = CaseTag::AC;
  else if (tag == "CS")
    cfg.case_tag = CaseTag::CS;
  else if (tag == "CSAC")
    cfg.case_tag = CaseTag::CSAC;
  else
    bad(origin, "case must be one of compact, AC, CS, CSAC");

  if (j.contains("ends")) {
    if (!j.at("ends").is_array()) bad(origin, "'ends' must be an array");
    // canonical order: CS ends first
    for (const auto& je : j.at("ends")) {
      EndConfig e = parse_end(je, cfg.m, origin, base_dir);
      if (e.kind == EndKind::CS) cfg.ends.push_back(std::move(e));
    }
    for (const auto& je : j.at("ends")) {
      EndConfig e = parse_end(je, cfg.m, origin, base_dir);
      if (e.kind == EndKind::AC) cfg.ends.push_back(std::move(e));
    }
  }
  int s = 0, l = 0;
  for (const auto& e : cfg.ends) (e.kind == EndKind::CS ? s : l) += 1;
  switch (cfg.case_tag) {
    case CaseTag::Compact:
      if (s + l != 0) bad(origin, "compact case admits no ends");
      break;
    case CaseTag::AC:
      if (s != 0 || l == 0) bad(origin, "AC case requires AC ends only");
      break;
    case CaseTag::CS:
      if (l != 0 || s == 0) bad(origin, "CS case requires CS ends only");
      break;
    case CaseTag::CSAC:
      if (s == 0 || l == 0)
        bad(origin, "CSAC case requires ends of both kinds");
      break;
  }

  if (!j.contains("topology")) bad(origin, "missing 'topology'");
  const json& jt = j.at("topology");
  if (!jt.is_object()) bad(origin, "'topology' must be an object");
  check_keys(jt, {"b1", "b1_c", "b1_c_bullet"}, origin, "topology");
  cfg.b1 = get_int(jt, "b1", origin);
  cfg.b1_c = jt.contains("b1_c") ? get_int(jt, "b1_c", origin) : cfg.b1;
  if (cfg.case_tag != CaseTag::Compact && !jt.contains("b1_c"))
    bad(origin, "'b1_c' is required when ends are present");
  if (jt.contains("b1_c_bullet"))
    cfg.b1_c_bullet = get_int(jt, "b1_c_bullet", origin);

  if (j.contains("options")) {
    const json& jo = j.at("options");
    if (!jo.is_object()) bad(origin, "'options' must be an object");
    check_keys(jo, {"require_stable", "strict", "rate_tol", "mesh"}, origin,
               "options");
    cfg.options.require_stable =
        get_bool_or(jo, "require_stable", false, origin);
    cfg.options.strict = get_bool_or(jo, "strict", false, origin);
    if (jo.contains("rate_tol")) {
      if (!jo.at("rate_tol").is_number())
        bad(origin, "'rate_tol' must be a number");
      cfg.options.rate_tol = jo.at("rate_tol").get<double>();
      if (*cfg.options.rate_tol <= 0.0)
        bad(origin, "'rate_tol' must be positive");
    }
    if (jo.contains("mesh")) {
      const json& jm = jo.at("mesh");
      if (!jm.is_object()) bad(origin, "'mesh' options must be an object");
      check_keys(jm, {"tol", "margin", "min_angle_deg", "strict_quality"},
                 origin, "mesh options");
      if (jm.contains("tol")) cfg.options.mesh.tol = get_num(jm, "tol", origin);
      if (jm.contains("margin"))
        cfg.options.mesh.margin = get_num(jm, "margin", origin);
      if (jm.contains("min_angle_deg"))
        cfg.options.mesh.min_angle_deg = get_num(jm, "min_angle_deg", origin);
      cfg.options.mesh.strict_quality =
          get_bool_or(jm, "strict_quality", false, origin);
      if (cfg.options.mesh.tol <= 0.0 || cfg.options.mesh.margin < 0.0)
        bad(origin, "mesh tolerance must be positive and margin >= 0");
    }
  }

  for (const auto& e : cfg.ends) {
    ConeEnd probe;
    probe.kind = e.kind;
    probe.rate = e.rate;
    probe.sym_dim = e.sym_dim;
    validate_end(probe, cfg.m);
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorKind::InvalidInput, "cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string(), path.parent_path());
}

}  // namespace conifold
