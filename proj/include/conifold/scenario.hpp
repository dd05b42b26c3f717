#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "conifold/moduli.hpp"
#include "conifold/spectrum.hpp"
#include "conifold/topology.hpp"
#include "conifold/weights.hpp"

namespace conifold {

// One end as configured: geometric rate, cone symmetry dimension, and the
// link description the spectrum is resolved from.
struct EndConfig {
  EndKind kind = EndKind::AC;
  double rate = 0.0;
  int sym_dim = 0;
  LinkDescriptor link;
  std::optional<bool> link_is_sphere;  // defaults from the link type

  bool sphere_link() const {
    return link_is_sphere.value_or(link.is_round_sphere());
  }
};

struct ScenarioOptions {
  bool require_stable = false;
  bool strict = false;  // enforce window completeness up front
  std::optional<double> rate_tol;
  MeshSolveOptions mesh;
};

struct ScenarioConfig {
  int schema_version = 1;
  int m = 3;
  CaseTag case_tag = CaseTag::Compact;
  std::vector<EndConfig> ends;  // CS ends first, then AC ends
  int b1 = 0;
  int b1_c = 0;
  std::optional<int> b1_c_bullet;
  ScenarioOptions options;

  ConifoldTopology topology() const;
};

// Strict JSON parsing: unknown keys, wrong types, missing fields, and
// case/end mismatches all fail with InvalidInput.  `origin` names the file
// in diagnostics.  Paths in mesh links are resolved relative to `base_dir`.
ScenarioConfig parse_config(const std::string& json_text,
                            const std::string& origin = "<config>",
                            const std::filesystem::path& base_dir = ".");
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace conifold
