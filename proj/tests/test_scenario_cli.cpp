#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "conifold/run.hpp"
#include "conifold/scenario.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace conifold;
using testsupport::throws_kind;
using testsupport::write_temp;

namespace {

// Cone over the hexagonal torus, one CS and one AC end; the AC rate is the
// knob the regression scenarios turn.
std::string cone_scenario(double ac_rate, const std::string& extra_options = "") {
  std::ostringstream os;
  os.precision(16);
  os << R"({
  "schema_version": 1,
  "m": 3,
  "case": "CSAC",
  "ends": [
    {"kind": "AC", "rate": )"
     << ac_rate << R"(, "sym_dim": 2,
     "link": {"type": "torus", "basis": [[5.130199320647456, 2.565099660323728], [0.0, 4.442882938158366]]}},
    {"kind": "CS", "rate": 2.25, "sym_dim": 2,
     "link": {"type": "torus", "basis": [[5.130199320647456, 2.565099660323728], [0.0, 4.442882938158366]]}}
  ],
  "topology": {"b1": 2, "b1_c": 1, "b1_c_bullet": 0})";
  if (!extra_options.empty()) os << ",\n  \"options\": " << extra_options;
  os << "\n}\n";
  return os.str();
}

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream captured;
  std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
  int code = -1;
  try {
    code = cli_main(args);
  } catch (...) {
    std::cout.rdbuf(old);
    throw;
  }
  std::cout.rdbuf(old);
  if (out) *out = captured.str();
  return code;
}

int spawn_cli(const std::string& arg_line) {
  const std::string cmd = std::string(CONIFOLD_CLI_PATH) + " " + arg_line;
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::string kDataDir = CONIFOLD_DATA_DIR;

}  // namespace

TEST_SUITE("scenario-cli") {

TEST_CASE("parsing canonicalizes and echoes the config") {
  // the AC end is listed first; parsing reorders CS ends to the front
  const ScenarioConfig cfg = parse_config(cone_scenario(-0.5));
  CHECK_EQ(cfg.m, 3);
  CHECK_EQ(cfg.case_tag, CaseTag::CSAC);
  REQUIRE(cfg.ends.size() == 2);
  CHECK_EQ(cfg.ends[0].kind, EndKind::CS);
  CHECK_EQ(cfg.ends[1].kind, EndKind::AC);
  CHECK_EQ(cfg.ends[0].rate, 2.25);
  CHECK_EQ(cfg.ends[1].rate, -0.5);
  CHECK_EQ(cfg.ends[0].link.b1, 2);  // defaulted from the torus dimension
  CHECK_FALSE(cfg.ends[0].sphere_link());
  CHECK_EQ(cfg.b1, 2);
  CHECK_EQ(cfg.b1_c, 1);
  REQUIRE(cfg.b1_c_bullet.has_value());
  CHECK_EQ(*cfg.b1_c_bullet, 0);
  CHECK_FALSE(cfg.options.require_stable);

  const ConifoldTopology t = cfg.topology();
  CHECK_EQ(t.s, 1);
  CHECK_EQ(t.l, 1);
  CHECK_EQ(t.link_b1, std::vector<int>{2, 2});
}

TEST_CASE("parsing rejects malformed configs") {
  auto rejects = [](const std::string& text) {
    return throws_kind(ErrorKind::InvalidInput, [&] { parse_config(text); });
  };
  SUBCASE("not JSON") { CHECK(rejects("{nope")); }
  SUBCASE("root not an object") { CHECK(rejects("[1, 2]")); }
  SUBCASE("unknown root key") {
    CHECK(rejects(R"({"schema_version": 1, "m": 3, "case": "compact",
                      "topology": {"b1": 0}, "bogus": 1})"));
  }
  SUBCASE("unsupported schema version") {
    CHECK(rejects(R"({"schema_version": 2, "m": 3, "case": "compact",
                      "topology": {"b1": 0}})"));
  }
  SUBCASE("m below 3") {
    CHECK(rejects(R"({"schema_version": 1, "m": 2, "case": "compact",
                      "topology": {"b1": 0}})"));
  }
  SUBCASE("unknown case") {
    CHECK(rejects(R"({"schema_version": 1, "m": 3, "case": "banana",
                      "topology": {"b1": 0}})"));
  }
  SUBCASE("compact case with ends") {
    std::string text = cone_scenario(-0.5);
    text.replace(text.find("\"CSAC\""), 6, "\"compact\"");
    CHECK(rejects(text));
  }
  SUBCASE("AC case with a CS end") {
    std::string text = cone_scenario(-0.5);
    text.replace(text.find("\"CSAC\""), 6, "\"AC\"");
    CHECK(rejects(text));
  }
  SUBCASE("CS case with an AC end") {
    std::string text = cone_scenario(-0.5);
    text.replace(text.find("\"CSAC\""), 6, "\"CS\"");
    CHECK(rejects(text));
  }
  SUBCASE("missing topology") {
    CHECK(rejects(R"({"schema_version": 1, "m": 3, "case": "compact"})"));
  }
  SUBCASE("missing b1_c with ends present") {
    std::string text = cone_scenario(-0.5);
    text.replace(text.find(R"("b1": 2, "b1_c": 1, "b1_c_bullet": 0)"),
                 std::string(R"("b1": 2, "b1_c": 1, "b1_c_bullet": 0)").size(),
                 R"("b1": 2)");
    CHECK(rejects(text));
  }
  SUBCASE("sphere link with nonzero b1") {
    CHECK(rejects(R"({"schema_version": 1, "m": 3, "case": "AC",
      "ends": [{"kind": "AC", "rate": -0.5,
                "link": {"type": "sphere", "b1": 1}}],
      "topology": {"b1": 0, "b1_c": 0}})"));
  }
  SUBCASE("torus link with wrong b1") {
    CHECK(rejects(R"({"schema_version": 1, "m": 3, "case": "AC",
      "ends": [{"kind": "AC", "rate": -0.5,
                "link": {"type": "torus", "basis": [[1, 0], [0, 1]], "b1": 1}}],
      "topology": {"b1": 2, "b1_c": 1}})"));
  }
  SUBCASE("explicit link without b1") {
    CHECK(rejects(R"({"schema_version": 1, "m": 3, "case": "AC",
      "ends": [{"kind": "AC", "rate": -0.5,
                "link": {"type": "explicit", "cutoff": 8,
                         "entries": [[0, 1], [2, 6]]}}],
      "topology": {"b1": 2, "b1_c": 1}})"));
  }
  SUBCASE("unknown link type") {
    CHECK(rejects(R"({"schema_version": 1, "m": 3, "case": "AC",
      "ends": [{"kind": "AC", "rate": -0.5, "link": {"type": "blob"}}],
      "topology": {"b1": 0, "b1_c": 0}})"));
  }
  SUBCASE("rate of the wrong sign for the end kind") {
    std::string text = cone_scenario(-0.5);
    text.replace(text.find("2.25"), 4, "1.50");  // CS rate must exceed 2
    CHECK(rejects(text));
  }
  SUBCASE("AC rate at or above 2") { CHECK(rejects(cone_scenario(2.0))); }
  SUBCASE("nonpositive rate_tol") {
    CHECK(rejects(cone_scenario(-0.5, R"({"rate_tol": 0.0})")));
  }
  SUBCASE("nonpositive mesh tolerance") {
    CHECK(rejects(cone_scenario(-0.5, R"({"mesh": {"tol": 0.0}})")));
  }
  SUBCASE("unknown option key") {
    CHECK(rejects(cone_scenario(-0.5, R"({"verbose": true})")));
  }
  SUBCASE("wrong type for a field") {
    std::string text = cone_scenario(-0.5);
    text.replace(text.find(R"("m": 3)"), 6, R"("m": "three")");
    CHECK(rejects(text));
  }
}

TEST_CASE("mesh paths resolve against the config directory") {
  const std::string text = R"({"schema_version": 1, "m": 3, "case": "CS",
    "ends": [{"kind": "CS", "rate": 2.25,
              "link": {"type": "mesh", "path": "meshes/link.off"}}],
    "topology": {"b1": 0, "b1_c": 0}})";
  const ScenarioConfig cfg = parse_config(text, "<test>", "/some/base");
  CHECK_EQ(cfg.ends[0].link.mesh_path.string(), "/some/base/meshes/link.off");
  CHECK_EQ(cfg.ends[0].link.b1, -1);  // derived from the mesh at compute time
}

TEST_CASE("cone scenarios reproduce the reference dimensions") {
  SUBCASE("decaying perturbations") {
    const RunReport rep = run(parse_config(cone_scenario(-0.5)));
    CHECK_EQ(rep.moduli.regime, "decay");
    CHECK_EQ(rep.moduli.dim_moduli, 0);
    CHECK(rep.moduli.smooth_guaranteed);
    CHECK(rep.moduli.cs_verdicts.size() == 1);
    CHECK(rep.moduli.cs_verdicts[0].stable);
    for (const auto& e : rep.ends) CHECK(e.window_complete);
  }
  SUBCASE("growth below the first nonzero weight") {
    const RunReport rep = run(parse_config(cone_scenario(0.5)));
    CHECK_EQ(rep.moduli.regime, "growth");
    CHECK_EQ(rep.moduli.dim_moduli, 0);
  }
  SUBCASE("growth across the translation weight") {
    const RunReport rep = run(parse_config(cone_scenario(1.5)));
    CHECK_EQ(rep.moduli.regime, "growth");
    CHECK_EQ(rep.moduli.dim_moduli, 6);
    CHECK(rep.moduli.smooth_guaranteed);
    CHECK_FALSE(rep.cross_checks.empty());
  }
  SUBCASE("exceptional rate is refused") {
    CHECK(throws_kind(ErrorKind::ExceptionalRate,
                      [] { run(parse_config(cone_scenario(1.0))); }));
  }
  SUBCASE("require_stable escalates a crossing above weight 2") {
    std::string text = cone_scenario(-0.5, R"({"require_stable": true})");
    text.replace(text.find("2.25"), 4, "2.50");
    CHECK(throws_kind(ErrorKind::StabilityViolation,
                      [&] { run(parse_config(text)); }));
  }
}

TEST_CASE("shipped scenario files") {
  SUBCASE("cone regression trio") {
    const long expected[] = {0, 0, 6};
    const char* names[] = {"torus-cone-decay.json", "torus-cone-growth-low.json",
                           "torus-cone-growth.json"};
    for (int i = 0; i < 3; ++i) {
      CAPTURE(names[i]);
      const RunReport rep =
          run(load_config(kDataDir + "/scenarios/" + names[i]));
      CHECK_EQ(rep.moduli.dim_moduli, expected[i]);
      CHECK(rep.moduli.smooth_guaranteed);
    }
  }
  SUBCASE("mesh demo") {
    const RunReport rep =
        run(load_config(kDataDir + "/scenarios/mesh-demo.json"));
    CHECK_EQ(rep.scenario.ends[0].link.b1, 0);  // derived from the octahedron
    CHECK_EQ(rep.moduli.regime, "general");
    CHECK_EQ(rep.moduli.dim_moduli, 0);
    CHECK_EQ(rep.moduli.obstruction_dim, 0);
    CHECK(rep.moduli.obstruction_is_bound);
    CHECK_FALSE(rep.moduli.cs_verdicts[0].stable);
  }
  SUBCASE("declared mesh b1 must match the mesh") {
    std::string text = slurp(kDataDir + "/scenarios/mesh-demo.json");
    text.replace(text.find(R"("path": "../meshes/octahedron.off")"),
                 std::string(R"("path": "../meshes/octahedron.off")").size(),
                 R"("path": "../meshes/octahedron.off", "b1": 1)");
    const ScenarioConfig cfg =
        parse_config(text, "<test>", kDataDir + "/scenarios");
    CHECK(throws_kind(ErrorKind::InconsistentTopology, [&] { run(cfg); }));
  }
}

TEST_CASE("machine reports are deterministic and verifiable") {
  const std::string path =
      write_temp("cone-growth.json", cone_scenario(1.5));
  const RunReport rep1 = run(load_config(path));
  const RunReport rep2 = run(load_config(path));
  const std::string r1 = render_machine(rep1);
  const std::string r2 = render_machine(rep2);
  CHECK_EQ(r1, r2);
  CHECK(r1.find("\"dim_moduli\": 6") != std::string::npos);
  CHECK(r1.find("\"schema_version\": 1") != std::string::npos);

  verify_machine_report(r1);  // must not throw

  SUBCASE("tampered numeric value") {
    std::string bad = r1;
    const std::string needle = "\"dim_moduli\": 6";
    bad.replace(bad.find(needle), needle.size(), "\"dim_moduli\": 7");
    CHECK(throws_kind(ErrorKind::InternalInconsistency,
                      [&] { verify_machine_report(bad); }));
  }
  SUBCASE("dropped key") {
    std::string bad = r1;
    const std::string needle = "\"smooth_guaranteed\": true,\n";
    REQUIRE(bad.find(needle) != std::string::npos);
    bad.replace(bad.find(needle), needle.size(), "");
    CHECK(throws_kind(ErrorKind::InternalInconsistency,
                      [&] { verify_machine_report(bad); }));
  }
  SUBCASE("equivalent reformatting still verifies") {
    // reserialize through the default writer: key order kept, whitespace and
    // number formatting changed
    auto j = nlohmann::ordered_json::parse(r1);
    verify_machine_report(j.dump());
  }

  const std::string text_render = render_text(rep1);
  CHECK(text_render.find("dimension") != std::string::npos);
}

TEST_CASE("command line: compute, check, spectrum, stability") {
  const std::string cone = write_temp("cone.json", cone_scenario(1.5));

  std::string out;
  CHECK_EQ(run_cli({"compute", cone, "--format", "machine"}, &out), 0);
  CHECK(out.find("\"dim_moduli\": 6") != std::string::npos);

  CHECK_EQ(run_cli({"compute", cone}, &out), 0);
  CHECK(out.find("dimension") != std::string::npos);

  CHECK_EQ(run_cli({"check", cone}, &out), 0);
  CHECK(out.find("ok:") != std::string::npos);

  CHECK_EQ(run_cli({"spectrum", "--sphere-dim", "2", "--cutoff", "7"}, &out),
           0);
  CHECK(out.find("6") != std::string::npos);

  CHECK_EQ(run_cli({"spectrum", "--torus", "1,0;0,1", "--cutoff", "40",
                    "--format", "machine"},
                   &out),
           0);
  CHECK(out.find("\"cutoff\": 40") != std::string::npos);

  CHECK_EQ(run_cli({"stability", cone}, &out), 0);
  CHECK(out.find("stable") != std::string::npos);

  const std::string sphere_cs = write_temp("sphere-cs.json",
      R"({"schema_version": 1, "m": 3, "case": "CS",
          "ends": [{"kind": "CS", "rate": 2.25, "link": {"type": "sphere"}}],
          "topology": {"b1": 0, "b1_c": 0}})");
  CHECK_EQ(run_cli({"stability", sphere_cs}, &out), 0);
  CHECK(out.find("does not apply") != std::string::npos);
}

TEST_CASE("command line: exit codes") {
  std::string out;
  SUBCASE("no subcommand") { CHECK_EQ(run_cli({}), 2); }
  SUBCASE("unknown option") { CHECK_EQ(run_cli({"compute", "--bogus"}), 2); }
  SUBCASE("help") { CHECK_EQ(run_cli({"--help"}), 0); }
  SUBCASE("missing config file") {
    CHECK_EQ(run_cli({"compute", "/nonexistent/cfg.json"}), 2);
  }
  SUBCASE("invalid config") {
    const std::string p = write_temp("bad.json", "{\"schema_version\": 1}");
    CHECK_EQ(run_cli({"compute", p}), 2);
  }
  SUBCASE("exceptional rate") {
    const std::string p = write_temp("exc.json", cone_scenario(1.0));
    CHECK_EQ(run_cli({"compute", p}), 5);
  }
  SUBCASE("stability violation") {
    std::string text = cone_scenario(-0.5, R"({"require_stable": true})");
    text.replace(text.find("2.25"), 4, "2.50");
    const std::string p = write_temp("unstable.json", text);
    CHECK_EQ(run_cli({"compute", p}), 7);
  }
  SUBCASE("insufficient cutoff under --strict") {
    const std::string p = write_temp("short.json",
        R"({"schema_version": 1, "m": 3, "case": "CS",
            "ends": [{"kind": "CS", "rate": 2.25, "sym_dim": 2,
                      "link": {"type": "explicit", "cutoff": 5,
                               "entries": [[0, 1], [2, 6]], "b1": 2}}],
            "topology": {"b1": 1, "b1_c": 1}})");
    CHECK_EQ(run_cli({"compute", p, "--strict"}), 4);
  }
  SUBCASE("inconsistent topology") {
    const std::string p = write_temp("topo.json",
        R"({"schema_version": 1, "m": 3, "case": "compact",
            "topology": {"b1": -1}})");
    CHECK_EQ(run_cli({"compute", p}), 3);
  }
  SUBCASE("conflicting spectrum sources") {
    CHECK_EQ(run_cli({"spectrum", "--sphere-dim", "2", "--torus", "1,0;0,1",
                      "--cutoff", "7"}),
             2);
  }
  SUBCASE("spectrum without a source") {
    CHECK_EQ(run_cli({"spectrum", "--cutoff", "7"}), 2);
  }
  SUBCASE("bad torus basis text") {
    CHECK_EQ(run_cli({"spectrum", "--torus", "1,x;0,1", "--cutoff", "7"}), 2);
  }
}

TEST_CASE("command line: verify round trip on the real binary") {
  const std::string cone = write_temp("spawn-cone.json", cone_scenario(1.5));
  const std::string r1 = write_temp("report1.json", "");
  const std::string r2 = write_temp("report2.json", "");

  CHECK_EQ(spawn_cli("compute " + cone + " --format machine > " + r1), 0);
  CHECK_EQ(spawn_cli("compute " + cone + " --format machine > " + r2), 0);
  const std::string a = slurp(r1);
  CHECK_FALSE(a.empty());
  CHECK_EQ(a, slurp(r2));  // byte-identical across processes

  CHECK_EQ(spawn_cli("verify " + r1 + " > /dev/null"), 0);

  // tamper with one reported number
  std::string bad = a;
  const std::string needle = "\"dim_moduli\": 6";
  REQUIRE(bad.find(needle) != std::string::npos);
  bad.replace(bad.find(needle), needle.size(), "\"dim_moduli\": 5");
  const std::string rb = write_temp("report-bad.json", bad);
  CHECK_EQ(spawn_cli("verify " + rb + " 2> /dev/null"), 6);

  CHECK_EQ(spawn_cli("check " + cone + " > /dev/null"), 0);
  CHECK_EQ(spawn_cli("compute /definitely/missing.json 2> /dev/null"), 2);
}

}  // TEST_SUITE
