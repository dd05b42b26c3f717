#pragma once

#include <string>
#include <vector>

#include "conifold/moduli.hpp"
#include "conifold/scenario.hpp"

namespace conifold {

// Per-end record of what the pipeline resolved and derived.
struct EndReport {
  EndKind kind = EndKind::AC;
  double rate = 0.0;
  int sym_dim = 0;
  Spectrum spectrum;
  Window window;                      // weight window examined for this end
  std::vector<WeightEntry> weights;   // exceptional weights in that window
  bool window_complete = false;
};

struct RunReport {
  ScenarioConfig scenario;  // canonical echo of the parsed config
  std::vector<EndReport> ends;
  ModuliReport moduli;
  std::vector<std::string> cross_checks;
  std::vector<std::string> warnings;
};

// Full pipeline: resolve link spectra, stability verdicts, topology
// validation, moduli dimensions, cross-checks.
RunReport run(const ScenarioConfig& config);

std::string render_text(const RunReport& report);

// Renderers for a bare link spectrum (the `spectrum` subcommand).
std::string render_spectrum_text(const Spectrum& s);
std::string render_spectrum_machine(const Spectrum& s);

// Deterministic machine rendering: fixed key order, floats printed with 12
// significant digits.  Identical configs produce byte-identical output.
std::string render_machine(const RunReport& report);

// Re-runs the scenario echoed inside a machine report and checks every
// reported value against the recomputation (integers exactly, floats to
// 1e-9 relative).  Raises InternalInconsistency on any mismatch.
void verify_machine_report(const std::string& report_json,
                           const std::filesystem::path& base_dir = ".");

// CLI entry point (subcommands: compute, check, spectrum, stability,
// verify).  Returns the process exit code.
int cli_main(const std::vector<std::string>& args);

}  // namespace conifold
