#include "conifold/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "conifold/mesh.hpp"

namespace conifold {

namespace {

double eigen_at(double g, int m) { return g * (g + m - 2); }

// Cutoff requested from every link: 2m covers the stability window [0, 2];
// e(rate) covers the weight windows the dimension formulas scan.
double needed_cutoff(double rate, int m) {
  return std::max(2.0 * m, eigen_at(rate, m));
}

Spectrum resolve_end_spectrum(EndConfig& end, const ScenarioConfig& cfg,
                              int index, std::vector<std::string>& warnings) {
  const double needed = needed_cutoff(end.rate, cfg.m);
  if (end.link.kind != LinkDescriptor::Kind::Mesh)
    return resolve_link(end.link, cfg.m, needed, cfg.options.mesh);

  if (cfg.m != 3)
    fail(ErrorKind::InvalidInput,
         "mesh links describe surfaces, so they require m = 3");
  TriangleMesh mesh = load_off(end.link.mesh_path);
  EigResult res = eigensolve(mesh, needed, cfg.options.mesh);
  if (res.stats.components != 1)
    fail(ErrorKind::InconsistentTopology,
         "end " + std::to_string(index) + ": link mesh has " +
             std::to_string(res.stats.components) +
             " components; a link must be connected");
  const int derived_b1 = 2 - res.stats.euler_characteristic;
  if (end.link.b1 < 0) {
    end.link.b1 = derived_b1;
  } else if (end.link.b1 != derived_b1) {
    fail(ErrorKind::InconsistentTopology,
         "end " + std::to_string(index) + ": declared link b1 = " +
             std::to_string(end.link.b1) +
             " but the mesh's Euler characteristic gives " +
             std::to_string(derived_b1));
  }
  if (res.stats.min_angle_deg < cfg.options.mesh.min_angle_deg) {
    std::ostringstream w;
    w << "end " << index << ": mesh minimum angle "
      << res.stats.min_angle_deg << " deg is below the quality floor "
      << cfg.options.mesh.min_angle_deg << " deg";
    warnings.push_back(w.str());
  }
  return res.spectrum;
}

Window end_window(const EndConfig& end) {
  if (end.kind == EndKind::CS) return Window::closed(0.0, end.rate);
  return end.rate > 0.0 ? Window::closed(0.0, end.rate)
                        : Window::closed(end.rate, 0.0);
}

}  // namespace

RunReport run(const ScenarioConfig& config) {
  RunReport rep;
  rep.scenario = config;

  std::vector<ConeEnd> ends;
  std::vector<double> rates;
  for (size_t i = 0; i < rep.scenario.ends.size(); ++i) {
    EndConfig& e = rep.scenario.ends[i];
    ConeEnd ce;
    ce.kind = e.kind;
    ce.rate = e.rate;
    ce.sym_dim = e.sym_dim;
    ce.link_is_sphere = e.sphere_link();
    e.link_is_sphere = ce.link_is_sphere;
    ce.spectrum = resolve_end_spectrum(e, config, int(i), rep.warnings);
    validate_end(ce, config.m);
    rates.push_back(e.rate);
    ends.push_back(std::move(ce));
  }

  ConifoldTopology topo = rep.scenario.topology();
  require_consistent(topo);

  for (size_t i = 0; i < ends.size(); ++i) {
    const double tol = config.options.rate_tol.value_or(
        default_rate_tol(ends[i].spectrum.source, config.options.mesh.tol));
    ExceptionalQuery q = is_exceptional({ends[i]}, config.m, {rates[i]}, tol);
    if (q.exceptional) {
      std::ostringstream msg;
      msg << "end " << i << ": rate " << rates[i]
          << " is exceptional (weight " << q.nearest->gamma << ", distance "
          << q.nearest->distance << ", tolerance " << tol << ")";
      fail(ErrorKind::ExceptionalRate, msg.str());
    }
  }

  for (size_t i = 0; i < ends.size(); ++i) {
    EndReport er;
    er.kind = ends[i].kind;
    er.rate = rates[i];
    er.sym_dim = ends[i].sym_dim;
    er.spectrum = ends[i].spectrum;
    er.window = end_window(rep.scenario.ends[i]);
    ExceptionalWeightSet set =
        exceptional_set({ends[i]}, config.m, er.window, /*strict=*/false);
    er.weights = set.per_end[0].weights;
    er.window_complete = set.per_end[0].complete;
    if (config.options.strict && !er.window_complete) {
      std::ostringstream msg;
      msg << "end " << i << ": spectrum cutoff " << ends[i].spectrum.cutoff
          << " does not cover the weight window (needs "
          << required_cutoff(er.window, config.m) << ")";
      fail(ErrorKind::CutoffInsufficient, msg.str());
    }
    rep.ends.push_back(std::move(er));
  }

  switch (config.case_tag) {
    case CaseTag::Compact:
      rep.moduli = moduli_dim_compact(topo);
      break;
    case CaseTag::AC:
      rep.moduli = moduli_dim_AC(topo, ends, rates);
      break;
    case CaseTag::CS:
      rep.moduli =
          moduli_dim_CS(topo, ends, rates, config.options.require_stable);
      break;
    case CaseTag::CSAC:
      rep.moduli =
          moduli_dim_CSAC(topo, ends, rates, config.options.require_stable);
      break;
  }
  rep.cross_checks = cross_check(rep.moduli, topo, ends, rates);
  return rep;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorKind::InvalidInput, "cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Eigen::MatrixXd parse_torus_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream row_stream(text);
  std::string row;
  while (std::getline(row_stream, row, ';')) {
    std::vector<double> entries;
    std::stringstream cell_stream(row);
    std::string cell;
    while (std::getline(cell_stream, cell, ',')) {
      try {
        size_t used = 0;
        entries.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(cell[used])) ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        fail(ErrorKind::InvalidInput,
             "torus basis entry '" + cell + "' is not a number");
      }
    }
    rows.push_back(std::move(entries));
  }
  if (rows.empty())
    fail(ErrorKind::InvalidInput, "empty torus basis");
  const size_t k = rows.size();
  Eigen::MatrixXd basis(k, k);
  for (size_t r = 0; r < k; ++r) {
    if (rows[r].size() != k)
      fail(ErrorKind::InvalidInput,
           "torus basis must be square: use 'a,b;c,d' with matching row "
           "lengths");
    for (size_t c = 0; c < k; ++c) basis(r, c) = rows[r][c];
  }
  return basis;
}

int run_compute(const std::string& config_path, const std::string& format,
                bool strict) {
  ScenarioConfig cfg = load_config(config_path);
  if (strict) cfg.options.strict = true;
  RunReport rep = run(cfg);
  std::cout << (format == "machine" ? render_machine(rep) : render_text(rep));
  return 0;
}

int run_check(const std::string& config_path) {
  ScenarioConfig cfg = load_config(config_path);
  bool topology_deferred = false;
  for (const auto& e : cfg.ends)
    if (e.link.kind == LinkDescriptor::Kind::Mesh && e.link.b1 < 0)
      topology_deferred = true;
  if (!topology_deferred) require_consistent(cfg.topology());
  int s = 0, l = 0;
  for (const auto& e : cfg.ends) (e.kind == EndKind::CS ? s : l) += 1;
  std::cout << "ok: " << case_tag_name(cfg.case_tag) << " scenario, m = "
            << cfg.m << ", " << s << " CS end(s), " << l << " AC end(s)";
  if (topology_deferred)
    std::cout << " (link b1 from mesh: topology checked at compute time)";
  std::cout << "\n";
  return 0;
}

int run_spectrum(int sphere_dim, const std::string& torus_text,
                 const std::string& mesh_path, double cutoff, double mesh_tol,
                 const std::string& format) {
  Spectrum s;
  if (sphere_dim > 0) {
    s = sphere_spectrum(sphere_dim, cutoff);
  } else if (!torus_text.empty()) {
    s = torus_spectrum(parse_torus_rows(torus_text), cutoff);
  } else {
    TriangleMesh mesh = load_off(mesh_path);
    MeshSolveOptions opts;
    opts.tol = mesh_tol;
    s = eigensolve(mesh, cutoff, opts).spectrum;
  }
  std::cout << (format == "machine" ? render_spectrum_machine(s)
                                    : render_spectrum_text(s));
  return 0;
}

int run_stability(const std::string& config_path) {
  ScenarioConfig cfg = load_config(config_path);
  if (cfg.ends.empty()) {
    std::cout << "no ends: nothing to check\n";
    return 0;
  }
  std::vector<std::string> warnings;
  for (size_t i = 0; i < cfg.ends.size(); ++i) {
    EndConfig& e = cfg.ends[i];
    std::cout << "end " << i << " (" << end_kind_name(e.kind) << "): ";
    if (e.sphere_link()) {
      std::cout << "link is a round sphere; the cone is a plane and the "
                   "stability pattern does not apply\n";
      continue;
    }
    ConeEnd ce;
    ce.kind = e.kind;
    ce.rate = e.rate;
    ce.sym_dim = e.sym_dim;
    ce.spectrum = resolve_end_spectrum(e, cfg, int(i), warnings);
    StabilityVerdict v = stability_check(ce, cfg.m);
    if (v.stable) {
      std::cout << "stable\n";
    } else {
      std::cout << "not stable (" << v.detail << ")\n";
    }
    for (const auto& c : v.checks)
      std::cout << "  weight " << c.gamma << ": multiplicity " << c.found
                << " (stable pattern needs " << c.expected << ")\n";
    for (const auto& w : v.extra_weights)
      std::cout << "  extra weight " << w.gamma << " (x" << w.multiplicity
                << ")\n";
  }
  for (const auto& w : warnings) std::cout << "warning: " << w << "\n";
  return 0;
}

int run_verify(const std::string& report_path) {
  const std::string text = read_file(report_path);
  verify_machine_report(
      text, std::filesystem::path(report_path).parent_path());
  std::cout << "ok: every reported value matches the recomputation\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"spectral dimension calculator for special Lagrangian "
               "conifold moduli"};
  app.name("conifold");
  app.require_subcommand(1);

  std::string config_path;
  std::string format = "text";
  bool strict = false;

  CLI::App* compute = app.add_subcommand(
      "compute", "run a scenario and report the moduli dimensions");
  compute->add_option("config", config_path, "scenario JSON file")
      ->required();
  compute->add_option("--format", format, "text or machine")
      ->check(CLI::IsMember({"text", "machine"}));
  compute->add_flag("--strict", strict,
                    "fail when a spectrum does not cover its weight window");

  CLI::App* check = app.add_subcommand(
      "check", "validate a scenario file without computing spectra");
  check->add_option("config", config_path, "scenario JSON file")->required();

  int sphere_dim = 0;
  std::string torus_text;
  std::string mesh_path;
  double cutoff = 0.0;
  double mesh_tol = 1e-8;
  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "print a link spectrum up to a cutoff");
  CLI::Option* opt_sphere = spectrum->add_option(
      "--sphere-dim", sphere_dim, "round sphere S^d of dimension d >= 2");
  CLI::Option* opt_torus = spectrum->add_option(
      "--torus", torus_text, "flat torus basis rows, e.g. '1,0;0,1'");
  CLI::Option* opt_mesh = spectrum->add_option(
      "--mesh", mesh_path, "triangle mesh in ASCII OFF format");
  opt_sphere->excludes(opt_torus)->excludes(opt_mesh);
  opt_torus->excludes(opt_mesh);
  spectrum->add_option("--cutoff", cutoff, "largest eigenvalue reported")
      ->required();
  spectrum->add_option("--tol", mesh_tol, "mesh eigensolver tolerance");
  spectrum->add_option("--format", format, "text or machine")
      ->check(CLI::IsMember({"text", "machine"}));

  CLI::App* stability = app.add_subcommand(
      "stability", "stability verdict for every end's cone");
  stability->add_option("config", config_path, "scenario JSON file")
      ->required();

  std::string report_path;
  CLI::App* verify = app.add_subcommand(
      "verify", "recompute a machine report and compare every value");
  verify->add_option("report", report_path, "machine report JSON file")
      ->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (compute->parsed()) return run_compute(config_path, format, strict);
    if (check->parsed()) return run_check(config_path);
    if (spectrum->parsed()) {
      if (!*opt_sphere && !*opt_torus && !*opt_mesh)
        fail(ErrorKind::InvalidInput,
             "choose a source: --sphere-dim, --torus, or --mesh");
      return run_spectrum(*opt_sphere ? sphere_dim : 0, torus_text, mesh_path,
                          cutoff, mesh_tol, format);
    }
    if (stability->parsed()) return run_stability(config_path);
    if (verify->parsed()) return run_verify(report_path);
  } catch (const Error& e) {
    std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what()
              << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error (internal): " << e.what() << "\n";
    return exit_code_for(ErrorKind::InternalInconsistency);
  }
  return 0;
}

}  // namespace conifold
