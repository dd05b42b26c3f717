#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "conifold/errors.hpp"

namespace conifold {

enum class SpectrumSource { Sphere, Torus, Explicit, Mesh };

const char* spectrum_source_name(SpectrumSource s);

struct SpectrumEntry {
  double eigenvalue = 0.0;
  int multiplicity = 0;
};

// Laplace spectrum of a closed link, complete up to `cutoff` (inclusive).
// Invariants: eigenvalues strictly increasing, all >= 0 and <= cutoff,
// multiplicities >= 1, eigenvalue 0 present with multiplicity b0.
struct Spectrum {
  std::vector<SpectrumEntry> entries;
  double cutoff = 0.0;
  SpectrumSource source = SpectrumSource::Explicit;

  int b0() const;                      // multiplicity of eigenvalue 0
  int total_count() const;             // sum of multiplicities
  double max_eigenvalue() const;
};

// Relative tolerance used to group analytically computed eigenvalues.
inline constexpr double kAnalyticGroupTol = 1e-9;

// Sorts, groups nearly-equal values (relative tol), drops entries above the
// cutoff, and validates the Spectrum invariants.  `raw` holds one value per
// eigenvalue counted with multiplicity.
Spectrum make_spectrum(std::vector<double> raw, double cutoff,
                       SpectrumSource source,
                       double group_tol = kAnalyticGroupTol);

// Validates an already-grouped spectrum (used for explicit user input).
Spectrum make_explicit_spectrum(std::vector<SpectrumEntry> entries,
                                double cutoff);

// Round sphere S^d, d >= 2, unit radius: eigenvalues k(k+d-1) with the
// harmonic-polynomial multiplicities, for all k with k(k+d-1) <= cutoff.
Spectrum sphere_spectrum(int d, double cutoff);

// Flat torus R^k / B Z^k (columns of B generate the lattice): eigenvalues
// 4 pi^2 |xi|^2 over the dual lattice B^{-T} Z^k, complete up to cutoff.
// The enumeration box is sized from the smallest eigenvalue of the dual
// Gram matrix, which makes the sweep provably exhaustive.
Spectrum torus_spectrum(const Eigen::MatrixXd& basis, double cutoff);

struct MeshSolveOptions {
  double tol = 1e-8;        // residual tolerance |K x - l M x| / |x|_M
  double margin = 0.05;     // solve up to cutoff*(1+margin) before clustering
  double min_angle_deg = 1.0;
  bool strict_quality = false;  // reject meshes below the angle floor
};

struct LinkDescriptor {
  enum class Kind { RoundSphere, FlatTorus, Explicit, Mesh };
  Kind kind = Kind::RoundSphere;
  int sphere_dim = 2;               // RoundSphere: d = m-1
  Eigen::MatrixXd torus_basis;      // FlatTorus: (m-1) x (m-1)
  Spectrum explicit_spectrum;       // Explicit
  std::filesystem::path mesh_path;  // Mesh (ASCII OFF, m must be 3)
  int b1 = 0;                       // first Betti number of the link
  bool is_round_sphere() const { return kind == Kind::RoundSphere; }
};

// Produces the link spectrum for one end of an m-dimensional conifold.
// The returned cutoff is min(requested, achievable); for explicit input the
// achievable cutoff is the one the data was declared complete to.
Spectrum resolve_link(const LinkDescriptor& desc, int m, double cutoff,
                      const MeshSolveOptions& opts = {});

}  // namespace conifold
