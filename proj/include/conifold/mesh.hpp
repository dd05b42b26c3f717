#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "conifold/spectrum.hpp"

namespace conifold {

// Closed oriented triangulated surface.
struct TriangleMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
};

struct MeshStats {
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int euler_characteristic = 0;
  int components = 0;
  double min_angle_deg = 0.0;
  double total_area = 0.0;
};

// Parses ASCII OFF.  Fails with distinct diagnostics for: syntax errors,
// non-triangle faces, out-of-range indices, degenerate (repeated-vertex)
// faces, boundary edges, non-manifold edges, and inconsistent orientation.
TriangleMesh load_off(const std::filesystem::path& path);
TriangleMesh parse_off(std::istream& in, const std::string& origin);

// Structural validation used by load_off/parse_off; exposed for meshes
// constructed in memory.  Returns per-mesh statistics.
MeshStats validate_mesh(const TriangleMesh& mesh);

struct FemOperators {
  Eigen::SparseMatrix<double> stiffness;  // cotangent weights, PSD
  Eigen::VectorXd mass;                   // lumped (barycentric), diagonal
  double min_angle_deg = 0.0;
  double total_area = 0.0;
};

FemOperators assemble(const TriangleMesh& mesh);

struct EigResult {
  Spectrum spectrum;                 // clustered, truncated at the cutoff
  std::vector<double> eigenvalues;   // raw converged values <= cutoff*(1+margin)
  std::vector<double> residuals;     // |K x - l M x| / |x|_M per raw value
  MeshStats stats;
  int matvec_count = 0;
};

// All generalized eigenvalues of (stiffness, mass) in [0, cutoff*(1+margin)],
// found by shift-invert block Lanczos with full reorthogonalization and
// deflation of converged pairs.  The number of eigenvalues below the bound is
// established up front by LDLT inertia, so completeness does not rest on
// convergence heuristics.  Iteration budget: 10 * count * sqrt(vertices).
EigResult eigensolve(const TriangleMesh& mesh, double cutoff,
                     const MeshSolveOptions& opts = {});

// Gap rule for merging nearly-degenerate discrete eigenvalues.
inline double cluster_gap(double value, double tol) {
  return std::max(0.02 * value, 10.0 * tol);
}

}  // namespace conifold
