#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "conifold/mesh.hpp"
#include "conifold/spectrum.hpp"
#include "conifold/weights.hpp"

// Independent oracles the unit and acceptance tests compare the library
// against.  Everything here is deliberately brute force: correctness over
// speed, and no code shared with the implementations under test.
namespace testsupport {

// Dimension of the space of harmonic homogeneous polynomials of degree k in
// n variables, computed as dim ker of the Laplacian on the monomial basis.
long harmonic_polynomial_dim(int n, int k);

// Spectrum of the round unit sphere S^d up to `cutoff`, eigenvalue
// k(k + d - 1) with the harmonic-polynomial multiplicity.
std::vector<conifold::SpectrumEntry> sphere_oracle(int d, double cutoff);

// Exhaustive dual-lattice sweep for the flat torus R^k / B Z^k using a
// Frobenius-norm box bound (independent of the production bound).
std::vector<conifold::SpectrumEntry> torus_oracle(const Eigen::MatrixXd& basis,
                                                  double cutoff);

// Lattice basis of the hexagonal flat 2-torus arising as the link of the
// standard special Lagrangian T^2-cone in C^3.  Its Laplace eigenvalues are
// 2 * (a^2 - a b + b^2) over integer (a, b), so the spectrum starts
// {0: 1, 2: 6, 6: 6, 8: 6, ...} and realises the stable pattern for m = 3
// with a 2-dimensional cone symmetry group.
Eigen::MatrixXd clifford_torus_basis();

// Closed triangle meshes for the FEM tests.
conifold::TriangleMesh octahedron();
conifold::TriangleMesh icosphere(int subdiv);  // 10 * 4^subdiv + 2 vertices
std::string to_off(const conifold::TriangleMesh& mesh);

// Dense generalized eigensolve K x = e M x with an independently written
// cotangent/lumped-mass assembly.  Returns all eigenvalues <= cutoff, sorted,
// not grouped.
std::vector<double> dense_mesh_eigenvalues(const conifold::TriangleMesh& mesh,
                                           double cutoff);

// Link spectrum carrying the multiplicity pattern of a stable cone
// ({0: 1, m-1: 2m, 2m: m^2 - 1 - sym_dim}) plus optional extra entries.
conifold::Spectrum stable_pattern_spectrum(
    int m, int sym_dim, double cutoff,
    const std::vector<conifold::SpectrumEntry>& extras = {});

conifold::ConeEnd explicit_end(conifold::EndKind kind, double rate,
                               int sym_dim, conifold::Spectrum spectrum,
                               bool link_is_sphere = false);

// Writes text to a fresh file under the system temp directory and returns
// its path.
std::string write_temp(const std::string& name_hint, const std::string& text);

// True when fn() throws a conifold::Error of exactly this kind.
template <typename Fn>
bool throws_kind(conifold::ErrorKind kind, Fn&& fn) {
  try {
    fn();
  } catch (const conifold::Error& e) {
    return e.kind() == kind;
  } catch (...) {
    return false;
  }
  return false;
}

}  // namespace testsupport
