#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace testsupport {

using conifold::ConeEnd;
using conifold::Spectrum;
using conifold::SpectrumEntry;
using conifold::TriangleMesh;

namespace {

// all multi-indices alpha in N^n with |alpha| = k, lexicographic
void enumerate_monomials(int n, int k, std::vector<int>& prefix,
                         std::vector<std::vector<int>>& out) {
  if (int(prefix.size()) == n - 1) {
    prefix.push_back(k - 0);
    int used = 0;
    for (int i = 0; i < n - 1; ++i) used += prefix[i];
    prefix.back() = k - used;
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  int used = 0;
  for (int v : prefix) used += v;
  for (int a = 0; a <= k - used; ++a) {
    prefix.push_back(a);
    enumerate_monomials(n, k, prefix, out);
    prefix.pop_back();
  }
}

std::vector<std::vector<int>> monomials(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  enumerate_monomials(n, k, prefix, out);
  return out;
}

}  // namespace

long harmonic_polynomial_dim(int n, int k) {
  if (n < 1 || k < 0) throw std::invalid_argument("harmonic_polynomial_dim");
  const auto deg_k = monomials(n, k);
  if (k < 2) return long(deg_k.size());  // Laplacian is identically zero
  const auto deg_km2 = monomials(n, k - 2);
  std::map<std::vector<int>, int> row_of;
  for (size_t r = 0; r < deg_km2.size(); ++r) row_of[deg_km2[r]] = int(r);

  Eigen::MatrixXd lap =
      Eigen::MatrixXd::Zero(long(deg_km2.size()), long(deg_k.size()));
  for (size_t c = 0; c < deg_k.size(); ++c) {
    for (int i = 0; i < n; ++i) {
      const int a = deg_k[c][i];
      if (a < 2) continue;
      std::vector<int> target = deg_k[c];
      target[i] -= 2;
      lap(row_of.at(target), long(c)) += double(a) * double(a - 1);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(lap);
  return long(deg_k.size()) - lu.rank();
}

std::vector<SpectrumEntry> sphere_oracle(int d, double cutoff) {
  std::vector<SpectrumEntry> out;
  for (int k = 0;; ++k) {
    const double e = double(k) * double(k + d - 1);
    if (e > cutoff) break;
    out.push_back({e, int(harmonic_polynomial_dim(d + 1, k))});
  }
  return out;
}

std::vector<SpectrumEntry> torus_oracle(const Eigen::MatrixXd& basis,
                                        double cutoff) {
  const int k = int(basis.rows());
  if (k < 1 || basis.cols() != k) throw std::invalid_argument("torus_oracle");
  const double det = basis.determinant();
  if (std::abs(det) < 1e-12) throw std::invalid_argument("singular basis");
  const Eigen::MatrixXd dual_t = basis.inverse().transpose();

  // |B^{-T} n| >= |n| / sigma_max(B), and sigma_max <= Frobenius norm, so
  // every solution lies in |n|_inf <= R.
  const double radius = std::sqrt(cutoff) / (2.0 * M_PI);
  const long R = long(std::ceil(basis.norm() * radius)) + 1;

  std::vector<double> raw;
  std::vector<long> n(k, -R);
  for (;;) {
    Eigen::VectorXd v(k);
    for (int i = 0; i < k; ++i) v[i] = double(n[i]);
    const double e = 4.0 * M_PI * M_PI * (dual_t * v).squaredNorm();
    if (e <= cutoff * (1.0 + 1e-9)) raw.push_back(std::min(e, cutoff));
    int i = 0;
    while (i < k && ++n[i] > R) n[i++] = -R;
    if (i == k) break;
  }
  std::sort(raw.begin(), raw.end());
  std::vector<SpectrumEntry> out;
  for (double v : raw) {
    if (!out.empty() &&
        v - out.back().eigenvalue <=
            1e-9 * std::max(1.0, std::abs(out.back().eigenvalue))) {
      ++out.back().multiplicity;
      continue;
    }
    out.push_back({std::abs(v) <= 1e-9 ? 0.0 : v, 1});
  }
  return out;
}

Eigen::MatrixXd clifford_torus_basis() {
  // Gram matrix of the lattice generators is (2 pi)^2 * (2/3) * [1 .5; .5 1],
  // which yields eigenvalues 2 (a^2 - a b + b^2).
  const double s = 2.0 * M_PI * std::sqrt(2.0 / 3.0);
  Eigen::MatrixXd b(2, 2);
  b << s, 0.5 * s, 0.0, s * std::sqrt(3.0) / 2.0;
  return b;
}

TriangleMesh octahedron() {
  TriangleMesh mesh;
  mesh.vertices = {
      {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1},
  };
  mesh.faces = {
      {0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
      {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5},
  };
  return mesh;
}

namespace {

int midpoint(int a, int b, TriangleMesh& mesh,
             std::map<std::pair<int, int>, int>& cache) {
  const auto key = std::minmax(a, b);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const auto& va = mesh.vertices[a];
  const auto& vb = mesh.vertices[b];
  mesh.vertices.push_back({(va[0] + vb[0]) / 2.0, (va[1] + vb[1]) / 2.0,
                           (va[2] + vb[2]) / 2.0});
  const int idx = int(mesh.vertices.size()) - 1;
  cache[key] = idx;
  return idx;
}

void normalize_vertices(TriangleMesh& mesh) {
  for (auto& v : mesh.vertices) v.normalize();
}

}  // namespace

TriangleMesh icosphere(int subdiv) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh mesh;
  mesh.vertices = {
      {-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1},
  };
  mesh.faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  for (int round = 0; round < subdiv; ++round) {
    std::map<std::pair<int, int>, int> cache;
    std::vector<std::array<int, 3>> faces;
    faces.reserve(mesh.faces.size() * 4);
    for (const auto& f : mesh.faces) {
      const int ab = midpoint(f[0], f[1], mesh, cache);
      const int bc = midpoint(f[1], f[2], mesh, cache);
      const int ca = midpoint(f[2], f[0], mesh, cache);
      faces.push_back({f[0], ab, ca});
      faces.push_back({f[1], bc, ab});
      faces.push_back({f[2], ca, bc});
      faces.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(faces);
  }
  normalize_vertices(mesh);
  return mesh;
}

std::string to_off(const TriangleMesh& mesh) {
  std::ostringstream out;
  out << "OFF\n"
      << mesh.vertices.size() << " " << mesh.faces.size() << " 0\n";
  out.precision(17);
  for (const auto& v : mesh.vertices)
    out << v[0] << " " << v[1] << " " << v[2] << "\n";
  for (const auto& f : mesh.faces)
    out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
  return out.str();
}

std::vector<double> dense_mesh_eigenvalues(const TriangleMesh& mesh,
                                           double cutoff) {
  const int n = int(mesh.vertices.size());
  Eigen::MatrixXd stiffness = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(n);
  for (const auto& f : mesh.faces) {
    Eigen::Vector3d p[3];
    for (int i = 0; i < 3; ++i) p[i] = mesh.vertices[f[i]];
    const double area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
    for (int i = 0; i < 3; ++i) mass[f[i]] += area / 3.0;
    for (int corner = 0; corner < 3; ++corner) {
      const int i1 = f[(corner + 1) % 3];
      const int i2 = f[(corner + 2) % 3];
      const Eigen::Vector3d u = p[(corner + 1) % 3] - p[corner];
      const Eigen::Vector3d v = p[(corner + 2) % 3] - p[corner];
      const double w = 0.5 * u.dot(v) / u.cross(v).norm();
      stiffness(i1, i1) += w;
      stiffness(i2, i2) += w;
      stiffness(i1, i2) -= w;
      stiffness(i2, i1) -= w;
    }
  }
  Eigen::MatrixXd mass_mat = mass.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(stiffness,
                                                                mass_mat);
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    if (ges.eigenvalues()[i] <= cutoff) out.push_back(ges.eigenvalues()[i]);
  return out;
}

Spectrum stable_pattern_spectrum(int m, int sym_dim, double cutoff,
                                 const std::vector<SpectrumEntry>& extras) {
  std::vector<SpectrumEntry> entries = {{0.0, 1},
                                        {double(m - 1), 2 * m},
                                        {double(2 * m), m * m - 1 - sym_dim}};
  entries.insert(entries.end(), extras.begin(), extras.end());
  entries.erase(std::remove_if(entries.begin(), entries.end(),
                               [](const SpectrumEntry& e) {
                                 return e.multiplicity == 0;
                               }),
                entries.end());
  std::sort(entries.begin(), entries.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) {
              return a.eigenvalue < b.eigenvalue;
            });
  return conifold::make_explicit_spectrum(std::move(entries), cutoff);
}

ConeEnd explicit_end(conifold::EndKind kind, double rate, int sym_dim,
                     Spectrum spectrum, bool link_is_sphere) {
  ConeEnd end;
  end.kind = kind;
  end.rate = rate;
  end.sym_dim = sym_dim;
  end.spectrum = std::move(spectrum);
  end.link_is_sphere = link_is_sphere;
  return end;
}

std::string write_temp(const std::string& name_hint, const std::string& text) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path();
  const auto path =
      dir / ("conifold-" + name_hint + "-" + std::to_string(counter++));
  std::ofstream out(path);
  out << text;
  out.close();
  return path.string();
}

}  // namespace testsupport
