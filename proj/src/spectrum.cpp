#include "conifold/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "conifold/mesh.hpp"

namespace conifold {

const char* spectrum_source_name(SpectrumSource s) {
  switch (s) {
    case SpectrumSource::Sphere: return "sphere";
    case SpectrumSource::Torus: return "torus";
    case SpectrumSource::Explicit: return "explicit";
    case SpectrumSource::Mesh: return "mesh";
  }
  return "unknown";
}

int Spectrum::b0() const {
  if (entries.empty() || entries.front().eigenvalue != 0.0) return 0;
  return entries.front().multiplicity;
}

int Spectrum::total_count() const {
  return std::accumulate(entries.begin(), entries.end(), 0,
                         [](int a, const SpectrumEntry& e) {
                           return a + e.multiplicity;
                         });
}

double Spectrum::max_eigenvalue() const {
  return entries.empty() ? 0.0 : entries.back().eigenvalue;
}

namespace {

void validate_spectrum(const Spectrum& s) {
  if (s.cutoff < 0.0)
    fail(ErrorKind::InvalidInput, "spectrum cutoff must be >= 0");
  double prev = -1.0;
  for (const auto& e : s.entries) {
    if (e.eigenvalue < 0.0)
      fail(ErrorKind::InvalidInput, "negative eigenvalue in spectrum");
    if (e.eigenvalue > s.cutoff)
      fail(ErrorKind::InvalidInput, "spectrum entry above its cutoff");
    if (e.multiplicity < 1)
      fail(ErrorKind::InvalidInput, "spectrum multiplicity must be >= 1");
    if (e.eigenvalue <= prev)
      fail(ErrorKind::InvalidInput,
           "spectrum eigenvalues must be strictly increasing");
    prev = e.eigenvalue;
  }
  if (s.entries.empty() || s.entries.front().eigenvalue != 0.0)
    fail(ErrorKind::InvalidInput,
         "spectrum must contain eigenvalue 0 (closed link)");
}

}  // namespace

Spectrum make_spectrum(std::vector<double> raw, double cutoff,
                       SpectrumSource source, double group_tol) {
  std::sort(raw.begin(), raw.end());
  Spectrum s;
  s.cutoff = cutoff;
  s.source = source;
  for (double v : raw) {
    if (v > cutoff) continue;
    if (!s.entries.empty()) {
      double ref = s.entries.back().eigenvalue;
      if (v - ref <= group_tol * std::max(1.0, std::abs(ref))) {
        ++s.entries.back().multiplicity;
        continue;
      }
    }
    // snap the tiny numerical zero-cluster exactly to 0
    if (std::abs(v) <= group_tol) v = 0.0;
    s.entries.push_back({v, 1});
  }
  validate_spectrum(s);
  return s;
}

Spectrum make_explicit_spectrum(std::vector<SpectrumEntry> entries,
                                double cutoff) {
  Spectrum s;
  s.entries = std::move(entries);
  s.cutoff = cutoff;
  s.source = SpectrumSource::Explicit;
  validate_spectrum(s);
  return s;
}

namespace {

// C(n, k) in double precision; exact for the ranges used here.
double binom(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  double r = 1.0;
  for (long i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
  return std::round(r);
}

}  // namespace

Spectrum sphere_spectrum(int d, double cutoff) {
  if (d < 2) fail(ErrorKind::InvalidInput, "sphere dimension must be >= 2");
  if (cutoff < 0.0) fail(ErrorKind::InvalidInput, "cutoff must be >= 0");
  Spectrum s;
  s.cutoff = cutoff;
  s.source = SpectrumSource::Sphere;
  for (long k = 0;; ++k) {
    double e = double(k) * double(k + d - 1);
    if (e > cutoff) break;
    int mult = int(binom(d + k, k) - binom(d + k - 2, k - 2));
    s.entries.push_back({e, mult});
  }
  validate_spectrum(s);
  return s;
}

Spectrum torus_spectrum(const Eigen::MatrixXd& basis, double cutoff) {
  const int k = int(basis.rows());
  if (k < 1 || basis.cols() != k)
    fail(ErrorKind::InvalidInput, "torus basis must be square");
  if (cutoff < 0.0) fail(ErrorKind::InvalidInput, "cutoff must be >= 0");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
  if (!lu.isInvertible())
    fail(ErrorKind::InvalidInput, "torus basis is singular");

  // Dual lattice generated by the columns of B^{-T}; |xi|^2 = n^T G* n with
  // G* the dual Gram matrix.  |n|^2 <= R^2 / lambda_min(G*) bounds the sweep.
  Eigen::MatrixXd dual = lu.inverse().transpose();
  Eigen::MatrixXd gram_dual = dual.transpose() * dual;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_dual);
  double lam_min = es.eigenvalues().minCoeff();
  if (lam_min <= 0.0)
    fail(ErrorKind::InvalidInput, "torus basis is numerically singular");

  const double r2 = cutoff / (4.0 * M_PI * M_PI);
  const long box = long(std::floor(std::sqrt(r2 / lam_min))) + 1;

  std::vector<double> raw;
  std::vector<long> n(k, -box);
  for (;;) {
    double q = 0.0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) q += gram_dual(i, j) * double(n[i]) * double(n[j]);
    double e = 4.0 * M_PI * M_PI * q;
    if (e <= cutoff * (1.0 + kAnalyticGroupTol)) raw.push_back(std::min(e, cutoff));
    int i = 0;
    while (i < k && ++n[i] > box) n[i++] = -box;
    if (i == k) break;
  }
  return make_spectrum(std::move(raw), cutoff, SpectrumSource::Torus);
}

Spectrum resolve_link(const LinkDescriptor& desc, int m, double cutoff,
                      const MeshSolveOptions& opts) {
  if (m < 3) fail(ErrorKind::InvalidInput, "m must be >= 3");
  switch (desc.kind) {
    case LinkDescriptor::Kind::RoundSphere:
      if (desc.sphere_dim != m - 1)
        fail(ErrorKind::InvalidInput,
             "sphere link dimension must equal m - 1");
      return sphere_spectrum(desc.sphere_dim, cutoff);
    case LinkDescriptor::Kind::FlatTorus:
      if (desc.torus_basis.rows() != m - 1)
        fail(ErrorKind::InvalidInput, "torus link basis must be (m-1) x (m-1)");
      return torus_spectrum(desc.torus_basis, cutoff);
    case LinkDescriptor::Kind::Explicit: {
      Spectrum s = desc.explicit_spectrum;
      validate_spectrum(s);
      if (s.cutoff > cutoff) {
        // truncate to the requested window
        Spectrum t;
        t.cutoff = cutoff;
        t.source = s.source;
        for (const auto& e : s.entries)
          if (e.eigenvalue <= cutoff) t.entries.push_back(e);
        return t;
      }
      return s;  // complete only up to its own cutoff
    }
    case LinkDescriptor::Kind::Mesh: {
      if (m != 3)
        fail(ErrorKind::InvalidInput, "mesh links are surfaces; requires m = 3");
      TriangleMesh mesh = load_off(desc.mesh_path);
      EigResult r = eigensolve(mesh, cutoff, opts);
      if (r.stats.components != 1)
        fail(ErrorKind::InvalidInput, "mesh link must be connected");
      return r.spectrum;
    }
  }
  fail(ErrorKind::InvalidInput, "unknown link descriptor");
}

}  // namespace conifold
