#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <random>

#include "conifold/mesh.hpp"

namespace conifold {

namespace {

// Sylvester inertia: the number of generalized eigenvalues of (K, M) below
// `bound` equals the number of negative pivots of K - bound*M.  The shift is
// nudged if the unpivoted factorization stalls on a near-singular minor.
int count_below(const Eigen::SparseMatrix<double>& K, const Eigen::VectorXd& M,
                double bound) {
  Eigen::SparseMatrix<double> shifted = K;
  for (int i = 0; i < M.size(); ++i) shifted.coeffRef(i, i) -= bound * M[i];
  shifted.makeCompressed();
  double nudge = bound;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
    if (ldlt.info() == Eigen::Success) {
      Eigen::VectorXd d = ldlt.vectorD();
      bool ok = d.allFinite();
      double dmax = d.cwiseAbs().maxCoeff();
      int neg = 0;
      for (int i = 0; i < d.size(); ++i) {
        if (std::abs(d[i]) < 1e-12 * dmax) ok = false;
        if (d[i] < 0.0) ++neg;
      }
      if (ok) return neg;
    }
    nudge *= (1.0 + 1e-7);
    shifted = K;
    for (int i = 0; i < M.size(); ++i) shifted.coeffRef(i, i) -= nudge * M[i];
    shifted.makeCompressed();
  }
  fail(ErrorKind::Convergence, "inertia count failed near the cutoff shift");
}

// Deterministic uniform in (-1, 1) from raw mt19937_64 output.
double unit_uniform(std::mt19937_64& rng) {
  return 2.0 * (double(rng() >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace

EigResult eigensolve(const TriangleMesh& mesh, double cutoff,
                     const MeshSolveOptions& opts) {
  if (cutoff < 0.0) fail(ErrorKind::InvalidInput, "cutoff must be >= 0");
  EigResult result;
  result.stats = validate_mesh(mesh);

  FemOperators ops = assemble(mesh);
  if (ops.min_angle_deg < opts.min_angle_deg) {
    if (opts.strict_quality)
      fail(ErrorKind::InvalidInput,
           "mesh quality below floor: min angle " +
               std::to_string(ops.min_angle_deg) + " deg");
  }

  const int n = int(ops.mass.size());
  const double bound = cutoff * (1.0 + opts.margin);
  const int want = count_below(ops.stiffness, ops.mass, bound);
  if (want <= 0)
    fail(ErrorKind::InternalInconsistency,
         "no eigenvalues below the cutoff; closed mesh must have 0");

  // Shift-invert: W = (A - sigma I)^{-1} for A = M^{-1/2} K M^{-1/2}.
  const double sigma = -0.01 * std::max(bound, 1.0);
  Eigen::SparseMatrix<double> B = ops.stiffness;
  for (int i = 0; i < n; ++i) B.coeffRef(i, i) -= sigma * ops.mass[i];
  B.makeCompressed();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(B);
  if (solver.info() != Eigen::Success)
    fail(ErrorKind::Convergence, "factorization of the shifted pencil failed");
  const Eigen::VectorXd sqrt_m = ops.mass.cwiseSqrt();
  auto apply_w = [&](const Eigen::MatrixXd& X) -> Eigen::MatrixXd {
    Eigen::MatrixXd Y = sqrt_m.asDiagonal() * X;
    Y = solver.solve(Y);
    return sqrt_m.asDiagonal() * Y;
  };

  const long budget =
      10L * long(want) * long(std::ceil(std::sqrt(double(n))));
  const int nb = std::min(n, want + 2);

  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  Eigen::MatrixXd block(n, nb);
  for (int j = 0; j < nb; ++j)
    for (int i = 0; i < n; ++i) block(i, j) = unit_uniform(rng);
  {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(block);
    block = qr.householderQ() * Eigen::MatrixXd::Identity(n, nb);
  }

  Eigen::MatrixXd V(n, 0), WV(n, 0);
  std::vector<double> eigs, residuals;

  while (true) {
    if (result.matvec_count + nb > budget)
      fail(ErrorKind::Convergence,
           "eigensolver budget exhausted: " + std::to_string(budget) +
               " operator applications for " + std::to_string(want) +
               " eigenvalues");
    Eigen::MatrixXd Wb = apply_w(block);
    result.matvec_count += int(block.cols());

    const int k0 = int(V.cols()), kb = int(block.cols());
    V.conservativeResize(n, k0 + kb);
    V.rightCols(kb) = block;
    WV.conservativeResize(n, k0 + kb);
    WV.rightCols(kb) = Wb;

    Eigen::MatrixXd H = V.transpose() * WV;
    H = 0.5 * (H + H.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    // W's largest eigenvalues correspond to the pencil's smallest
    const Eigen::VectorXd& theta = es.eigenvalues();
    const Eigen::MatrixXd ritz = V * es.eigenvectors();

    eigs.clear();
    residuals.clear();
    bool all_converged = true;
    int found = 0;
    for (int j = int(theta.size()) - 1; j >= 0 && found < want; --j) {
      if (theta[j] <= 0.0) break;  // beyond the shift: not a target
      double lam = sigma + 1.0 / theta[j];
      if (lam > bound) continue;
      Eigen::VectorXd x_hat = ritz.col(j).cwiseQuotient(sqrt_m);
      double xm = std::sqrt(x_hat.cwiseAbs2().dot(ops.mass));
      double res = (ops.stiffness * x_hat - lam * ops.mass.cwiseProduct(x_hat))
                       .norm() /
                   xm;
      eigs.push_back(lam);
      residuals.push_back(res);
      if (res > opts.tol) all_converged = false;
      ++found;
    }
    if (found >= want && all_converged) break;
    if (int(V.cols()) >= n) {
      if (found >= want) break;  // exact subspace: nothing more exists
      fail(ErrorKind::InternalInconsistency,
           "full subspace disagrees with the inertia count");
    }

    // next block: W-images of the last block, orthogonalized against V
    Eigen::MatrixXd next = Wb;
    for (int pass = 0; pass < 2; ++pass) next -= V * (V.transpose() * next);
    const int room = n - int(V.cols());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(next);
    Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(n, int(next.cols()));
    Eigen::MatrixXd r = qr.matrixQR()
                            .topRows(next.cols())
                            .triangularView<Eigen::Upper>();
    // replace blocks that collapsed under orthogonalization
    int kept = 0;
    Eigen::MatrixXd fresh(n, std::min(int(next.cols()), room));
    for (int j = 0; j < fresh.cols(); ++j) {
      if (std::abs(r(j, j)) > 1e-12) {
        fresh.col(kept++) = q.col(j);
      } else {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = unit_uniform(rng);
        for (int pass = 0; pass < 2; ++pass) {
          v -= V * (V.transpose() * v);
          if (kept > 0)
            v -= fresh.leftCols(kept) * (fresh.leftCols(kept).transpose() * v);
        }
        double nrm = v.norm();
        if (nrm > 1e-10) fresh.col(kept++) = v / nrm;
      }
    }
    block = fresh.leftCols(kept);
    if (block.cols() == 0)
      fail(ErrorKind::Convergence, "subspace expansion stalled");
  }

  std::sort(eigs.begin(), eigs.end());
  if (!eigs.empty() && eigs.front() < -10.0 * opts.tol)
    fail(ErrorKind::InternalInconsistency,
         "negative eigenvalue from a positive semidefinite pencil");

  // cluster nearly-degenerate values, then truncate at the nominal cutoff
  std::vector<double> cluster_means;
  std::vector<int> cluster_sizes;
  for (double lam : eigs) {
    if (!cluster_means.empty()) {
      double mean = cluster_means.back();
      if (lam - mean <= cluster_gap(lam, opts.tol)) {
        int& sz = cluster_sizes.back();
        cluster_means.back() = (mean * sz + lam) / (sz + 1);
        ++sz;
        continue;
      }
    }
    cluster_means.push_back(lam);
    cluster_sizes.push_back(1);
  }

  Spectrum spec;
  spec.cutoff = cutoff;
  spec.source = SpectrumSource::Mesh;
  for (size_t i = 0; i < cluster_means.size(); ++i) {
    double v = cluster_means[i];
    if (std::abs(v) <= 10.0 * opts.tol) v = 0.0;  // exact kernel
    if (v > cutoff) continue;
    spec.entries.push_back({v, cluster_sizes[i]});
  }
  if (spec.entries.empty() || spec.entries.front().eigenvalue != 0.0 ||
      spec.entries.front().multiplicity != result.stats.components)
    fail(ErrorKind::InternalInconsistency,
         "kernel multiplicity does not match the component count");

  result.spectrum = std::move(spec);
  result.eigenvalues = std::move(eigs);
  result.residuals = std::move(residuals);
  return result;
}

}  // namespace conifold
