#include <cmath>

#include <Eigen/SVD>

#include "swipt_re/core.hpp"

namespace swipt {
namespace {

// Rotate column k of `v` (and of `u`, if given) so the first entry whose
// magnitude exceeds a small fraction of the column norm is real positive.
void normalize_phases(CMatrix& v, CMatrix* u) {
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    const double norm = v.col(k).norm();
    if (norm == 0.0) continue;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double mag = std::abs(v(i, k));
      if (mag > 1e-8 * norm) {
        const Complex rot = std::conj(v(i, k)) / mag;
        v.col(k) *= rot;
        if (u != nullptr) u->col(k) *= rot;
        v(i, k) = Complex(v(i, k).real(), 0.0);
        break;
      }
    }
  }
}

}  // namespace

bool all_finite(const CMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

double hermitian_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

Svd svd(const CMatrix& a) {
  if (!all_finite(a)) throw Error(ErrorCode::kNonFinite, "svd: matrix has non-finite entries");
  if (a.size() == 0) throw Error(ErrorCode::kInvalidArgument, "svd: empty matrix");

  Eigen::JacobiSVD<CMatrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Svd out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  normalize_phases(out.v, &out.u);
  return out;
}

HermitianEig hermitian_eig(const CMatrix& a) {
  if (!all_finite(a)) throw Error(ErrorCode::kNonFinite, "hermitian_eig: non-finite entries");
  if (a.rows() != a.cols())
    throw Error(ErrorCode::kDimensionMismatch, "hermitian_eig: matrix is not square");

  const CMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  const Eigen::Index n = sym.rows();
  HermitianEig out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  normalize_phases(out.vectors, nullptr);
  return out;
}

}  // namespace swipt
