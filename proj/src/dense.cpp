#include "qclbm/dense.hpp"

#include <fmt/format.h>

#include "qclbm/error.hpp"

namespace qclbm::dense {

SymmetricEigen symmetric_eigen(Eigen::MatrixXd a, bool want_vectors) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::InvalidArgument, "symmetric_eigen: matrix must be square");
  }
  SymmetricEigen out;
  if (a.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, want_vectors ? Eigen::ComputeEigenvectors
                                                                    : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "symmetric eigensolver did not converge");
  }
  out.values = es.eigenvalues();
  if (want_vectors) out.vectors = es.eigenvectors();
  return out;
}

Svd svd(Eigen::MatrixXd a, bool want_vectors) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::InvalidArgument, "svd: matrix must be square");
  }
  Svd out;
  if (a.rows() == 0) return out;
  const unsigned opts = want_vectors ? (Eigen::ComputeFullU | Eigen::ComputeFullV) : 0u;
  Eigen::BDCSVD<Eigen::MatrixXd> s(a, opts);
  if (s.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, fmt::format("SVD of a {0}x{0} matrix failed", a.rows()));
  }
  out.sigma = s.singularValues();
  if (want_vectors) {
    out.u = s.matrixU();
    out.v = s.matrixV();
  }
  return out;
}

}  // namespace qclbm::dense
