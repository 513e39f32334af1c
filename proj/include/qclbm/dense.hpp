#pragma once

#include <Eigen/Dense>

// Dense factorizations used by the spectral code.
namespace qclbm::dense {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns; empty when not requested
};

SymmetricEigen symmetric_eigen(Eigen::MatrixXd a, bool want_vectors = true);

struct Svd {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;  // descending
  Eigen::MatrixXd v;
};

/// Square input only. With want_vectors = false, u and v are left empty.
Svd svd(Eigen::MatrixXd a, bool want_vectors = true);

}  // namespace qclbm::dense
