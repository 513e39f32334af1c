#pragma once

#include <iosfwd>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qclbm/carleman.hpp"

namespace qclbm::linsys {

using SparseMatrix = carleman::SparseMatrix;
using Eigen::Index;

/// Multi-step system  A~ x = b  with identity diagonal blocks and -C on the
/// first block subdiagonal; x stacks phi(t0), ..., phi(t0 + N_t).
struct TimeBlockSystem {
  Index block_dim = 0;
  int n_steps = 0;
  SparseMatrix tilde_a;
  Eigen::VectorXd rhs;
  SparseMatrix step_operator;  // C

  Index dim() const { return (n_steps + 1) * block_dim; }
};

TimeBlockSystem assemble_tilde_a(const SparseMatrix& c, int n_steps);
Eigen::VectorXd assemble_b(const Eigen::VectorXd& phi0, int n_steps);
TimeBlockSystem assemble_system(const SparseMatrix& c, const Eigen::VectorXd& phi0, int n_steps);

/// Forward substitution: block k of x is C^k phi0.
Eigen::VectorXd classical_solve(const TimeBlockSystem& system);

/// A = [[0, A'^T], [A', 0]] with A' = diag(A~, I) padded to a power of two,
/// so dim(A) = 2^n_b and every eigenvalue comes in a +- pair.
struct HermitianEmbedding {
  SparseMatrix a_matrix;
  Eigen::VectorXd rhs;  // (0, b, 0)
  SparseMatrix tilde_a;  // unpadded A~
  Index unpadded_dim = 0;  // dim(A~)
  Index padded_dim = 0;    // dim(A')
  int n_b = 0;
  Index block_dim = 0;
  int n_steps = 0;

  Index dim() const { return 2 * padded_dim; }
};

HermitianEmbedding hermitize_and_pad(const TimeBlockSystem& system);

/// (x, 0) in embedded coordinates.
Eigen::VectorXd embed_solution(const HermitianEmbedding& embedding, const Eigen::VectorXd& x);

/// Solution part of an embedded vector, i.e. the first dim(A~) entries.
Eigen::VectorXd solution_part(const HermitianEmbedding& embedding, const Eigen::VectorXd& v);

/// Sparse triplet text format:
///   %%qclbm-sparse v1
///   <rows> <cols> <nnz>
///   <row> <col> <value>     (0-based, one line per stored entry)
void write_triplets(std::ostream& os, const SparseMatrix& m);
SparseMatrix read_triplets(std::istream& is);

}  // namespace qclbm::linsys
