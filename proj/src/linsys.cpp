#include "qclbm/linsys.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qclbm/error.hpp"

namespace qclbm::linsys {

namespace {

using Triplet = Eigen::Triplet<double>;

Index next_pow2(Index n) {
  return static_cast<Index>(std::bit_ceil(static_cast<std::uint64_t>(n)));
}

}  // namespace

TimeBlockSystem assemble_tilde_a(const SparseMatrix& c, int n_steps) {
  if (c.rows() != c.cols() || c.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "step operator must be square and non-empty");
  }
  if (n_steps < 1) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("n_steps must be >= 1, got {}", n_steps));
  }
  const Index d = c.rows();
  const Index dim = (n_steps + 1) * d;

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(dim + n_steps * c.nonZeros()));
  for (int k = 0; k <= n_steps; ++k) {
    // Row block k: -C in column block k-1, then the identity.
    if (k > 0) {
      for (Index r = 0; r < d; ++r) {
        for (SparseMatrix::InnerIterator it(c, r); it; ++it) {
          t.emplace_back(k * d + r, (k - 1) * d + it.col(), -it.value());
        }
      }
    }
    for (Index r = 0; r < d; ++r) t.emplace_back(k * d + r, k * d + r, 1.0);
  }

  TimeBlockSystem sys;
  sys.block_dim = d;
  sys.n_steps = n_steps;
  sys.tilde_a.resize(dim, dim);
  sys.tilde_a.setFromTriplets(t.begin(), t.end());
  sys.tilde_a.makeCompressed();
  sys.rhs = Eigen::VectorXd::Zero(dim);
  sys.step_operator = c;
  return sys;
}

Eigen::VectorXd assemble_b(const Eigen::VectorXd& phi0, int n_steps) {
  if (n_steps < 1) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("n_steps must be >= 1, got {}", n_steps));
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero((n_steps + 1) * phi0.size());
  b.head(phi0.size()) = phi0;
  return b;
}

TimeBlockSystem assemble_system(const SparseMatrix& c, const Eigen::VectorXd& phi0, int n_steps) {
  if (phi0.size() != c.rows()) {
    throw Error(ErrorCode::InvalidArgument, "initial state size does not match step operator");
  }
  TimeBlockSystem sys = assemble_tilde_a(c, n_steps);
  sys.rhs = assemble_b(phi0, n_steps);
  return sys;
}

Eigen::VectorXd classical_solve(const TimeBlockSystem& system) {
  const Index d = system.block_dim;
  Eigen::VectorXd x(system.dim());
  x.head(d) = system.rhs.head(d);
  for (int k = 1; k <= system.n_steps; ++k) {
    x.segment(k * d, d) = system.rhs.segment(k * d, d) + system.step_operator * x.segment((k - 1) * d, d);
  }
  return x;
}

HermitianEmbedding hermitize_and_pad(const TimeBlockSystem& system) {
  const Index n = system.dim();
  const Index p = next_pow2(n);

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(2 * (system.tilde_a.nonZeros() + (p - n))));
  for (Index r = 0; r < n; ++r) {
    for (SparseMatrix::InnerIterator it(system.tilde_a, r); it; ++it) {
      t.emplace_back(p + r, it.col(), it.value());  // lower-left: A'
      t.emplace_back(it.col(), p + r, it.value());  // upper-right: A'^T
    }
  }
  for (Index r = n; r < p; ++r) {
    t.emplace_back(p + r, r, 1.0);
    t.emplace_back(r, p + r, 1.0);
  }

  HermitianEmbedding emb;
  emb.a_matrix.resize(2 * p, 2 * p);
  emb.a_matrix.setFromTriplets(t.begin(), t.end());
  emb.a_matrix.makeCompressed();
  emb.rhs = Eigen::VectorXd::Zero(2 * p);
  emb.rhs.segment(p, n) = system.rhs;
  emb.tilde_a = system.tilde_a;
  emb.unpadded_dim = n;
  emb.padded_dim = p;
  emb.n_b = std::countr_zero(static_cast<std::uint64_t>(2 * p));
  emb.block_dim = system.block_dim;
  emb.n_steps = system.n_steps;
  return emb;
}

Eigen::VectorXd embed_solution(const HermitianEmbedding& embedding, const Eigen::VectorXd& x) {
  if (x.size() != embedding.unpadded_dim) {
    throw Error(ErrorCode::InvalidArgument, "solution size does not match embedding");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(embedding.dim());
  out.head(x.size()) = x;
  return out;
}

Eigen::VectorXd solution_part(const HermitianEmbedding& embedding, const Eigen::VectorXd& v) {
  return v.head(embedding.unpadded_dim);
}

void write_triplets(std::ostream& os, const SparseMatrix& m) {
  fmt::print(os, "%%qclbm-sparse v1\n{} {} {}\n", m.rows(), m.cols(), m.nonZeros());
  for (Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      fmt::print(os, "{} {} {}\n", it.row(), it.col(), it.value());
    }
  }
}

SparseMatrix read_triplets(std::istream& is) {
  std::string header;
  std::getline(is, header);
  if (header != "%%qclbm-sparse v1") {
    throw Error(ErrorCode::Io, "not a qclbm sparse triplet file");
  }
  Index rows = 0, cols = 0, nnz = 0;
  if (!(is >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) {
    throw Error(ErrorCode::Io, "malformed sparse triplet header");
  }
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(nnz));
  for (Index k = 0; k < nnz; ++k) {
    Index r = 0, c = 0;
    double v = 0.0;
    if (!(is >> r >> c >> v) || r < 0 || r >= rows || c < 0 || c >= cols) {
      throw Error(ErrorCode::Io, fmt::format("malformed sparse triplet entry {}", k));
    }
    t.emplace_back(r, c, v);
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace qclbm::linsys
