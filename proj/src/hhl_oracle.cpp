#include <cmath>
#include <complex>
#include <numbers>

#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "qclbm/error.hpp"
#include "qclbm/hhl.hpp"

namespace qclbm::hhl {

namespace {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Register layout: index = (ancilla * M + clock) * dim + system.
class Register {
 public:
  Register(Index m, Index dim) : m_(m), dim_(dim), amp_(CVector::Zero(2 * m * dim)) {}

  Complex& at(int anc, Index clock, Index sys) { return amp_((anc * m_ + clock) * dim_ + sys); }
  auto system_slice(int anc, Index clock) { return amp_.segment((anc * m_ + clock) * dim_, dim_); }
  CVector& amplitudes() { return amp_; }

  void hadamard_all_clock() {
    for (Index q = 1; q < m_; q <<= 1) {
      for (int anc = 0; anc < 2; ++anc) {
        for (Index y = 0; y < m_; ++y) {
          if (y & q) continue;
          for (Index s = 0; s < dim_; ++s) {
            const Complex a = at(anc, y, s);
            const Complex b = at(anc, y | q, s);
            at(anc, y, s) = (a + b) * kInvSqrt2;
            at(anc, y | q, s) = (a - b) * kInvSqrt2;
          }
        }
      }
    }
  }

  void controlled_unitaries(const std::vector<CMatrix>& u) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      const Index bit = Index{1} << i;
      for (int anc = 0; anc < 2; ++anc) {
        for (Index y = 0; y < m_; ++y) {
          if (!(y & bit)) continue;
          CVector s = u[i] * system_slice(anc, y);
          system_slice(anc, y) = s;
        }
      }
    }
  }

  // |y> -> sum_k f(k, y) |k> on the clock register.
  void clock_transform(const CMatrix& f) {
    CVector out = CVector::Zero(amp_.size());
    for (int anc = 0; anc < 2; ++anc) {
      for (Index k = 0; k < m_; ++k) {
        for (Index y = 0; y < m_; ++y) {
          const Complex coef = f(k, y);
          out.segment((anc * m_ + k) * dim_, dim_) += coef * system_slice(anc, y);
        }
      }
    }
    amp_ = std::move(out);
  }

  void rotate_ancilla(Index clock, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (Index sys = 0; sys < dim_; ++sys) {
      const Complex a0 = at(0, clock, sys);
      const Complex a1 = at(1, clock, sys);
      at(0, clock, sys) = c * a0 - s * a1;
      at(1, clock, sys) = s * a0 + c * a1;
    }
  }

 private:
  Index m_;
  Index dim_;
  CVector amp_;
};

CMatrix fourier(Index m, double sign) {
  CMatrix f(m, m);
  const double md = static_cast<double>(m);
  for (Index k = 0; k < m; ++k) {
    for (Index y = 0; y < m; ++y) {
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((y * k) % m) / md;
      f(k, y) = std::polar(1.0 / std::sqrt(md), angle);
    }
  }
  return f;
}

}  // namespace

HhlResult brute_force_oracle(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs,
                             const spectra::Spectrum& rotation_spectrum, const HhlConfig& config) {
  if (a.rows() != a.cols() || rhs.size() != a.rows()) {
    throw Error(ErrorCode::InvalidArgument, "brute_force_oracle: A must be square and match rhs");
  }
  if (config.n_clock < 1 || config.n_clock > 20) {
    throw Error(ErrorCode::InvalidArgument, "brute_force_oracle: n_clock out of range");
  }
  const Index m = Index{1} << config.n_clock;
  const Index dim = a.rows();
  if (2 * m * dim > kOracleStateCap) {
    throw Error(ErrorCode::DimensionCap,
                fmt::format("oracle register of {} amplitudes exceeds cap {}", 2 * m * dim, kOracleStateCap));
  }
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) throw Error(ErrorCode::InvalidArgument, "brute_force_oracle: rhs must be nonzero");
  const int minimum = clock_minimum(rotation_spectrum);
  if (config.n_clock < minimum) {
    throw Error(ErrorCode::InsufficientClockQubits,
                fmt::format("insufficient clock qubits: n_clock = {} below minimum {}", config.n_clock,
                            minimum));
  }

  HhlResult r;
  r.lambda_max_used = rotation_spectrum.lambda_max();
  r.rotation_table = build_rotation_table(rotation_spectrum, config.n_clock, config.c_p);
  r.qubit_counts = {config.n_clock, static_cast<int>(std::ceil(std::log2(static_cast<double>(dim)))), 1};

  const auto times = evolution_times(config.n_clock, r.lambda_max_used);
  const CMatrix ac = a.cast<Complex>();
  std::vector<CMatrix> forward;
  std::vector<CMatrix> backward;
  for (const double t : times) {
    forward.push_back((Complex(0.0, t) * ac).exp());
    backward.push_back((Complex(0.0, -t) * ac).exp());
  }

  Register reg(m, dim);
  reg.system_slice(0, 0) = (rhs / bnorm).cast<Complex>();

  // Phase estimation.
  reg.hadamard_all_clock();
  reg.controlled_unitaries(forward);
  reg.clock_transform(fourier(m, -1.0));

  for (const auto& [k, rot] : r.rotation_table) reg.rotate_ancilla(k, rot.theta);

  // Uncompute.
  reg.clock_transform(fourier(m, +1.0));
  reg.controlled_unitaries(backward);
  reg.hadamard_all_clock();

  r.p_ancilla = reg.amplitudes().segment(m * dim, m * dim).squaredNorm();
  const CVector post = reg.system_slice(1, 0);
  r.p_success = post.squaredNorm();
  if (!(r.p_success > 0.0)) {
    throw Error(ErrorCode::PostSelectionImpossible, "post-selection impossible: success probability is 0");
  }

  // Real A and real rhs leave the post-selected amplitudes real.
  if (post.imag().norm() > 1e-8 * post.norm()) {
    throw Error(ErrorCode::NumericalFailure, "brute_force_oracle: post-selected state is not real");
  }
  const Eigen::VectorXd state = post.real();
  r.solution_state = state / state.norm();

  const Eigen::VectorXd exact = a.fullPivLu().solve(rhs);
  r.fidelity_error = fidelity_error(exact / exact.norm(), r.solution_state);
  return r;
}

}  // namespace qclbm::hhl
