#include "qclbm/hhl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "qclbm/error.hpp"

namespace qclbm::hhl {

namespace {

void check_clock(int n_clock) {
  if (n_clock < 1 || n_clock > 24) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("n_clock must be in [1, 24], got {}", n_clock));
  }
}

}  // namespace

int clock_minimum(double lambda_max, double lambda_min) {
  if (!(lambda_min > 0.0) || !(lambda_max >= lambda_min)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("clock_minimum needs 0 < lambda_min <= lambda_max, got {} and {}",
                            lambda_min, lambda_max));
  }
  const double ratio = std::ceil(lambda_max / lambda_min);
  return std::max(1, static_cast<int>(std::ceil(std::log2(ratio))));
}

int clock_minimum(const spectra::Spectrum& spectrum) {
  return clock_minimum(spectrum.lambda_max(), spectrum.lambda_min());
}

std::vector<double> evolution_times(int n_clock, double lambda_max) {
  check_clock(n_clock);
  if (!(lambda_max > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "evolution_times: lambda_max must be > 0");
  }
  std::vector<double> t(static_cast<std::size_t>(n_clock));
  const double t0 = 2.0 * std::numbers::pi / (4.0 * lambda_max);
  for (int i = 0; i < n_clock; ++i) t[static_cast<std::size_t>(i)] = std::ldexp(t0, i);
  return t;
}

BinaryEigenvalue binary_eigenvalue(double lambda, double lambda_max, int n_clock) {
  check_clock(n_clock);
  if (!(lambda_max > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "binary_eigenvalue: lambda_max must be > 0");
  }
  const int m = 1 << n_clock;
  const long bar = std::lround(static_cast<double>(m) * lambda / (4.0 * lambda_max));
  if (bar == 0) {
    throw Error(ErrorCode::InsufficientClockResolution,
                fmt::format("insufficient clock resolution: lambda = {} rounds to 0 with {} clock qubits",
                            lambda, n_clock));
  }
  const int k = static_cast<int>(((bar % m) + m) % m);
  return {static_cast<int>(bar), k};
}

double rotation_angle(int lambda_bar, double c_p) {
  if (lambda_bar == 0) {
    throw Error(ErrorCode::InsufficientClockResolution, "rotation_angle: lambda_bar is 0");
  }
  const double r = c_p / static_cast<double>(lambda_bar);
  if (std::abs(r) > 1.0) {
    throw Error(ErrorCode::RotationUndefined,
                fmt::format("rotation undefined: |c_p / lambda_bar| = |{} / {}| > 1", c_p, lambda_bar));
  }
  return std::asin(r);
}

RotationTable build_rotation_table(const spectra::Spectrum& spectrum, int n_clock, double c_p) {
  if (!(c_p > 0.0)) throw Error(ErrorCode::InvalidArgument, "c_p must be > 0");
  RotationTable table;
  for (const double lambda : spectrum.eigenvalues()) {
    const auto b = binary_eigenvalue(lambda, spectrum.lambda_max(), n_clock);
    if (table.contains(b.clock_index)) continue;
    table.emplace(b.clock_index, Rotation{b.lambda_bar, rotation_angle(b.lambda_bar, c_p)});
  }
  return table;
}

namespace {

// sin(M pi d) / (M sin(pi d)), exact at the zeros and the peak when M d is
// an integer up to rounding.
double dirichlet(double delta, double md) {
  const double x = md * delta;
  const double nearest = std::round(x);
  if (std::abs(x - nearest) < 1e-10) {
    if (std::fmod(nearest, md) != 0.0) return 0.0;
    const auto q = static_cast<long long>(nearest / md);
    return (q * (static_cast<long long>(md) - 1)) % 2 == 0 ? 1.0 : -1.0;
  }
  return std::sin(std::numbers::pi * x) / (md * std::sin(std::numbers::pi * delta));
}

}  // namespace

double phase(double lambda, double lambda_max) {
  const double p = lambda / (4.0 * lambda_max);
  const double r = p - std::floor(p);
  return r >= 1.0 ? 0.0 : r;
}

std::vector<std::complex<double>> qpe_kernel(double phi, int n_clock) {
  check_clock(n_clock);
  const int m = 1 << n_clock;
  const double md = static_cast<double>(m);
  std::vector<std::complex<double>> alpha(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double delta = phi - static_cast<double>(k) / md;
    alpha[static_cast<std::size_t>(k)] =
        std::polar(dirichlet(delta, md), std::numbers::pi * (md - 1.0) * delta);
  }
  return alpha;
}

double qpe_weight(double phi, int k, int n_clock) {
  const double md = static_cast<double>(1 << n_clock);
  const double r = dirichlet(phi - static_cast<double>(k) / md, md);
  return r * r;
}

double fidelity_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "fidelity_error: size mismatch");
  const double o = a.dot(b);
  return std::clamp(1.0 - o * o, 0.0, 1.0);
}

std::vector<double> block_fidelity_errors(const Eigen::VectorXd& state, const Eigen::VectorXd& exact,
                                          Index block_dim) {
  if (block_dim <= 0 || exact.size() % block_dim != 0 || state.size() < exact.size()) {
    throw Error(ErrorCode::InvalidArgument, "block_fidelity_errors: incompatible sizes");
  }
  std::vector<double> out;
  for (Index k = 0; k < exact.size() / block_dim; ++k) {
    const Eigen::VectorXd s = state.segment(k * block_dim, block_dim);
    const Eigen::VectorXd e = exact.segment(k * block_dim, block_dim);
    const double ns = s.norm();
    const double ne = e.norm();
    out.push_back(ns == 0.0 || ne == 0.0 ? 1.0 : fidelity_error(s / ns, e / ne));
  }
  return out;
}

HhlResult run_hhl(const spectra::Eigenbasis& basis, const Eigen::VectorXd& rhs,
                  const spectra::Spectrum& rotation_spectrum, const HhlConfig& config,
                  const Eigen::VectorXd* reference) {
  check_clock(config.n_clock);
  if (rhs.size() != basis.dim()) throw Error(ErrorCode::InvalidArgument, "run_hhl: rhs size mismatch");
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) throw Error(ErrorCode::InvalidArgument, "run_hhl: rhs must be nonzero");
  const int minimum = clock_minimum(rotation_spectrum);
  if (config.n_clock < minimum) {
    throw Error(ErrorCode::InsufficientClockQubits,
                fmt::format("insufficient clock qubits: n_clock = {} below minimum {}", config.n_clock,
                            minimum));
  }

  HhlResult r;
  r.lambda_max_used = rotation_spectrum.lambda_max();
  r.rotation_table = build_rotation_table(rotation_spectrum, config.n_clock, config.c_p);
  r.qubit_counts = {config.n_clock, static_cast<int>(std::ceil(std::log2(static_cast<double>(basis.dim())))), 1};

  const Eigen::VectorXd beta = basis.project(rhs / bnorm);
  const Eigen::VectorXd& lambdas = basis.eigenvalues();
  Eigen::VectorXd c(basis.dim());
  double p_anc = 0.0;
  for (Index j = 0; j < basis.dim(); ++j) {
    const double phi = phase(lambdas(j), r.lambda_max_used);
    double s1 = 0.0;
    double s2 = 0.0;
    for (const auto& [k, rot] : r.rotation_table) {
      const double w = qpe_weight(phi, k, config.n_clock);
      const double s = std::sin(rot.theta);
      s1 += w * s;
      s2 += w * s * s;
    }
    c(j) = beta(j) * s1;
    p_anc += beta(j) * beta(j) * s2;
  }
  r.p_success = c.squaredNorm();
  r.p_ancilla = p_anc;
  if (!(r.p_success > 0.0)) {
    throw Error(ErrorCode::PostSelectionImpossible, "post-selection impossible: success probability is 0");
  }
  r.solution_state = basis.synthesize(c);
  r.solution_state /= r.solution_state.norm();

  Eigen::VectorXd exact;
  if (reference != nullptr) {
    if (reference->size() != basis.dim()) {
      throw Error(ErrorCode::InvalidArgument, "run_hhl: reference size mismatch");
    }
    exact = *reference;
  } else {
    exact = basis.synthesize(basis.project(rhs).cwiseQuotient(lambdas));
  }
  r.fidelity_error = fidelity_error(exact / exact.norm(), r.solution_state);
  return r;
}

}  // namespace qclbm::hhl
