#pragma once

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "qclbm/spectra.hpp"

namespace qclbm::hhl {

using Eigen::Index;

enum class SpectrumSource { Exact, Substituted };

struct HhlConfig {
  int n_clock = 7;
  double c_p = 1.0;
  SpectrumSource spectrum_source = SpectrumSource::Exact;
};

struct Rotation {
  int lambda_bar = 0;
  double theta = 0.0;
};

/// Clock index k -> rotation; absent k leaves the ancilla untouched.
using RotationTable = std::map<int, Rotation>;

struct BinaryEigenvalue {
  int lambda_bar = 0;
  int clock_index = 0;
};

struct QubitCounts {
  int clock = 0;
  int system = 0;
  int ancilla = 1;
};

struct HhlResult {
  Eigen::VectorXd solution_state;
  double fidelity_error = 0.0;
  double p_ancilla = 0.0;
  double p_success = 0.0;
  double lambda_max_used = 0.0;
  RotationTable rotation_table;
  QubitCounts qubit_counts;
};

/// max(1, ceil(log2(ceil(lambda_max / lambda_min)))).
int clock_minimum(double lambda_max, double lambda_min);
int clock_minimum(const spectra::Spectrum& spectrum);

/// t_i = 2^i * 2 pi / (4 lambda_max) for i = 0 .. n_clock-1.
std::vector<double> evolution_times(int n_clock, double lambda_max);

BinaryEigenvalue binary_eigenvalue(double lambda, double lambda_max, int n_clock);
double rotation_angle(int lambda_bar, double c_p);
RotationTable build_rotation_table(const spectra::Spectrum& spectrum, int n_clock, double c_p);

/// (lambda / (4 lambda_max)) mod 1.
double phase(double lambda, double lambda_max);

/// alpha_{k|j} for k = 0 .. 2^n_clock - 1, closed form.
std::vector<std::complex<double>> qpe_kernel(double phi, int n_clock);
/// |alpha_{k|j}|^2 for a single k.
double qpe_weight(double phi, int k, int n_clock);

double fidelity_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Fidelity error of each length-block_dim block after normalizing both sides.
std::vector<double> block_fidelity_errors(const Eigen::VectorXd& state, const Eigen::VectorXd& exact,
                                          Index block_dim);

/// Analytic eigenbasis emulation. The rotation spectrum supplies lambda_max
/// and the rotation table; the basis supplies the eigenpairs of A. The fidelity
/// is measured against `reference` when given, otherwise against A^{-1} rhs.
HhlResult run_hhl(const spectra::Eigenbasis& basis, const Eigen::VectorXd& rhs,
                  const spectra::Spectrum& rotation_spectrum, const HhlConfig& config,
                  const Eigen::VectorXd* reference = nullptr);

inline constexpr Index kOracleStateCap = Index{1} << 20;

/// Explicit register emulation: Hadamards, controlled exp(i t_i A), inverse
/// QFT, per-clock rotations, inverse QPE, post-selection.
HhlResult brute_force_oracle(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs,
                             const spectra::Spectrum& rotation_spectrum, const HhlConfig& config);

}  // namespace qclbm::hhl
