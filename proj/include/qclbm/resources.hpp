#pragma once

#include <cstdint>
#include <string>

namespace qclbm::resources {

using Count = unsigned __int128;

inline constexpr std::uint64_t kDefaultQTilde = 256;  // 4^4

struct ResourceEstimate {
  Count generic_bound = 0;   // 16 n_c L^2 Q^2 N_t^2
  Count local_bound = 0;     // 16 n_c L Q~ N~_t^2
  Count reinit_bound = 0;    // 4^Q
  Count register_bound = 0;  // n_c 4^{n_i}, n_i = 2 + ceil log2(N_t+1) + ceil log2(QL)
  std::uint64_t q_tilde = kDefaultQTilde;
  std::uint64_t n_t_padded = 0;  // N~_t = 2^ceil(log2(N_t+1))
  int n_i = 0;
};

/// CNOT upper bounds. All inputs must be positive; throws on overflow.
ResourceEstimate cnot_bounds(std::uint64_t n_clock, std::uint64_t lattice_sites, std::uint64_t q,
                             std::uint64_t n_steps, std::uint64_t q_tilde = kDefaultQTilde);

/// Decimal rendering of a 128-bit count.
std::string to_string(Count value);

/// O(kappa^2 s^2 log(n) / eps) reporting value for the HHL runtime.
double hhl_complexity(double kappa, double sparsity, double n, double epsilon);

}  // namespace qclbm::resources
