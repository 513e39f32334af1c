#include "qclbm/resources.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "qclbm/error.hpp"

namespace qclbm::resources {

namespace {

constexpr Count kMax = std::numeric_limits<Count>::max();

Count mul(Count a, Count b) {
  if (a != 0 && b > kMax / a) throw Error(ErrorCode::InvalidArgument, "resource count overflows 128 bits");
  return a * b;
}

Count pow4(std::uint64_t e) {
  if (e >= 64) throw Error(ErrorCode::InvalidArgument, fmt::format("4^{} overflows 128 bits", e));
  return Count{1} << (2 * e);
}

int ceil_log2(std::uint64_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

}  // namespace

ResourceEstimate cnot_bounds(std::uint64_t n_clock, std::uint64_t lattice_sites, std::uint64_t q,
                             std::uint64_t n_steps, std::uint64_t q_tilde) {
  if (n_clock == 0 || lattice_sites == 0 || q == 0 || n_steps == 0 || q_tilde == 0) {
    throw Error(ErrorCode::InvalidArgument, "cnot_bounds: all inputs must be positive");
  }
  ResourceEstimate r;
  r.q_tilde = q_tilde;
  r.n_t_padded = std::bit_ceil(n_steps + 1);
  r.generic_bound = mul(mul(mul(mul(16, n_clock), mul(lattice_sites, lattice_sites)), mul(q, q)),
                        mul(n_steps, n_steps));
  r.local_bound = mul(mul(mul(mul(16, n_clock), lattice_sites), q_tilde),
                      mul(r.n_t_padded, r.n_t_padded));
  r.reinit_bound = pow4(q);
  const Count ql = mul(q, lattice_sites);
  if (ql > std::numeric_limits<std::uint64_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, "cnot_bounds: QL overflows 64 bits");
  }
  r.n_i = 2 + ceil_log2(n_steps + 1) + ceil_log2(static_cast<std::uint64_t>(ql));
  r.register_bound = mul(n_clock, pow4(static_cast<std::uint64_t>(r.n_i)));
  return r;
}

std::string to_string(Count value) {
  if (value == 0) return "0";
  std::string s;
  while (value > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

double hhl_complexity(double kappa, double sparsity, double n, double epsilon) {
  if (!(kappa >= 1.0) || !(sparsity > 0.0) || !(n >= 1.0) || !(epsilon > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "hhl_complexity: invalid arguments");
  }
  return kappa * kappa * sparsity * sparsity * std::log2(n) / epsilon;
}

}  // namespace qclbm::resources
