#include <doctest.h>

#include <cstdint>

#include "qclbm/error.hpp"
#include "qclbm/resources.hpp"

using namespace qclbm;
using resources::Count;

namespace {

Count generic(std::uint64_t n_c, std::uint64_t l, std::uint64_t q, std::uint64_t n_t) {
  return Count{16} * n_c * l * l * q * q * n_t * n_t;
}

}  // namespace

TEST_CASE("generic bound") {
  const auto e = resources::cnot_bounds(7, 16, 9, 1);
  CHECK(resources::to_string(e.generic_bound) == "2322432");
  CHECK(e.generic_bound == Count{2322432});

  for (std::uint64_t n_c : {1, 5, 8})
    for (std::uint64_t l : {4, 64, 4096})
      for (std::uint64_t n_t : {1, 3, 7, 100})
        CHECK(resources::cnot_bounds(n_c, l, 9, n_t).generic_bound == generic(n_c, l, 9, n_t));

  CHECK(resources::cnot_bounds(7, 16, 9, 6).generic_bound == 4 * resources::cnot_bounds(7, 16, 9, 3).generic_bound);
}

TEST_CASE("local bound") {
  const auto a = resources::cnot_bounds(7, 16, 9, 3);
  const auto b = resources::cnot_bounds(7, 32, 9, 3);
  CHECK(b.local_bound == 2 * a.local_bound);
  CHECK(a.n_t_padded == 4);
  CHECK(a.local_bound == Count{16} * 7 * 16 * 256 * 4 * 4);
  CHECK(resources::cnot_bounds(7, 16, 9, 4).n_t_padded == 8);
  CHECK(resources::cnot_bounds(7, 16, 9, 1, 4).q_tilde == 4);
}

TEST_CASE("reinitialization and register bounds") {
  CHECK(resources::cnot_bounds(7, 16, 9, 1).reinit_bound == Count{262144});

  // With N_t + 1 and QL powers of two, n_c 4^{n_i} = 16 n_c (QL)^2 (N_t + 1)^2.
  const auto e = resources::cnot_bounds(3, 16, 4, 7);
  CHECK(e.n_i == 2 + 3 + 6);
  CHECK(e.register_bound == Count{16} * 3 * 64 * 64 * 8 * 8);
  CHECK(e.register_bound == generic(3, 16, 4, 8));
}

TEST_CASE("monotone in every argument") {
  const auto base = resources::cnot_bounds(5, 16, 9, 3);
  for (const auto& bigger : {resources::cnot_bounds(6, 16, 9, 3), resources::cnot_bounds(5, 17, 9, 3),
                             resources::cnot_bounds(5, 16, 10, 3), resources::cnot_bounds(5, 16, 9, 4)}) {
    CHECK(bigger.generic_bound >= base.generic_bound);
    CHECK(bigger.local_bound >= base.local_bound);
    CHECK(bigger.register_bound >= base.register_bound);
    CHECK(bigger.reinit_bound >= base.reinit_bound);
  }
}

TEST_CASE("invalid and overflowing inputs") {
  CHECK_THROWS_AS(resources::cnot_bounds(0, 16, 9, 1), Error);
  CHECK_THROWS_AS(resources::cnot_bounds(7, 16, 9, 0), Error);
  CHECK_THROWS_AS(resources::cnot_bounds(7, 16, 200, 1), Error);
  CHECK_THROWS_AS(resources::cnot_bounds(7, std::uint64_t{1} << 40, 9, std::uint64_t{1} << 30), Error);
}

TEST_CASE("formatting and complexity") {
  CHECK(resources::to_string(Count{0}) == "0");
  CHECK(resources::to_string(Count{1} << 100) == "1267650600228229401496703205376");
  CHECK(resources::hhl_complexity(10.0, 2.0, 1024.0, 0.01) == doctest::Approx(100.0 * 4.0 * 10.0 / 0.01));
}
