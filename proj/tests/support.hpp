#pragma once

#include <cstdint>
#include <vector>

#include "lphs/rand_oracle.hpp"

namespace lphs::test {

/// Explicit cyclic string.
struct VecSource {
  std::vector<std::uint64_t> v;
  std::uint64_t at(std::int64_t i) const { return v[static_cast<std::size_t>(wrap_index(i, static_cast<std::int64_t>(v.size())))]; }
};

/// Explicit cyclic grid, row-major.
struct GridSource {
  std::vector<std::vector<std::uint64_t>> g;
  std::uint64_t at(std::int64_t i, std::int64_t j) const {
    const auto n = static_cast<std::int64_t>(g.size());
    return g[static_cast<std::size_t>(wrap_index(i, n))][static_cast<std::size_t>(wrap_index(j, n))];
  }
};

/// Binomial z-score of k successes out of n at probability p.
inline double binomial_z(double k, double n, double p) {
  const double sd = std::sqrt(n * p * (1 - p));
  return (k - n * p) / sd;
}

}  // namespace lphs::test
