#include "lphs/rand_oracle.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

namespace lphs {

std::string to_string(Mode m) { return m == Mode::cyclic ? "cyclic" : "noncyclic"; }

int default_symbol_bits(std::uint64_t n) {
  const int lg = n <= 1 ? 1 : static_cast<int>(std::bit_width(n - 1));
  return std::min(64, 3 * lg);
}

namespace {

void check_shape(std::int64_t n, int b, std::int64_t max_n, const char* who) {
  if (n < 1 || n > max_n) throw std::domain_error(std::string(who) + ": length out of range");
  if (b < 1 || b > 64) throw std::domain_error(std::string(who) + ": symbol width must be in [1, 64]");
}

std::int64_t pow2_mask(std::int64_t n) {
  return std::has_single_bit(static_cast<std::uint64_t>(n)) ? n - 1 : 0;
}

}  // namespace

SymbolOracle::SymbolOracle(Seed seed, std::int64_t n, int b, Mode mode)
    : seed_(seed), hash_(seed), n_(n), b_(b), mode_(mode) {
  check_shape(n, b, std::int64_t{1} << 40, "SymbolOracle");
  mask_ = pow2_mask(n);
}

SymbolOracle2D::SymbolOracle2D(Seed seed, std::int64_t n, int b, Mode mode)
    : seed_(seed), hash_(seed), n_(n), b_(b), mode_(mode) {
  check_shape(n, b, std::int64_t{1} << 32, "SymbolOracle2D");
  mask_ = pow2_mask(n);
}

StepFunction::StepFunction(Seed seed, std::int64_t lo, std::int64_t hi) : hash_(seed), lo_(lo) {
  if (lo > hi) throw std::domain_error("StepFunction: empty range");
  span_ = static_cast<std::uint64_t>(hi - lo) + 1;
}

std::int64_t step_fn(const Seed& seed, std::int64_t range_lo, std::int64_t range_hi, std::uint64_t symbol) {
  return StepFunction(seed, range_lo, range_hi)(symbol);
}

std::vector<std::int64_t> random_subset(const Seed& seed, std::int64_t universe, std::int64_t size) {
  if (size < 0 || size > universe) throw std::domain_error("random_subset: size exceeds universe");
  HashRng rng(seed);
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(size));
  if (size * 2 > universe) {
    // dense: partial Fisher-Yates
    std::vector<std::int64_t> all(static_cast<std::size_t>(universe));
    for (std::int64_t i = 0; i < universe; ++i) all[i] = i;
    for (std::int64_t i = 0; i < size; ++i) {
      const auto k = i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(universe - i)));
      std::swap(all[i], all[k]);
    }
    out.assign(all.begin(), all.begin() + size);
  } else {
    // Floyd's algorithm
    std::unordered_set<std::int64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(size) * 2);
    for (std::int64_t j = universe - size; j < universe; ++j) {
      const auto t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j) + 1));
      const auto pick = chosen.contains(t) ? j : t;
      chosen.insert(pick);
      out.push_back(pick);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lphs
