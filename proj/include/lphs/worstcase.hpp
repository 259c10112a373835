#pragma once

// Worst-case inputs: explicit bit strings, goodness checks, test corpora and
// the random-subset tiling that turns a good input into an effectively
// uniform symbol string for an average-case hash.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "lphs/lphs1d.hpp"
#include "lphs/rand_oracle.hpp"

namespace lphs {

/// Explicit bit string packed 64 bits per word, bit i at word i/64, position i%64.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::int64_t n) : n_(n), words_(static_cast<std::size_t>((n + 63) / 64), 0) {
    if (n < 0) throw std::domain_error("BitString: negative length");
  }

  std::int64_t size() const noexcept { return n_; }
  bool get(std::int64_t i) const noexcept {
    return (words_[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1U;
  }
  void set(std::int64_t i, bool v) noexcept {
    auto& w = words_[static_cast<std::size_t>(i >> 6)];
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    w = v ? (w | m) : (w & ~m);
  }
  /// Cyclic symbol access, so a BitString is a Source1D over bits.
  std::uint64_t at(std::int64_t i) const { return get(wrap_index(i, n_)) ? 1 : 0; }
  /// Bits x[i .. i+k) (cyclic), bit t of the result is x[i+t]; k <= 64.
  std::uint64_t window_bits(std::int64_t i, int k) const;
  std::int64_t popcount() const noexcept;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  /// Raw binary file: bytes in little-endian bit order, length = 8 * file size.
  static BitString read_file(const std::filesystem::path& p);
  void write_file(const std::filesystem::path& p) const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::int64_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct GoodnessReport {
  bool is_good = false;
  std::int64_t worst_i = 0;   // offending shift, or first window start
  std::int64_t worst_i2 = 0;  // second window start (windowed check only)
  double min_relative_distance = 0.0;
};

/// Hamming distances Delta(x << i, x) for every i in [0, n), by bit-parallel XOR.
std::vector<std::int64_t> cyclic_shift_distances(const BitString& x);
/// Same quantity from the +-1 autocorrelation via a real FFT: Delta(i) = (n - C(i)) / 2.
std::vector<std::int64_t> cyclic_shift_distances_fft(const BitString& x);

/// Minimum over shifts i in [1, n) of Delta(x << i, x) / n. Exhaustive up to 2^16, FFT above.
GoodnessReport check_goodness_cyclic(const BitString& x, double alpha);

/// Windows x[i .. i+W) truncated at n; all pairs i < i' <= n - ceil(W/2) compared on the
/// length of the later window.
GoodnessReport check_goodness_windowed(const BitString& x, double alpha, std::int64_t W);
/// Direct O(n^2 W) evaluation of the same definition, for testing.
GoodnessReport check_goodness_windowed_naive(const BitString& x, double alpha, std::int64_t W);

// Corpora. All are deterministic in the seed.
BitString uniform_bits(const Seed& seed, std::int64_t n);
/// i.i.d. bits with Pr[1] = beta.
BitString biased_bits(const Seed& seed, std::int64_t n, double beta);
/// Maximal-length sequence of the Fibonacci LFSR with the given tap mask, started from a non-zero state.
BitString lfsr_bits(int degree, std::uint64_t taps, std::int64_t n, std::uint64_t state = 1);
/// Primitive tap masks for a few degrees (bit k-1 set for feedback term x^k).
std::uint64_t lfsr_primitive_taps(int degree);
/// Two-state chain that repeats the previous bit with probability stay.
BitString markov_bits(const Seed& seed, std::int64_t n, double stay);

/// Non-cyclic shift z <<< r: drop the first r bits, append r fresh uniform bits.
BitString noncyclic_shift(const BitString& z, std::int64_t r, const Seed& fresh);
BitString cyclic_shift(const BitString& z, std::int64_t r);

/// b_tile = ceil(lg n)^2.
std::int64_t default_tile_bits(std::int64_t n);
/// 4 * ceil(lg n)^2.
std::int64_t default_tile_window(std::int64_t n);

struct TilingKey {
  std::vector<std::int64_t> S;  // sorted offsets
  Seed gamma_seed;

  /// S is a uniform b_tile-subset of [universe): [n] for cyclic strings, [W] for non-cyclic.
  static TilingKey sample(const Seed& seed, std::int64_t universe, std::int64_t b_tile);
  std::int64_t b_tile() const noexcept { return static_cast<std::int64_t>(S.size()); }
};

/// y_i = gamma(x_{i+S}) truncated to gamma_bits. Cyclic wraps indices mod n; non-cyclic requires
/// every read i + s to lie inside x.
class TiledView {
 public:
  TiledView(const BitString& x, const TilingKey& key, int gamma_bits, Mode mode);

  std::uint64_t at(std::int64_t i) const { return truncate_bits(gamma(tile(i)), gamma_bits_); }

  /// Packed tile bits x_{i+S}, two words (up to 128 offsets).
  struct Tile {
    std::uint64_t lo = 0, hi = 0;
    friend auto operator<=>(const Tile&, const Tile&) = default;
  };
  Tile tile(std::int64_t i) const;
  std::uint64_t gamma(const Tile& t) const noexcept { return gamma_(gamma_(t.lo) ^ t.hi); }

 private:
  const BitString* x_;
  const TilingKey* key_;
  KeyedHash gamma_;
  int gamma_bits_;
  Mode mode_;
};

/// Any inner 1D hash over symbols, run on the tiled view. Query count is b_tile times the inner count.
template <class Inner>
HashOutcome1D worstcase_cyclic(const BitString& x, const TilingKey& key, int gamma_bits, const Inner& inner) {
  if (key.b_tile() > 128) throw std::domain_error("worstcase_cyclic: b_tile above 128");
  const TiledView y(x, key, gamma_bits, Mode::cyclic);
  auto out = inner(y);
  out.queries *= static_cast<std::uint64_t>(key.b_tile());
  return out;
}

/// x has length n + W and the key's offsets lie in [W); the inner hash sees n tiled symbols.
template <class Inner>
HashOutcome1D worstcase_noncyclic(const BitString& x, const TilingKey& key, int gamma_bits, const Inner& inner) {
  if (key.b_tile() > 128) throw std::domain_error("worstcase_noncyclic: b_tile above 128");
  const TiledView y(x, key, gamma_bits, Mode::noncyclic);
  auto out = inner(y);
  out.queries *= static_cast<std::uint64_t>(key.b_tile());
  return out;
}

/// Number of pairs of equal tiles among all n cyclic tiles of x (sorted-duplicates count).
std::int64_t count_tile_collisions(const BitString& x, const TilingKey& key);

}  // namespace lphs
