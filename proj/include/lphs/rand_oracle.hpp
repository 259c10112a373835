#pragma once

// Deterministic keyed randomness shared by the two parties of an evaluation:
// lazily materialized symbol strings, step functions, relabelings and random
// subsets. Every object here is immutable after construction.

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lphs {

inline constexpr std::uint64_t fmix64(std::uint64_t k) noexcept {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

/// High 64 bits of a 64x64 product; maps a uniform word onto [0, range).
inline constexpr std::uint64_t mulhi64(std::uint64_t a, std::uint64_t b) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) >> 64);
}

/// 128-bit master key plus a 64-bit stream label. Distinct stream labels name
/// independent random functions under the same key.
struct Seed {
  std::uint64_t key_hi = 0;
  std::uint64_t key_lo = 0;
  std::uint64_t stream = 0;

  static Seed from_u64(std::uint64_t master) noexcept {
    return Seed{fmix64(master ^ 0x6a09e667f3bcc908ULL), fmix64(master + 0xbb67ae8584caa73bULL), 0};
  }

  Seed with_stream(std::uint64_t id) const noexcept { return Seed{key_hi, key_lo, id}; }

  /// New master key derived from this seed and a label, e.g. (point, trial).
  Seed fork(std::uint64_t label) const noexcept {
    const std::uint64_t a = fmix64(key_hi ^ fmix64(stream + 0x3c6ef372fe94f82bULL) ^ label);
    const std::uint64_t b = fmix64(key_lo + fmix64(label ^ 0xa54ff53a5f1d36f1ULL) + a);
    return Seed{a, b, 0};
  }

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// Keyed 64-bit mixing function; a bijection on 64-bit inputs for every key.
class KeyedHash {
 public:
  KeyedHash() = default;
  explicit KeyedHash(const Seed& s) noexcept
      : a_(fmix64(s.key_hi ^ fmix64(s.stream ^ 0x9e3779b97f4a7c15ULL))),
        b_(fmix64(s.key_lo ^ fmix64(s.stream + 0x510e527fade682d1ULL)) | 1ULL) {}

  std::uint64_t operator()(std::uint64_t x) const noexcept { return fmix64(fmix64(x ^ a_) + b_); }

 private:
  std::uint64_t a_ = 0x9e3779b97f4a7c15ULL;
  std::uint64_t b_ = 1;
};

enum class Mode { cyclic, noncyclic };

std::string to_string(Mode m);

/// Largest useful symbol width for a string of length n: min(64, 3*ceil(log2 n)).
int default_symbol_bits(std::uint64_t n);

inline std::uint64_t truncate_bits(std::uint64_t h, int b) noexcept {
  return b >= 64 ? h : (h >> (64 - b));
}

/// Floor modulus for signed indices.
inline std::int64_t wrap_index(std::int64_t i, std::int64_t n) noexcept {
  const std::int64_t r = i % n;
  return r < 0 ? r + n : r;
}

template <class S>
concept Source1D = requires(const S& s, std::int64_t i) {
  { s.at(i) } -> std::convertible_to<std::uint64_t>;
};

template <class S>
concept Source2D = requires(const S& s, std::int64_t i, std::int64_t j) {
  { s.at(i, j) } -> std::convertible_to<std::uint64_t>;
};

/// Lazy string x in Sigma_b^n: symbol i is a keyed hash of i. O(1) memory.
class SymbolOracle {
 public:
  SymbolOracle(Seed seed, std::int64_t n, int b, Mode mode);

  std::uint64_t at(std::int64_t i) const {
    return truncate_bits(hash_(static_cast<std::uint64_t>(reduce(i))), b_);
  }
  std::uint64_t symbol_at(std::int64_t i) const { return at(i); }

  std::int64_t size() const noexcept { return n_; }
  int bits() const noexcept { return b_; }
  Mode mode() const noexcept { return mode_; }
  const Seed& seed() const noexcept { return seed_; }

  std::int64_t reduce(std::int64_t i) const {
    if (mode_ == Mode::cyclic) return mask_ ? (i & mask_) : wrap_index(i, n_);
    if (i < 0 || i >= n_) throw std::domain_error("SymbolOracle: index out of range");
    return i;
  }

 private:
  Seed seed_;
  KeyedHash hash_;
  std::int64_t n_;
  std::int64_t mask_ = 0;  // n-1 when n is a power of two
  int b_;
  Mode mode_;
};

/// Lazy n x n grid in Sigma_b. Axis lengths are limited to 2^32.
class SymbolOracle2D {
 public:
  SymbolOracle2D(Seed seed, std::int64_t n, int b, Mode mode);

  std::uint64_t at(std::int64_t i, std::int64_t j) const {
    const auto key = (static_cast<std::uint64_t>(reduce(i)) << 32) | static_cast<std::uint64_t>(reduce(j));
    return truncate_bits(hash_(key), b_);
  }
  std::uint64_t symbol_at(std::int64_t i, std::int64_t j) const { return at(i, j); }

  std::int64_t size() const noexcept { return n_; }
  int bits() const noexcept { return b_; }
  Mode mode() const noexcept { return mode_; }

  std::int64_t reduce(std::int64_t i) const {
    if (mode_ == Mode::cyclic) return mask_ ? (i & mask_) : wrap_index(i, n_);
    if (i < 0 || i >= n_) throw std::domain_error("SymbolOracle2D: index out of range");
    return i;
  }

 private:
  Seed seed_;
  KeyedHash hash_;
  std::int64_t n_;
  std::int64_t mask_ = 0;
  int b_;
  Mode mode_;
};

/// The second party's view x << r (cyclic) or x <<< r (non-cyclic: the r
/// leftmost symbols are chopped and fresh symbols from fresh_seed fill the tail).
class ShiftedPair {
 public:
  ShiftedPair(const SymbolOracle& base, std::int64_t shift, Seed fresh_seed)
      : base_(base), fresh_(fresh_seed, base.size(), base.bits(), Mode::noncyclic), shift_(shift) {
    if (shift < 0) throw std::domain_error("ShiftedPair: negative shift");
  }

  std::uint64_t at(std::int64_t i) const {
    if (base_.mode() == Mode::cyclic) return base_.at(i + shift_);
    if (i < 0 || i >= base_.size()) throw std::domain_error("ShiftedPair: index out of range");
    return i < base_.size() - shift_ ? base_.at(i + shift_) : fresh_.at(i);
  }
  std::uint64_t symbol_at(std::int64_t i) const { return at(i); }

  const SymbolOracle& base() const noexcept { return base_; }
  std::int64_t shift() const noexcept { return shift_; }
  std::int64_t size() const noexcept { return base_.size(); }

 private:
  SymbolOracle base_;
  SymbolOracle fresh_;
  std::int64_t shift_;
};

class ShiftedPair2D {
 public:
  ShiftedPair2D(const SymbolOracle2D& base, std::int64_t r1, std::int64_t r2, Seed fresh_seed)
      : base_(base), fresh_(fresh_seed, base.size(), base.bits(), Mode::noncyclic), r1_(r1), r2_(r2) {
    if (r1 < 0 || r2 < 0) throw std::domain_error("ShiftedPair2D: negative shift");
  }

  std::uint64_t at(std::int64_t i, std::int64_t j) const {
    if (base_.mode() == Mode::cyclic) return base_.at(i + r1_, j + r2_);
    const std::int64_t n = base_.size();
    if (i < 0 || i >= n || j < 0 || j >= n) throw std::domain_error("ShiftedPair2D: index out of range");
    if (i + r1_ < n && j + r2_ < n) return base_.at(i + r1_, j + r2_);
    return fresh_.at(i, j);
  }

 private:
  SymbolOracle2D base_;
  SymbolOracle2D fresh_;
  std::int64_t r1_, r2_;
};

/// Read-only view x << offset over any 1D source; re-anchoring without copies.
template <Source1D S>
class OffsetView {
 public:
  OffsetView(const S& src, std::int64_t offset) : src_(&src), offset_(offset) {}
  std::uint64_t at(std::int64_t i) const { return src_->at(i + offset_); }

 private:
  const S* src_;
  std::int64_t offset_;
};

/// Counts every query that passes through it. One instance per evaluation.
template <class S>
class CountingSource {
 public:
  explicit CountingSource(const S& src) : src_(&src) {}
  std::uint64_t at(std::int64_t i) const
    requires Source1D<S>
  {
    ++count_;
    return src_->at(i);
  }
  std::uint64_t at(std::int64_t i, std::int64_t j) const
    requires Source2D<S>
  {
    ++count_;
    return src_->at(i, j);
  }
  std::uint64_t count() const noexcept { return count_; }

 private:
  const S* src_;
  mutable std::uint64_t count_ = 0;
};

/// psi: symbol -> [lo, hi], uniform for uniform symbols (multiply-shift reduction).
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(Seed seed, std::int64_t lo, std::int64_t hi);

  std::int64_t operator()(std::uint64_t symbol) const noexcept {
    return lo_ + static_cast<std::int64_t>(mulhi64(hash_(symbol), span_));
  }
  std::int64_t lo() const noexcept { return lo_; }
  std::int64_t hi() const noexcept { return lo_ + static_cast<std::int64_t>(span_) - 1; }

 private:
  KeyedHash hash_;
  std::int64_t lo_ = 0;
  std::uint64_t span_ = 1;
};

std::int64_t step_fn(const Seed& seed, std::int64_t range_lo, std::int64_t range_hi, std::uint64_t symbol);

/// Sorted list of m distinct integers from [0, W), deterministic in seed.
std::vector<std::int64_t> random_subset(const Seed& seed, std::int64_t universe, std::int64_t size);

/// Counter-mode generator over a KeyedHash; satisfies UniformRandomBitGenerator.
class HashRng {
 public:
  using result_type = std::uint64_t;
  explicit HashRng(const Seed& seed) : hash_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() noexcept { return hash_(counter_++); }
  /// Uniform in [0, range).
  std::uint64_t below(std::uint64_t range) noexcept { return mulhi64((*this)(), range); }
  /// Uniform double in [0, 1).
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  KeyedHash hash_;
  std::uint64_t counter_ = 0;
};

}  // namespace lphs
