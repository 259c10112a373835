#pragma once

// Shift sketches: a party's hash output reduced mod 2R+1, a 29-byte wire
// frame, recovery of unbounded shifts from many offset instances, and the
// threshold hash family for the shift metric.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lphs/lphs1d.hpp"
#include "lphs/rand_oracle.hpp"
#include "lphs/worstcase.hpp"

namespace lphs {

struct ShiftSketch {
  std::int64_t value = 0;  // in [0, 2R+1)
  std::int64_t R = 0;
  std::uint64_t scheme_id = 0;
  friend bool operator==(const ShiftSketch&, const ShiftSketch&) = default;
};

template <Source1D S, class H>
ShiftSketch make_sketch(const S& x, std::int64_t R, const H& lphs, std::uint64_t scheme_id) {
  if (R < 0) throw std::domain_error("make_sketch: negative bound");
  const HashOutcome1D out = lphs(x);
  if (!out.value) throw std::domain_error("make_sketch: hash returned no value");
  return {wrap_index(*out.value, 2 * R + 1), R, scheme_id};
}

/// Centered difference a - b mod 2R+1, in [-R, R].
std::int64_t recover_shift(const ShiftSketch& a, const ShiftSketch& b);

/// ceil(log2(2R+1)).
int payload_bits(std::int64_t R);

inline constexpr std::array<std::uint8_t, 4> kSketchMagic{'L', 'P', 'H', 'S'};
inline constexpr std::uint8_t kSketchVersion = 1;
inline constexpr std::uint8_t kCompactVersion = 2;
inline constexpr std::size_t kFrameSize = 29;
/// Bytes of the compact frame before the bit-packed value.
inline constexpr std::size_t kCompactHeaderSize = 21;

/// Little-endian frame: magic, version, scheme_id, R, value.
std::array<std::uint8_t, kFrameSize> serialize(const ShiftSketch& s);
ShiftSketch deserialize(std::span<const std::uint8_t> bytes);

/// Same header with version 2, followed by the value in ceil(payload_bits(R) / 8) bytes.
std::vector<std::uint8_t> serialize_compact(const ShiftSketch& s);
ShiftSketch deserialize_compact(std::span<const std::uint8_t> bytes);

// Unbounded shifts: party B runs instance m on its input rotated right by m*R.

struct InstanceSketch {
  std::optional<std::int64_t> value;  // empty on bot
  std::uint32_t tag = 0;              // digest of the symbol at the landing point
  friend bool operator==(const InstanceSketch&, const InstanceSketch&) = default;
};

enum class InstanceHash { irw, las_vegas };

struct UnboundedConfig {
  std::int64_t n = 0;
  int instances = 16;
  int repetitions = 1;  // independent hashes per instance; any agreeing one selects the instance
  InstanceHash hash = InstanceHash::irw;
  IrwSchedule irw;     // IRW instances
  std::int64_t d = 0;  // Las Vegas instances: Basic scan width
  IrwSchedule walks;   // Las Vegas instances: walk stages run from every anchor
  std::int64_t R() const noexcept { return (n + instances - 1) / instances; }
  /// IRW instances with budget d per repetition.
  static UnboundedConfig with_irw(std::int64_t n, int instances, std::int64_t d, int repetitions = 1);
  /// Las Vegas instances with scan width d and the default walk schedule for d.
  static UnboundedConfig with_las_vegas(std::int64_t n, int instances, std::int64_t d);
};

enum class InstanceFilter { tag, range_only };

enum class RecoveryStatus { ok, no_match, multi_match };

struct UnboundedOutcome {
  std::optional<std::int64_t> shift;
  RecoveryStatus status = RecoveryStatus::no_match;
  int agreeing = 0;
};

template <Source1D S>
InstanceSketch instance_sketch(const S& x, const UnboundedConfig& cfg, const Seed& seed) {
  InstanceSketch s;
  const auto out = cfg.hash == InstanceHash::irw ? irw_lphs(x, cfg.irw, seed)
                                                 : las_vegas_lphs(x, cfg.d, cfg.R(), seed, cfg.walks);
  if (out.bot || !out.value) return s;
  s.value = wrap_index(*out.value, cfg.n);
  s.tag = static_cast<std::uint32_t>(fmix64(x.at(*out.value)));
  return s;
}

/// Party A: one sketch per repetition.
template <Source1D S>
std::vector<InstanceSketch> unbounded_sketches_a(const S& x, const UnboundedConfig& cfg, const Seed& seed) {
  std::vector<InstanceSketch> out;
  for (int k = 0; k < cfg.repetitions; ++k)
    out.push_back(instance_sketch(x, cfg, seed.fork(static_cast<std::uint64_t>(k))));
  return out;
}

/// Party B: instance-major, repetition-minor.
template <Source1D S>
std::vector<InstanceSketch> unbounded_sketches_b(const S& y, const UnboundedConfig& cfg, const Seed& seed) {
  std::vector<InstanceSketch> out;
  out.reserve(static_cast<std::size_t>(cfg.instances * cfg.repetitions));
  for (int m = 0; m < cfg.instances; ++m)
    for (int k = 0; k < cfg.repetitions; ++k)
      out.push_back(instance_sketch(OffsetView(y, -m * cfg.R()), cfg, seed.fork(static_cast<std::uint64_t>(k))));
  return out;
}

/// Accepts (instance m, repetition k) when neither side is bot, tags match (tag filter only) and the residual
/// a_k - b_{m,k} mod n lies in [0, R]. Succeeds when all accepted pairs name the same shift.
UnboundedOutcome recover_unbounded(const std::vector<InstanceSketch>& sketches_b, const std::vector<InstanceSketch>& sketches_a,
                                   const UnboundedConfig& cfg, InstanceFilter filter = InstanceFilter::tag);

// Threshold hashes for the shift metric on windows of a corpus circle.

struct LshKey {
  Seed h_prime_seed;
  std::int64_t z = 0;  // threshold in [0, n]
  static LshKey sample(const Seed& seed, std::int64_t n);
};

/// Window C[t .. t+n) of a circular bit corpus; non-cyclic reads inside the window only.
class CorpusWindow {
 public:
  CorpusWindow(const BitString& corpus, std::int64_t t, std::int64_t n) : c_(&corpus), t_(t), n_(n) {}
  std::uint64_t at(std::int64_t i) const {
    if (i < 0 || i >= n_) throw std::domain_error("CorpusWindow: index out of range");
    return c_->at(t_ + i);
  }
  std::uint64_t window_bits(std::int64_t i, int k) const {
    if (i < 0 || i + k > n_) throw std::domain_error("CorpusWindow: window out of range");
    return c_->window_bits(t_ + i, k);
  }

 private:
  const BitString* c_;
  std::int64_t t_, n_;
};

/// 1 when h'(x) mod n >= z, else 0. h_prime is called as h_prime(x, seed).
template <Source1D S, class H>
int lsh_hash(const LshKey& key, const S& x, std::int64_t n, const H& h_prime) {
  const HashOutcome1D out = h_prime(x, key.h_prime_seed);
  return wrap_index(out.value.value_or(0), n) >= key.z ? 1 : 0;
}

/// Collision probability of the threshold bit for two fixed outputs a, b in [0, n) over uniform z in [0, n).
double threshold_collision_probability(std::int64_t a, std::int64_t b, std::int64_t n);

}  // namespace lphs
