#include "lphs/sketch.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

namespace lphs {

std::int64_t recover_shift(const ShiftSketch& a, const ShiftSketch& b) {
  if (a.R != b.R || a.scheme_id != b.scheme_id) throw std::domain_error("recover_shift: sketches from different schemes");
  const std::int64_t m = 2 * a.R + 1;
  const std::int64_t delta = wrap_index(a.value - b.value, m);
  return delta <= a.R ? delta : delta - m;
}

int payload_bits(std::int64_t R) {
  if (R < 0) throw std::domain_error("payload_bits: negative bound");
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(2 * R)));
}

namespace {

void put_le(std::uint8_t* p, std::uint64_t v, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) p[k] = static_cast<std::uint8_t>(v >> (8 * k));
}

std::uint64_t get_le(const std::uint8_t* p, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < n; ++k) v |= static_cast<std::uint64_t>(p[k]) << (8 * k);
  return v;
}

void put_header(std::uint8_t* p, const ShiftSketch& s, std::uint8_t version) {
  std::memcpy(p, kSketchMagic.data(), 4);
  p[4] = version;
  put_le(p + 5, s.scheme_id, 8);
  put_le(p + 13, static_cast<std::uint64_t>(s.R), 8);
}

ShiftSketch get_header(std::span<const std::uint8_t> b, std::uint8_t version) {
  if (b.size() < kCompactHeaderSize) throw std::domain_error("sketch frame: truncated");
  if (!std::equal(kSketchMagic.begin(), kSketchMagic.end(), b.begin())) throw std::domain_error("sketch frame: bad magic");
  if (b[4] != version) throw std::domain_error("sketch frame: unsupported version");
  ShiftSketch s;
  s.scheme_id = get_le(b.data() + 5, 8);
  s.R = static_cast<std::int64_t>(get_le(b.data() + 13, 8));
  if (s.R < 0 || s.R > (std::int64_t{1} << 61)) throw std::domain_error("sketch frame: bad bound");
  return s;
}

void check_value(const ShiftSketch& s) {
  if (s.value < 0 || s.value >= 2 * s.R + 1) throw std::domain_error("sketch frame: value out of range");
}

}  // namespace

std::array<std::uint8_t, kFrameSize> serialize(const ShiftSketch& s) {
  std::array<std::uint8_t, kFrameSize> out{};
  put_header(out.data(), s, kSketchVersion);
  put_le(out.data() + 21, static_cast<std::uint64_t>(s.value), 8);
  return out;
}

ShiftSketch deserialize(std::span<const std::uint8_t> bytes) {
  auto s = get_header(bytes, kSketchVersion);
  if (bytes.size() != kFrameSize) throw std::domain_error("sketch frame: wrong size");
  s.value = static_cast<std::int64_t>(get_le(bytes.data() + 21, 8));
  check_value(s);
  return s;
}

std::vector<std::uint8_t> serialize_compact(const ShiftSketch& s) {
  const auto payload = static_cast<std::size_t>((payload_bits(s.R) + 7) / 8);
  std::vector<std::uint8_t> out(kCompactHeaderSize + payload);
  put_header(out.data(), s, kCompactVersion);
  put_le(out.data() + kCompactHeaderSize, static_cast<std::uint64_t>(s.value), payload);
  return out;
}

ShiftSketch deserialize_compact(std::span<const std::uint8_t> bytes) {
  auto s = get_header(bytes, kCompactVersion);
  const auto payload = static_cast<std::size_t>((payload_bits(s.R) + 7) / 8);
  if (bytes.size() != kCompactHeaderSize + payload) throw std::domain_error("sketch frame: wrong size");
  s.value = static_cast<std::int64_t>(get_le(bytes.data() + kCompactHeaderSize, payload));
  check_value(s);
  return s;
}

namespace {
UnboundedConfig base_config(std::int64_t n, int instances) {
  if (instances < 1 || n < instances) throw std::domain_error("UnboundedConfig: bad instance count");
  UnboundedConfig c;
  c.n = n;
  c.instances = instances;
  return c;
}
}  // namespace

UnboundedConfig UnboundedConfig::with_irw(std::int64_t n, int instances, std::int64_t d, int repetitions) {
  if (repetitions < 1) throw std::domain_error("UnboundedConfig: repetitions must be positive");
  auto c = base_config(n, instances);
  c.repetitions = repetitions;
  c.hash = InstanceHash::irw;
  c.irw = IrwSchedule::default_for(d);
  return c;
}

UnboundedConfig UnboundedConfig::with_las_vegas(std::int64_t n, int instances, std::int64_t d) {
  auto c = base_config(n, instances);
  c.hash = InstanceHash::las_vegas;
  c.d = d;
  c.walks = las_vegas_schedule(d);
  return c;
}

UnboundedOutcome recover_unbounded(const std::vector<InstanceSketch>& sketches_b, const std::vector<InstanceSketch>& sketches_a,
                                   const UnboundedConfig& cfg, InstanceFilter filter) {
  const auto reps = static_cast<std::size_t>(cfg.repetitions);
  if (sketches_a.size() != reps || sketches_b.size() != reps * static_cast<std::size_t>(cfg.instances))
    throw std::domain_error("recover_unbounded: sketch count does not match the configuration");
  UnboundedOutcome out;
  const std::int64_t R = cfg.R();
  for (std::size_t idx = 0; idx < sketches_b.size(); ++idx) {
    const auto& a = sketches_a[idx % reps];
    const auto& b = sketches_b[idx];
    if (!a.value || !b.value) continue;
    if (filter == InstanceFilter::tag && b.tag != a.tag) continue;
    const std::int64_t r = wrap_index(*a.value - *b.value, cfg.n);
    if (r > R) continue;
    const auto m = static_cast<std::int64_t>(idx / reps);
    const std::int64_t s = wrap_index(m * R + r, cfg.n);
    ++out.agreeing;
    if (out.shift && *out.shift != s) {
      out.shift.reset();
      out.status = RecoveryStatus::multi_match;
      return out;
    }
    out.shift = s;
  }
  out.status = out.shift ? RecoveryStatus::ok : RecoveryStatus::no_match;
  return out;
}

LshKey LshKey::sample(const Seed& seed, std::int64_t n) {
  HashRng rng(seed.with_stream(1));
  return {seed.with_stream(2), static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n)))};
}

double threshold_collision_probability(std::int64_t a, std::int64_t b, std::int64_t n) {
  return 1.0 - static_cast<double>(std::abs(a - b)) / static_cast<double>(n);
}

}  // namespace lphs
