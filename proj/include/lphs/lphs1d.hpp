#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lphs/rand_oracle.hpp"

namespace lphs {

struct HashOutcome1D {
  std::optional<std::int64_t> value;
  std::uint64_t queries = 0;
  bool bot = false;
};

struct WalkStage {
  std::int64_t L = 2;  // step lengths are drawn from [1, L-1]
  std::int64_t d = 1;  // number of steps (= queries)
};

struct IrwSchedule {
  std::int64_t d0 = 1;
  std::vector<WalkStage> stages;

  int K() const noexcept { return static_cast<int>(stages.size()); }
  std::int64_t total() const noexcept;
  /// Deterministic jump before walk stage k (1-based); the Basic stage counts as (L=1, d=d0).
  std::int64_t jump(int k) const noexcept;
  /// Number of positions spanned by the furthest possible query, relative to the start.
  std::int64_t reach() const noexcept;
  void validate() const;

  /// d0 = d/5, then K = max(1, ceil(lg lg d) - 1) equal walk stages with L_1 = ceil(sqrt d0),
  /// L_{i+1} = ceil(sqrt(L_i * d_i)).
  static IrwSchedule default_for(std::int64_t d);
  /// Walk stages calibrated for a Basic stage of d0 queries; rounding leftovers go to d0.
  static IrwSchedule with_walks(std::int64_t d0, std::int64_t walk_budget, int K);
  static int default_stage_count(std::int64_t d);
  static IrwSchedule basic_only(std::int64_t d0) { return IrwSchedule{d0, {}}; }
};

/// Smallest admissible string lengths for an IRW with budget d.
std::int64_t irw_min_n_cyclic(std::int64_t d);
std::int64_t irw_min_n_noncyclic(const IrwSchedule& s);

/// Stream labels used to key the shared random functions of each algorithm.
namespace streams {
inline constexpr std::uint64_t rw_step = 0x100;
inline constexpr std::uint64_t cyclic_relabel = 0x200;
inline constexpr std::uint64_t cyclic_jump = 0x300;
inline constexpr std::uint64_t narrow_window = 0x400;
}  // namespace streams

/// Argmin of x[start .. start+d); smallest index wins ties. Returns an absolute index.
template <Source1D S>
HashOutcome1D basic_lphs(const S& x, std::int64_t d, std::int64_t start = 0) {
  if (d < 1) throw std::domain_error("basic_lphs: d must be positive");
  std::int64_t best_i = start;
  std::uint64_t best = x.at(start);
  for (std::int64_t i = start + 1; i < start + d; ++i) {
    const std::uint64_t t = x.at(i);
    if (t < best) {
      best = t;
      best_i = i;
    }
  }
  return {best_i, static_cast<std::uint64_t>(d), false};
}

/// Forward walk of d steps from start with steps psi(x[j]); returns the position of the minimum seen.
template <Source1D S>
HashOutcome1D rw_walk(const S& x, const StepFunction& psi, std::int64_t d, std::int64_t start) {
  std::int64_t j = start;
  std::int64_t j_min = start;
  std::uint64_t min = ~std::uint64_t{0};
  bool first = true;
  for (std::int64_t i = 0; i < d; ++i) {
    const std::uint64_t t = x.at(j);
    if (first || t < min) {
      min = t;
      j_min = j;
      first = false;
    }
    j += psi(t);
  }
  return {j_min, static_cast<std::uint64_t>(d), false};
}

inline StepFunction rw_step_function(const Seed& seed, std::int64_t L, int stage = 0) {
  if (L < 2) throw std::domain_error("rw_lphs: L must be at least 2");
  return StepFunction(seed.with_stream(streams::rw_step + static_cast<std::uint64_t>(stage)), 1, L - 1);
}

template <Source1D S>
HashOutcome1D rw_lphs(const S& x, std::int64_t L, std::int64_t d, std::int64_t start, const Seed& seed) {
  if (d < 1) throw std::domain_error("rw_lphs: d must be positive");
  return rw_walk(x, rw_step_function(seed, L), d, start);
}

/// Walk stages of an IRW, continuing from an anchor. first_jump replaces the jump of stage 1.
template <Source1D S>
HashOutcome1D irw_walk_stages(const S& x, const IrwSchedule& s, const Seed& seed, std::int64_t anchor,
                              std::int64_t first_jump, std::vector<std::int64_t>* trace = nullptr) {
  std::int64_t pos = anchor;
  std::uint64_t q = 0;
  for (int k = 1; k <= s.K(); ++k) {
    const auto& st = s.stages[static_cast<std::size_t>(k - 1)];
    pos += first_jump + (s.jump(k) - s.jump(1));
    auto out = rw_walk(x, rw_step_function(seed, st.L, k), st.d, pos);
    pos = *out.value;
    q += out.queries;
    if (trace) trace->push_back(pos);
  }
  return {pos, q, false};
}

/// Basic stage, then K walk stages, each preceded by the deterministic jump. Re-anchoring is an offset.
template <Source1D S>
HashOutcome1D irw_lphs(const S& x, const IrwSchedule& s, const Seed& seed, std::vector<std::int64_t>* trace = nullptr) {
  auto first = basic_lphs(x, s.d0);
  if (trace) trace->push_back(*first.value);
  if (s.K() == 0) return first;
  auto rest = irw_walk_stages(x, s, seed, *first.value, s.jump(1), trace);
  rest.queries += first.queries;
  return rest;
}

/// m rounds of (relabel, walk with L = d = ceil(sqrt n), keyed jump). Output is mod n.
template <Source1D S>
HashOutcome1D cyclic_rw_lphs(const S& x, std::int64_t n, int m, const Seed& seed) {
  if (m < 1) throw std::domain_error("cyclic_rw_lphs: m must be positive");
  std::int64_t L = 1;
  while (L * L < n) ++L;
  L = std::max<std::int64_t>(L, 2);
  std::int64_t pos = 0;
  std::uint64_t q = 0;
  for (int round = 0; round < m; ++round) {
    const KeyedHash phi(seed.with_stream(streams::cyclic_relabel + static_cast<std::uint64_t>(round)));
    const StepFunction rho(seed.with_stream(streams::cyclic_jump + static_cast<std::uint64_t>(round)), 0, n - 1);
    const auto psi = rw_step_function(seed, L, 1000 + round);
    std::int64_t j = pos;
    std::int64_t j_min = pos;
    std::uint64_t min = 0;
    for (std::int64_t i = 0; i < L; ++i) {
      const std::uint64_t t = phi(x.at(j));
      if (i == 0 || t < min) {
        min = t;
        j_min = j;
      }
      j += psi(t);
    }
    q += static_cast<std::uint64_t>(L);
    pos = wrap_index(j_min + rho(min), n);
  }
  return {pos, q, false};
}

/// Distinct absolute outputs of Basic_d on x << r for r in [0, R], via a sliding-window minimum.
/// Reads the R + d symbols x[0 .. R+d) once.
template <Source1D S>
std::vector<std::int64_t> sliding_basic_anchors(const S& x, std::int64_t d, std::int64_t R) {
  std::vector<std::uint64_t> w(static_cast<std::size_t>(R + d));
  for (std::int64_t i = 0; i < R + d; ++i) w[static_cast<std::size_t>(i)] = x.at(i);
  std::deque<std::int64_t> mono;  // indices with strictly increasing values
  std::vector<std::int64_t> anchors;
  for (std::int64_t i = 0; i < R + d; ++i) {
    while (!mono.empty() && w[static_cast<std::size_t>(mono.back())] > w[static_cast<std::size_t>(i)]) mono.pop_back();
    mono.push_back(i);
    const std::int64_t r = i - d + 1;
    if (r < 0) continue;
    while (mono.front() < r) mono.pop_front();
    if (anchors.empty() || anchors.back() != mono.front()) anchors.push_back(mono.front());
  }
  return anchors;
}

/// Walk schedule used by the Las Vegas hash: d walk queries calibrated for a d-query Basic scan.
IrwSchedule las_vegas_schedule(std::int64_t d);

/// Scans x[0 .. R+d), then walks from every distinct Basic anchor; outputs the common landing point or bot.
template <Source1D S>
HashOutcome1D las_vegas_lphs(const S& x, std::int64_t d, std::int64_t R, const Seed& seed, const IrwSchedule& sched) {
  if (d < 1 || R < 0) throw std::domain_error("las_vegas_lphs: bad parameters");
  const auto anchors = sliding_basic_anchors(x, d, R);
  HashOutcome1D out;
  out.queries = static_cast<std::uint64_t>(R + d);
  std::optional<std::int64_t> landing;
  for (const auto a : anchors) {
    const auto w = irw_walk_stages(x, sched, seed, a, R + d);
    out.queries += w.queries;
    if (landing && *landing != *w.value) {
      out.bot = true;
      return out;
    }
    landing = w.value;
  }
  out.value = landing;
  return out;
}

template <Source1D S>
HashOutcome1D las_vegas_lphs(const S& x, std::int64_t d, std::int64_t R, const Seed& seed) {
  return las_vegas_lphs(x, d, R, seed, las_vegas_schedule(d));
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
  const std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

/// A wide-symbol string seen as the narrow string obtained by splitting every symbol into r chunks of b bits.
template <Source1D W>
class UngroupView {
 public:
  UngroupView(const W& wide, std::int64_t r, int b) : wide_(&wide), r_(r), b_(b) {}
  std::uint64_t at(std::int64_t i) const {
    const std::int64_t g = floor_div(i, r_);
    const std::int64_t c = i - g * r_;
    const std::uint64_t sym = wide_->at(g);
    const int shift = b_ * static_cast<int>(r_ - 1 - c);
    const std::uint64_t mask = b_ >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << b_) - 1);
    return (sym >> shift) & mask;
  }

 private:
  const W* wide_;
  std::int64_t r_;
  int b_;
};

/// LPHS over (Sigma_{b*r})^{n/r} from an LPHS over Sigma_b^n: evaluate on the ungrouped string, floor-divide by r.
template <class H>
auto widen_alphabet(H h, std::int64_t r, std::int64_t n, int b) {
  if (r < 1 || n % r != 0) throw std::domain_error("widen_alphabet: r must divide n");
  if (b * r > 64) throw std::domain_error("widen_alphabet: b*r exceeds 64 bits");
  return [h = std::move(h), r, b](const auto& wide) {
    UngroupView view(wide, r, b);
    HashOutcome1D out = h(view);
    if (out.value) out.value = floor_div(*out.value, r);
    return out;
  };
}

/// Sources that can hand out a k-symbol window of 1-bit symbols as one word.
template <class S>
concept PackedBitSource = requires(const S& s, std::int64_t i, int k) {
  { s.window_bits(i, k) } -> std::convertible_to<std::uint64_t>;
};

/// Wide symbol i = f(x[i], ..., x[i+k-1]) for a shared random f. Counts k narrow queries per wide query.
template <Source1D S>
class WindowView {
 public:
  WindowView(const S& narrow, int k, const Seed& seed)
      : narrow_(&narrow), k_(k), f_(seed.with_stream(streams::narrow_window)) {
    if (k < 1) throw std::domain_error("narrow_alphabet: k must be positive");
  }
  std::uint64_t at(std::int64_t i) const {
    narrow_queries_ += static_cast<std::uint64_t>(k_);
    if constexpr (PackedBitSource<S>) {
      if (k_ <= 64) return f_(narrow_->window_bits(i, k_));
    }
    std::uint64_t acc = 0;
    for (int t = 0; t < k_; ++t) acc = f_(acc ^ narrow_->at(i + t));
    return acc;
  }
  std::uint64_t narrow_queries() const noexcept { return narrow_queries_; }

 private:
  const S* narrow_;
  int k_;
  KeyedHash f_;
  mutable std::uint64_t narrow_queries_ = 0;
};

/// LPHS over Sigma_b^n from an LPHS over wide symbols; query count is multiplied by k.
template <class H>
auto narrow_alphabet(H h, int k, const Seed& seed) {
  if (k < 1) throw std::domain_error("narrow_alphabet: k must be positive");
  return [h = std::move(h), k, seed](const auto& narrow) {
    WindowView view(narrow, k, seed);
    HashOutcome1D out = h(view);
    out.queries *= static_cast<std::uint64_t>(k);
    return out;
  };
}

}  // namespace lphs
