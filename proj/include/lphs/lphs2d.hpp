#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lphs/lphs1d.hpp"
#include "lphs/rand_oracle.hpp"

namespace lphs {

struct HashOutcome2D {
  std::int64_t i = 0;
  std::int64_t j = 0;
  std::uint64_t queries = 0;
};

using Point2D = std::pair<std::int64_t, std::int64_t>;
using Trace2D = std::vector<Point2D>;

std::int64_t isqrt(std::int64_t v);
/// floor(v^(num/den)) for non-negative v, exact on perfect powers.
std::int64_t ipow_frac(std::int64_t v, int num, int den);

namespace streams {
inline constexpr std::uint64_t rw2d_axis_i = 0x500;
inline constexpr std::uint64_t rw2d_axis_j = 0x600;
inline constexpr std::uint64_t rec_outer = 0x700;
inline constexpr std::uint64_t rec_inner = 0x800;
inline constexpr std::uint64_t rec_column = 0x900;
}  // namespace streams

/// Ordered list of visited points with O(1) membership and index lookup.
class VisitList {
 public:
  void reserve(std::size_t n) {
    pts_.reserve(n);
    vals_.reserve(n);
    index_.reserve(n * 2);
  }
  /// Appends a point that is not yet present.
  void push(Point2D p, std::uint64_t value) {
    index_.emplace(key(p), pts_.size());
    pts_.push_back(p);
    vals_.push_back(value);
  }
  bool contains(Point2D p) const { return index_.contains(key(p)); }
  /// Index of p, or -1.
  std::int64_t find(Point2D p) const {
    auto it = index_.find(key(p));
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
  }
  const Point2D& operator[](std::size_t t) const { return pts_[t]; }
  std::uint64_t value(std::size_t t) const { return vals_[t]; }
  std::size_t size() const noexcept { return pts_.size(); }

 private:
  struct Key {
    std::int64_t i, j;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return static_cast<std::size_t>(fmix64(static_cast<std::uint64_t>(k.i) * 0x9e3779b97f4a7c15ULL ^
                                             static_cast<std::uint64_t>(k.j)));
    }
  };
  static Key key(Point2D p) { return {p.first, p.second}; }

  std::vector<Point2D> pts_;
  std::vector<std::uint64_t> vals_;
  std::unordered_map<Key, std::size_t, KeyHash> index_;
};

/// Argmin over the floor(sqrt d) x floor(sqrt d) box at (i0, j0); row-major ties.
template <Source2D Z>
HashOutcome2D minhash_2d(const Z& z, std::int64_t d, std::int64_t i0 = 0, std::int64_t j0 = 0) {
  if (d < 1) throw std::domain_error("minhash_2d: d must be positive");
  const std::int64_t s = isqrt(d);
  HashOutcome2D out{i0, j0, static_cast<std::uint64_t>(s * s)};
  std::uint64_t best = ~std::uint64_t{0};
  bool first = true;
  for (std::int64_t i = i0; i < i0 + s; ++i)
    for (std::int64_t j = j0; j < j0 + s; ++j) {
      const std::uint64_t t = z.at(i, j);
      if (first || t < best) {
        best = t;
        out.i = i;
        out.j = j;
        first = false;
      }
    }
  return out;
}

template <Source2D Z>
class RowView {
 public:
  RowView(const Z& z, std::int64_t i) : z_(&z), i_(i) {}
  std::uint64_t at(std::int64_t j) const { return z_->at(i_, j); }

 private:
  const Z* z_;
  std::int64_t i_;
};

/// Budgets of the recursive hash: outer walk length, per-row distillation cost.
struct RecursiveBudget {
  std::int64_t outer;  // floor(d^{2/5}) queries for each 1D stage over distilled symbols / along the row
  std::int64_t inner;  // IRW budget inside each distillation; one more query reads the distilled symbol
  std::int64_t offset;  // 10 * inner^2
  static RecursiveBudget for_budget(std::int64_t d);
};

/// Distilled symbol of row i0: IRW along the row, then the symbol 10*d'^2 past the landing point.
template <Source2D Z>
std::uint64_t rec1d(const Z& z, const IrwSchedule& inner, std::int64_t offset, std::int64_t i0, const Seed& seed,
                    std::int64_t* landing = nullptr) {
  RowView row(z, i0);
  const auto out = irw_lphs(row, inner, seed.with_stream(streams::rec_inner));
  if (landing) *landing = *out.value;
  return z.at(i0, *out.value + offset);
}

template <Source2D Z>
class DistilledColumn {
 public:
  DistilledColumn(const Z& z, const IrwSchedule& inner, std::int64_t offset, const Seed& seed)
      : z_(&z), inner_(&inner), offset_(offset), seed_(seed) {}
  std::uint64_t at(std::int64_t i) const { return rec1d(*z_, *inner_, offset_, i, seed_); }

 private:
  const Z* z_;
  const IrwSchedule* inner_;
  std::int64_t offset_;
  Seed seed_;
};

/// Synchronize on a row through distilled symbols, then run a 1D IRW along that row.
template <Source2D Z>
HashOutcome2D recursive_hash(const Z& z, std::int64_t d, const Seed& seed, Trace2D* trace = nullptr) {
  const auto b = RecursiveBudget::for_budget(d);
  const auto inner = IrwSchedule::default_for(b.inner);
  const auto outer = IrwSchedule::default_for(b.outer);
  DistilledColumn col(z, inner, b.offset, seed);
  const auto i1 = irw_lphs(col, outer, seed.with_stream(streams::rec_outer));
  if (trace) trace->push_back({*i1.value, 0});
  RowView row(z, *i1.value);
  const auto j1 = irw_lphs(row, outer, seed.with_stream(streams::rec_column));
  const auto q = i1.queries * static_cast<std::uint64_t>(b.inner + 1) + j1.queries;
  return {*i1.value, *j1.value, q};
}

/// Rows of sqrt(d') column steps 1 + (t mod L), restarting at j0; the row advances by 1 + (floor(t/L) mod L)
/// of the row minimum. Returns the overall argmin (first visit wins ties).
template <Source2D Z>
HashOutcome2D stage2(const Z& z, std::int64_t dp, std::int64_t i0, std::int64_t j0) {
  const std::int64_t L = std::max<std::int64_t>(1, ipow_frac(dp, 1, 4));
  const auto uL = static_cast<std::uint64_t>(L);
  const std::int64_t s = isqrt(dp);
  HashOutcome2D out{i0, j0, static_cast<std::uint64_t>(s * s)};
  std::uint64_t best = ~std::uint64_t{0};
  bool first = true;
  std::int64_t i = i0;
  for (std::int64_t r = 0; r < s; ++r) {
    std::int64_t j = j0;
    std::uint64_t row_min = ~std::uint64_t{0};
    for (std::int64_t c = 0; c < s; ++c) {
      const std::uint64_t t = z.at(i, j);
      if (c == 0 || t < row_min) row_min = t;
      if (first || t < best) {
        best = t;
        out.i = i;
        out.j = j;
        first = false;
      }
      j += 1 + static_cast<std::int64_t>(t % uL);
    }
    i += 1 + static_cast<std::int64_t>((row_min / uL) % uL);
  }
  return out;
}

/// d' steps (i, j) -> (i + 1, j + (t mod (2q+1)) - q) with q = floor(d'^{3/8}); returns the argmin.
template <Source2D Z>
HashOutcome2D stage3(const Z& z, std::int64_t dp, std::int64_t i0, std::int64_t j0) {
  const std::int64_t q = ipow_frac(dp, 3, 8);
  const auto span = static_cast<std::uint64_t>(2 * q + 1);
  HashOutcome2D out{i0, j0, static_cast<std::uint64_t>(dp)};
  std::uint64_t best = ~std::uint64_t{0};
  std::int64_t i = i0, j = j0;
  for (std::int64_t s = 0; s < dp; ++s) {
    const std::uint64_t t = z.at(i, j);
    if (s == 0 || t < best) {
      best = t;
      out.i = i;
      out.j = j;
    }
    i += 1;
    j += static_cast<std::int64_t>(t % span) - q;
  }
  return out;
}

template <Source2D Z>
HashOutcome2D three_stage_hash(const Z& z, std::int64_t d, Trace2D* trace = nullptr) {
  const std::int64_t dp = d / 3;
  if (dp < 1) throw std::domain_error("three_stage_hash: d too small");
  const auto s1 = minhash_2d(z, dp);
  if (trace) trace->push_back({s1.i, s1.j});
  const std::int64_t g2 = 2 * isqrt(d);
  const auto s2 = stage2(z, dp, s1.i + g2, s1.j + g2);
  if (trace) trace->push_back({s2.i, s2.j});
  const std::int64_t g3 = 2 * ipow_frac(d, 3, 4);
  auto s3 = stage3(z, dp, s2.i + g3, s2.j + g3);
  if (trace) trace->push_back({s3.i, s3.j});
  s3.queries += s1.queries + s2.queries;
  return s3;
}

/// 2D walk with independent axis steps in [-L, L]; revisits restart at the loop's minimum point and then move
/// right until leaving the visited set. Returns the argmin over visited points.
template <Source2D Z>
HashOutcome2D rw_stage(const Z& z, std::int64_t d, std::int64_t L, std::int64_t i, std::int64_t j, const Seed& seed,
                       int stage, std::int64_t* escapes = nullptr) {
  const StepFunction psi1(seed.with_stream(streams::rw2d_axis_i + static_cast<std::uint64_t>(stage)), -L, L);
  const StepFunction psi2(seed.with_stream(streams::rw2d_axis_j + static_cast<std::uint64_t>(stage)), -L, L);
  VisitList P;
  P.reserve(static_cast<std::size_t>(d));
  std::size_t best = 0;
  for (std::int64_t s = 0; s < d; ++s) {
    const std::uint64_t v = z.at(i, j);
    P.push({i, j}, v);
    if (v < P.value(best)) best = static_cast<std::size_t>(s);
    i += psi1(v);
    j += psi2(v);
    const std::int64_t t = P.find({i, j});
    if (t >= 0) {
      std::size_t k = static_cast<std::size_t>(t);
      for (auto u = static_cast<std::size_t>(t); u <= static_cast<std::size_t>(s); ++u)
        if (P.value(u) < P.value(k)) k = u;
      i = P[k].first;
      j = P[k].second;
      while (P.contains({i, j})) ++j;
      if (escapes) ++*escapes;
    }
  }
  return {P[best].first, P[best].second, static_cast<std::uint64_t>(d)};
}

struct RwHashPlan {
  int I;
  std::int64_t dp;
  std::vector<std::int64_t> L;
  static RwHashPlan for_budget(std::int64_t d);
};

template <Source2D Z>
HashOutcome2D rw_hash(const Z& z, std::int64_t d, const Seed& seed, Trace2D* trace = nullptr) {
  const auto plan = RwHashPlan::for_budget(d);
  auto cur = minhash_2d(z, plan.dp);
  if (trace) trace->push_back({cur.i, cur.j});
  std::uint64_t q = cur.queries;
  for (int k = 0; k < plan.I; ++k) {
    cur = rw_stage(z, plan.dp, plan.L[static_cast<std::size_t>(k)], cur.i, cur.j, seed, k);
    q += cur.queries;
    if (trace) trace->push_back({cur.i, cur.j});
  }
  cur.queries = q;
  return cur;
}

/// Mean of min(T, r) for the difference walk started at D with increments U1 - U2, U uniform on {0..L}.
double meet_time_check(std::int64_t L, std::int64_t D, std::int64_t r, std::int64_t trials, const Seed& seed);

/// Mean of K, the number of Geom(p) summands needed to reach r.
struct GeomsResult {
  double mean;
  double stderr_;
};
GeomsResult geoms_check(double p, std::int64_t r, std::int64_t trials, const Seed& seed);

}  // namespace lphs
