#pragma once

// Generic-group simulation: group elements of Z_N carry random labels and are
// reachable only through the evaluation oracle l_v(i, j) = i*v + j.

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "lphs/lphs1d.hpp"
#include "lphs/lphs2d.hpp"
#include "lphs/rand_oracle.hpp"

namespace lphs {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}
inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
  const std::uint64_t s = a + b;  // a, b < m <= 2^62
  return s >= m ? s - m : s;
}
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) noexcept;
/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n) noexcept;
/// Reduces a signed integer into [0, m).
inline std::uint64_t to_residue(std::int64_t x, std::uint64_t m) noexcept {
  const auto r = x % static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

inline constexpr std::uint64_t kMaxGroupOrder = std::uint64_t{1} << 61;

/// Group of order N with a hidden exponent v. answer(i, j) is the label of i*v + j.
class GroupOracle {
 public:
  GroupOracle(std::uint64_t N, Seed label_seed, std::uint64_t v, int b);

  std::uint64_t answer(std::uint64_t i, std::uint64_t j) const {
    const std::uint64_t e = addmod(mulmod(i % N_, v_, N_), j % N_, N_);
    ++count_;
    if (log_) log_->push_back(e);
    return label(e);
  }
  std::uint64_t label(std::uint64_t e) const noexcept { return truncate_bits(hash_(e), b_); }

  /// Keeps every queried exponent (off by default).
  void enable_log() { log_ = std::make_shared<std::vector<std::uint64_t>>(); }
  const std::vector<std::uint64_t>* log() const noexcept { return log_.get(); }
  std::uint64_t query_count() const noexcept { return count_; }

  std::uint64_t order() const noexcept { return N_; }
  std::uint64_t hidden() const noexcept { return v_; }
  int bits() const noexcept { return b_; }

 private:
  std::uint64_t N_;
  KeyedHash hash_;
  std::uint64_t v_;
  int b_;
  mutable std::uint64_t count_ = 0;
  mutable std::shared_ptr<std::vector<std::uint64_t>> log_;
};

/// The string j -> answer(1, j), i.e. X[v + j]; a Source1D for any LPHS.
class RestrictedGroupSource {
 public:
  explicit RestrictedGroupSource(const GroupOracle& g) : g_(&g) {}
  std::uint64_t at(std::int64_t j) const { return g_->answer(1, to_residue(j, g_->order())); }

 private:
  const GroupOracle* g_;
};

/// Runs a 1D LPHS with every query j issued as (1, j). Output is reduced mod N.
template <class H>
HashOutcome1D ddl_from_lphs(const H& h, const GroupOracle& oracle) {
  const RestrictedGroupSource src(oracle);
  auto out = h(src);
  if (out.value) out.value = static_cast<std::int64_t>(to_residue(*out.value, oracle.order()));
  return out;
}

/// Offsets D_0, D_1, ... in Z_N derived lazily from a seed, and the general-to-restricted query translation.
class QueryMap {
 public:
  QueryMap(std::uint64_t N, Seed seed);

  std::uint64_t D(std::uint64_t i) const noexcept { return mulhi64(d_(i), N_); }
  /// D_i + j * i^{-1} for i != 0, D_0 + j for i = 0.
  std::uint64_t map(std::uint64_t i, std::uint64_t j) const noexcept;
  std::uint64_t inverse(std::uint64_t i) const noexcept { return powmod(i, N_ - 2, N_); }
  std::uint64_t order() const noexcept { return N_; }

 private:
  std::uint64_t N_;
  KeyedHash d_;
};

/// Query (i, j) as the restricted query (1, map(i, j)).
inline std::pair<std::uint64_t, std::uint64_t> restrict_queries(const QueryMap& qm, std::pair<std::uint64_t, std::uint64_t> q) {
  return {1, qm.map(q.first, q.second)};
}

/// General queries answered through the restricted interface of a group oracle.
class RestrictedSimulation {
 public:
  RestrictedSimulation(const GroupOracle& g, const QueryMap& qm) : g_(&g), qm_(&qm) {}
  std::uint64_t answer(std::uint64_t i, std::uint64_t j) const {
    const auto [one, m] = restrict_queries(*qm_, {i, j});
    return g_->answer(one, m);
  }

 private:
  const GroupOracle* g_;
  const QueryMap* qm_;
};

/// Group of prime order N with public basis w_1..w_k; answer(a, beta) labels a*v + <beta, w>.
class KdGroupOracle {
 public:
  KdGroupOracle(std::uint64_t N, int k, Seed label_seed, Seed basis_seed, std::uint64_t v, int b);

  std::uint64_t answer(std::uint64_t a, const std::vector<std::int64_t>& beta) const;
  std::uint64_t answer2(std::uint64_t a, std::int64_t b1, std::int64_t b2) const {
    ++count_;
    if (log_) log_->push_back({b1, b2});
    return label(addmod(mulmod(a % N_, v_, N_), inner2(b1, b2), N_));
  }
  /// <beta, w> mod N for k = 2.
  std::uint64_t inner2(std::int64_t b1, std::int64_t b2) const noexcept {
    return addmod(mulmod(to_residue(b1, N_), w_[0], N_), mulmod(to_residue(b2, N_), w_[1], N_), N_);
  }
  std::uint64_t label(std::uint64_t e) const noexcept { return truncate_bits(hash_(e), b_); }

  void enable_log() { log_ = std::make_shared<std::vector<Point2D>>(); }
  const std::vector<Point2D>* log() const noexcept { return log_.get(); }
  std::uint64_t query_count() const noexcept { return count_; }

  const std::vector<std::uint64_t>& basis() const noexcept { return w_; }
  std::uint64_t order() const noexcept { return N_; }
  std::uint64_t hidden() const noexcept { return v_; }

 private:
  std::uint64_t N_;
  KeyedHash hash_;
  std::vector<std::uint64_t> w_;
  std::uint64_t v_;
  int b_;
  mutable std::uint64_t count_ = 0;
  mutable std::shared_ptr<std::vector<Point2D>> log_;
};

/// The grid (i, j) -> answer(1, (i, j)); a Source2D for any 2D LPHS.
class KdGroupSource {
 public:
  explicit KdGroupSource(const KdGroupOracle& g) : g_(&g) {}
  std::uint64_t at(std::int64_t i, std::int64_t j) const { return g_->answer2(1, i, j); }

 private:
  const KdGroupOracle* g_;
};

/// Pairs of distinct points among pts whose exponents <beta, w> coincide.
std::int64_t count_exponent_collisions(const KdGroupOracle& g, std::vector<Point2D> pts);

template <class H2>
HashOutcome2D kd_ddl(const H2& h2d, const KdGroupOracle& oracle) {
  const KdGroupSource src(oracle);
  return h2d(src);
}

struct KdPairResult {
  HashOutcome2D a, b;
  bool detected = false;          // h(a) - h(b) equals the basis offset
  std::int64_t collisions = 0;    // distinct lattice points with equal exponent
};

/// Runs h2d at hidden exponents v and v + o1*w_1 + o2*w_2. Query points of both runs are placed on the
/// common lattice (the second run's points shifted by (o1, o2)) and checked for exponent collisions.
template <class H2>
KdPairResult kd_ddl_pair(const H2& h2d, std::uint64_t N, Seed label_seed, Seed basis_seed, std::uint64_t v,
                         std::int64_t o1, std::int64_t o2, int b, bool account = true) {
  KdGroupOracle ga(N, 2, label_seed, basis_seed, v, b);
  const auto& w = ga.basis();
  const std::uint64_t v2 = addmod(v, addmod(mulmod(to_residue(o1, N), w[0], N), mulmod(to_residue(o2, N), w[1], N), N), N);
  KdGroupOracle gb(N, 2, label_seed, basis_seed, v2, b);
  if (account) {
    ga.enable_log();
    gb.enable_log();
  }
  KdPairResult r;
  r.a = kd_ddl(h2d, ga);
  r.b = kd_ddl(h2d, gb);
  r.detected = r.a.i - r.b.i == o1 && r.a.j - r.b.j == o2;
  if (account) {
    std::vector<Point2D> pts = *ga.log();
    for (auto [i, j] : *gb.log()) pts.push_back({i + o1, j + o2});
    r.collisions = count_exponent_collisions(ga, pts);
  }
  return r;
}

}  // namespace lphs
