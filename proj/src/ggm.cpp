#include "lphs/ggm.hpp"

#include <algorithm>
#include <stdexcept>

namespace lphs {

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) noexcept {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u64(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {
void check_order(std::uint64_t N, const char* who) {
  if (N < 2 || N > kMaxGroupOrder) throw std::domain_error(std::string(who) + ": order must be in [2, 2^61]");
}
}  // namespace

GroupOracle::GroupOracle(std::uint64_t N, Seed label_seed, std::uint64_t v, int b)
    : N_(N), hash_(label_seed), v_(v % (N ? N : 1)), b_(b) {
  check_order(N, "GroupOracle");
  if (b < 1 || b > 64) throw std::domain_error("GroupOracle: label width must be in [1, 64]");
}

QueryMap::QueryMap(std::uint64_t N, Seed seed) : N_(N), d_(seed) {
  check_order(N, "QueryMap");
  if (!is_prime_u64(N)) throw std::domain_error("QueryMap: group order must be prime");
}

std::uint64_t QueryMap::map(std::uint64_t i, std::uint64_t j) const noexcept {
  i %= N_;
  j %= N_;
  if (i == 0) return addmod(D(0), j, N_);
  return addmod(D(i), mulmod(j, inverse(i), N_), N_);
}

KdGroupOracle::KdGroupOracle(std::uint64_t N, int k, Seed label_seed, Seed basis_seed, std::uint64_t v, int b)
    : N_(N), hash_(label_seed), v_(v % (N ? N : 1)), b_(b) {
  check_order(N, "KdGroupOracle");
  if (!is_prime_u64(N)) throw std::domain_error("KdGroupOracle: group order must be prime");
  if (k < 2) throw std::domain_error("KdGroupOracle: dimension must be at least 2");
  if (b < 1 || b > 64) throw std::domain_error("KdGroupOracle: label width must be in [1, 64]");
  HashRng rng(basis_seed);
  w_.resize(static_cast<std::size_t>(k));
  for (auto& w : w_) w = rng.below(N);
}

std::uint64_t KdGroupOracle::answer(std::uint64_t a, const std::vector<std::int64_t>& beta) const {
  if (beta.size() > w_.size()) throw std::domain_error("KdGroupOracle: too many coordinates");
  std::uint64_t e = mulmod(a % N_, v_, N_);
  for (std::size_t t = 0; t < beta.size(); ++t) e = addmod(e, mulmod(to_residue(beta[t], N_), w_[t], N_), N_);
  ++count_;
  return label(e);
}

std::int64_t count_exponent_collisions(const KdGroupOracle& g, std::vector<Point2D> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<std::uint64_t> e;
  e.reserve(pts.size());
  for (auto [i, j] : pts) e.push_back(g.inner2(i, j));
  std::sort(e.begin(), e.end());
  std::int64_t pairs = 0, run = 1;
  for (std::size_t k = 1; k <= e.size(); ++k) {
    if (k < e.size() && e[k] == e[k - 1]) {
      ++run;
    } else {
      pairs += run * (run - 1) / 2;
      run = 1;
    }
  }
  return pairs;
}

}  // namespace lphs
