#include "lphs/lphs2d.hpp"

#include <cmath>

namespace lphs {

std::int64_t isqrt(std::int64_t v) {
  if (v <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

std::int64_t ipow_frac(std::int64_t v, int num, int den) {
  if (v <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::pow(static_cast<double>(v), static_cast<double>(num) / den));
  // exact correction: largest r with r^den <= v^num
  auto le = [&](std::int64_t c) {
    long double lhs = 1, rhs = 1;
    for (int k = 0; k < den; ++k) lhs *= static_cast<long double>(c);
    for (int k = 0; k < num; ++k) rhs *= static_cast<long double>(v);
    return lhs <= rhs;
  };
  while (r > 0 && !le(r)) --r;
  while (le(r + 1)) ++r;
  return r;
}

RecursiveBudget RecursiveBudget::for_budget(std::int64_t d) {
  const std::int64_t outer = ipow_frac(d, 2, 5);
  const std::int64_t inner = ipow_frac(d, 3, 5) - 2;
  if (outer < 1 || inner < 2) throw std::domain_error("recursive_hash: d too small");
  return {outer, inner, 10 * inner * inner};
}

RwHashPlan RwHashPlan::for_budget(std::int64_t d) {
  if (d < 16) throw std::domain_error("rw_hash: d too small");
  const double lglg = std::log2(std::log2(static_cast<double>(d)));
  RwHashPlan p;
  p.I = std::max(1, static_cast<int>(std::ceil(lglg - 1e-12)));
  p.dp = d / (p.I + 1);
  // exponents 1/4, 3/8, 7/16, ...: e_{k+1} = (e_k + 1/2) / 2, i.e. (2^{k+1} - 1) / 2^{k+2}
  for (int k = 0; k < p.I; ++k) {
    std::int64_t L;
    if (k == p.I - 1) {
      L = isqrt(p.dp / 2);
    } else {
      const int den = 1 << (k + 2);
      const int num = (1 << (k + 1)) - 1;
      L = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(p.dp), static_cast<double>(num) / den)));
    }
    p.L.push_back(std::max<std::int64_t>(1, L));
  }
  return p;
}

double meet_time_check(std::int64_t L, std::int64_t D, std::int64_t r, std::int64_t trials, const Seed& seed) {
  if (L < 1 || trials < 1) throw std::domain_error("meet_time_check: bad parameters");
  double sum = 0;
  const auto span = static_cast<std::uint64_t>(L + 1);
  for (std::int64_t t = 0; t < trials; ++t) {
    HashRng rng(seed.fork(static_cast<std::uint64_t>(t)));
    std::int64_t pos = D;
    std::int64_t T = 0;
    while (pos != 0 && T < r) {
      pos += static_cast<std::int64_t>(rng.below(span)) - static_cast<std::int64_t>(rng.below(span));
      ++T;
    }
    sum += static_cast<double>(T);
  }
  return sum / static_cast<double>(trials);
}

GeomsResult geoms_check(double p, std::int64_t r, std::int64_t trials, const Seed& seed) {
  if (p <= 0 || p > 1 || trials < 2) throw std::domain_error("geoms_check: bad parameters");
  double sum = 0, sum2 = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    HashRng rng(seed.fork(static_cast<std::uint64_t>(t)));
    std::int64_t total = 0, K = 0;
    while (total < r) {
      std::int64_t s = 1;  // Geom(p) on {1, 2, ...}
      while (rng.uniform() >= p) ++s;
      total += s;
      ++K;
    }
    sum += static_cast<double>(K);
    sum2 += static_cast<double>(K) * static_cast<double>(K);
  }
  const double n = static_cast<double>(trials);
  const double mean = sum / n;
  const double var = (sum2 - n * mean * mean) / (n - 1);
  return {mean, std::sqrt(var / n)};
}

}  // namespace lphs
