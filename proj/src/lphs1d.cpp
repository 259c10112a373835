#include "lphs/lphs1d.hpp"

#include <cmath>

namespace lphs {

namespace {

std::int64_t ceil_sqrt(std::int64_t v) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r < v) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= v) --r;
  return r;
}

}  // namespace

std::int64_t IrwSchedule::total() const noexcept {
  std::int64_t t = d0;
  for (const auto& s : stages) t += s.d;
  return t;
}

std::int64_t IrwSchedule::jump(int k) const noexcept {
  std::int64_t J = d0;
  for (int i = 1; i < k; ++i) J += stages[static_cast<std::size_t>(i - 1)].d * stages[static_cast<std::size_t>(i - 1)].L;
  return J;
}

std::int64_t IrwSchedule::reach() const noexcept {
  std::int64_t far = d0 - 1;
  for (int k = 1; k <= K(); ++k) {
    const auto& s = stages[static_cast<std::size_t>(k - 1)];
    far += jump(k) + (s.L - 1) * (s.d - 1);
  }
  return far + 1;
}

void IrwSchedule::validate() const {
  if (d0 < 1) throw std::domain_error("IrwSchedule: d0 must be positive");
  for (const auto& s : stages) {
    if (s.L < 2) throw std::domain_error("IrwSchedule: L_i must be at least 2");
    if (s.d < 1) throw std::domain_error("IrwSchedule: d_i must be positive");
  }
}

int IrwSchedule::default_stage_count(std::int64_t d) {
  if (d < 4) return 1;
  const double lglg = std::log2(std::log2(static_cast<double>(d)));
  return std::max(1, static_cast<int>(std::ceil(lglg - 1e-12)) - 1);
}

IrwSchedule IrwSchedule::with_walks(std::int64_t d0, std::int64_t walk_budget, int K) {
  if (d0 < 1 || walk_budget < 0 || K < 0) throw std::domain_error("IrwSchedule: bad budget split");
  IrwSchedule s;
  s.d0 = d0;
  if (K == 0 || walk_budget < K) {
    s.d0 += walk_budget;
    return s;
  }
  const std::int64_t di = walk_budget / K;
  s.d0 += walk_budget - K * di;
  std::int64_t L = std::max<std::int64_t>(2, ceil_sqrt(d0));
  for (int k = 0; k < K; ++k) {
    s.stages.push_back({L, di});
    L = std::max<std::int64_t>(2, ceil_sqrt(L * di));
  }
  return s;
}

IrwSchedule IrwSchedule::default_for(std::int64_t d) {
  if (d < 1) throw std::domain_error("IrwSchedule: budget must be positive");
  if (d < 5) return basic_only(d);
  const std::int64_t d0 = d / 5;
  return with_walks(d0, d - d0, default_stage_count(d));
}

std::int64_t irw_min_n_cyclic(std::int64_t d) { return 8 * d * d; }

std::int64_t irw_min_n_noncyclic(const IrwSchedule& s) { return 8 * s.reach(); }

IrwSchedule las_vegas_schedule(std::int64_t d) {
  return IrwSchedule::with_walks(d, d, std::max(1, IrwSchedule::default_stage_count(d) - 1));
}

}  // namespace lphs
