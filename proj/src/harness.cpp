#include "lphs/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "lphs/ggm.hpp"
#include "lphs/lphs1d.hpp"
#include "lphs/lphs2d.hpp"

namespace lphs {

Interval wilson_interval(std::uint64_t failures, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(failures) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

SlopeFit fit_slope(const std::vector<FitPoint>& points, std::optional<std::uint64_t> trials_for_warning) {
  SlopeFit fit;
  std::vector<FitPoint> used;
  for (const auto& p : points) {
    if (p.delta > 0 && p.d > 0 && p.weight > 0) {
      used.push_back(p);
      continue;
    }
    std::ostringstream w;
    w << "dropped d=" << p.d << " (delta_hat=0";
    if (trials_for_warning) w << ", rule-of-three bound " << 3.0 / static_cast<double>(*trials_for_warning);
    w << ")";
    fit.warnings.push_back(w.str());
  }
  if (used.size() < 4) throw std::domain_error("fit_slope: fewer than 4 usable points");
  double sw = 0, sx = 0, sy = 0;
  for (const auto& p : used) {
    sw += p.weight;
    sx += p.weight * std::log(p.d);
    sy += p.weight * std::log(p.delta);
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (const auto& p : used) {
    const double dx = std::log(p.d) - mx;
    sxx += p.weight * dx * dx;
    sxy += p.weight * dx * (std::log(p.delta) - my);
  }
  if (sxx <= 0) throw std::domain_error("fit_slope: all points share one d");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (const auto& p : used) {
    const double r = std::log(p.delta) - (fit.intercept + fit.slope * std::log(p.d));
    rss += p.weight * r * r;
  }
  const double dof = static_cast<double>(used.size()) - 2.0;
  fit.stderr_ = std::sqrt(rss / dof / sxx);
  fit.points_used = static_cast<int>(used.size());
  return fit;
}

int default_threads() {
  if (const char* env = std::getenv("LPHS_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return omp_get_max_threads();
}

namespace {

struct AlgoName {
  Algo algo;
  const char* name;
};

constexpr AlgoName kAlgoNames[] = {
    {Algo::basic, "basic"},
    {Algo::irw, "irw"},
    {Algo::rw, "rw"},
    {Algo::cyclic_rw, "cyclic-rw"},
    {Algo::las_vegas, "las-vegas"},
    {Algo::ddl_basic, "ddl-basic"},
    {Algo::ddl_irw, "ddl-irw"},
    {Algo::minhash2d, "minhash2d"},
    {Algo::recursive2d, "recursive2d"},
    {Algo::threestage2d, "threestage2d"},
    {Algo::rwhash2d, "rwhash2d"},
    {Algo::kd_threestage2d, "kd-threestage2d"},
};

std::int64_t next_pow2(std::int64_t v) { return static_cast<std::int64_t>(std::bit_ceil(static_cast<std::uint64_t>(v))); }

std::uint64_t next_prime(std::uint64_t v) {
  while (!is_prime_u64(v)) ++v;
  return v;
}

constexpr std::uint64_t kKdOrder = (std::uint64_t{1} << 61) - 1;

}  // namespace

std::string to_string(Algo a) {
  for (const auto& e : kAlgoNames)
    if (e.algo == a) return e.name;
  return "?";
}

Algo parse_algo(const std::string& s) {
  for (const auto& e : kAlgoNames)
    if (s == e.name) return e.algo;
  throw std::invalid_argument("unknown algorithm: " + s);
}

std::vector<std::string> algo_names() {
  std::vector<std::string> out;
  for (const auto& e : kAlgoNames) out.emplace_back(e.name);
  return out;
}

bool is_2d(Algo a) {
  return a == Algo::minhash2d || a == Algo::recursive2d || a == Algo::threestage2d || a == Algo::rwhash2d ||
         a == Algo::kd_threestage2d;
}

std::string Shift::label(bool two_d) const {
  return two_d ? std::to_string(r1) + ":" + std::to_string(r2) : std::to_string(r1);
}

std::int64_t default_length(Algo a, std::int64_t d) {
  switch (a) {
    case Algo::basic:
    case Algo::rw:
      return std::int64_t{1} << 20;
    case Algo::irw:
    case Algo::las_vegas:
      return irw_min_n_cyclic(d);
    case Algo::cyclic_rw:
      return std::int64_t{1} << 14;
    case Algo::ddl_basic:
      return (std::int64_t{1} << 20) + 7;
    case Algo::ddl_irw:
      return static_cast<std::int64_t>(next_prime(static_cast<std::uint64_t>(irw_min_n_cyclic(d))));
    case Algo::minhash2d:
    case Algo::threestage2d:
    case Algo::rwhash2d:
      return next_pow2(4 * d);
    case Algo::recursive2d:
      return next_pow2(std::max<std::int64_t>(16 * ipow_frac(d, 6, 5), 16));
    case Algo::kd_threestage2d:
      return static_cast<std::int64_t>(kKdOrder);
  }
  return 0;
}

Seed trial_seed(std::uint64_t master, std::size_t point, std::size_t shift, std::uint64_t trial) {
  return Seed::from_u64(master).fork(point).fork(shift).fork(trial);
}

namespace {

struct Resolved {
  std::int64_t n;
  int b;
};

Resolved resolve(Algo a, const GridPoint& p) {
  const std::int64_t n = p.n > 0 ? p.n : default_length(a, p.d);
  int b = p.b;
  if (b == 0) {
    if (a == Algo::kd_threestage2d) b = 64;
    else if (is_2d(a)) b = default_symbol_bits(static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n));
    else b = default_symbol_bits(static_cast<std::uint64_t>(n));
  }
  return {n, b};
}

bool mismatch_1d(const HashOutcome1D& a, const HashOutcome1D& b, std::int64_t r, std::int64_t n, Mode mode) {
  if (!a.value || !b.value) return true;
  const std::int64_t diff = *a.value - *b.value - r;
  return mode == Mode::cyclic ? wrap_index(diff, n) != 0 : diff != 0;
}

bool mismatch_2d(const HashOutcome2D& a, const HashOutcome2D& b, const Shift& s, std::int64_t n, Mode mode) {
  const std::int64_t di = a.i - b.i - s.r1, dj = a.j - b.j - s.r2;
  if (mode == Mode::cyclic) return wrap_index(di, n) != 0 || wrap_index(dj, n) != 0;
  return di != 0 || dj != 0;
}

template <class H>
bool pair_1d(const SymbolOracle& x, const Shift& s, const Seed& ts, const H& h, int* bot_evals) {
  const ShiftedPair y(x, s.r1, ts.with_stream(2));
  const auto a = h(x);
  const auto b = h(y);
  if (bot_evals) *bot_evals = (a.bot ? 1 : 0) + (b.bot ? 1 : 0);
  return mismatch_1d(a, b, s.r1, x.size(), x.mode());
}

template <class H>
bool pair_2d(const SymbolOracle2D& z, const Shift& s, const Seed& ts, const H& h) {
  const ShiftedPair2D y(z, s.r1, s.r2, ts.with_stream(2));
  return mismatch_2d(h(z), h(y), s, z.size(), z.mode());
}

template <class H>
bool pair_ddl(std::uint64_t N, int b, const Shift& s, const Seed& ts, const H& h) {
  HashRng rng(ts.with_stream(4));
  const std::uint64_t v = rng.below(N);
  const GroupOracle ga(N, ts.with_stream(1), v, b);
  const GroupOracle gb(N, ts.with_stream(1), addmod(v, to_residue(s.r1, N), N), b);
  return mismatch_1d(ddl_from_lphs(h, ga), ddl_from_lphs(h, gb), s.r1, static_cast<std::int64_t>(N), Mode::cyclic);
}

}  // namespace

bool run_trial(Algo a, const GridPoint& p, const Shift& s, const Seed& ts, int* bot_evals) {
  const auto [n, b] = resolve(a, p);
  const Seed hs = ts.fork(3);  // shared randomness of the hash
  if (bot_evals) *bot_evals = 0;
  if (!is_2d(a) && s.r2 != 0) throw std::domain_error("run_trial: 1D algorithms take a single shift");
  switch (a) {
    case Algo::basic: {
      const SymbolOracle x(ts.with_stream(1), n, b, p.mode);
      return pair_1d(x, s, ts, [&](const auto& src) { return basic_lphs(src, p.d); }, bot_evals);
    }
    case Algo::irw: {
      const SymbolOracle x(ts.with_stream(1), n, b, p.mode);
      const auto sched = IrwSchedule::default_for(p.d);
      return pair_1d(x, s, ts, [&](const auto& src) { return irw_lphs(src, sched, hs); }, bot_evals);
    }
    case Algo::rw: {
      const SymbolOracle x(ts.with_stream(1), n, b, p.mode);
      std::int64_t L = p.param;
      if (L == 0)
        while (L * L < p.d) ++L;
      return pair_1d(x, s, ts, [&](const auto& src) { return rw_lphs(src, L, p.d, 0, hs); }, bot_evals);
    }
    case Algo::cyclic_rw: {
      const SymbolOracle x(ts.with_stream(1), n, b, Mode::cyclic);
      const int m = p.param > 0 ? static_cast<int>(p.param) : 16;
      return pair_1d(x, s, ts, [&](const auto& src) { return cyclic_rw_lphs(src, n, m, hs); }, bot_evals);
    }
    case Algo::las_vegas: {
      const SymbolOracle x(ts.with_stream(1), n, b, p.mode);
      const std::int64_t R = p.param > 0 ? p.param : 32;
      if (s.r1 < 0 || s.r1 > R) throw std::domain_error("las_vegas: shift exceeds the bound");
      const auto sched = las_vegas_schedule(p.d);
      return pair_1d(x, s, ts, [&](const auto& src) { return las_vegas_lphs(src, p.d, R, hs, sched); }, bot_evals);
    }
    case Algo::ddl_basic:
      return pair_ddl(static_cast<std::uint64_t>(n), b, s, ts, [&](const auto& src) { return basic_lphs(src, p.d); });
    case Algo::ddl_irw: {
      const auto sched = IrwSchedule::default_for(p.d);
      return pair_ddl(static_cast<std::uint64_t>(n), b, s, ts, [&](const auto& src) { return irw_lphs(src, sched, hs); });
    }
    case Algo::minhash2d: {
      const SymbolOracle2D z(ts.with_stream(1), n, b, p.mode);
      return pair_2d(z, s, ts, [&](const auto& src) { return minhash_2d(src, p.d); });
    }
    case Algo::recursive2d: {
      const SymbolOracle2D z(ts.with_stream(1), n, b, p.mode);
      return pair_2d(z, s, ts, [&](const auto& src) { return recursive_hash(src, p.d, hs); });
    }
    case Algo::threestage2d: {
      const SymbolOracle2D z(ts.with_stream(1), n, b, p.mode);
      return pair_2d(z, s, ts, [&](const auto& src) { return three_stage_hash(src, p.d); });
    }
    case Algo::rwhash2d: {
      const SymbolOracle2D z(ts.with_stream(1), n, b, p.mode);
      return pair_2d(z, s, ts, [&](const auto& src) { return rw_hash(src, p.d, hs); });
    }
    case Algo::kd_threestage2d: {
      HashRng rng(ts.with_stream(4));
      const auto N = static_cast<std::uint64_t>(n);
      const auto res = kd_ddl_pair([&](const auto& src) { return three_stage_hash(src, p.d); }, N, ts.with_stream(1),
                                   ts.with_stream(5), rng.below(N), s.r1, s.r2, b, false);
      return !res.detected;
    }
  }
  throw std::logic_error("run_trial: unhandled algorithm");
}

namespace {

TrialReport run_impl(const ExperimentSpec& spec, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  TrialReport rep;
  const bool two_d = is_2d(spec.algo);
  for (std::size_t pi = 0; pi < spec.points.size(); ++pi) {
    const auto& p = spec.points[pi];
    for (std::size_t si = 0; si < p.shifts.size(); ++si) {
      const auto& s = p.shifts[si];
      Row row;
      row.algo = to_string(spec.algo);
      row.d = p.d;
      row.shift = s.label(two_d);
      row.trials = spec.trials;
      try {
        const auto r = resolve(spec.algo, p);
        row.n = r.n;
        row.b = r.b;
        run_trial(spec.algo, p, s, trial_seed(spec.master_seed, pi, si, 0));  // surfaces precondition errors
      } catch (const std::exception& e) {
        row.error = e.what();
        rep.rows.push_back(row);
        continue;
      }
      std::atomic<bool> failed{false};
      std::mutex msg_mutex;
      std::string msg;
      const auto counts = count_trials_multi<2>(spec.trials, threads, [&](std::uint64_t t) -> std::array<std::uint64_t, 2> {
        if (failed.load(std::memory_order_relaxed)) return {0, 0};
        try {
          int bots = 0;
          const bool f = run_trial(spec.algo, p, s, trial_seed(spec.master_seed, pi, si, t), &bots);
          return {f ? 1U : 0U, static_cast<std::uint64_t>(bots)};
        } catch (const std::exception& e) {
          std::lock_guard lock(msg_mutex);
          if (!failed.exchange(true)) msg = e.what();
          return {0, 0};
        }
      });
      if (failed) {
        row.error = msg;
      } else {
        row.failures = counts[0];
        row.bots = counts[1];
        row.delta_hat = static_cast<double>(row.failures) / static_cast<double>(row.trials);
        const auto ci = wilson_interval(row.failures, row.trials);
        row.ci_lo = ci.lo;
        row.ci_hi = ci.hi;
      }
      rep.rows.push_back(row);
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace

TrialReport run_experiment(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw std::domain_error("run_experiment: trials must be positive");
  return run_impl(spec, std::max(1, spec.threads));
}

TrialReport run_experiment_serial(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw std::domain_error("run_experiment: trials must be positive");
  return run_impl(spec, 1);
}

bool TrialReport::has_errors() const {
  return std::any_of(rows.begin(), rows.end(), [](const Row& r) { return r.error.has_value(); });
}

SlopeFit scaling_fit(const TrialReport& r) {
  std::vector<FitPoint> pts;
  std::optional<std::uint64_t> trials;
  for (const auto& row : r.rows) {
    if (row.error) continue;
    const bool unit = row.shift == "1" || row.shift == "1:0" || row.shift == "0:1";
    if (!unit) continue;
    trials = row.trials;
    const double w = row.failures > 0 ? 1.0 / (std::log(row.ci_hi) - std::log(row.ci_lo)) : 1.0;
    auto it = std::find_if(pts.begin(), pts.end(), [&](const FitPoint& p) { return p.d == static_cast<double>(row.d); });
    if (it == pts.end()) {
      pts.push_back({static_cast<double>(row.d), row.delta_hat, w});
    } else if (row.delta_hat > it->delta) {
      it->delta = row.delta_hat;
      it->weight = w;
    }
  }
  return fit_slope(pts, trials);
}

void write_csv(std::ostream& os, const TrialReport& r) {
  os << kCsvHeader << '\n';
  os << std::setprecision(10);
  for (const auto& row : r.rows) {
    if (row.error) continue;
    os << row.algo << ',' << row.d << ',' << row.n << ',' << row.b << ',' << row.shift << ',' << row.trials << ','
       << row.failures << ',' << row.delta_hat << ',' << row.ci_lo << ',' << row.ci_hi << '\n';
  }
}

std::string to_csv(const TrialReport& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

std::string to_json(const TrialReport& r) {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json o{{"algo", row.algo},       {"d", row.d},         {"n", row.n},
                     {"b", row.b},             {"shift", row.shift}, {"trials", row.trials},
                     {"failures", row.failures}, {"delta_hat", row.delta_hat}, {"ci_lo", row.ci_lo},
                     {"ci_hi", row.ci_hi}};
    if (row.algo == to_string(Algo::las_vegas)) o["bots"] = row.bots;
    if (row.error) o["error"] = *row.error;
    j["rows"].push_back(o);
  }
  if (r.slope) {
    j["slope"] = {{"slope", r.slope->slope},
                  {"stderr", r.slope->stderr_},
                  {"points", r.slope->points_used},
                  {"warnings", r.slope->warnings}};
  }
  return j.dump(2);
}

namespace {

std::vector<GridPoint> pow2_grid(int lo, int hi, const std::vector<Shift>& shifts) {
  std::vector<GridPoint> g;
  for (int e = lo; e <= hi; ++e) {
    GridPoint p;
    p.d = std::int64_t{1} << e;
    p.shifts = shifts;
    g.push_back(p);
  }
  return g;
}

const std::vector<Shift> kUnit2d{{0, 0}, {0, 1}, {1, 0}, {1, 1}};

std::vector<Preset> make_presets() {
  std::vector<Preset> v;
  {
    Preset p{"basic-d100", "Basic, d=100, n=2^20, b=64, unit shift", {}, false};
    p.spec.algo = Algo::basic;
    p.spec.points = {GridPoint{100, std::int64_t{1} << 20, 64}};
    p.spec.trials = 100000;
    v.push_back(p);
  }
  {
    Preset p{"irw-scaling", "IRW, d=2^6..2^12, n=8d^2, unit shift", {}, true};
    p.spec.algo = Algo::irw;
    p.spec.points = pow2_grid(6, 12, {Shift{}});
    p.spec.trials = 100000;
    v.push_back(p);
  }
  {
    Preset p{"rw-bounded", "single walk, r in {64, 256, 1024}, L=ceil(sqrt r), d=16 sqrt r", {}, false};
    p.spec.algo = Algo::rw;
    for (std::int64_t r : {64, 256, 1024}) {
      std::int64_t L = 1;
      while (L * L < r) ++L;
      GridPoint g;
      g.d = 16 * L;
      g.param = L;
      g.shifts = {Shift{r, 0}};
      p.spec.points.push_back(g);
    }
    p.spec.trials = 100000;
    v.push_back(p);
  }
  for (auto [name, algo, d] : {std::tuple{"union-basic", Algo::basic, 100}, std::tuple{"union-irw", Algo::irw, 256}}) {
    Preset p{name, "shifts r=1..10", {}, false};
    p.spec.algo = algo;
    GridPoint g;
    g.d = d;
    g.shifts.clear();
    for (std::int64_t r = 1; r <= 10; ++r) g.shifts.push_back({r, 0});
    p.spec.points = {g};
    p.spec.trials = 100000;
    v.push_back(p);
  }
  {
    Preset p{"lasvegas-d512", "Las Vegas, d=512, R=32, shifts 1, 16, 32", {}, false};
    p.spec.algo = Algo::las_vegas;
    GridPoint g;
    g.d = 512;
    g.param = 32;
    g.shifts = {{1, 0}, {16, 0}, {32, 0}};
    p.spec.points = {g};
    p.spec.trials = 100000;
    v.push_back(p);
  }
  {
    Preset p{"cyclic-rw", "cyclic relabel-and-jump walk, n=2^14, m in {1,2,4,8,16}", {}, false};
    p.spec.algo = Algo::cyclic_rw;
    for (int m : {1, 2, 4, 8, 16}) {
      GridPoint g;
      g.d = 128 * m;
      g.param = m;
      p.spec.points.push_back(g);
    }
    p.spec.trials = 10000;
    v.push_back(p);
  }
  {
    Preset p{"ddl-basic", "Basic over the restricted group oracle, N=2^20+7, d=100", {}, false};
    p.spec.algo = Algo::ddl_basic;
    p.spec.points = {GridPoint{100}};
    p.spec.trials = 100000;
    v.push_back(p);
  }
  {
    Preset p{"minhash2d-scaling", "2D min-hash, d=2^8..2^16", {}, true};
    p.spec.algo = Algo::minhash2d;
    p.spec.points = pow2_grid(8, 16, kUnit2d);
    p.spec.trials = 20000;
    v.push_back(p);
  }
  {
    Preset p{"recursive2d-scaling", "recursive hash, d=2^10..2^16", {}, true};
    p.spec.algo = Algo::recursive2d;
    p.spec.points = pow2_grid(10, 16, kUnit2d);
    p.spec.trials = 20000;
    v.push_back(p);
  }
  {
    Preset p{"threestage2d-scaling", "three-stage hash, d=2^10..2^16", {}, true};
    p.spec.algo = Algo::threestage2d;
    p.spec.points = pow2_grid(10, 16, kUnit2d);
    p.spec.trials = 20000;
    v.push_back(p);
  }
  {
    Preset p{"rwhash2d-scaling", "2D random-walk hash, d=2^10..2^14", {}, true};
    p.spec.algo = Algo::rwhash2d;
    p.spec.points = pow2_grid(10, 14, kUnit2d);
    p.spec.trials = 10000;
    v.push_back(p);
  }
  {
    Preset p{"kd-threestage2d", "three-stage hash over the 2-generator group oracle, N=2^61-1, d=2^12", {}, false};
    p.spec.algo = Algo::kd_threestage2d;
    p.spec.points = {GridPoint{4096}};
    p.spec.points[0].shifts = {{1, 0}};
    p.spec.trials = 100000;
    v.push_back(p);
  }
  return v;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = make_presets();
  return all;
}

std::optional<Preset> find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  return std::nullopt;
}

}  // namespace lphs
