// Acceptance runner: `lphs_acceptance <1..18|all> [cache-dir]`.
// Prints one "criterion N: PASS|FAIL ..." line per criterion and exits 1 on any failure.
// Preset reports are cached as JSON in the cache directory so that criteria sharing a
// long run (e.g. the 2D scaling grids) compute it once; reports are deterministic in the seed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>

#include "lphs/ggm.hpp"
#include "lphs/harness.hpp"
#include "lphs/lphs1d.hpp"
#include "lphs/lphs2d.hpp"
#include "lphs/sketch.hpp"
#include "lphs/worstcase.hpp"

using namespace lphs;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

fs::path g_cache;
int g_threads = 1;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TrialReport from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  TrialReport r;
  for (const auto& o : j["rows"]) {
    Row row;
    row.algo = o["algo"];
    row.d = o["d"];
    row.n = o["n"];
    row.b = o["b"];
    row.shift = o["shift"];
    row.trials = o["trials"];
    row.failures = o["failures"];
    row.delta_hat = o["delta_hat"];
    row.ci_lo = o["ci_lo"];
    row.ci_hi = o["ci_hi"];
    if (o.contains("bots")) row.bots = o["bots"];
    if (o.contains("error")) row.error = o["error"].get<std::string>();
    r.rows.push_back(row);
  }
  return r;
}

/// Runs spec, or loads the report stored under key from an earlier run.
TrialReport run_cached(const std::string& key, ExperimentSpec spec) {
  spec.threads = g_threads;
  const auto file = g_cache / (key + "-t" + std::to_string(spec.trials) + "-s" + std::to_string(spec.master_seed) + ".json");
  if (!g_cache.empty() && fs::exists(file)) {
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
  }
  auto rep = run_experiment(spec);
  if (!g_cache.empty()) {
    fs::create_directories(g_cache);
    const auto tmp = file.string() + ".tmp";
    std::ofstream(tmp) << to_json(rep);
    fs::rename(tmp, file);
  }
  return rep;
}

TrialReport run_preset(const std::string& name) {
  const auto p = find_preset(name);
  if (!p) throw std::runtime_error("missing preset " + name);
  return run_cached(name, p->spec);
}

bool overlap(double lo1, double hi1, double lo2, double hi2) { return lo1 <= hi2 && lo2 <= hi1; }

/// Largest delta_hat over the shifts of each d (the quantity the slope fits use).
std::map<std::int64_t, double> per_d(const TrialReport& r) {
  std::map<std::int64_t, double> m;
  for (const auto& row : r.rows) m[row.d] = std::max(m[row.d], row.delta_hat);
  return m;
}

double binom_var(double p, double n) { return p * (1 - p) / n; }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict c1() {
  const auto t0 = std::chrono::steady_clock::now();
  auto spec = find_preset("basic-d100")->spec;
  spec.threads = g_threads;
  const auto row = run_experiment(spec).rows.at(0);
  const double secs = seconds_since(t0);
  const double target = 2.0 / 101, slack = 1.0 / static_cast<double>(row.n);
  const bool ok = row.ci_lo <= target + slack && row.ci_hi >= target - slack && secs < 60;
  return {ok, fmt("delta_hat=%.5f ci=[%.5f, %.5f] target=%.5f time=%.1fs", row.delta_hat, row.ci_lo, row.ci_hi, target, secs)};
}

Verdict c2() {
  const auto t0 = std::chrono::steady_clock::now();
  TrialReport all;
  std::string counts;
  for (int e = 6; e <= 12; ++e) {
    ExperimentSpec spec;
    spec.algo = Algo::irw;
    spec.points = {GridPoint{.d = std::int64_t{1} << e}};
    spec.trials = e <= 9 ? 100000 : (e == 10 ? 250000 : (e == 11 ? 750000 : 1500000));
    spec.master_seed = 200 + static_cast<std::uint64_t>(e);
    const auto rep = run_cached("irw-d" + std::to_string(spec.points[0].d), spec);
    all.rows.push_back(rep.rows.at(0));
    counts += fmt(" %lld:%llu/%llu", static_cast<long long>(spec.points[0].d), static_cast<unsigned long long>(rep.rows[0].failures),
                  static_cast<unsigned long long>(rep.rows[0].trials));
  }
  const auto fit = scaling_fit(all);
  const double secs = seconds_since(t0);
  const bool ok = fit.slope >= -2.3 && fit.slope <= -1.7 && secs <= 1800;
  return {ok, fmt("slope=%.3f+-%.3f (want [-2.3, -1.7]) time=%.0fs failures", fit.slope, fit.stderr_, secs) + counts};
}

Verdict c3() {
  const auto rep = run_preset("rw-bounded");
  const auto preset = find_preset("rw-bounded");
  const auto& pts = preset->spec.points;
  bool ok = true;
  std::string s;
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const double r = static_cast<double>(pts[k].shifts[0].r1);
    const double c = rep.rows[k].delta_hat * static_cast<double>(rep.rows[k].d) / std::sqrt(r);
    ok &= !rep.rows[k].error && c <= 8.0;
    s += fmt(" r=%g:C=%.3f", r, c);
  }
  return {ok, "delta*d/sqrt(r) <= 8:" + s};
}

Verdict c4() {
  bool ok = true;
  std::string s;
  for (const char* name : {"union-basic", "union-irw"}) {
    const auto rep = run_preset(name);
    const auto& one = rep.rows.at(0);
    const double T = static_cast<double>(one.trials);
    double worst = -1e9;
    for (std::size_t k = 0; k < rep.rows.size(); ++k) {
      const double r = static_cast<double>(k + 1);
      const double sigma = std::sqrt(binom_var(rep.rows[k].delta_hat, T) + r * r * 2.25 * binom_var(one.delta_hat, T));
      const double slack = 1.5 * r * one.delta_hat + 3 * sigma - rep.rows[k].delta_hat;
      ok &= slack >= 0;
      worst = k == 0 ? slack : std::min(worst, slack);
    }
    s += fmt(" %s: delta(1)=%.5f delta(10)=%.5f min margin=%.5f", name, one.delta_hat, rep.rows.back().delta_hat, worst);
  }
  return {ok, s};
}

Verdict c5() {
  const std::int64_t d = 512, n = 8 * d * d;
  const auto sched = IrwSchedule::default_for(d);
  const int b = default_symbol_bits(static_cast<std::uint64_t>(n));
  const std::uint64_t N = 100000;
  // counters: [0..16) residues mod 16, [16..18) mod 2, [18..21) mod 3, [21] unit-shift failure
  const auto c = count_trials_multi<22>(N, g_threads, [&](std::uint64_t t) {
    const Seed ts = trial_seed(500, 0, 0, t);
    const SymbolOracle x(ts.with_stream(1), n, b, Mode::cyclic);
    const ShiftedPair y(x, 1, ts.with_stream(2));
    const auto a = irw_lphs(x, sched, ts.fork(3)), bb = irw_lphs(y, sched, ts.fork(3));
    std::array<std::uint64_t, 22> out{};
    const std::int64_t v = wrap_index(*a.value, n);
    out[static_cast<std::size_t>(v % 16)] = 1;
    out[16 + static_cast<std::size_t>(v % 2)] = 1;
    out[18 + static_cast<std::size_t>(v % 3)] = 1;
    out[21] = wrap_index(*a.value - *bb.value - 1, n) != 0;
    return out;
  });
  const double delta = static_cast<double>(c[21]) / static_cast<double>(N);
  bool ok = true;
  std::string s = fmt("delta_hat=%.5f", delta);
  for (auto [m, off] : {std::pair{16, 0}, std::pair{2, 16}, std::pair{3, 18}}) {
    double dev = 0;
    for (int a = 0; a < m; ++a) dev = std::max(dev, std::abs(static_cast<double>(c[static_cast<std::size_t>(off + a)]) / N - 1.0 / m));
    const double bound = delta + 3 * std::sqrt(binom_var(1.0 / m, static_cast<double>(N)));
    ok &= dev <= bound;
    s += fmt(" m=%d: max dev=%.5f bound=%.5f", m, dev, bound);
  }
  return {ok, s};
}

Verdict slope_check(const char* preset, double lo, double hi) {
  const auto rep = run_preset(preset);
  const auto fit = scaling_fit(rep);
  std::string s = fmt("slope=%.3f+-%.3f (want [%.2f, %.2f]) delta:", fit.slope, fit.stderr_, lo, hi);
  for (auto [d, v] : per_d(rep)) s += fmt(" %lld:%.2e", static_cast<long long>(d), v);
  return {fit.slope >= lo && fit.slope <= hi, s};
}

Verdict c6() { return slope_check("minhash2d-scaling", -0.65, -0.35); }
Verdict c7() { return slope_check("recursive2d-scaling", -0.95, -0.65); }

Verdict c8() {
  const auto three = run_preset("threestage2d-scaling");
  const auto rec = run_preset("recursive2d-scaling");
  const auto fit = scaling_fit(three);
  bool ok = fit.slope <= -0.70;
  std::string s = fmt("slope=%.3f+-%.3f (want <= -0.70)", fit.slope, fit.stderr_);
  const auto a = per_d(three), b = per_d(rec);
  for (auto [d, v] : a) {
    if (d < 4096 || !b.contains(d)) continue;
    ok &= v < b.at(d);
    s += fmt(" d=%lld: %.2e vs %.2e", static_cast<long long>(d), v, b.at(d));
  }
  return {ok, s};
}

Verdict c9() {
  const auto rw = run_preset("rwhash2d-scaling");
  const auto three = run_preset("threestage2d-scaling");
  const auto fit = scaling_fit(rw);
  bool ok = true;
  std::string s = fmt("experimental; slope=%.3f+-%.3f", fit.slope, fit.stderr_);
  const auto a = per_d(rw), b = per_d(three);
  for (auto [d, v] : a) {
    if (!b.contains(d)) continue;
    ok &= v <= b.at(d);
    s += fmt(" d=%lld: %.2e vs %.2e", static_cast<long long>(d), v, b.at(d));
  }
  return {ok, s};
}

Verdict c10() {
  const std::int64_t d = 512, b_tile = 96;
  const double alpha = 0.3;
  const auto sched = IrwSchedule::default_for(d);
  ExperimentSpec avg;
  avg.algo = Algo::irw;
  avg.points = {GridPoint{.d = d}};
  avg.trials = 100000;
  avg.master_seed = 1000;
  const auto arow = run_cached("irw-avg-d512", avg).rows.at(0);
  const double delta_avg = arow.delta_hat;

  const std::int64_t prime_n = 2097169;
  if (!is_prime_u64(prime_n)) throw std::logic_error("biased corpus length must be prime");
  std::vector<std::pair<std::string, BitString>> corpora;
  corpora.emplace_back("biased0.25", biased_bits(Seed::from_u64(1001), prime_n, 0.25));
  corpora.emplace_back("lfsr22", lfsr_bits(22, lfsr_primitive_taps(22), (std::int64_t{1} << 22) - 1));
  corpora.emplace_back("markov0.6", markov_bits(Seed::from_u64(1002), std::int64_t{1} << 21, 0.6));

  bool ok = delta_avg > 0;
  std::string s = fmt("avg delta=%.2e", delta_avg);
  for (const auto& [name, x] : corpora) {
    const std::int64_t n = x.size();
    const auto good = check_goodness_cyclic(x, alpha);
    const auto x1 = cyclic_shift(x, 1);
    const int gamma_bits = default_symbol_bits(static_cast<std::uint64_t>(n));
    const std::uint64_t keys = 10000;
    const auto fails = count_trials(keys, g_threads, [&](std::uint64_t t) {
      const Seed ks = Seed::from_u64(1003).fork(t);
      const auto key = TilingKey::sample(ks, n, b_tile);
      const auto inner = [&](const auto& src) { return irw_lphs(src, sched, ks.fork(3)); };
      const auto a = worstcase_cyclic(x, key, gamma_bits, inner), b = worstcase_cyclic(x1, key, gamma_bits, inner);
      return wrap_index(*a.value - *b.value - 1, n) != 0;
    });
    const auto ci = wilson_interval(fails, keys);
    std::int64_t collisions = 0;
    for (std::uint64_t k = 0; k < 3; ++k) collisions += count_tile_collisions(x, TilingKey::sample(Seed::from_u64(1004).fork(k), n, b_tile));
    const bool within = ci.hi >= delta_avg / 4 && ci.lo <= 4 * delta_avg;
    ok &= good.is_good && within && collisions == 0;
    s += fmt(" | %s n=%lld good=%d (min dist %.3f) rate=%llu/%llu ci=[%.2e, %.2e] tile collisions=%lld", name.c_str(),
             static_cast<long long>(n), good.is_good, good.min_relative_distance, static_cast<unsigned long long>(fails),
             static_cast<unsigned long long>(keys), ci.lo, ci.hi, static_cast<long long>(collisions));
  }
  return {ok, s};
}

Verdict c11() {
  const std::uint64_t N = 101;
  const QueryMap qm(N, Seed::from_u64(1100));
  std::uint64_t mismatches = 0, equalities = 0;
  for (std::uint64_t v = 0; v < N; ++v) {
    const GroupOracle a(N, Seed::from_u64(1101), v, 64), b(N, Seed::from_u64(1101), (v + 1) % N, 64);
    for (std::uint64_t i = 1; i < N; ++i) {
      std::vector<std::uint64_t> gen(N), res(N);
      for (std::uint64_t jp = 0; jp < N; ++jp) {
        gen[jp] = b.answer(i, jp);
        res[jp] = b.answer(1, qm.map(i, jp));
      }
      for (std::uint64_t j = 0; j < N; ++j) {
        const std::uint64_t la = a.answer(i, j), ra = a.answer(1, qm.map(i, j));
        for (std::uint64_t jp = 0; jp < N; ++jp) {
          const bool general = la == gen[jp];
          mismatches += general != (ra == res[jp]);
          equalities += general;
        }
      }
    }
  }
  const int d = 10, seeds = 10000;
  int spurious = 0;
  for (int s = 0; s < seeds; ++s) {
    const Seed sd = Seed::from_u64(1102).fork(static_cast<std::uint64_t>(s));
    HashRng rng(sd.with_stream(9));
    const std::uint64_t v = rng.below(N);
    const QueryMap q(N, sd);
    const GroupOracle a(N, sd.with_stream(1), v, 64), b(N, sd.with_stream(1), (v + 1) % N, 64);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> qa, qb;
    for (int k = 0; k < d; ++k) {
      qa.emplace_back(rng.below(N), rng.below(N));
      qb.emplace_back(rng.below(N), rng.below(N));
    }
    bool any = false;
    for (auto [i, j] : qa)
      for (auto [ip, jp] : qb)
        if (i != ip) any |= a.answer(1, q.map(i, j)) == b.answer(1, q.map(ip, jp)) && a.answer(i, j) != b.answer(ip, jp);
    spurious += any;
  }
  const double rate = static_cast<double>(spurious) / seeds, bound = 3.0 * d * d / static_cast<double>(N);
  const bool ok = mismatches == 0 && equalities == N * (N - 1) * N && rate <= bound;
  return {ok, fmt("exhaustive mismatches=%llu equalities=%llu; spurious rate=%.4f bound=%.3f", static_cast<unsigned long long>(mismatches),
                  static_cast<unsigned long long>(equalities), rate, bound)};
}

Verdict c12() {
  const auto basic = run_preset("basic-d100").rows.at(0);
  const auto ddl = run_preset("ddl-basic").rows.at(0);
  const bool ok = overlap(basic.ci_lo, basic.ci_hi, ddl.ci_lo, ddl.ci_hi);
  return {ok, fmt("plain=%.5f [%.5f, %.5f] ddl=%.5f [%.5f, %.5f] N=%lld", basic.delta_hat, basic.ci_lo, basic.ci_hi, ddl.delta_hat, ddl.ci_lo,
                  ddl.ci_hi, static_cast<long long>(ddl.n))};
}

Verdict c13() {
  const auto kd = run_preset("kd-threestage2d").rows.at(0);
  ExperimentSpec plain;
  plain.algo = Algo::threestage2d;
  plain.points = {GridPoint{.d = 4096, .shifts = {{1, 0}}}};
  plain.trials = 100000;
  plain.master_seed = 1300;
  const auto pr = run_cached("threestage-d4096-x", plain).rows.at(0);

  const std::uint64_t N = (std::uint64_t{1} << 61) - 1;
  const std::uint64_t runs = 10000;
  const auto three = [](const auto& src) { return three_stage_hash(src, 4096); };
  const auto c = count_trials_multi<2>(runs, g_threads, [&](std::uint64_t t) {
    const Seed ts = Seed::from_u64(1301).fork(t);
    HashRng rng(ts.with_stream(4));
    const auto r = kd_ddl_pair(three, N, ts.with_stream(1), ts.with_stream(5), rng.below(N), 1, 0, 64);
    return std::array<std::uint64_t, 2>{static_cast<std::uint64_t>(r.collisions), r.detected ? 0U : 1U};
  });
  const bool ok = overlap(kd.ci_lo, kd.ci_hi, pr.ci_lo, pr.ci_hi) && c[0] == 0;
  return {ok, fmt("kd=%.2e [%.2e, %.2e] plain=%.2e [%.2e, %.2e]; collisions=%llu over %llu runs (misses %llu)", kd.delta_hat, kd.ci_lo,
                  kd.ci_hi, pr.delta_hat, pr.ci_lo, pr.ci_hi, static_cast<unsigned long long>(c[0]), static_cast<unsigned long long>(runs),
                  static_cast<unsigned long long>(c[1]))};
}

Verdict c14() {
  const std::int64_t n = std::int64_t{1} << 22, R = 64, d = 2048;
  const auto sched = IrwSchedule::default_for(d);
  const int b = default_symbol_bits(static_cast<std::uint64_t>(n));
  ExperimentSpec unit;
  unit.algo = Algo::irw;
  unit.points = {GridPoint{.d = d, .n = n, .mode = Mode::noncyclic}};
  unit.trials = 100000;
  unit.master_seed = 1400;
  const double delta1 = run_cached("irw-noncyclic-d2048-n2^22", unit).rows.at(0).delta_hat;

  const std::uint64_t trials = 100000;
  const auto fails = count_trials(trials, g_threads, [&](std::uint64_t t) {
    const Seed ts = Seed::from_u64(1401).fork(t);
    const std::int64_t s = static_cast<std::int64_t>(HashRng(ts).below(2 * R + 1)) - R;
    const SymbolOracle x(ts.with_stream(1), n, b, Mode::noncyclic);
    const ShiftedPair y(x, std::abs(s), ts.with_stream(2));
    const auto h = [&](const auto& src) { return irw_lphs(src, sched, ts.fork(3)); };
    const std::uint64_t id = ts.fork(3).key_lo;
    // A holds the unshifted string when s >= 0, B holds it when s < 0.
    const auto sa = s >= 0 ? make_sketch(x, R, h, id) : make_sketch(y, R, h, id);
    const auto sb = s >= 0 ? make_sketch(y, R, h, id) : make_sketch(x, R, h, id);
    return recover_shift(sa, sb) != s;
  });
  const double rate = static_cast<double>(fails) / static_cast<double>(trials);
  const ShiftSketch sample{77, R, 5};
  const auto compact = serialize_compact(sample);
  const int bits = payload_bits(R);
  const bool wire = bits == static_cast<int>(std::ceil(std::log2(2.0 * R + 1))) &&
                    compact.size() == kCompactHeaderSize + static_cast<std::size_t>((bits + 7) / 8) && deserialize_compact(compact) == sample &&
                    deserialize(serialize(sample)) == sample;
  const bool ok = rate <= 3.0 * R * delta1 && wire;
  return {ok, fmt("failure=%.2e bound 3*R*delta(1)=%.2e (delta(1)=%.2e); payload=%d bits, compact frame %zu bytes (header %zu)", rate,
                  3.0 * R * delta1, delta1, bits, compact.size(), kCompactHeaderSize)};
}

Verdict c15() {
  const auto preset = *find_preset("lasvegas-d512");
  const auto& p = preset.spec.points.at(0);
  const std::int64_t d = p.d, R = p.param;
  const auto sched = las_vegas_schedule(d);
  const auto n = default_length(Algo::las_vegas, d);
  const int b = default_symbol_bits(static_cast<std::uint64_t>(n));
  std::uint64_t defined = 0, correct = 0, bots = 0, evals = 0;
  std::string s;
  for (std::size_t si = 0; si < p.shifts.size(); ++si) {
    const std::int64_t r = p.shifts[si].r1;
    const auto c = count_trials_multi<3>(preset.spec.trials, g_threads, [&](std::uint64_t t) {
      const Seed ts = trial_seed(preset.spec.master_seed, 0, si, t);
      const SymbolOracle x(ts.with_stream(1), n, b, p.mode);
      const ShiftedPair y(x, r, ts.with_stream(2));
      const auto a = las_vegas_lphs(x, d, R, ts.fork(3), sched), bb = las_vegas_lphs(y, d, R, ts.fork(3), sched);
      const bool both = !a.bot && !bb.bot;
      const bool right = both && wrap_index(*a.value - *bb.value - r, n) == 0;
      return std::array<std::uint64_t, 3>{both ? 1U : 0U, right ? 1U : 0U, static_cast<std::uint64_t>(a.bot) + bb.bot};
    });
    defined += c[0];
    correct += c[1];
    bots += c[2];
    evals += 2 * preset.spec.trials;
    s += fmt(" r=%lld: bots=%llu", static_cast<long long>(r), static_cast<unsigned long long>(c[2]));
  }
  const double cond = static_cast<double>(correct) / static_cast<double>(defined);
  const double bot_rate = static_cast<double>(bots) / static_cast<double>(evals);
  const double bot_bound = 20.0 * static_cast<double>(R) / static_cast<double>(d * d);
  const bool ok = cond >= 0.999 && bot_rate <= bot_bound;
  return {ok, fmt("conditional correctness=%.5f (want >= 0.999); bot rate per evaluation=%.2e (bound %.2e);", cond, bot_rate, bot_bound) + s};
}

Verdict c16() {
  const std::int64_t n = std::int64_t{1} << 14, corpus_bits = std::int64_t{1} << 18, R = 8, c = 4;
  const int k = 64;
  const auto sched = IrwSchedule::default_for(256);
  if (sched.reach() + k + c * R >= n) throw std::logic_error("LSH window too short for the inner hash");
  const auto corpus = uniform_bits(Seed::from_u64(1600), corpus_bits);
  const auto hp = [&](const auto& src, const Seed& s) {
    const auto h = narrow_alphabet([&](const auto& w) { return irw_lphs(w, sched, s); }, k, s.fork(1));
    return h(src);
  };
  const std::uint64_t keys = 10000;
  const int pairs = 100;
  // per key: collisions at distance R and at distance cR; diff holds the per-key gap
  std::vector<double> diff(keys);
  const auto tot = count_trials_multi<2>(keys, g_threads, [&](std::uint64_t t) {
    const Seed ks = Seed::from_u64(1601).fork(t);
    const auto key = LshKey::sample(ks, n);
    HashRng rng(ks.with_stream(3));
    std::array<std::uint64_t, 2> out{};
    for (int q = 0; q < pairs; ++q) {
      const auto start = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(corpus_bits)));
      const CorpusWindow x(corpus, start, n), near(corpus, start + R, n), far(corpus, start + c * R, n);
      const int hx = lsh_hash(key, x, n, hp);
      out[0] += hx == lsh_hash(key, near, n, hp);
      out[1] += hx == lsh_hash(key, far, n, hp);
    }
    diff[t] = (static_cast<double>(out[0]) - static_cast<double>(out[1])) / pairs;
    return out;
  });
  const double total = static_cast<double>(keys) * pairs;
  const double p1 = static_cast<double>(tot[0]) / total, p2 = static_cast<double>(tot[1]) / total;
  double mean = 0, var = 0;
  for (double v : diff) mean += v;
  mean /= static_cast<double>(keys);
  for (double v : diff) var += (v - mean) * (v - mean);
  var /= static_cast<double>(keys - 1);
  const double z = mean / std::sqrt(var / static_cast<double>(keys));
  return {p1 > p2 && z >= 5, fmt("p1=%.5f p2=%.5f separation=%.1f sigma (key-clustered)", p1, p2, z)};
}

Verdict c17() {
  bool ok = true;
  int checked = 0;
  std::string bad;
  for (const auto& p : presets()) {
    auto spec = p.spec;
    spec.trials = is_2d(spec.algo) ? 40 : 2000;
    spec.threads = 1;
    const auto a = run_experiment(spec);
    spec.threads = 4;
    const auto b = run_experiment(spec);
    spec.threads = 3;
    const auto c = run_experiment(spec);
    const auto s = run_experiment_serial(spec);
    const bool same = to_csv(a) == to_csv(b) && to_csv(a) == to_csv(c) && to_csv(a) == to_csv(s) && to_json(a) == to_json(b);
    ok &= same;
    ++checked;
    if (!same) bad += " " + p.name;
  }
  return {ok, fmt("%d presets compared at 1, 3, 4 threads and serial", checked) + (bad.empty() ? "" : "; differing:" + bad)};
}

Verdict c18() {
  bool ok = true;
  std::string s = "geoms:";
  for (auto [p, r] : {std::pair{0.01, std::int64_t{100}}, std::pair{0.1, std::int64_t{50}}, std::pair{0.5, std::int64_t{20}}}) {
    const auto g = geoms_check(p, r, 100000, Seed::from_u64(1800).fork(static_cast<std::uint64_t>(r)));
    const double bound = static_cast<double>(r) * p + 1;
    ok &= g.mean <= bound + 3 * g.stderr_;
    s += fmt(" (p=%g,r=%lld) %.3f<=%.3f", p, static_cast<long long>(r), g.mean, bound);
  }
  const std::int64_t r = 10000, trials = 2000;
  std::vector<std::tuple<std::int64_t, std::int64_t, double>> pts;
  for (std::int64_t m : {1, 4, 16})
    for (std::int64_t I0 : {1, 16, 256}) {
      const double mean = meet_time_check(m, I0, r, trials, Seed::from_u64(1801).fork(static_cast<std::uint64_t>(m * 1000 + I0)));
      pts.emplace_back(m, I0, mean / ((static_cast<double>(m) + static_cast<double>(I0) / static_cast<double>(m)) * std::sqrt(static_cast<double>(r))));
    }
  double log_sum = 0;
  for (const auto& t : pts) log_sum += std::log(std::get<2>(t));
  const double C = std::exp(log_sum / static_cast<double>(pts.size()));
  s += fmt("; sparse walks fitted C=%.3f ratios:", C);
  for (auto [m, I0, ratio] : pts) {
    ok &= ratio <= 2 * C;
    s += fmt(" (%lld,%lld)=%.3f", static_cast<long long>(m), static_cast<long long>(I0), ratio);
  }
  s += " (each <= 2C)";
  return {ok, s};
}

const std::map<int, std::function<Verdict()>> kCriteria{
    {1, c1},   {2, c2},   {3, c3},   {4, c4},   {5, c5},   {6, c6},   {7, c7},   {8, c8},   {9, c9},
    {10, c10}, {11, c11}, {12, c12}, {13, c13}, {14, c14}, {15, c15}, {16, c16}, {17, c17}, {18, c18},
};

bool run_one(int k) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = kCriteria.at(k)();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  std::cout << "criterion " << k << ": " << (v.pass ? "PASS" : "FAIL") << "  " << v.detail << fmt("  [%.1fs]", seconds_since(t0)) << std::endl;
  return v.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: lphs_acceptance <1..18|all> [cache-dir]\n";
    return 2;
  }
  if (argc >= 3) g_cache = argv[2];
  g_threads = default_threads();
  const std::string which = argv[1];
  if (which == "all") {
    bool ok = true;
    for (const auto& [k, fn] : kCriteria) ok &= run_one(k);
    return ok ? 0 : 1;
  }
  int k = 0;
  try {
    k = std::stoi(which);
  } catch (const std::exception&) {
    k = 0;
  }
  if (!kCriteria.contains(k)) {
    std::cerr << "unknown criterion " << which << "\n";
    return 2;
  }
  return run_one(k) ? 0 : 1;
}
