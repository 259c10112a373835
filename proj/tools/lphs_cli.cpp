#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lphs/harness.hpp"
#include "lphs/lphs1d.hpp"
#include "lphs/sketch.hpp"
#include "lphs/worstcase.hpp"

namespace {

using namespace lphs;

struct Globals {
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> trials;
  std::optional<int> threads;
  std::string csv_path;
  bool json = false;
};

Shift parse_shift(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {std::stoll(s), 0};
  return {std::stoll(s.substr(0, colon)), std::stoll(s.substr(colon + 1))};
}

int emit(const Globals& g, TrialReport rep, bool fit) {
  if (fit) {
    try {
      rep.slope = scaling_fit(rep);
    } catch (const std::exception& e) {
      std::cerr << "slope: " << e.what() << '\n';
    }
  }
  if (!g.csv_path.empty()) {
    std::ofstream out(g.csv_path);
    write_csv(out, rep);
  }
  if (g.json) std::cout << to_json(rep) << '\n';
  else write_csv(std::cout, rep);
  if (rep.slope) {
    std::cerr << "slope " << rep.slope->slope << " +- " << rep.slope->stderr_ << " over " << rep.slope->points_used
              << " points\n";
    for (const auto& w : rep.slope->warnings) std::cerr << "warning: " << w << '\n';
  }
  for (const auto& r : rep.rows)
    if (r.error) std::cerr << "error: " << r.algo << " d=" << r.d << " shift=" << r.shift << ": " << *r.error << '\n';
  return rep.has_errors() ? 1 : 0;
}

ExperimentSpec with_globals(ExperimentSpec spec, const Globals& g) {
  spec.master_seed = g.seed;
  if (g.trials) spec.trials = *g.trials;
  spec.threads = g.threads ? *g.threads : default_threads();
  return spec;
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locality-preserving hashing for shifts: experiments and tools"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--trials", g.trials, "trials per grid point");
  app.add_option("--threads", g.threads, "worker threads (default: LPHS_THREADS or all cores)");
  app.add_option("--csv", g.csv_path, "also write the CSV report to this path");
  app.add_flag("--json", g.json, "print a JSON report instead of CSV");

  // estimate
  auto* est = app.add_subcommand("estimate", "one algorithm at one grid point");
  std::string algo_name;
  GridPoint point;
  std::vector<std::string> shift_args;
  bool noncyclic = false;
  est->add_option("--algo", algo_name)->required()->check(CLI::IsMember(algo_names()));
  est->add_option("--d", point.d)->required()->check(CLI::PositiveNumber);
  est->add_option("--n", point.n, "string length (default depends on the algorithm)");
  est->add_option("--b", point.b, "symbol bits")->check(CLI::Range(0, 64));
  est->add_option("--param", point.param, "rw: L, cyclic-rw: rounds, las-vegas: R");
  est->add_option("--shift", shift_args, "r or r1:r2, repeatable");
  est->add_flag("--noncyclic", noncyclic);

  // scaling
  auto* scl = app.add_subcommand("scaling", "grid of powers of two and a log-log slope");
  std::string scl_algo;
  int e_lo = 6, e_hi = 12;
  scl->add_option("--algo", scl_algo)->required()->check(CLI::IsMember(algo_names()));
  scl->add_option("--min-exp", e_lo, "smallest d = 2^min-exp");
  scl->add_option("--max-exp", e_hi, "largest d = 2^max-exp");

  // sketch
  auto* sk = app.add_subcommand("sketch", "encode two sketches of a shifted pair and recover the shift");
  std::int64_t sk_n = std::int64_t{1} << 22, sk_R = 64, sk_d = 2048, sk_shift = 5;
  std::string out_a, out_b;
  std::vector<std::string> decode;
  sk->add_option("--n", sk_n);
  sk->add_option("--R", sk_R)->check(CLI::NonNegativeNumber);
  sk->add_option("--d", sk_d)->check(CLI::PositiveNumber);
  sk->add_option("--shift", sk_shift, "signed shift in [-R, R]");
  sk->add_option("--out-a", out_a, "write party A's frame here");
  sk->add_option("--out-b", out_b, "write party B's frame here");
  sk->add_option("--decode", decode, "recover from two frame files instead")->expected(2);

  // ddl
  auto* ddl = app.add_subcommand("ddl", "distributed discrete log through the generic group simulator");
  std::string ddl_kind = "basic";
  std::int64_t ddl_d = 100;
  ddl->add_option("--kind", ddl_kind)->check(CLI::IsMember({"basic", "irw", "kd"}));
  ddl->add_option("--d", ddl_d)->check(CLI::PositiveNumber);

  // goodness
  auto* good = app.add_subcommand("goodness", "check corpus files for goodness");
  std::vector<std::string> files;
  double alpha = 0.3;
  std::int64_t window = 0;
  std::string generate;
  std::int64_t gen_n = 4096;
  good->add_option("files", files, "raw binary corpus files");
  good->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
  good->add_option("--W", window, "window length; 0 checks cyclic shifts");
  good->add_option("--generate", generate, "write a corpus to the single file argument first")
      ->check(CLI::IsMember({"uniform", "biased", "lfsr", "markov"}));
  good->add_option("--length", gen_n, "generated corpus length in bits (multiple of 8)");

  // preset
  auto* pre = app.add_subcommand("preset", "named acceptance run");
  std::string preset_name;
  bool list = false;
  pre->add_option("name", preset_name);
  pre->add_flag("--list", list);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*est) {
      ExperimentSpec spec;
      spec.algo = parse_algo(algo_name);
      point.mode = noncyclic ? Mode::noncyclic : Mode::cyclic;
      if (!shift_args.empty()) {
        point.shifts.clear();
        for (const auto& s : shift_args) point.shifts.push_back(parse_shift(s));
      } else if (is_2d(spec.algo)) {
        point.shifts = {{0, 1}, {1, 0}};
      }
      spec.points = {point};
      return emit(g, run_experiment(with_globals(spec, g)), false);
    }
    if (*scl) {
      if (e_lo < 0 || e_hi > 24 || e_hi - e_lo < 3) {
        std::cerr << "scaling needs at least 4 exponents within [0, 24]\n";
        return 2;
      }
      ExperimentSpec spec;
      spec.algo = parse_algo(scl_algo);
      for (int e = e_lo; e <= e_hi; ++e) {
        GridPoint p;
        p.d = std::int64_t{1} << e;
        if (is_2d(spec.algo)) p.shifts = {{0, 1}, {1, 0}};
        spec.points.push_back(p);
      }
      return emit(g, run_experiment(with_globals(spec, g)), true);
    }
    if (*sk) {
      if (decode.size() == 2) {
        const auto a = deserialize(read_bytes(decode[0]));
        const auto b = deserialize(read_bytes(decode[1]));
        std::cout << "shift=" << recover_shift(a, b) << '\n';
        return 0;
      }
      if (sk_shift < -sk_R || sk_shift > sk_R) {
        std::cerr << "--shift must lie in [-R, R]\n";
        return 2;
      }
      const Seed s = Seed::from_u64(g.seed);
      const SymbolOracle base(s.with_stream(1), sk_n, default_symbol_bits(static_cast<std::uint64_t>(sk_n)), Mode::noncyclic);
      const ShiftedPair moved(base, std::abs(sk_shift), s.with_stream(2));
      const auto sched = IrwSchedule::default_for(sk_d);
      const auto h = [&](const auto& src) { return irw_lphs(src, sched, s.fork(3)); };
      const std::uint64_t scheme = s.fork(3).key_lo;
      const ShiftSketch a = sk_shift >= 0 ? make_sketch(base, sk_R, h, scheme) : make_sketch(moved, sk_R, h, scheme);
      const ShiftSketch b = sk_shift >= 0 ? make_sketch(moved, sk_R, h, scheme) : make_sketch(base, sk_R, h, scheme);
      const auto fa = serialize(a), fb = serialize(b);
      if (!out_a.empty()) write_bytes(out_a, fa);
      if (!out_b.empty()) write_bytes(out_b, fb);
      const auto s_hat = recover_shift(deserialize(fa), deserialize(fb));
      std::cout << "payload_bits=" << payload_bits(sk_R) << " frame_bytes=" << fa.size()
                << " compact_bytes=" << serialize_compact(a).size() << " shift=" << sk_shift << " recovered=" << s_hat
                << '\n';
      return 0;
    }
    if (*ddl) {
      ExperimentSpec spec;
      GridPoint p;
      p.d = ddl_d;
      if (ddl_kind == "basic") spec.algo = Algo::ddl_basic;
      else if (ddl_kind == "irw") spec.algo = Algo::ddl_irw;
      else {
        spec.algo = Algo::kd_threestage2d;
        p.shifts = {{1, 0}, {0, 1}};
      }
      spec.points = {p};
      return emit(g, run_experiment(with_globals(spec, g)), false);
    }
    if (*good) {
      if (!generate.empty()) {
        if (files.size() != 1) {
          std::cerr << "--generate takes exactly one output file\n";
          return 2;
        }
        const Seed s = Seed::from_u64(g.seed);
        BitString x;
        if (generate == "uniform") x = uniform_bits(s, gen_n);
        else if (generate == "biased") x = biased_bits(s, gen_n, 0.25);
        else if (generate == "markov") x = markov_bits(s, gen_n, 0.6);
        else x = lfsr_bits(16, lfsr_primitive_taps(16), gen_n);
        x.write_file(files[0]);
      }
      std::ostream* out = &std::cout;
      std::ofstream csv;
      if (!g.csv_path.empty()) {
        csv.open(g.csv_path);
        out = &csv;
      }
      *out << "file,alpha,W,is_good,min_distance\n";
      for (const auto& f : files) {
        const auto x = BitString::read_file(f);
        const auto rep = window > 0 ? check_goodness_windowed(x, alpha, window) : check_goodness_cyclic(x, alpha);
        *out << f << ',' << alpha << ',' << window << ',' << (rep.is_good ? 1 : 0) << ',' << rep.min_relative_distance
             << '\n';
      }
      return 0;
    }
    if (*pre) {
      if (list || preset_name.empty()) {
        for (const auto& p : presets()) std::cout << p.name << "\t" << p.description << '\n';
        return list ? 0 : 2;
      }
      const auto p = find_preset(preset_name);
      if (!p) {
        std::cerr << "unknown preset: " << preset_name << '\n';
        return 2;
      }
      return emit(g, run_experiment(with_globals(p->spec, g)), p->fit);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
