// Serial reference vs OpenMP runner on a few presets at reduced trial counts.
// Usage: lphs_bench [trials] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "lphs/harness.hpp"

int main(int argc, char** argv) {
  using namespace lphs;
  const std::uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000;
  const int threads = argc > 2 ? std::atoi(argv[2]) : default_threads();
  std::printf("%-22s %10s %10s %8s %s\n", "preset", "serial_s", "omp_s", "speedup", "counts");
  int mismatches = 0;
  for (const char* name : {"basic-d100", "union-irw", "lasvegas-d512", "ddl-basic", "threestage2d-scaling"}) {
    auto spec = find_preset(name)->spec;
    spec.trials = trials;
    spec.threads = threads;
    if (spec.points.size() > 3) spec.points.resize(3);

    const auto t0 = std::chrono::steady_clock::now();
    const auto serial = run_experiment_serial(spec);
    const auto t1 = std::chrono::steady_clock::now();
    const auto par = run_experiment(spec);
    const auto t2 = std::chrono::steady_clock::now();

    const double s = std::chrono::duration<double>(t1 - t0).count();
    const double p = std::chrono::duration<double>(t2 - t1).count();
    const bool same = to_csv(serial) == to_csv(par);
    mismatches += same ? 0 : 1;
    std::printf("%-22s %10.3f %10.3f %8.2f %s\n", name, s, p, s / p, same ? "equal" : "DIFFER");
  }
  std::printf("threads=%d trials=%llu\n", threads, static_cast<unsigned long long>(trials));
  return mismatches == 0 ? 0 : 1;
}
