// Compares the serial reference trial runner against the OpenMP one on a
// medium AWGN sweep: asserts identical statistics, reports the speedup.

#include <chrono>
#include <cstdio>
#include <string>

#include "recsim/bench.hpp"

using namespace recsim;

namespace {

double timed(bench::SweepConfig cfg, int workers, std::vector<bench::StatRow>* rows) {
  cfg.workers = workers;
  auto t0 = std::chrono::steady_clock::now();
  *rows = bench::run_awgn_sweep(cfg);
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  bench::SweepConfig cfg;
  cfg.trials = argc > 1 ? std::stoull(argv[1]) : 2000;
  cfg.seed = 0xC0FFEE;
  cfg.mi_grid = {1.0, 2.0, 4.0};
  cfg.algs = {bench::Algorithm::AStar, bench::Algorithm::Gprs, bench::Algorithm::BnbAStar,
              bench::Algorithm::BnbGprs};

  std::vector<bench::StatRow> serial_rows, parallel_rows;
  double t_serial = timed(cfg, 1, &serial_rows);
  double t_parallel = timed(cfg, 0, &parallel_rows);

  std::string s_csv = bench::to_csv(serial_rows, /*deterministic=*/true);
  std::string p_csv = bench::to_csv(parallel_rows, /*deterministic=*/true);
  bool identical = s_csv == p_csv;

  std::printf("trials per setting : %llu\n", static_cast<unsigned long long>(cfg.trials));
  std::printf("serial reference   : %.3f s\n", t_serial);
  std::printf("openmp             : %.3f s (%d workers)\n", t_parallel,
              bench::resolve_workers(0));
  std::printf("speedup            : %.2fx\n", t_serial / t_parallel);
  std::printf("identical output   : %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
