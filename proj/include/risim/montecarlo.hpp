#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "risim/common.hpp"
#include "risim/modulation.hpp"

namespace risim {

struct StopRule {
  std::uint64_t min_bit_errors = 200;
  std::uint64_t max_bits = 100'000'000;
};

// One BER sweep specification. kappa absent means perfect phase estimation.
struct SimPlan {
  Scheme scheme = Scheme::SSK;
  DetectorKind detector = DetectorKind::Greedy;
  int N = 64;
  int n_R = 2;
  std::optional<Constellation> constellation;  // SM only
  std::vector<double> snr_grid_db;
  std::optional<double> kappa;
  std::uint64_t seed = 1;
  StopRule stop;

  int bits_per_use() const;
  void validate() const;
};

struct BerRecord {
  double snr_db = 0.0;
  std::uint64_t bits_sent = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
  double ci_lo = 0.0;  // 95% Wilson score interval
  double ci_hi = 0.0;
  double wall_seconds = 0.0;
  bool truncated = false;  // max_bits hit before min_bit_errors
};

using BerCurve = std::vector<BerRecord>;

// 95% Wilson score interval for k errors in n bits.
std::pair<double, double> wilson_interval_95(std::uint64_t errors,
                                             std::uint64_t bits);

// Simulates one SNR point. Trials run in fixed-size chunks; chunk c of the
// point draws its stream from derive_stream(seed, hash(snr_db), c) and the
// stop decision scans chunks in index order, so the record is a pure
// function of (plan, snr_db) whatever the worker count. workers = 0 reads
// RISIM_WORKERS (default: hardware concurrency).
BerRecord run_point(const SimPlan& plan, double snr_db, int workers = 0);

// One record per grid point, in grid order. Points are keyed by their SNR
// value, so splitting a grid across sweeps reproduces per-point records.
BerCurve run_sweep(const SimPlan& plan, int workers = 0);

// Worker count resolution: explicit argument, else RISIM_WORKERS, else
// hardware concurrency.
int resolve_workers(int requested);

}  // namespace risim
