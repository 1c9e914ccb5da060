#include "risim/montecarlo.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "risim/channel.hpp"
#include "risim/detectors.hpp"
#include "risim/rng.hpp"

namespace risim {

namespace {

// Fixed chunk size: part of the determinism contract, do not tune per run.
constexpr int kUsesPerChunk = 1000;

struct ChunkResult {
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
};

ChunkResult simulate_chunk(const SimPlan& plan, double snr_db,
                           std::uint64_t chunk_index) {
  const bool sm = plan.scheme == Scheme::SM;
  const Constellation* c = sm ? &*plan.constellation : nullptr;
  const double es = sm ? c->Es : 1.0;
  const double n0 = es / std::pow(10.0, snr_db / 10.0);
  const double root_es = std::sqrt(es);
  const int n_r = plan.n_R;
  const int n = plan.N;
  const int ant_bits = log2_exact(n_r);
  const int sym_bits = sm ? c->bits() : 0;
  const std::uint64_t snr_key = std::bit_cast<std::uint64_t>(snr_db);

  CounterRng rng(derive_stream(plan.seed, snr_key, chunk_index));

  std::vector<std::complex<double>> phasors(n);
  std::vector<double> amp_sums(n_r);
  Eigen::VectorXcd r(n_r);

  ChunkResult out;
  for (int use = 0; use < kUsesPerChunk; ++use) {
    // Fresh channel per use (fast fading across uses).
    ChannelRealization ch = sample_channel(n_r, n, rng);

    // Information bits: antenna index (natural mapping) then symbol label.
    const auto a = static_cast<std::uint32_t>(rng.next_u64() & (n_r - 1));
    std::uint32_t s_label = 0;
    int s_index = -1;
    std::complex<double> x = root_es;
    if (sm) {
      s_label = static_cast<std::uint32_t>(rng.next_u64() & (c->M - 1));
      s_index = c->index_of_label(s_label);
      x = c->points[s_index];
    }

    // Intelligent reflection toward antenna a+1, optionally with von Mises
    // phase estimation error.
    const auto& g = ch.gains();
    for (int i = 0; i < n; ++i) {
      const std::complex<double> gi = g(a, i);
      const double mag = std::abs(gi);
      phasors[i] = mag > 0.0 ? std::conj(gi) / mag : std::complex<double>(1.0, 0.0);
    }
    if (plan.kappa && !std::isinf(*plan.kappa)) {
      for (int i = 0; i < n; ++i) {
        const double eps = rng.von_mises(*plan.kappa);
        phasors[i] *= std::complex<double>(std::cos(eps), std::sin(eps));
      }
    }

    for (int l = 0; l < n_r; ++l) {
      std::complex<double> sum = 0.0;
      for (int i = 0; i < n; ++i) sum += g(l, i) * phasors[i];
      r(l) = sum * x + rng.cnormal(n0);
    }

    Decision d;
    switch (plan.detector) {
      case DetectorKind::Greedy:
        if (sm) {
          if (c->kind == ConstellationKind::QAM)
            for (int l = 0; l < n_r; ++l) amp_sums[l] = ch.amplitude_sum(l + 1);
          d = greedy_sm(r, amp_sums, *c);
        } else {
          d = greedy_ssk(r);
        }
        break;
      case DetectorKind::ML:
        d = sm ? ml_sm(r, ch, *c) : ml_ssk(r, ch, es);
        break;
    }

    std::uint32_t errs = std::popcount(a ^ static_cast<std::uint32_t>(d.antenna - 1));
    if (sm) errs += std::popcount(s_label ^ c->labels[d.symbol_index]);
    out.errors += errs;
    out.bits += ant_bits + sym_bits;
  }
  return out;
}

}  // namespace

int SimPlan::bits_per_use() const {
  int b = log2_exact(n_R);
  if (scheme == Scheme::SM) b += constellation->bits();
  return b;
}

void SimPlan::validate() const {
  if (N < 1) throw std::invalid_argument("SimPlan: N must be >= 1");
  if (n_R < 2 || (n_R & (n_R - 1)) != 0)
    throw std::invalid_argument("SimPlan: n_R must be a power of two >= 2");
  if (scheme == Scheme::SM && !constellation)
    throw std::invalid_argument("SimPlan: SM plan needs a constellation");
  if (snr_grid_db.empty()) throw std::invalid_argument("SimPlan: empty SNR grid");
  if (stop.min_bit_errors < 1)
    throw std::invalid_argument("SimPlan: min_bit_errors must be >= 1");
  if (stop.max_bits < static_cast<std::uint64_t>(bits_per_use()))
    throw std::invalid_argument("SimPlan: max_bits below one channel use");
  if (kappa && *kappa < 0.0)
    throw std::invalid_argument("SimPlan: kappa must be >= 0");
}

std::pair<double, double> wilson_interval_95(std::uint64_t errors,
                                             std::uint64_t bits) {
  if (bits == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(bits);
  const double p = static_cast<double>(errors) / n;
  const double z2n = z * z / n;
  const double center = (p + z2n / 2.0) / (1.0 + z2n);
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n)) / (1.0 + z2n);
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RISIM_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

BerRecord run_point(const SimPlan& plan, double snr_db, int workers) {
  plan.validate();
  const int nworkers = resolve_workers(workers);
  const auto t0 = std::chrono::steady_clock::now();

  const std::uint64_t bits_per_chunk =
      static_cast<std::uint64_t>(plan.bits_per_use()) * kUsesPerChunk;

  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  std::uint64_t next_chunk = 0;
  bool done = false;

  while (!done) {
    // One wave of chunks, computed concurrently, then scanned in chunk-index
    // order so the stop decision is schedule-independent.
    const std::uint64_t remaining_bits =
        plan.stop.max_bits > bits ? plan.stop.max_bits - bits : 0;
    std::uint64_t wave =
        std::max<std::uint64_t>(nworkers, (remaining_bits / bits_per_chunk) / 8);
    wave = std::min<std::uint64_t>(wave, 64);
    std::vector<ChunkResult> results(wave);

    if (nworkers == 1 || wave == 1) {
      for (std::uint64_t k = 0; k < wave; ++k)
        results[k] = simulate_chunk(plan, snr_db, next_chunk + k);
    } else {
      std::vector<std::thread> pool;
      std::atomic<std::uint64_t> cursor{0};
      const int nthreads = static_cast<int>(std::min<std::uint64_t>(nworkers, wave));
      for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
          for (;;) {
            const std::uint64_t k = cursor.fetch_add(1);
            if (k >= wave) break;
            results[k] = simulate_chunk(plan, snr_db, next_chunk + k);
          }
        });
      }
      for (auto& th : pool) th.join();
    }

    for (std::uint64_t k = 0; k < wave; ++k) {
      bits += results[k].bits;
      errors += results[k].errors;
      if (errors >= plan.stop.min_bit_errors || bits >= plan.stop.max_bits) {
        done = true;
        break;
      }
    }
    next_chunk += wave;
  }

  BerRecord rec;
  rec.snr_db = snr_db;
  rec.bits_sent = bits;
  rec.bit_errors = errors;
  rec.ber = bits > 0 ? static_cast<double>(errors) / bits : 0.0;
  std::tie(rec.ci_lo, rec.ci_hi) = wilson_interval_95(errors, bits);
  rec.truncated = errors < plan.stop.min_bit_errors;
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

BerCurve run_sweep(const SimPlan& plan, int workers) {
  plan.validate();
  BerCurve curve;
  curve.reserve(plan.snr_grid_db.size());
  for (double snr_db : plan.snr_grid_db)
    curve.push_back(run_point(plan, snr_db, workers));
  return curve;
}

}  // namespace risim
