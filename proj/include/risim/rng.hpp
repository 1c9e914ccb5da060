#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace risim {

// SplitMix64 finalizer. Doubles as the stream-derivation hash below.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Substream key for (seed, a, b). Any partitioning of work that labels a
// chunk with the same (a, b) pair sees the same draws, independent of the
// execution schedule.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a,
                                      std::uint64_t b) noexcept {
  return mix64(seed ^ mix64(a ^ mix64(b)));
}

// Counter-based generator: output i is mix64(key + i*gamma), i.e. SplitMix64
// keyed by the stream. State is just (key, counter), so streams are cheap to
// create and draws are reproducible independent of call-site ordering.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() noexcept {
    return mix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform on (0, 1), never exactly 0 or 1.
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  std::uint64_t uniform_below(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller (pairs cached).
  double normal() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // Circularly symmetric complex Gaussian with E[|z|^2] = variance.
  std::complex<double> cnormal(double variance = 1.0) noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-variance * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

  // Zero-mean von Mises draw with concentration kappa (Best-Fisher rejection
  // sampler). kappa = 0 degenerates to uniform on (-pi, pi]; kappa = inf
  // returns 0.
  double von_mises(double kappa) {
    if (kappa < 0.0) throw std::invalid_argument("von_mises: kappa < 0");
    if (std::isinf(kappa)) return 0.0;
    constexpr double pi = 3.14159265358979323846;
    if (kappa == 0.0) return uniform() * 2.0 * pi - pi;
    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
    const double r = (1.0 + rho * rho) / (2.0 * rho);
    for (;;) {
      const double z = std::cos(pi * uniform());
      const double f = (1.0 + r * z) / (r + z);
      const double c = kappa * (r - f);
      const double u2 = uniform();
      if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
        const double theta = std::acos(f);
        return uniform() < 0.5 ? -theta : theta;
      }
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace risim
