#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "risim/rng.hpp"

namespace risim {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

// Flat Rayleigh channel between the RIS and the destination: an n_R x N
// matrix of complex gains g_{l,i} = beta_{l,i} * exp(-j*psi_{l,i}).
// Antenna/reflector indices in the public accessors are 1-based.
class ChannelRealization {
 public:
  ChannelRealization(int n_r, int n, Eigen::MatrixXcd gains);

  int antennas() const { return n_r_; }
  int reflectors() const { return n_; }
  const Eigen::MatrixXcd& gains() const { return gains_; }
  std::complex<double> gain(int l, int i) const { return gains_(l - 1, i - 1); }

  // beta_{l,i} = |g_{l,i}|
  double amplitude(int l, int i) const { return std::abs(gains_(l - 1, i - 1)); }
  // psi_{l,i} = -arg(g_{l,i}) wrapped to [0, 2*pi), per g = beta*exp(-j*psi).
  double phase(int l, int i) const {
    return wrap_angle(-std::arg(gains_(l - 1, i - 1)));
  }

  // Sum of channel amplitudes at antenna l (the aligned gain "B" when the
  // RIS targets antenna l).
  double amplitude_sum(int l) const;

 private:
  int n_r_;
  int n_;
  Eigen::MatrixXcd gains_;
};

// The N reflector phases phi_i, canonically wrapped to [0, 2*pi).
struct PhaseProfile {
  std::vector<double> phases;

  int size() const { return static_cast<int>(phases.size()); }
};

// Energy bookkeeping for one link budget. Es/N0 is the SNR.
struct NoiseSpec {
  double N0;
  double Es;

  NoiseSpec(double n0, double es);
  double snr_db() const { return 10.0 * std::log10(Es / N0); }
  static NoiseSpec from_snr_db(double snr_db, double es = 1.0) {
    return NoiseSpec(es / std::pow(10.0, snr_db / 10.0), es);
  }
};

// Draws an iid CN(0,1) channel matrix (real/imag parts each of variance 1/2).
// n_r must be a power of two >= 2; n >= 1.
ChannelRealization sample_channel(int n_r, int n, CounterRng& rng);

// Intelligent reflection targeting antenna m: phi_i = psi_{m,i}, which makes
// sum_i g_{m,i} exp(j*phi_i) = sum_i beta_{m,i}, a nonnegative real.
PhaseProfile align_phases(const ChannelRealization& ch, int m);

// Adds iid zero-mean von Mises phase estimation error of concentration kappa
// to every reflector phase. kappa = inf returns the profile unchanged.
PhaseProfile perturb_phases(const PhaseProfile& p, double kappa, CounterRng& rng);

// Effective channel sum_i g_{l,i} exp(j*phi_i) seen at antenna l.
std::complex<double> effective_gain(const ChannelRealization& ch,
                                    const PhaseProfile& p, int l);

// Received baseband vector r_l = [sum_i g_{l,i} exp(j*phi_i)] x + n_l with
// n_l ~ CN(0, N0).
Eigen::VectorXcd received_signals(const ChannelRealization& ch,
                                  const PhaseProfile& p,
                                  std::complex<double> x,
                                  const NoiseSpec& noise, CounterRng& rng);

}  // namespace risim
