#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>

#include "risim/channel.hpp"
#include "risim/modulation.hpp"

namespace risim {

// Receiver output. antenna is 1-based; symbol_index indexes the
// constellation point (absent for SSK). hypotheses counts the hypothesis
// metrics evaluated, for complexity-shape checks.
struct Decision {
  int antenna;
  std::optional<std::complex<double>> symbol;
  int symbol_index = -1;
  double metric = 0.0;
  int hypotheses = 0;
};

// Non-coherent RIS-SSK detection: argmax_l |r_l|^2, ties to lowest index.
// Deliberately takes only the received vector (no CSI).
Decision greedy_ssk(const Eigen::VectorXcd& r);

// Coherent RIS-SSK detection: argmin_m sum_l |r_l - sqrt(Es)*H(l,m)|^2 with
// hypothesis signals H(l,m) = sum_i g_{l,i} exp(j*psi_{m,i}).
Decision ml_ssk(const Eigen::VectorXcd& r, const ChannelRealization& ch, double es);

// Sequential RIS-SM detection: antenna by max energy, then the symbol.
// QAM scales hypotheses by the amplitude sum at the winning antenna and
// needs amplitude_sums[l-1] = sum_i beta_{l,i}; PSK compares r against the
// bare constellation and ignores amplitude_sums entirely.
Decision greedy_sm(const Eigen::VectorXcd& r,
                   std::span<const double> amplitude_sums,
                   const Constellation& c);

// Joint RIS-SM detection over all n_R*M (antenna, symbol) hypotheses, ties
// to lowest (antenna, label) lexicographically.
Decision ml_sm(const Eigen::VectorXcd& r, const ChannelRealization& ch,
               const Constellation& c);

// Hypothesis signal matrix H(l,m) = sum_i g_{l,i} exp(j*psi_{m,i})
// (0-based storage), shared by the ML detectors.
Eigen::MatrixXcd hypothesis_signals(const ChannelRealization& ch);

}  // namespace risim
