#include "risim/channel.hpp"

#include <stdexcept>

namespace risim {

namespace {
bool is_power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }
}  // namespace

ChannelRealization::ChannelRealization(int n_r, int n, Eigen::MatrixXcd gains)
    : n_r_(n_r), n_(n), gains_(std::move(gains)) {
  if (n_r < 2 || !is_power_of_two(n_r))
    throw std::invalid_argument("ChannelRealization: n_R must be a power of two >= 2");
  if (n < 1) throw std::invalid_argument("ChannelRealization: N must be >= 1");
  if (gains_.rows() != n_r || gains_.cols() != n)
    throw std::invalid_argument("ChannelRealization: gain matrix shape mismatch");
}

double ChannelRealization::amplitude_sum(int l) const {
  if (l < 1 || l > n_r_) throw std::out_of_range("amplitude_sum: antenna index");
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += std::abs(gains_(l - 1, i));
  return s;
}

NoiseSpec::NoiseSpec(double n0, double es) : N0(n0), Es(es) {
  if (!(n0 > 0.0)) throw std::invalid_argument("NoiseSpec: N0 must be > 0");
  if (!(es > 0.0)) throw std::invalid_argument("NoiseSpec: Es must be > 0");
}

ChannelRealization sample_channel(int n_r, int n, CounterRng& rng) {
  if (n_r < 2 || !is_power_of_two(n_r))
    throw std::invalid_argument("sample_channel: n_R must be a power of two >= 2");
  if (n < 1) throw std::invalid_argument("sample_channel: N must be >= 1");
  Eigen::MatrixXcd g(n_r, n);
  for (int l = 0; l < n_r; ++l)
    for (int i = 0; i < n; ++i) g(l, i) = rng.cnormal(1.0);
  return ChannelRealization(n_r, n, std::move(g));
}

PhaseProfile align_phases(const ChannelRealization& ch, int m) {
  if (m < 1 || m > ch.antennas())
    throw std::out_of_range("align_phases: antenna index out of range");
  PhaseProfile p;
  p.phases.resize(ch.reflectors());
  for (int i = 1; i <= ch.reflectors(); ++i) p.phases[i - 1] = ch.phase(m, i);
  return p;
}

PhaseProfile perturb_phases(const PhaseProfile& p, double kappa, CounterRng& rng) {
  if (kappa < 0.0) throw std::invalid_argument("perturb_phases: kappa < 0");
  if (std::isinf(kappa)) return p;
  PhaseProfile out;
  out.phases.resize(p.phases.size());
  for (std::size_t i = 0; i < p.phases.size(); ++i)
    out.phases[i] = wrap_angle(p.phases[i] + rng.von_mises(kappa));
  return out;
}

std::complex<double> effective_gain(const ChannelRealization& ch,
                                    const PhaseProfile& p, int l) {
  if (p.size() != ch.reflectors())
    throw std::invalid_argument("effective_gain: profile/channel length mismatch");
  std::complex<double> s = 0.0;
  for (int i = 1; i <= ch.reflectors(); ++i)
    s += ch.gain(l, i) * std::polar(1.0, p.phases[i - 1]);
  return s;
}

Eigen::VectorXcd received_signals(const ChannelRealization& ch,
                                  const PhaseProfile& p,
                                  std::complex<double> x,
                                  const NoiseSpec& noise, CounterRng& rng) {
  if (p.size() != ch.reflectors())
    throw std::invalid_argument("received_signals: profile/channel length mismatch");
  Eigen::VectorXcd r(ch.antennas());
  for (int l = 1; l <= ch.antennas(); ++l)
    r(l - 1) = effective_gain(ch, p, l) * x + rng.cnormal(noise.N0);
  return r;
}

}  // namespace risim
