#include "risim/detectors.hpp"

#include <limits>
#include <stdexcept>

namespace risim {

Decision greedy_ssk(const Eigen::VectorXcd& r) {
  if (r.size() == 0) throw std::invalid_argument("greedy_ssk: empty received vector");
  int best = 0;
  double best_e = std::norm(r(0));
  for (int l = 1; l < r.size(); ++l) {
    const double e = std::norm(r(l));
    if (e > best_e) {
      best = l;
      best_e = e;
    }
  }
  return {.antenna = best + 1, .metric = best_e,
          .hypotheses = static_cast<int>(r.size())};
}

Eigen::MatrixXcd hypothesis_signals(const ChannelRealization& ch) {
  const int n_r = ch.antennas();
  const int n = ch.reflectors();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n_r, n_r);
  for (int i = 1; i <= n; ++i) {
    for (int m = 1; m <= n_r; ++m) {
      // exp(j*psi_{m,i}) = conj(g_{m,i}) / |g_{m,i}|
      const std::complex<double> g = ch.gain(m, i);
      const double a = std::abs(g);
      const std::complex<double> pf = a > 0.0 ? std::conj(g) / a
                                              : std::complex<double>(1.0, 0.0);
      for (int l = 1; l <= n_r; ++l) h(l - 1, m - 1) += ch.gain(l, i) * pf;
    }
  }
  return h;
}

Decision ml_ssk(const Eigen::VectorXcd& r, const ChannelRealization& ch, double es) {
  if (r.size() != ch.antennas())
    throw std::invalid_argument("ml_ssk: received vector / channel size mismatch");
  const Eigen::MatrixXcd h = hypothesis_signals(ch);
  const double amp = std::sqrt(es);
  int best = 0;
  double best_metric = std::numeric_limits<double>::infinity();
  for (int m = 0; m < ch.antennas(); ++m) {
    double metric = 0.0;
    for (int l = 0; l < ch.antennas(); ++l) metric += std::norm(r(l) - amp * h(l, m));
    if (metric < best_metric) {
      best = m;
      best_metric = metric;
    }
  }
  return {.antenna = best + 1, .metric = best_metric, .hypotheses = ch.antennas()};
}

Decision greedy_sm(const Eigen::VectorXcd& r,
                   std::span<const double> amplitude_sums,
                   const Constellation& c) {
  Decision d = greedy_ssk(r);
  const int m_hat = d.antenna;

  double gain = 1.0;
  if (c.kind == ConstellationKind::QAM) {
    if (static_cast<int>(amplitude_sums.size()) != r.size())
      throw std::invalid_argument("greedy_sm: QAM mode needs per-antenna amplitude sums");
    gain = amplitude_sums[m_hat - 1];
  }

  int best = -1;
  double best_metric = std::numeric_limits<double>::infinity();
  // Scan in ascending label order so metric ties resolve to the lowest label.
  for (std::uint32_t label = 0; label < static_cast<std::uint32_t>(c.M); ++label) {
    const int k = c.index_of_label(label);
    const double metric = std::norm(r(m_hat - 1) - gain * c.points[k]);
    if (metric < best_metric) {
      best = k;
      best_metric = metric;
    }
  }
  d.symbol = c.points[best];
  d.symbol_index = best;
  d.metric = best_metric;
  d.hypotheses += c.M;
  return d;
}

Decision ml_sm(const Eigen::VectorXcd& r, const ChannelRealization& ch,
               const Constellation& c) {
  if (r.size() != ch.antennas())
    throw std::invalid_argument("ml_sm: received vector / channel size mismatch");
  const Eigen::MatrixXcd h = hypothesis_signals(ch);
  int best_m = 0;
  int best_k = 0;
  double best_metric = std::numeric_limits<double>::infinity();
  int hypotheses = 0;
  for (int m = 0; m < ch.antennas(); ++m) {
    for (std::uint32_t label = 0; label < static_cast<std::uint32_t>(c.M); ++label) {
      const int k = c.index_of_label(label);
      double metric = 0.0;
      for (int l = 0; l < ch.antennas(); ++l)
        metric += std::norm(r(l) - h(l, m) * c.points[k]);
      ++hypotheses;
      if (metric < best_metric) {
        best_m = m;
        best_k = k;
        best_metric = metric;
      }
    }
  }
  return {.antenna = best_m + 1, .symbol = c.points[best_k],
          .symbol_index = best_k, .metric = best_metric, .hypotheses = hypotheses};
}

}  // namespace risim
