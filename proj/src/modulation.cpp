#include "risim/modulation.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace risim {

namespace {
bool is_power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }

std::uint32_t gray(std::uint32_t v) { return v ^ (v >> 1); }
}  // namespace

int log2_exact(int v) {
  if (!is_power_of_two(v)) throw std::invalid_argument("log2_exact: not a power of two");
  int b = 0;
  while ((1 << b) < v) ++b;
  return b;
}

int Constellation::bits() const { return log2_exact(M); }

int Constellation::index_of_label(std::uint32_t label) const {
  for (int k = 0; k < M; ++k)
    if (labels[k] == label) return k;
  throw std::invalid_argument("Constellation: unknown label");
}

int Constellation::index_of_point(std::complex<double> x) const {
  const double tol = 1e-9 * std::sqrt(Es);
  for (int k = 0; k < M; ++k)
    if (std::abs(points[k] - x) <= tol) return k;
  throw std::invalid_argument("Constellation: value is not a constellation point");
}

std::string Constellation::to_json() const {
  nlohmann::json j;
  j["kind"] = kind == ConstellationKind::PSK ? "psk" : "qam";
  j["M"] = M;
  j["Es"] = Es;
  auto pts = nlohmann::json::array();
  for (const auto& p : points) pts.push_back({p.real(), p.imag()});
  j["points"] = pts;
  j["labels"] = labels;
  return j.dump();
}

Constellation build_constellation(ConstellationKind kind, int M, double es) {
  if (!is_power_of_two(M) || M < 2)
    throw std::invalid_argument("build_constellation: M must be a power of two >= 2");
  if (!(es > 0.0)) throw std::invalid_argument("build_constellation: Es must be > 0");

  Constellation c;
  c.kind = kind;
  c.M = M;
  c.Es = es;
  c.points.resize(M);
  c.labels.resize(M);

  if (kind == ConstellationKind::PSK) {
    const double r = std::sqrt(es);
    for (int k = 0; k < M; ++k) {
      const double a = 2.0 * 3.14159265358979323846 * k / M;
      c.points[k] = {r * std::cos(a), r * std::sin(a)};
      c.labels[k] = gray(static_cast<std::uint32_t>(k));
    }
  } else {
    const int side = static_cast<int>(std::lround(std::sqrt(double(M))));
    if (side * side != M || !is_power_of_two(side))
      throw std::invalid_argument("build_constellation: QAM order must be a perfect square");
    // Average energy of the unscaled {+-1, +-3, ...}^2 grid is 2(M-1)/3.
    const double scale = std::sqrt(es * 3.0 / (2.0 * (M - 1)));
    const int axis_bits = log2_exact(side);
    int k = 0;
    for (int re = 0; re < side; ++re) {
      for (int im = 0; im < side; ++im, ++k) {
        c.points[k] = {scale * (2 * re - (side - 1)), scale * (2 * im - (side - 1))};
        c.labels[k] = (gray(static_cast<std::uint32_t>(re)) << axis_bits) |
                      gray(static_cast<std::uint32_t>(im));
      }
    }
  }
  return c;
}

std::vector<std::uint8_t> value_to_bits(std::uint32_t v, int nbits) {
  std::vector<std::uint8_t> bits(nbits);
  for (int i = 0; i < nbits; ++i)
    bits[i] = static_cast<std::uint8_t>((v >> (nbits - 1 - i)) & 1u);
  return bits;
}

std::uint32_t bits_to_value(const std::vector<std::uint8_t>& bits) {
  std::uint32_t v = 0;
  for (auto b : bits) v = (v << 1) | (b & 1u);
  return v;
}

int map_bits_ssk(const BitFrame& frame, int n_r) {
  if (static_cast<int>(frame.antenna_bits.size()) != log2_exact(n_r))
    throw std::invalid_argument("map_bits: antenna bit count mismatch");
  if (!frame.symbol_bits.empty())
    throw std::invalid_argument("map_bits: SSK frame carries symbol bits");
  return 1 + static_cast<int>(bits_to_value(frame.antenna_bits));
}

std::pair<int, std::complex<double>> map_bits(const BitFrame& frame, int n_r,
                                              const Constellation& c) {
  if (static_cast<int>(frame.antenna_bits.size()) != log2_exact(n_r))
    throw std::invalid_argument("map_bits: antenna bit count mismatch");
  if (static_cast<int>(frame.symbol_bits.size()) != c.bits())
    throw std::invalid_argument("map_bits: symbol bit count mismatch");
  const int m = 1 + static_cast<int>(bits_to_value(frame.antenna_bits));
  const int k = c.index_of_label(bits_to_value(frame.symbol_bits));
  return {m, c.points[k]};
}

BitFrame demap_decision(int m_hat, std::complex<double> x_hat, bool has_symbol,
                        int n_r, const Constellation& c) {
  if (m_hat < 1 || m_hat > n_r)
    throw std::out_of_range("demap_decision: antenna index out of range");
  BitFrame f;
  f.antenna_bits = value_to_bits(static_cast<std::uint32_t>(m_hat - 1), log2_exact(n_r));
  if (has_symbol) {
    const int k = c.index_of_point(x_hat);
    f.symbol_bits = value_to_bits(c.labels[k], c.bits());
  }
  return f;
}

}  // namespace risim
