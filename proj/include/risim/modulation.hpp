#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace risim {

enum class ConstellationKind { PSK, QAM };

// M-ary constellation with Gray bit labels and average energy Es.
// points[k] carries the bit label labels[k]; index_of_label inverts that map.
struct Constellation {
  ConstellationKind kind;
  int M;
  std::vector<std::complex<double>> points;
  std::vector<std::uint32_t> labels;
  double Es;

  int bits() const;
  int index_of_label(std::uint32_t label) const;
  // Index of the constellation point equal to x (exact match within a small
  // tolerance); throws if x is not a constellation point.
  int index_of_point(std::complex<double> x) const;
  std::string to_json() const;
};

// One channel use worth of information bits, most significant bit first.
// symbol_bits is empty for SSK.
struct BitFrame {
  std::vector<std::uint8_t> antenna_bits;
  std::vector<std::uint8_t> symbol_bits;

  bool operator==(const BitFrame&) const = default;
};

// Builds a unit-average-energy (scaled to Es) Gray-labeled constellation.
// PSK: sqrt(Es)*exp(j*2*pi*k/M). QAM: the square {+-1, +-3, ...}^2 grid,
// which must have a perfect-square order; per-axis Gray labels are
// concatenated (real axis first), so grid-adjacent points differ in one bit.
Constellation build_constellation(ConstellationKind kind, int M, double es = 1.0);

// Natural mapping for the antenna index (m = 1 + value of antenna_bits) and
// label lookup for the symbol. For SSK pass an SSK frame (empty symbol bits)
// and any constellation size-0 sentinel is not needed: use map_bits_ssk.
std::pair<int, std::complex<double>> map_bits(const BitFrame& frame, int n_r,
                                              const Constellation& c);
int map_bits_ssk(const BitFrame& frame, int n_r);

// Inverse of map_bits. For SSK (no symbol), pass has_symbol = false.
BitFrame demap_decision(int m_hat, std::complex<double> x_hat, bool has_symbol,
                        int n_r, const Constellation& c);

// Integer helpers shared by the Monte Carlo hot path and tests.
std::vector<std::uint8_t> value_to_bits(std::uint32_t v, int nbits);
std::uint32_t bits_to_value(const std::vector<std::uint8_t>& bits);
int log2_exact(int v);

}  // namespace risim
