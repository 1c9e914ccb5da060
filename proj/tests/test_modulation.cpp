#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "risim/modulation.hpp"

using risim::BitFrame;
using risim::Constellation;
using risim::ConstellationKind;
using risim::build_constellation;

namespace {

// Average energy and label-bijection checks shared by all configurations.
void check_basics(const Constellation& c) {
  REQUIRE(int(c.points.size()) == c.M);
  REQUIRE(int(c.labels.size()) == c.M);
  double avg = 0.0;
  for (const auto& p : c.points) avg += std::norm(p);
  CHECK(avg / c.M == doctest::Approx(c.Es).epsilon(1e-12));
  std::set<std::uint32_t> labels(c.labels.begin(), c.labels.end());
  CHECK(int(labels.size()) == c.M);
  CHECK(*labels.rbegin() == std::uint32_t(c.M - 1));
  for (int i = 0; i < c.M; ++i)
    for (int k = i + 1; k < c.M; ++k)
      CHECK(std::abs(c.points[i] - c.points[k]) > 1e-9);
}

}  // namespace

TEST_CASE("BPSK is {+1, -1}") {
  const auto c = build_constellation(ConstellationKind::PSK, 2);
  check_basics(c);
  CHECK(c.points[0].real() == doctest::Approx(1.0));
  CHECK(c.points[0].imag() == doctest::Approx(0.0));
  CHECK(c.points[1].real() == doctest::Approx(-1.0));
}

TEST_CASE("4-QAM has points (+-1 +- j)/sqrt(2)") {
  const auto c = build_constellation(ConstellationKind::QAM, 4);
  check_basics(c);
  for (const auto& p : c.points) {
    CHECK(p.real() * p.real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.imag() * p.imag() == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("16-QAM is the {+-1,+-3}^2 grid scaled by 1/sqrt(10)") {
  const auto c = build_constellation(ConstellationKind::QAM, 16);
  check_basics(c);
  const double s = 1.0 / std::sqrt(10.0);
  for (const auto& p : c.points) {
    const double re = p.real() / s, im = p.imag() / s;
    CHECK(std::min(std::abs(std::abs(re) - 1.0), std::abs(std::abs(re) - 3.0)) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::min(std::abs(std::abs(im) - 1.0), std::abs(std::abs(im) - 3.0)) ==
          doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("PSK points share modulus sqrt(Es)") {
  const auto c = build_constellation(ConstellationKind::PSK, 8, 2.0);
  check_basics(c);
  for (const auto& p : c.points)
    CHECK(std::abs(p) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("invalid orders are rejected") {
  CHECK_THROWS(build_constellation(ConstellationKind::PSK, 3));
  CHECK_THROWS(build_constellation(ConstellationKind::PSK, 0));
  CHECK_THROWS(build_constellation(ConstellationKind::QAM, 8));   // not square
  CHECK_THROWS(build_constellation(ConstellationKind::QAM, 32));  // not square
}

TEST_CASE("PSK Gray labels differ in one bit between neighbors") {
  for (int m : {4, 8, 16}) {
    const auto c = build_constellation(ConstellationKind::PSK, m);
    for (int k = 0; k < m; ++k) {
      const auto a = c.labels[k], b = c.labels[(k + 1) % m];
      CHECK(std::popcount(a ^ b) == 1);
    }
  }
}

TEST_CASE("QAM Gray labels differ in one bit between grid neighbors") {
  const auto c = build_constellation(ConstellationKind::QAM, 16);
  const double step = 2.0 / std::sqrt(10.0);
  for (int i = 0; i < c.M; ++i)
    for (int k = 0; k < c.M; ++k) {
      const auto d = c.points[i] - c.points[k];
      const bool adjacent = std::abs(std::abs(d) - step) < 1e-9 &&
                            (std::abs(d.real()) < 1e-9 || std::abs(d.imag()) < 1e-9);
      if (adjacent) CHECK(std::popcount(c.labels[i] ^ c.labels[k]) == 1);
    }
}

TEST_CASE("natural antenna mapping") {
  CHECK(risim::map_bits_ssk(BitFrame{{0, 0}, {}}, 4) == 1);
  CHECK(risim::map_bits_ssk(BitFrame{{1, 1}, {}}, 4) == 4);
  CHECK(risim::map_bits_ssk(BitFrame{{0, 1, 0}, {}}, 8) == 3);
}

TEST_CASE("map_bits picks the labeled symbol") {
  const auto c = build_constellation(ConstellationKind::PSK, 2);
  const auto [m, x] = risim::map_bits(BitFrame{{1}, {0}}, 2, c);
  CHECK(m == 2);
  CHECK(x.real() == doctest::Approx(1.0));  // label 0 is +sqrt(Es)
}

TEST_CASE("demap inverts map for every (m, x)") {
  const auto c = build_constellation(ConstellationKind::QAM, 4);
  for (std::uint32_t a = 0; a < 4; ++a)
    for (std::uint32_t s = 0; s < 4; ++s) {
      const BitFrame f{risim::value_to_bits(a, 2), risim::value_to_bits(s, 2)};
      const auto [m, x] = risim::map_bits(f, 4, c);
      CHECK(risim::demap_decision(m, x, true, 4, c) == f);
    }
}

TEST_CASE("demap examples") {
  const auto bpsk = build_constellation(ConstellationKind::PSK, 2);
  const auto f = risim::demap_decision(3, {}, false, 8, bpsk);
  CHECK(f.antenna_bits == std::vector<std::uint8_t>{0, 1, 0});
  CHECK(f.symbol_bits.empty());

  const auto g = risim::demap_decision(1, {-1.0, 0.0}, true, 2, bpsk);
  CHECK(g.antenna_bits == std::vector<std::uint8_t>{0});
  CHECK(g.symbol_bits == risim::value_to_bits(bpsk.labels[1], 1));
  CHECK_THROWS(risim::demap_decision(1, {0.3, 0.4}, true, 2, bpsk));
}

TEST_CASE("hamming sum identity for natural antenna mapping") {
  for (int n_r : {2, 4, 8, 16}) {
    for (int m = 0; m < n_r; ++m) {
      int total = 0;
      for (int mh = 0; mh < n_r; ++mh)
        if (mh != m) total += std::popcount(std::uint32_t(m ^ mh));
      CHECK(total == (n_r / 2) * risim::log2_exact(n_r));
    }
  }
}

TEST_CASE("bit helpers round-trip") {
  for (std::uint32_t v = 0; v < 32; ++v)
    CHECK(risim::bits_to_value(risim::value_to_bits(v, 5)) == v);
  CHECK(risim::value_to_bits(5, 4) == std::vector<std::uint8_t>{0, 1, 0, 1});
  CHECK(risim::log2_exact(8) == 3);
  CHECK_THROWS(risim::log2_exact(6));
}

TEST_CASE("constellation JSON export carries points and labels") {
  const auto c = build_constellation(ConstellationKind::QAM, 4);
  const auto j = nlohmann::json::parse(c.to_json());
  REQUIRE(j.contains("points"));
  REQUIRE(j.contains("labels"));
  REQUIRE(j["points"].size() == 4);
  CHECK(j["labels"].size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(double(j["points"][k][0]) == doctest::Approx(c.points[k].real()));
    CHECK(double(j["points"][k][1]) == doctest::Approx(c.points[k].imag()));
  }
}
