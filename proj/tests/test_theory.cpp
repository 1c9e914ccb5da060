#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "risim/modulation.hpp"
#include "risim/quadrature.hpp"
#include "risim/rng.hpp"
#include "risim/theory.hpp"

using namespace risim::theory;
using risim::Constellation;
using risim::ConstellationKind;
using risim::CounterRng;

namespace {

constexpr double kPi = 3.14159265358979323846;

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Gaussian-surrogate spec for the greedy SM index error statistic
// D = B1^2 + B2^2 - B3^2 - B4^2, written out independently of the library.
struct GreedySmOracle {
  Eigen::VectorXd mean{4};
  Eigen::MatrixXd cov{4, 4};

  GreedySmOracle(std::complex<double> x, int n, double n0, double es) {
    const double xr = x.real(), xi = x.imag();
    mean << n * std::sqrt(kPi) * xr / 2.0, n * std::sqrt(kPi) * xi / 2.0, 0, 0;
    cov.setZero();
    cov(0, 0) = n * (4 - kPi) * xr * xr / 4.0 + n0 / 2.0;
    cov(1, 1) = n * (4 - kPi) * xi * xi / 4.0 + n0 / 2.0;
    cov(0, 1) = cov(1, 0) = n * (4 - kPi) * xr * xi / 4.0;
    cov(2, 2) = cov(3, 3) = (n * es + n0) / 2.0;
  }
};

// The four-dimensional ML mismatch statistic [g1_re g1_im g2_re g2_im],
// with the stated mean vector and all ten covariance entries.
struct MlMismatchOracle {
  Eigen::VectorXd mean{4};
  Eigen::MatrixXd cov{4, 4};

  MlMismatchOracle(std::complex<double> x, std::complex<double> xh, int n) {
    const double xr = x.real(), xi = x.imag();
    const double hr = xh.real(), hi = xh.imag();
    const double rt = n * std::sqrt(kPi) / 2.0;
    mean << rt * xr, rt * xi, -rt * hr, -rt * hi;
    const double c = n * (4 - kPi) / 4.0;
    cov(0, 0) = c * xr * xr + n * std::norm(xh) / 2.0;
    cov(1, 1) = c * xi * xi + n * std::norm(xh) / 2.0;
    cov(2, 2) = c * hr * hr + n * std::norm(x) / 2.0;
    cov(3, 3) = c * hi * hi + n * std::norm(x) / 2.0;
    cov(0, 1) = cov(1, 0) = c * xr * xi;
    cov(2, 3) = cov(3, 2) = c * hr * hi;
    const double s13 = n * kPi * (-xr * hr + xi * hi) / 8.0;
    const double s14 = -n * kPi * (xr * hi + hr * xi) / 8.0;
    cov(0, 2) = cov(2, 0) = s13;
    cov(0, 3) = cov(3, 0) = s14;
    cov(1, 2) = cov(2, 1) = s14;   // sigma_{2,3} = sigma_{1,4}
    cov(1, 3) = cov(3, 1) = -s13;  // sigma_{2,4} = -sigma_{1,3}
  }
};

Eigen::VectorXd sample_gaussian(const Eigen::VectorXd& mean,
                                const Eigen::MatrixXd& chol_l, CounterRng& rng) {
  Eigen::VectorXd z(mean.size());
  for (int i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return mean + chol_l * z;
}

QuadFormSpec sm_spec(const GreedySmOracle& o) {
  QuadFormSpec spec;
  spec.a = Eigen::Vector4d(1, 1, -1, -1).asDiagonal();
  spec.mean = o.mean;
  spec.cov = o.cov;
  return spec;
}

}  // namespace

TEST_CASE("cf_chi_square basics") {
  const ChiSquareSpec expo{2, 0.5, 0.0, +1};
  CHECK(std::abs(cf_chi_square(0.0, expo) - Complex(1.0, 0.0)) < 1e-14);
  // n=2, sigma^2=1/2 is the unit exponential: CF = 1/(1-jw).
  const Complex expect = 1.0 / Complex(1.0, -1.0);
  CHECK(std::abs(cf_chi_square(1.0, expo) - expect) < 1e-12);
  // sign -1 evaluates the base CF at -w.
  const ChiSquareSpec neg{2, 0.5, 0.0, -1};
  CHECK(std::abs(cf_chi_square(0.7, neg) - cf_chi_square(-0.7, expo)) < 1e-14);
}

TEST_CASE("cf_chi_square matches the empirical CF of (Z+2)^2") {
  const ChiSquareSpec spec{1, 1.0, 4.0, +1};
  CounterRng rng(21);
  Complex emp{0.0, 0.0};
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal() + 2.0;
    emp += std::polar(1.0, 0.3 * z * z);
  }
  emp /= double(n);
  CHECK(std::abs(emp - cf_chi_square(0.3, spec)) < 1e-2);
}

TEST_CASE("gil-pelaez inverts simple laws") {
  // Standard normal: P(Y<0) = 1/2.
  CHECK(gil_pelaez_prob_negative([](double w) {
          return Complex(std::exp(-0.5 * w * w), 0.0);
        }) == doctest::Approx(0.5).epsilon(1e-9));
  // Y = Z + 3: P(Y<0) = Phi(-3).
  const double phi_m3 = 0.5 * std::erfc(3.0 / std::sqrt(2.0));
  CHECK(std::abs(gil_pelaez_prob_negative([](double w) {
          return std::exp(Complex(-0.5 * w * w, 3.0 * w));
        }) - phi_m3) < 1e-6);
}

TEST_CASE("gil-pelaez on the greedy SSK statistic matches direct sampling") {
  const int n = 64;
  const double es_n0 = std::pow(10.0, -2.4);  // -24 dB
  const double n0 = 1.0 / es_n0;
  const ChiSquareSpec y1{1, n * (4 - kPi) / 4.0 + n0 / 2.0, n * n * kPi / 4.0, +1};
  const ChiSquareSpec y2{1, n0 / 2.0, 0.0, +1};
  const ChiSquareSpec y3{2, (n + n0) / 2.0, 0.0, -1};
  const double p = gil_pelaez_prob_negative([&](double w) {
    return cf_chi_square(w, y1) * cf_chi_square(w, y2) * cf_chi_square(w, y3);
  });
  CounterRng rng(22);
  const int trials = 1000000;
  int neg = 0;
  for (int t = 0; t < trials; ++t) {
    const double a = n * std::sqrt(kPi) / 2.0 +
                     std::sqrt(n * (4 - kPi) / 4.0 + n0 / 2.0) * rng.normal();
    const double b = std::sqrt(n0 / 2.0) * rng.normal();
    const double c = std::sqrt((n + n0) / 2.0) * rng.normal();
    const double d = std::sqrt((n + n0) / 2.0) * rng.normal();
    neg += (a * a + b * b - c * c - d * d) < 0.0;
  }
  const double emp = double(neg) / trials;
  const double se = std::sqrt(emp * (1.0 - emp) / trials);
  CHECK(std::abs(p - emp) < 3.0 * se);
}

TEST_CASE("pep_ssk_greedy bound equals a hand substitution of the closed form") {
  const int n = 64;
  const double es_n0 = std::pow(10.0, -1.5);
  // Independent transcription of the closed-form bound with u = N*Es/N0:
  // sqrt((1+u) / (2 + u(6-pi)/2)) * exp(-pi*N*u / (8 + 2u(6-pi))).
  const double u = n * es_n0;
  const double hand = std::sqrt((1.0 + u) / (2.0 + u * (6.0 - kPi) / 2.0)) *
                      std::exp(-kPi * n * u / (8.0 + 2.0 * u * (6.0 - kPi)));
  CHECK(pep_ssk_greedy(n, es_n0, SskGreedyMode::UpperBound) ==
        doctest::Approx(hand).epsilon(1e-10));
}

TEST_CASE("exact greedy SSK PEP never exceeds the bound") {
  // Grid kept above the CF-inversion resolution floor (~1e-9).
  for (double snr_db : {-28.0, -24.0, -20.0}) {
    const double es_n0 = std::pow(10.0, snr_db / 10.0);
    const double exact = pep_ssk_greedy(64, es_n0, SskGreedyMode::Exact);
    const double bound = pep_ssk_greedy(64, es_n0, SskGreedyMode::UpperBound);
    CHECK(exact <= bound + 1e-12);
  }
}

TEST_CASE("exact greedy SSK PEP matches a full-channel simulation") {
  // True Rayleigh channels, no CLT: tolerance combines MC and CLT error.
  const double es_n0 = std::pow(10.0, -2.4);
  const double n0 = 1.0 / es_n0;
  CounterRng rng(23);
  const int trials = 400000, n = 64;
  int errors = 0;
  for (int t = 0; t < trials; ++t) {
    double b = 0.0;
    Complex bh{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      const auto g1 = rng.cnormal(1.0);
      const auto g2 = rng.cnormal(1.0);
      b += std::abs(g1);
      // beta_hat * exp(j(psi_m - psi_mhat)) with psi = -arg g.
      bh += std::abs(g2) * std::polar(1.0, std::arg(g2) - std::arg(g1));
    }
    const Complex rm = b + rng.cnormal(n0);
    const Complex rh = bh + rng.cnormal(n0);
    errors += std::norm(rm) < std::norm(rh);
  }
  const double emp = double(errors) / trials;
  const double pep = pep_ssk_greedy(n, es_n0, SskGreedyMode::Exact);
  const double se = std::sqrt(emp * (1.0 - emp) / trials);
  CHECK(std::abs(pep - emp) < std::max(3.0 * se, 0.1 * emp));
}

TEST_CASE("bep_ssk_greedy curve properties") {
  TheoryRequest req;
  req.scheme = risim::Scheme::SSK;
  req.detector = risim::DetectorKind::Greedy;
  req.N = 64;
  req.n_R = 2;
  req.snr_grid_db = {-30.0, -26.0, -22.0};
  const auto c2 = bep_ssk_greedy(req);
  CHECK(c2.source == "theory-exact");
  CHECK(c2.warning.empty());
  for (std::size_t k = 0; k < c2.points.size(); ++k) {
    CHECK(c2.points[k].bep ==
          doctest::Approx(pep_ssk_greedy(
              64, std::pow(10.0, req.snr_grid_db[k] / 10.0), SskGreedyMode::Exact)));
    CHECK(c2.points[k].bep <= 0.5);
  }
  req.n_R = 4;
  const auto c4 = bep_ssk_greedy(req);
  req.n_R = 8;
  const auto c8 = bep_ssk_greedy(req);
  CHECK(c4.source == "theory-bound");
  for (std::size_t k = 0; k < c4.points.size(); ++k)
    CHECK(c8.points[k].bep == doctest::Approx(2.0 * c4.points[k].bep).epsilon(1e-12));
  req.N = 8;
  CHECK_FALSE(bep_ssk_greedy(req).warning.empty());
}

TEST_CASE("quadratic-form MGF normalization and chi-square reduction") {
  QuadFormSpec one;
  one.a = Eigen::MatrixXd::Identity(1, 1);
  one.mean = Eigen::VectorXd::Zero(1);
  one.cov = Eigen::MatrixXd::Identity(1, 1) * 0.8;
  CHECK(std::abs(mgf_quadratic_form(Complex(0, 0), one) - Complex(1, 0)) < 1e-14);
  const Complex s(-0.3, 0.4);
  const Complex expect = std::pow(1.0 - 2.0 * s * 0.8, -0.5);
  CHECK(std::abs(mgf_quadratic_form(s, one) - expect) < 1e-12);
}

TEST_CASE("quadratic-form MGF factorizes over independent components") {
  QuadFormSpec spec;
  spec.a = Eigen::Vector3d(1, 1, -1).asDiagonal();
  spec.mean = Eigen::Vector3d(1.5, 0.0, 0.0);
  spec.cov = Eigen::Vector3d(0.4, 0.9, 1.3).asDiagonal();
  const ChiSquareSpec f1{1, 0.4, 1.5 * 1.5, +1};
  const ChiSquareSpec f2{1, 0.9, 0.0, +1};
  for (double w : {0.2, 0.9, 3.0}) {
    const Complex lhs = mgf_quadratic_form(Complex(0.0, w), spec);
    const Complex rhs = cf_chi_square(w, f1) * cf_chi_square(w, f2) *
                        cf_chi_square(-w, ChiSquareSpec{1, 1.3, 0.0, +1});
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("quadratic-form MGF matches direct sampling of the SM statistic") {
  const auto c16 = risim::build_constellation(ConstellationKind::QAM, 16);
  const std::complex<double> x = c16.points[c16.index_of_label(0)];
  const GreedySmOracle o(x, 64, 1.0, 1.0);
  const auto spec = sm_spec(o);
  const Eigen::MatrixXd l = o.cov.llt().matrixL();
  CounterRng rng(24);
  double emp = 0.0;
  const int n = 1000000;
  // |s| kept small enough that the sampling estimator has finite variance
  // (the negated chi-square part is exponentially reweighted).
  const double s = -0.003;
  for (int i = 0; i < n; ++i) {
    const auto v = sample_gaussian(o.mean, l, rng);
    emp += std::exp(s * (v(0) * v(0) + v(1) * v(1) - v(2) * v(2) - v(3) * v(3)));
  }
  emp /= n;
  const double mgf = mgf_quadratic_form(Complex(s, 0.0), spec).real();
  CHECK(std::abs(mgf - emp) / emp < 1e-2);
}

TEST_CASE("greedy SM index PEP: BPSK equals the SSK result") {
  const auto bpsk = risim::build_constellation(ConstellationKind::PSK, 2);
  for (double snr_db : {-28.0, -24.0}) {
    const double es_n0 = std::pow(10.0, snr_db / 10.0);
    CHECK(pep_sm_index_greedy(bpsk, 64, es_n0) ==
          doctest::Approx(pep_ssk_greedy(64, es_n0, SskGreedyMode::Exact))
              .epsilon(1e-12));
  }
}

TEST_CASE("greedy SM index PEP is symbol-independent for QPSK") {
  const auto qpsk = risim::build_constellation(ConstellationKind::QAM, 4);
  const double es_n0 = std::pow(10.0, -2.4);
  const double n0 = 1.0 / es_n0;
  std::vector<double> per_symbol;
  for (const auto& x : qpsk.points) {
    const GreedySmOracle o(x, 64, n0, 1.0);
    const QuadFormMgf mgf(sm_spec(o));
    per_symbol.push_back(gil_pelaez_prob_negative(
        [&](double w) { return mgf(Complex(0.0, w)); }));
  }
  for (double p : per_symbol)
    CHECK(p == doctest::Approx(per_symbol[0]).epsilon(1e-8));
  CHECK(pep_sm_index_greedy(qpsk, 64, es_n0) ==
        doctest::Approx(per_symbol[0]).epsilon(1e-8));
}

TEST_CASE("greedy SM index PEP matches surrogate sampling for 16-QAM") {
  const auto c16 = risim::build_constellation(ConstellationKind::QAM, 16);
  const double es_n0 = std::pow(10.0, -2.2);
  const double n0 = 1.0 / es_n0;
  CounterRng rng(25);
  const int per_symbol = 100000;
  int neg = 0;
  for (const auto& x : c16.points) {
    const GreedySmOracle o(x, 64, n0, 1.0);
    const Eigen::MatrixXd l = o.cov.llt().matrixL();
    for (int t = 0; t < per_symbol; ++t) {
      const auto v = sample_gaussian(o.mean, l, rng);
      neg += (v(0) * v(0) + v(1) * v(1) - v(2) * v(2) - v(3) * v(3)) < 0.0;
    }
  }
  const double emp = double(neg) / (16.0 * per_symbol);
  const double pep = pep_sm_index_greedy(c16, 64, es_n0);
  const double se = std::sqrt(emp * (1.0 - emp) / (16.0 * per_symbol));
  CHECK(std::abs(pep - emp) < 3.0 * se);
}

TEST_CASE("snr MGF normalization, mean, and pole") {
  CHECK(mgf_snr(0.0, 64, 0.01) == doctest::Approx(1.0));
  const double h = 1e-7;
  const double deriv = (mgf_snr(h, 64, 0.01) - mgf_snr(-h, 64, 0.01)) / (2 * h);
  const double expected = (64.0 * 64.0 * kPi / 4.0 + 64.0 * (4 - kPi) / 4.0) * 0.01;
  CHECK(deriv == doctest::Approx(expected).epsilon(1e-4));
  CHECK_THROWS_AS(mgf_snr(1e9, 64, 0.01), std::domain_error);
}

TEST_CASE("snr MGF matches channel sampling") {
  CounterRng rng(26);
  double emp = 0.0;
  const int trials = 100000, n = 64;
  const double es_n0 = 0.01;
  // Moderate |s| keeps the estimate away from the far lower tail of B,
  // where the CLT surrogate underlying the formula is least accurate.
  const double s = -0.1;
  for (int t = 0; t < trials; ++t) {
    double b = 0.0;
    for (int i = 0; i < n; ++i) b += std::abs(rng.cnormal(1.0));
    emp += std::exp(s * b * b * es_n0);
  }
  emp /= trials;
  CHECK(std::abs(mgf_snr(s, n, es_n0) - emp) / emp < 0.05);
}

TEST_CASE("conditioned SEP decreases with N and matches the Q-average") {
  const auto bpsk = risim::build_constellation(ConstellationKind::PSK, 2);
  const double es_n0 = 1e-3;
  double prev = 1.0;
  for (int n : {16, 32, 64, 128}) {
    const double ps = sep_conditioned(bpsk, n, es_n0);
    CHECK(ps < prev);
    prev = ps;
  }
  // Semi-analytic oracle: Ps = E[Q(sqrt(2 Es B^2 / N0))] over Gaussian B.
  CounterRng rng(27);
  const int n = 64, trials = 500000;
  double acc = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double b =
        n * std::sqrt(kPi) / 2.0 + std::sqrt(n * (4 - kPi) / 4.0) * rng.normal();
    acc += q_func(std::sqrt(2.0 * es_n0 * b * b));
  }
  acc /= trials;
  CHECK(sep_conditioned(bpsk, n, es_n0) == doctest::Approx(acc).epsilon(0.01));
}

TEST_CASE("square QAM SEP equals a direct transcription of the two-term integral") {
  const auto c16 = risim::build_constellation(ConstellationKind::QAM, 16);
  const int n = 64;
  const double es_n0 = 0.05;
  const auto& gl = risim::quad::GaussLegendre::rule256();
  const double m = 16.0;
  const auto integrand = [&](double eta) {
    const double sn = std::sin(eta);
    return mgf_snr(-3.0 / (2.0 * (m - 1.0) * sn * sn), n, es_n0);
  };
  const double f = 1.0 - 1.0 / std::sqrt(m);
  const double direct = 4.0 / kPi * f * gl.integrate(integrand, 0.0, kPi / 2.0) -
                        4.0 / kPi * f * f * gl.integrate(integrand, 0.0, kPi / 4.0);
  CHECK(sep_conditioned(c16, n, es_n0) == doctest::Approx(direct).epsilon(1e-10));
  const auto psk8 = risim::build_constellation(ConstellationKind::PSK, 8);
  CHECK_THROWS(sep_conditioned(psk8, n, es_n0));
}

TEST_CASE("ml Gamma component variance identity holds under sampling") {
  // Var[(g*xi)_re] = (|x|^2 + |xh|^2)/2 with xi = x e^{j psi} - xh e^{j psih}.
  CounterRng rng(28);
  const Complex x(0.6, 0.3), xh(-0.2, 0.9);
  double re2 = 0.0;
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) {
    const auto g = rng.cnormal(1.0);
    const Complex xi = x * std::polar(1.0, rng.uniform() * 2 * kPi) -
                       xh * std::polar(1.0, rng.uniform() * 2 * kPi);
    const double re = (g * xi).real();
    re2 += re * re;
  }
  CHECK(re2 / trials ==
        doctest::Approx((std::norm(x) + std::norm(xh)) / 2.0).epsilon(0.02));
}

TEST_CASE("ml MGF normalization and the n_R=1 matched reduction") {
  CHECK(std::abs(mgf_gamma_ml(Complex(0, 0), {1, 0}, {-1, 0}, true, 64, 2) -
                 Complex(1, 0)) < 1e-12);
  CHECK(std::abs(mgf_gamma_ml(Complex(0, 0), {1, 0}, {1, 0}, false, 64, 2) -
                 Complex(1, 0)) < 1e-12);
  // Matched case with n_R = 1: only the noncentral factor survives.
  const Complex s(-0.004, 0.0);
  const double d = 4.0;  // |1 - (-1)|^2
  const Complex f1 = 1.0 - s * 64.0 * (4 - kPi) * d / 2.0;
  const Complex manual =
      std::pow(f1, -0.5) * std::exp(s * 64.0 * 64.0 * d * kPi / 4.0 / f1);
  CHECK(std::abs(mgf_gamma_ml(s, {1, 0}, {-1, 0}, true, 64, 1) - manual) < 1e-12);
}

TEST_CASE("ml mismatch MGF matches surrogate sampling") {
  const Complex x(1.0, 0.0), xh(1.0, 0.0);  // SSK setting
  const int n = 64;
  for (int n_r : {2, 4}) {
    const MlMismatchOracle o(x, xh, n);
    const Eigen::MatrixXd l = o.cov.llt().matrixL();
    CounterRng rng(29);
    // Small |s| keeps the exponential reweighting mild so 1e6 samples give
    // a sub-percent standard error.
    const double s = -0.001;
    double emp = 0.0;
    const int trials = 1000000;
    const double g3_var = n * (std::norm(x) + std::norm(xh)) / 2.0;
    for (int t = 0; t < trials; ++t) {
      const auto v = sample_gaussian(o.mean, l, rng);
      double gamma = v.squaredNorm();
      for (int l2 = 0; l2 < n_r - 2; ++l2) gamma += std::norm(rng.cnormal(2.0 * g3_var));
      emp += std::exp(s * gamma);
    }
    emp /= trials;
    const double mgf = mgf_gamma_ml(Complex(s, 0.0), x, xh, false, n, n_r).real();
    CHECK(std::abs(mgf - emp) / emp < 1e-2);
  }
}

TEST_CASE("pep_ml decreases monotonically with SNR") {
  double prev = 1.0;
  for (int k = 0; k < 10; ++k) {
    const double es_n0 = std::pow(10.0, (-30.0 + 2.0 * k) / 10.0);
    const double p = pep_ml({1, 0}, {1, 0}, false, 64, 2, es_n0);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("pep_ml SSK case matches the semi-analytic Q-average") {
  const double es_n0 = std::pow(10.0, -2.6);
  const double n0 = 1.0 / es_n0;
  const MlMismatchOracle o({1, 0}, {1, 0}, 64);
  const Eigen::MatrixXd l = o.cov.llt().matrixL();
  CounterRng rng(30);
  double acc = 0.0, acc2 = 0.0;
  const int trials = 400000;
  for (int t = 0; t < trials; ++t) {
    const auto v = sample_gaussian(o.mean, l, rng);
    const double q = q_func(std::sqrt(v.squaredNorm() / (2.0 * n0)));
    acc += q;
    acc2 += q * q;
  }
  const double emp = acc / trials;
  const double se = std::sqrt((acc2 / trials - emp * emp) / trials);
  const double pep = pep_ml({1, 0}, {1, 0}, false, 64, 2, es_n0);
  CHECK(std::abs(pep - emp) < 3.0 * se + 1e-12);
}

TEST_CASE("pep_ml matched case agrees with an independent integration") {
  const double es_n0 = std::pow(10.0, -2.6);
  const double n0 = 1.0 / es_n0;
  const int n = 64, n_r = 2;
  const double d = 4.0;  // BPSK: |x - xh|^2 = 4 Es with Es = 1
  const auto integrand = [&](double eta) {
    const double sn = std::sin(eta);
    const Complex s(-1.0 / (4.0 * sn * sn * n0), 0.0);
    const Complex f1 = 1.0 - s * double(n) * (4 - kPi) * d / 2.0;
    const Complex body = std::pow(f1, -0.5) *
                         std::exp(s * double(n) * double(n) * d * kPi / 4.0 / f1) *
                         std::pow(1.0 - s * double(n) * d, -double(n_r - 1));
    return body.real();
  };
  const double direct =
      risim::quad::adaptive_gk15(integrand, 1e-9, kPi / 2.0, 1e-12) / kPi;
  CHECK(pep_ml({1, 0}, {-1, 0}, true, n, n_r, es_n0) ==
        doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("ml SM union bound equals the naive quadruple sum") {
  const auto c = risim::build_constellation(ConstellationKind::QAM, 4);
  const int n = 64, n_r = 4, m_ord = 4;
  const double snr_db = -26.0;
  const double es_n0 = std::pow(10.0, snr_db / 10.0);

  TheoryRequest req;
  req.scheme = risim::Scheme::SM;
  req.detector = risim::DetectorKind::ML;
  req.N = n;
  req.n_R = n_r;
  req.constellation = c;
  req.snr_grid_db = {snr_db};
  const auto curve = bep_ml(req);

  // Naive transcription of the quadruple sum with per-tuple PEP calls.
  // Symbols are normalized to unit average energy; Es rides in es_n0.
  double total = 0.0;
  const double bits = std::log2(double(m_ord) * n_r);
  for (int m = 0; m < n_r; ++m)
    for (int mh = 0; mh < n_r; ++mh)
      for (int kx = 0; kx < m_ord; ++kx)
        for (int kh = 0; kh < m_ord; ++kh) {
          const bool same = m == mh;
          if (same && kx == kh) continue;
          const int e = std::popcount(unsigned(m ^ mh)) +
                        std::popcount(c.labels[kx] ^ c.labels[kh]);
          if (e == 0) continue;
          total += pep_ml(c.points[kx], c.points[kh], same, n, n_r, es_n0) * e;
        }
  const double naive = std::min(0.5, total / (m_ord * n_r * bits));
  CHECK(curve.points[0].bep == doctest::Approx(naive).epsilon(1e-10));
  CHECK(curve.source == "theory-bound");
}

TEST_CASE("ml SSK bound is n_R/2 times the PEP") {
  TheoryRequest req;
  req.scheme = risim::Scheme::SSK;
  req.detector = risim::DetectorKind::ML;
  req.N = 64;
  req.n_R = 4;
  req.snr_grid_db = {-26.0};
  const auto curve = bep_ml(req);
  const double pep = pep_ml({1, 0}, {1, 0}, false, 64, 4, std::pow(10.0, -2.6));
  CHECK(curve.points[0].bep == doctest::Approx(2.0 * pep).epsilon(1e-12));
}

TEST_CASE("evaluate dispatches on scheme and detector") {
  TheoryRequest req;
  req.scheme = risim::Scheme::SSK;
  req.detector = risim::DetectorKind::Greedy;
  req.N = 64;
  req.n_R = 2;
  req.snr_grid_db = {-24.0};
  CHECK(evaluate(req).points[0].bep ==
        doctest::Approx(bep_ssk_greedy(req).points[0].bep));
  req.detector = risim::DetectorKind::ML;
  CHECK(evaluate(req).points[0].bep == doctest::Approx(bep_ml(req).points[0].bep));
  req.scheme = risim::Scheme::SM;
  req.detector = risim::DetectorKind::Greedy;
  req.constellation = risim::build_constellation(ConstellationKind::PSK, 2);
  CHECK(evaluate(req).points[0].bep ==
        doctest::Approx(bep_sm_greedy(req).points[0].bep));
}

TEST_CASE("bep_sm_greedy clamps and combines the split terms") {
  TheoryRequest req;
  req.scheme = risim::Scheme::SM;
  req.detector = risim::DetectorKind::Greedy;
  req.N = 64;
  req.n_R = 2;
  req.constellation = risim::build_constellation(ConstellationKind::PSK, 2);
  req.snr_grid_db = {-40.0, -26.0};
  const auto curve = bep_sm_greedy(req);
  // With many antennas the union bound saturates: (n_R-1)*PEP > 1, so P_e
  // clamps to 1, P_c floors at 0, and P_b hits the 0.5 ceiling.
  {
    TheoryRequest deep = req;
    deep.n_R = 8;
    deep.snr_grid_db = {-40.0};
    CHECK(bep_sm_greedy(deep).points[0].bep == doctest::Approx(0.5).epsilon(1e-9));
  }
  // Mid-curve point equals the hand-combined expression.
  const double es_n0 = std::pow(10.0, -2.6);
  const double pep = pep_sm_index_greedy(*req.constellation, 64, es_n0);
  const double pe = std::min(1.0, 1.0 * pep);
  const double ps = sep_conditioned(*req.constellation, 64, es_n0);
  const double hand = (1.0 - pe) * ps / std::log2(4.0) + 0.5 * pe;
  CHECK(curve.points[1].bep == doctest::Approx(hand).epsilon(1e-12));
}
