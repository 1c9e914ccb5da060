#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "risim/common.hpp"
#include "risim/modulation.hpp"
#include "risim/quadrature.hpp"

namespace risim::theory {

using Complex = std::complex<double>;

// Raised where an MGF/CF is evaluated at or past one of its poles.
class PoleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A (non)central chi-square building block: sum of `dof` squared Gaussians
// of per-component variance sigma2 and squared-mean total mu2. sign = -1
// stands for the negated variable, whose CF is the base CF at -w.
struct ChiSquareSpec {
  int dof;
  double sigma2;
  double mu2 = 0.0;
  int sign = +1;
};

// CF of the (signed) chi-square variable at real frequency w, with
// principal-branch fractional powers applied factor-wise.
Complex cf_chi_square(double w, const ChiSquareSpec& spec);

// P(Y < 0) by numerical inversion of the CF: F_Y(0) = 1/2 - integral over
// (0, 1e3] of Im{CF(w)}/(pi*w). The upper truncation at 1e3 and the
// adaptive absolute tolerance (1e-10) are fixed; the result is clamped to
// [0, 1]. Throws quad::NumericError when the tolerance is not met.
double gil_pelaez_prob_negative(const std::function<Complex(double)>& cf);

// Quadratic form x^T A x of a Gaussian vector x ~ N(mean, cov), with A a
// diagonal sign matrix.
struct QuadFormSpec {
  Eigen::MatrixXd a;     // diagonal, entries +-1
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;   // symmetric positive definite
};

// MGF evaluator with the s-independent pieces (eigenvalues of A*C, C^-1 m)
// precomputed, usable along the imaginary axis for CF inversion. The
// det^{-1/2} factor is the product of per-eigenvalue principal square roots
// of (I - 2sAC), which keeps a continuous branch on the inversion contour.
class QuadFormMgf {
 public:
  explicit QuadFormMgf(const QuadFormSpec& spec);
  Complex operator()(Complex s) const;

 private:
  Eigen::MatrixXd ac_;
  Eigen::VectorXcd eigenvalues_;
  Eigen::VectorXd mean_;
  Eigen::VectorXd cinv_mean_;
  double mean_quad_;  // m^T C^-1 m
};

Complex mgf_quadratic_form(Complex s, const QuadFormSpec& spec);

enum class SskGreedyMode { Exact, UpperBound };

// Pairwise antenna-index error probability for greedy RIS-SSK. Exact mode
// inverts the CF of Y1 + Y2 - Y3; UpperBound evaluates the closed form.
double pep_ssk_greedy(int n, double es_n0, SskGreedyMode mode);

// Average (over symbols) index PEP for greedy RIS-SM. BPSK short-circuits
// to the RIS-SSK exact PEP, which is symbol-independent.
double pep_sm_index_greedy(const Constellation& c, int n, double es_n0);

// MGF of the aligned-antenna instantaneous SNR gamma = Es*B^2/N0.
double mgf_snr(double s, int n, double es_n0);

// Average SEP conditioned on correct index detection (BPSK or square QAM;
// QPSK is handled as 4-QAM).
double sep_conditioned(const Constellation& c, int n, double es_n0);

// MGF of the ML pairwise-decision statistic Gamma. same_antenna = false is
// the antenna-mismatch case (requires n_r >= 2); same_antenna = true is the
// matched-antenna case (requires x != xhat). Symbols carry their energy.
Complex mgf_gamma_ml(Complex s, Complex x, Complex xhat, bool same_antenna,
                     int n, int n_r);

// Unconditional ML PEP via the MGF integral over eta in (0, pi/2);
// independent of the specific antenna pair.
double pep_ml(Complex x, Complex xhat, bool same_antenna, int n, int n_r,
              double es_n0);

// Analytical-curve request/response. snr values are Es/N0 in dB.
struct TheoryRequest {
  Scheme scheme;
  DetectorKind detector;
  int N;
  int n_R;
  std::optional<Constellation> constellation;  // SM only
  std::vector<double> snr_grid_db;
  SskGreedyMode mode = SskGreedyMode::Exact;  // greedy SSK only
};

struct TheoryPoint {
  double snr_db;
  double bep;
};

struct TheoryCurve {
  std::vector<TheoryPoint> points;
  std::string source;   // "theory-exact" or "theory-bound"
  std::string warning;  // nonempty for small-N requests
};

// Union bound (exact BEP for n_R = 2): (n_R/2) * PEP, clamped to [0, 0.5].
TheoryCurve bep_ssk_greedy(const TheoryRequest& req);

// Error-propagation split Pb ~ Pc*Ps/log2(M*n_R) + 0.5*Pe.
TheoryCurve bep_sm_greedy(const TheoryRequest& req);

// ML union bounds; the SM quadruple sum collapses the antenna pair into
// match/mismatch multiplicities.
TheoryCurve bep_ml(const TheoryRequest& req);

// Dispatch on (scheme, detector).
TheoryCurve evaluate(const TheoryRequest& req);

}  // namespace risim::theory
