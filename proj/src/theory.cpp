#include "risim/theory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace risim::theory {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Complex kJ{0.0, 1.0};

// Upper truncation of the Gil-Pelaez integral.
constexpr double kGilPelaezUpper = 1e3;
constexpr double kGilPelaezTol = 1e-10;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }
double clamp_bep(double v) { return std::clamp(v, 0.0, 0.5); }

bool is_power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }

void validate_common(const TheoryRequest& req) {
  if (req.N < 1) throw std::invalid_argument("theory: N must be >= 1");
  if (req.n_R < 2 || !is_power_of_two(req.n_R))
    throw std::invalid_argument("theory: n_R must be a power of two >= 2");
  if (req.snr_grid_db.empty())
    throw std::invalid_argument("theory: SNR grid must be nonempty");
}

std::string small_n_warning(int n) {
  return n < 16 ? "CLT surrogate may be inaccurate for N < 16" : "";
}

}  // namespace

Complex cf_chi_square(double w, const ChiSquareSpec& spec) {
  if (spec.dof < 1 || !(spec.sigma2 > 0.0) || spec.mu2 < 0.0)
    throw std::invalid_argument("cf_chi_square: invalid spec");
  const double ww = spec.sign < 0 ? -w : w;
  const Complex denom = 1.0 - 2.0 * kJ * ww * spec.sigma2;
  return std::pow(denom, -0.5 * spec.dof) * std::exp(kJ * ww * spec.mu2 / denom);
}

double gil_pelaez_prob_negative(const std::function<Complex(double)>& cf) {
  const auto integrand = [&cf](double w) { return cf(w).imag() / (kPi * w); };
  // The integrand is finite at 0 (Im CF(w)/w -> E[Y]); panels keep the
  // adaptive rule from wasting splits across twelve decades.
  const double edges[] = {1e-12, 1.0, 10.0, 100.0, kGilPelaezUpper};
  double integral = 0.0;
  for (int p = 0; p < 4; ++p)
    integral += quad::adaptive_gk15(integrand, edges[p], edges[p + 1],
                                    kGilPelaezTol / 4.0);
  return clamp01(0.5 - integral);
}

QuadFormMgf::QuadFormMgf(const QuadFormSpec& spec) {
  const auto k = spec.a.rows();
  if (spec.a.cols() != k || spec.cov.rows() != k || spec.cov.cols() != k ||
      spec.mean.size() != k)
    throw std::invalid_argument("QuadFormMgf: dimension mismatch");
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      if (i != j && spec.a(i, j) != 0.0)
        throw std::invalid_argument("QuadFormMgf: A must be diagonal");
  ac_ = spec.a * spec.cov;
  eigenvalues_ = Eigen::EigenSolver<Eigen::MatrixXd>(ac_).eigenvalues();
  mean_ = spec.mean;
  cinv_mean_ = spec.cov.ldlt().solve(spec.mean);
  mean_quad_ = mean_.dot(cinv_mean_);
}

Complex QuadFormMgf::operator()(Complex s) const {
  // det(I - 2sAC)^{-1/2} as a product of principal square roots of the
  // per-eigenvalue factors.
  Complex det_part = 1.0;
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
    const Complex factor = 1.0 - 2.0 * s * eigenvalues_(k);
    if (std::abs(factor) < 1e-13)
      throw PoleError("mgf_quadratic_form: pole of det factor");
    det_part /= std::sqrt(factor);
  }
  Complex q = mean_quad_;
  if (mean_quad_ != 0.0) {
    const Eigen::MatrixXcd lhs =
        Eigen::MatrixXcd::Identity(ac_.rows(), ac_.cols()) -
        2.0 * s * ac_.cast<Complex>();
    const Eigen::VectorXcd z = lhs.partialPivLu().solve(cinv_mean_.cast<Complex>());
    Complex dot = 0.0;
    for (Eigen::Index i = 0; i < mean_.size(); ++i) dot += mean_(i) * z(i);
    q -= dot;
  }
  return det_part * std::exp(-0.5 * q);
}

Complex mgf_quadratic_form(Complex s, const QuadFormSpec& spec) {
  return QuadFormMgf(spec)(s);
}

double pep_ssk_greedy(int n, double es_n0, SskGreedyMode mode) {
  if (n < 1) throw std::invalid_argument("pep_ssk_greedy: N must be >= 1");
  if (!(es_n0 > 0.0)) throw std::invalid_argument("pep_ssk_greedy: Es/N0 must be > 0");
  const double es = 1.0;
  const double n0 = es / es_n0;

  if (mode == SskGreedyMode::UpperBound) {
    const double u = n * es_n0;
    const double prefactor = std::sqrt((1.0 + u) / (2.0 + u * (6.0 - kPi) / 2.0));
    const double exponent =
        -(double(n) * n * kPi * es_n0) / (8.0 + 2.0 * u * (6.0 - kPi));
    return clamp01(prefactor * std::exp(exponent));
  }

  const ChiSquareSpec y1{1, n * (4.0 - kPi) * es / 4.0 + n0 / 2.0,
                         double(n) * n * kPi * es / 4.0, +1};
  const ChiSquareSpec y2{1, n0 / 2.0, 0.0, +1};
  const ChiSquareSpec y3{2, (n * es + n0) / 2.0, 0.0, -1};
  return gil_pelaez_prob_negative([&](double w) {
    return cf_chi_square(w, y1) * cf_chi_square(w, y2) * cf_chi_square(w, y3);
  });
}

namespace {

// 4-dimensional quadratic-form spec for the greedy RIS-SM index-error event
// D = B1^2 + B2^2 - B3^2 - B4^2 conditioned on symbol x.
QuadFormSpec greedy_sm_spec(Complex x, int n, double es, double n0) {
  const double xr = x.real();
  const double xi = x.imag();
  QuadFormSpec spec;
  spec.a = Eigen::Vector4d(1.0, 1.0, -1.0, -1.0).asDiagonal();
  spec.mean = Eigen::Vector4d(n * std::sqrt(kPi) * xr / 2.0,
                              n * std::sqrt(kPi) * xi / 2.0, 0.0, 0.0);
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c(0, 0) = n * (4.0 - kPi) * xr * xr / 4.0 + n0 / 2.0;
  c(1, 1) = n * (4.0 - kPi) * xi * xi / 4.0 + n0 / 2.0;
  c(0, 1) = c(1, 0) = n * (4.0 - kPi) * xr * xi / 4.0;
  c(2, 2) = c(3, 3) = (n * es + n0) / 2.0;
  spec.cov = c;
  return spec;
}

}  // namespace

double pep_sm_index_greedy(const Constellation& c, int n, double es_n0) {
  if (n < 1) throw std::invalid_argument("pep_sm_index_greedy: N must be >= 1");
  if (!(es_n0 > 0.0))
    throw std::invalid_argument("pep_sm_index_greedy: Es/N0 must be > 0");
  if (c.kind == ConstellationKind::PSK && c.M == 2)
    return pep_ssk_greedy(n, es_n0, SskGreedyMode::Exact);

  const double es = c.Es;
  const double n0 = es / es_n0;
  double sum = 0.0;
  for (const auto& x : c.points) {
    const QuadFormMgf mgf(greedy_sm_spec(x, n, es, n0));
    sum += gil_pelaez_prob_negative([&](double w) { return mgf(kJ * w); });
  }
  return sum / c.M;
}

double mgf_snr(double s, int n, double es_n0) {
  if (n < 1) throw std::invalid_argument("mgf_snr: N must be >= 1");
  if (!(es_n0 > 0.0)) throw std::invalid_argument("mgf_snr: Es/N0 must be > 0");
  const double a = s * n * (4.0 - kPi) * es_n0 / 2.0;
  if (!(1.0 - a > 0.0)) throw std::domain_error("mgf_snr: evaluated at or past the pole");
  const double b = s * double(n) * n * kPi * es_n0 / 4.0;
  return std::pow(1.0 - a, -0.5) * std::exp(b / (1.0 - a));
}

double sep_conditioned(const Constellation& c, int n, double es_n0) {
  const bool bpsk = c.kind == ConstellationKind::PSK && c.M == 2;
  const bool qpsk = c.kind == ConstellationKind::PSK && c.M == 4;
  const bool square_qam = c.kind == ConstellationKind::QAM;
  if (!bpsk && !qpsk && !square_qam)
    throw std::invalid_argument("sep_conditioned: only BPSK and square QAM supported");

  if (bpsk) {
    const auto f = [&](double eta) {
      const double sn = std::sin(eta);
      return mgf_snr(-1.0 / (sn * sn), n, es_n0);
    };
    return clamp01(quad::checked_gl256(f, 0.0, kPi / 2.0) / kPi);
  }

  const int m = c.M;  // QPSK falls through as 4-QAM
  const double g = 3.0 / (2.0 * (m - 1));
  const auto f = [&](double eta) {
    const double sn = std::sin(eta);
    return mgf_snr(-g / (sn * sn), n, es_n0);
  };
  const double frac = 1.0 - 1.0 / std::sqrt(double(m));
  const double i1 = quad::checked_gl256(f, 0.0, kPi / 2.0);
  const double i2 = quad::checked_gl256(f, 0.0, kPi / 4.0);
  return clamp01(4.0 / kPi * frac * i1 - 4.0 / kPi * frac * frac * i2);
}

namespace {

// Covariance/mean of [Re g1, Im g1, Re g2, Im g2] for the ML mismatch case.
QuadFormSpec ml_mismatch_spec(Complex x, Complex xhat, int n) {
  const double xr = x.real(), xi = x.imag();
  const double hr = xhat.real(), hi = xhat.imag();
  const double x2 = std::norm(x), h2 = std::norm(xhat);

  QuadFormSpec spec;
  spec.a = Eigen::Matrix4d::Identity();
  const double mu = n * std::sqrt(kPi) / 2.0;
  spec.mean = Eigen::Vector4d(mu * xr, mu * xi, -mu * hr, -mu * hi);

  Eigen::Matrix4d c;
  const double q = n * (4.0 - kPi) / 4.0;
  c(0, 0) = q * xr * xr + n * h2 / 2.0;
  c(1, 1) = q * xi * xi + n * h2 / 2.0;
  c(2, 2) = q * hr * hr + n * x2 / 2.0;
  c(3, 3) = q * hi * hi + n * x2 / 2.0;
  c(0, 1) = c(1, 0) = q * xr * xi;
  c(2, 3) = c(3, 2) = q * hr * hi;
  const double s13 = n * kPi * (-xr * hr + xi * hi) / 8.0;
  const double s14 = -n * kPi * (xr * hi + hr * xi) / 8.0;
  c(0, 2) = c(2, 0) = s13;
  c(0, 3) = c(3, 0) = s14;
  c(1, 2) = c(2, 1) = s14;   // sigma_{2,3} = sigma_{1,4}
  c(1, 3) = c(3, 1) = -s13;  // sigma_{2,4} = -sigma_{1,3}
  spec.cov = c;
  return spec;
}

Complex gamma3_factor(Complex s, Complex x, Complex xhat, int n, int n_r) {
  if (n_r == 2) return 1.0;
  const Complex base = 1.0 - s * double(n) * (std::norm(x) + std::norm(xhat));
  if (std::abs(base) < 1e-13) throw PoleError("mgf_gamma_ml: Gamma3 pole");
  return std::pow(base, -double(n_r - 2));
}

Complex mgf_gamma_ml_match(Complex s, Complex x, Complex xhat, int n, int n_r) {
  const double d = std::norm(x - xhat);
  const Complex f1 = 1.0 - s * double(n) * (4.0 - kPi) * d / 2.0;
  const Complex f3 = 1.0 - s * double(n) * d;
  if (std::abs(f1) < 1e-13 || std::abs(f3) < 1e-13)
    throw PoleError("mgf_gamma_ml: pole in matched-antenna MGF");
  return std::pow(f1, -0.5) *
         std::exp(s * double(n) * double(n) * d * kPi / 4.0 / f1) *
         std::pow(f3, -double(n_r - 1));
}

}  // namespace

Complex mgf_gamma_ml(Complex s, Complex x, Complex xhat, bool same_antenna,
                     int n, int n_r) {
  if (n < 1) throw std::invalid_argument("mgf_gamma_ml: N must be >= 1");
  if (same_antenna) {
    if (x == xhat)
      throw std::invalid_argument("mgf_gamma_ml: matched case requires x != xhat");
    return mgf_gamma_ml_match(s, x, xhat, n, n_r);
  }
  if (n_r < 2) throw std::invalid_argument("mgf_gamma_ml: mismatch case requires n_R >= 2");
  const QuadFormMgf body(ml_mismatch_spec(x, xhat, n));
  return body(s) * gamma3_factor(s, x, xhat, n, n_r);
}

double pep_ml(Complex x, Complex xhat, bool same_antenna, int n, int n_r,
              double es_n0) {
  if (same_antenna && x == xhat)
    throw std::invalid_argument("pep_ml: matched case requires x != xhat");
  if (!(es_n0 > 0.0)) throw std::invalid_argument("pep_ml: Es/N0 must be > 0");
  const double n0 = 1.0 / es_n0;  // unit average symbol energy convention

  std::function<Complex(Complex)> body;
  if (same_antenna) {
    body = [=](Complex s) { return mgf_gamma_ml_match(s, x, xhat, n, n_r); };
  } else {
    if (n_r < 2) throw std::invalid_argument("pep_ml: mismatch case requires n_R >= 2");
    auto quad_body = std::make_shared<QuadFormMgf>(ml_mismatch_spec(x, xhat, n));
    body = [=](Complex s) {
      return (*quad_body)(s) * gamma3_factor(s, x, xhat, n, n_r);
    };
  }

  const auto f = [&](double eta) {
    const double sn = std::sin(eta);
    return body(Complex(-1.0 / (4.0 * sn * sn * n0), 0.0)).real();
  };
  return clamp01(quad::checked_gl256(f, 0.0, kPi / 2.0) / kPi);
}

TheoryCurve bep_ssk_greedy(const TheoryRequest& req) {
  validate_common(req);
  if (req.scheme != Scheme::SSK || req.detector != DetectorKind::Greedy)
    throw std::invalid_argument("bep_ssk_greedy: request is not greedy SSK");
  TheoryCurve curve;
  // With n_R > 2 the n_R/2 prefactor comes from a union bound even when the
  // underlying PEP is exact.
  curve.source = req.mode == SskGreedyMode::Exact && req.n_R == 2
                     ? "theory-exact"
                     : "theory-bound";
  curve.warning = small_n_warning(req.N);
  for (double snr_db : req.snr_grid_db) {
    const double es_n0 = std::pow(10.0, snr_db / 10.0);
    const double pep = pep_ssk_greedy(req.N, es_n0, req.mode);
    curve.points.push_back({snr_db, clamp_bep(req.n_R / 2.0 * pep)});
  }
  return curve;
}

TheoryCurve bep_sm_greedy(const TheoryRequest& req) {
  validate_common(req);
  if (req.scheme != Scheme::SM || req.detector != DetectorKind::Greedy)
    throw std::invalid_argument("bep_sm_greedy: request is not greedy SM");
  if (!req.constellation)
    throw std::invalid_argument("bep_sm_greedy: SM request needs a constellation");
  const Constellation& c = *req.constellation;
  const double bits = std::log2(double(c.M) * req.n_R);

  TheoryCurve curve;
  curve.source = "theory-exact";
  curve.warning = small_n_warning(req.N);
  for (double snr_db : req.snr_grid_db) {
    const double es_n0 = std::pow(10.0, snr_db / 10.0);
    const double pep = pep_sm_index_greedy(c, req.N, es_n0);
    const double pe = std::min(1.0, (req.n_R - 1) * pep);
    const double pc = 1.0 - pe;
    const double ps = sep_conditioned(c, req.N, es_n0);
    curve.points.push_back({snr_db, clamp_bep(pc * ps / bits + 0.5 * pe)});
  }
  return curve;
}

TheoryCurve bep_ml(const TheoryRequest& req) {
  validate_common(req);
  if (req.detector != DetectorKind::ML)
    throw std::invalid_argument("bep_ml: request is not ML");

  TheoryCurve curve;
  curve.source = "theory-bound";
  curve.warning = small_n_warning(req.N);

  if (req.scheme == Scheme::SSK) {
    for (double snr_db : req.snr_grid_db) {
      const double es_n0 = std::pow(10.0, snr_db / 10.0);
      const double pep = pep_ml(1.0, 1.0, false, req.N, req.n_R, es_n0);
      curve.points.push_back({snr_db, clamp_bep(req.n_R / 2.0 * pep)});
    }
    return curve;
  }

  if (!req.constellation)
    throw std::invalid_argument("bep_ml: SM request needs a constellation");
  const Constellation& c = *req.constellation;
  const int m = c.M;
  const int n_r = req.n_R;
  const int ant_bits = log2_exact(n_r);
  const double bits = std::log2(double(m) * n_r);
  const double root_es = std::sqrt(c.Es);

  // Antenna pairs collapse: the PEP depends on (m, mhat) only through
  // match/mismatch, so the quadruple sum reduces to per-(x, xhat) weights.
  for (double snr_db : req.snr_grid_db) {
    const double es_n0 = std::pow(10.0, snr_db / 10.0);
    double total = 0.0;
    for (int k = 0; k < m; ++k) {
      for (int j = 0; j < m; ++j) {
        const Complex x = c.points[k] / root_es;
        const Complex xh = c.points[j] / root_es;
        const int h_sym = std::popcount(c.labels[k] ^ c.labels[j]);
        if (k != j) {
          const double p_match = pep_ml(x, xh, true, req.N, n_r, es_n0);
          total += p_match * double(n_r) * h_sym;
        }
        const double p_mis = pep_ml(x, xh, false, req.N, n_r, es_n0);
        total += p_mis * (double(n_r) * (n_r / 2.0) * ant_bits +
                          double(n_r) * (n_r - 1) * h_sym);
      }
    }
    curve.points.push_back({snr_db, clamp_bep(total / (double(m) * n_r * bits))});
  }
  return curve;
}

TheoryCurve evaluate(const TheoryRequest& req) {
  if (req.detector == DetectorKind::ML) return bep_ml(req);
  return req.scheme == Scheme::SSK ? bep_ssk_greedy(req) : bep_sm_greedy(req);
}

}  // namespace risim::theory
