#include "risim/quadrature.hpp"

#include <cmath>

namespace risim::quad {

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw std::invalid_argument("GaussLegendre: n must be >= 1");
  nodes_.resize(n);
  weights_.resize(n);
  const int m = (n + 1) / 2;
  constexpr double pi = 3.14159265358979323846;
  for (int i = 0; i < m; ++i) {
    // Chebyshev estimate of the i-th root, then Newton.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * k + 1.0) * x * p2 - k * p3) / (k + 1.0);
      }
      pp = n * (x * p1 - p2) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes_[i] = -x;
    nodes_[n - 1 - i] = x;
    weights_[i] = weights_[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

const GaussLegendre& GaussLegendre::rule256() {
  static const GaussLegendre rule(256);
  return rule;
}

const GaussLegendre& GaussLegendre::rule512() {
  static const GaussLegendre rule(512);
  return rule;
}

namespace {

// QUADPACK dqk15 abscissae/weights (positive half; node 7 is the center).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Gk15Result {
  double value;
  double error;
};

Gk15Result gk15(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double fa = f(mid - half * kXgk[i]);
    const double fb = f(mid + half * kXgk[i]);
    kronrod += kWgk[i] * (fa + fb);
    if (i % 2 == 1) gauss += kWg[i / 2] * (fa + fb);
  }
  return {half * kronrod, std::abs(half * (kronrod - gauss))};
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, int depth, int max_depth, double& worst_err) {
  const Gk15Result r = gk15(f, a, b);
  if (r.error <= tol || !(b - a > 0.0)) {
    if (r.error > worst_err) worst_err = r.error;
    return r.value;
  }
  if (depth >= max_depth) {
    if (r.error > worst_err) worst_err = r.error;
    return r.value;
  }
  const double mid = 0.5 * (a + b);
  return adapt(f, a, mid, 0.5 * tol, depth + 1, max_depth, worst_err) +
         adapt(f, mid, b, 0.5 * tol, depth + 1, max_depth, worst_err);
}

}  // namespace

double adaptive_gk15(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_depth) {
  double worst_err = 0.0;
  const double v = adapt(f, a, b, abs_tol, 0, max_depth, worst_err);
  if (worst_err > abs_tol)
    throw NumericError("adaptive_gk15: tolerance not reached", worst_err);
  return v;
}

double checked_gl256(const std::function<double(double)>& f, double a, double b,
                     double rel_tol) {
  const double v256 = GaussLegendre::rule256().integrate(f, a, b);
  const double v512 = GaussLegendre::rule512().integrate(f, a, b);
  const double scale = std::max(std::abs(v512), 1e-300);
  const double rel = std::abs(v512 - v256) / scale;
  if (rel > rel_tol)
    throw NumericError("checked_gl256: node doubling unstable", rel);
  return v512;
}

}  // namespace risim::quad
