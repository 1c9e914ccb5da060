#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace risim::quad {

// Raised when an adaptive rule cannot reach the requested tolerance; carries
// the achieved error estimate.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double error_estimate)
      : std::runtime_error(what), error_estimate_(error_estimate) {}
  double error_estimate() const { return error_estimate_; }

 private:
  double error_estimate_;
};

// Gauss-Legendre rule with n nodes on [-1, 1], computed by Newton iteration
// on the Legendre polynomial roots.
class GaussLegendre {
 public:
  explicit GaussLegendre(int n);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k)
      sum += weights_[k] * f(mid + half * nodes_[k]);
    return half * sum;
  }

  // Shared rules for the fixed-node SEP/PEP integrals.
  static const GaussLegendre& rule256();
  static const GaussLegendre& rule512();

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Adaptive Gauss-Kronrod 7-15 with recursive bisection; absolute tolerance.
// Throws NumericError if the error estimate cannot be driven below abs_tol.
double adaptive_gk15(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_depth = 40);

// Fixed 256-node evaluation cross-checked against 512 nodes; throws
// NumericError if doubling moves the result by more than rel_tol relative.
double checked_gl256(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-8);

}  // namespace risim::quad
