#pragma once

#include <optional>
#include <string>
#include <vector>

#include "risim/montecarlo.hpp"
#include "risim/theory.hpp"

namespace risim {

// One row of the shared curve schema. Simulation and theory curves serialize
// to the same columns so they can be overlaid directly.
struct CurveRow {
  std::string scheme;
  std::string detector;
  int N = 0;
  int n_R = 0;
  int M = 0;           // 0 for SSK
  double kappa = 0.0;  // +inf for perfect phase estimation
  double snr_db = 0.0;
  double ber = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t bits = 0;    // 0 for theory rows
  std::uint64_t errors = 0;  // 0 for theory rows
  std::string source;        // sim | theory-exact | theory-bound
};

// Exactly the stable header the output contract pins down.
std::string csv_header();
std::string to_csv_line(const CurveRow& row);
std::string rows_to_csv(const std::vector<CurveRow>& rows);

std::string rows_to_json(const std::vector<CurveRow>& rows);
std::vector<CurveRow> rows_from_json(const std::string& text);

std::vector<CurveRow> rows_from_sim(const SimPlan& plan, const BerCurve& curve);
std::vector<CurveRow> rows_from_theory(const theory::TheoryRequest& req,
                                       const theory::TheoryCurve& curve);

// SNR (dB) at which a curve crosses target_ber, by linear interpolation of
// snr against log10(ber) between adjacent grid points. Empty when the curve
// never brackets the target.
std::optional<double> snr_at_ber(const std::vector<CurveRow>& rows,
                                 double target_ber);

// Minimal static SVG with every curve overlaid (log-scale BER axis).
std::string rows_to_svg(const std::vector<CurveRow>& rows);

}  // namespace risim
