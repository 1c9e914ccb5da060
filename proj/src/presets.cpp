#include "risim/presets.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace risim {

std::vector<double> snr_grid(double start_db, double step_db, double stop_db) {
  if (!(step_db > 0.0) || stop_db < start_db)
    throw std::invalid_argument("snr_grid: need step > 0 and stop >= start");
  std::vector<double> grid;
  const int count = static_cast<int>(std::floor((stop_db - start_db) / step_db + 1e-9)) + 1;
  for (int k = 0; k < count; ++k) grid.push_back(start_db + k * step_db);
  return grid;
}

std::vector<std::string> figure_ids() {
  return {"fig3", "fig4", "fig5", "fig6", "fig7", "fig9"};
}

namespace {

std::string curve_name(const std::string& fig, Scheme s, DetectorKind d, int n,
                       int n_r, int m, double kappa) {
  std::ostringstream os;
  os << fig << '_' << to_string(s) << '_' << to_string(d) << "_N" << n << "_nR"
     << n_r;
  if (m > 0) os << "_M" << m;
  if (!std::isinf(kappa)) os << "_k" << kappa;
  return os.str();
}

Constellation preset_constellation(int m) {
  return build_constellation(m == 2 ? ConstellationKind::PSK : ConstellationKind::QAM,
                             m, 1.0);
}

CurveJob make_job(const std::string& fig, Scheme s, DetectorKind d, int n,
                  int n_r, int m, std::vector<double> grid, std::uint64_t seed,
                  bool with_sim, bool with_theory,
                  double kappa = std::numeric_limits<double>::infinity(),
                  theory::SskGreedyMode mode = theory::SskGreedyMode::Exact) {
  CurveJob job;
  job.name = curve_name(fig, s, d, n, n_r, m, kappa);
  std::optional<Constellation> c;
  if (s == Scheme::SM) c = preset_constellation(m);
  if (with_sim) {
    SimPlan plan;
    plan.scheme = s;
    plan.detector = d;
    plan.N = n;
    plan.n_R = n_r;
    plan.constellation = c;
    plan.snr_grid_db = grid;
    if (!std::isinf(kappa)) plan.kappa = kappa;
    plan.seed = seed;
    job.plan = plan;
  }
  if (with_theory) {
    theory::TheoryRequest req;
    req.scheme = s;
    req.detector = d;
    req.N = n;
    req.n_R = n_r;
    req.constellation = c;
    req.snr_grid_db = std::move(grid);
    req.mode = mode;
    job.request = req;
  }
  return job;
}

}  // namespace

std::vector<CurveJob> figure_preset(const std::string& id, std::uint64_t seed) {
  using enum Scheme;
  using enum DetectorKind;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<CurveJob> jobs;

  // Grids cover roughly BER 1e-1 down to 1e-5 for each configuration.
  if (id == "fig3") {
    // Theory-only: ML bounds at N = 128 for growing n_R.
    for (int n_r : {2, 4, 8})
      jobs.push_back(make_job(id, SSK, ML, 128, n_r, 0,
                              snr_grid(-36, 1, -27), seed, false, true));
    for (int n_r : {2, 4})
      jobs.push_back(make_job(id, SM, ML, 128, n_r, 4,
                              snr_grid(-36, 1, -27), seed, false, true));
  } else if (id == "fig4") {
    // Greedy RIS-SSK, simulation overlaid on the analytical curves.
    jobs.push_back(make_job(id, SSK, Greedy, 64, 2, 0, snr_grid(-30, 1, -20), seed, true, true));
    jobs.push_back(make_job(id, SSK, Greedy, 64, 4, 0, snr_grid(-28, 1, -20), seed, true, true));
    jobs.push_back(make_job(id, SSK, Greedy, 128, 2, 0, snr_grid(-36, 1, -27), seed, true, true));
    jobs.push_back(make_job(id, SSK, Greedy, 128, 4, 0, snr_grid(-34, 1, -27), seed, true, true));
  } else if (id == "fig5") {
    // Greedy RIS-SM.
    jobs.push_back(make_job(id, SM, Greedy, 64, 2, 2, snr_grid(-33, 1, -21), seed, true, true));
    jobs.push_back(make_job(id, SM, Greedy, 64, 2, 4, snr_grid(-31, 1, -21), seed, true, true));
    jobs.push_back(make_job(id, SM, Greedy, 64, 2, 16, snr_grid(-28, 2, -4), seed, true, true));
    jobs.push_back(make_job(id, SM, Greedy, 128, 2, 2, snr_grid(-36, 1, -28), seed, true, true));
  } else if (id == "fig6") {
    // ML detection for both schemes.
    jobs.push_back(make_job(id, SSK, ML, 64, 2, 0, snr_grid(-34, 1, -22), seed, true, true));
    jobs.push_back(make_job(id, SSK, ML, 64, 4, 0, snr_grid(-31, 1, -22), seed, true, true));
    jobs.push_back(make_job(id, SM, ML, 64, 2, 2, snr_grid(-32, 1, -22), seed, true, true));
    jobs.push_back(make_job(id, SM, ML, 64, 2, 4, snr_grid(-30, 1, -21), seed, true, true));
  } else if (id == "fig7") {
    // Greedy vs ML head-to-head on shared grids.
    jobs.push_back(make_job(id, SSK, Greedy, 64, 2, 0, snr_grid(-34, 1, -20), seed, true, true));
    jobs.push_back(make_job(id, SSK, ML, 64, 2, 0, snr_grid(-34, 1, -20), seed, true, true));
    jobs.push_back(make_job(id, SSK, Greedy, 128, 8, 0, snr_grid(-35, 1, -27), seed, true, true));
    jobs.push_back(make_job(id, SSK, ML, 128, 8, 0, snr_grid(-35, 1, -27), seed, true, true));
  } else if (id == "fig9") {
    // Phase estimation error study.
    for (double kappa : {5.0, 10.0, inf}) {
      jobs.push_back(make_job(id, SSK, Greedy, 64, 2, 0, snr_grid(-30, 1, -20),
                              seed, true, false, kappa));
      jobs.push_back(make_job(id, SM, Greedy, 64, 2, 2, snr_grid(-33, 1, -21),
                              seed, true, false, kappa));
    }
    jobs.push_back(make_job(id, SSK, Greedy, 64, 2, 0, snr_grid(-30, 1, -20), seed, false, true));
    jobs.push_back(make_job(id, SM, Greedy, 64, 2, 2, snr_grid(-33, 1, -21), seed, false, true));
  } else {
    throw std::invalid_argument("unknown figure id: " + id);
  }
  return jobs;
}

}  // namespace risim
