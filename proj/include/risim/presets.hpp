#pragma once

#include <optional>
#include <string>
#include <vector>

#include "risim/montecarlo.hpp"
#include "risim/theory.hpp"

namespace risim {

// One named curve inside a figure bundle: a simulation plan, an analytical
// request, or both on the same grid.
struct CurveJob {
  std::string name;
  std::optional<SimPlan> plan;
  std::optional<theory::TheoryRequest> request;
};

std::vector<std::string> figure_ids();

// Pure-data presets for the reproduced figures. The seed parameterizes the
// embedded simulation plans.
std::vector<CurveJob> figure_preset(const std::string& id, std::uint64_t seed);

// start:step:stop (inclusive) SNR grid in dB.
std::vector<double> snr_grid(double start_db, double step_db, double stop_db);

}  // namespace risim
