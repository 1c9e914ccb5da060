#pragma once

#include <optional>
#include <string>
#include <vector>

#include "risim/io.hpp"
#include "risim/montecarlo.hpp"
#include "risim/presets.hpp"
#include "risim/theory.hpp"

namespace risim {

// Process exit codes shared by the job runner and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;

enum class JobKind { Simulate, Theory, Compare, Figure };

struct JobConfig {
  JobKind kind = JobKind::Simulate;
  std::optional<SimPlan> plan;
  std::optional<theory::TheoryRequest> request;
  std::string out_dir = ".";
  std::string format = "csv";  // csv | json
  std::string figure_id;       // figure jobs
  std::vector<double> gap_target_bers = {1e-4};
  int workers = 0;
  bool svg = false;
};

// Runs one job and writes its output files plus job.json provenance
// metadata under out_dir. Returns a process exit code; diagnostics go to
// stderr. CSV bodies contain no timing, so equal-seed runs are
// byte-identical whatever the worker count.
int run_job(const JobConfig& cfg);

}  // namespace risim
