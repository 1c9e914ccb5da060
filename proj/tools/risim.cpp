// Command-line front end: declares simulation/theory jobs from flags or a
// JSON config file and writes comparable CSV/JSON curve files.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "risim/jobs.hpp"

namespace {

using risim::JobConfig;
using risim::JobKind;

struct RawOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> scheme;
  std::optional<std::string> detector;
  std::optional<int> n;
  std::optional<int> n_r;
  std::optional<std::string> modulation;  // psk | qam
  std::optional<int> m;
  std::optional<std::string> grid;  // start:step:stop in dB
  std::optional<double> kappa;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> min_errors;
  std::optional<std::uint64_t> max_bits;
  std::optional<std::string> mode;  // exact | upper_bound
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> figure;
  std::optional<int> workers;
  std::optional<std::vector<double>> gap_targets;
  bool svg = false;
};

std::vector<double> parse_grid(const std::string& spec) {
  double start = 0, step = 0, stop = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(spec);
  if (!(is >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':')
    throw std::invalid_argument("grid must be start:step:stop (dB)");
  return risim::snr_grid(start, step, stop);
}

// Config file fields use the same names as the long flags; flags win.
void merge_config_file(RawOptions& opt) {
  if (!opt.config_path) return;
  std::ifstream is(*opt.config_path);
  if (!is) throw std::invalid_argument("cannot open config file: " + *opt.config_path);
  nlohmann::json j;
  is >> j;
  const auto set_str = [&](const char* key, std::optional<std::string>& dst) {
    if (!dst && j.contains(key)) dst = j.at(key).get<std::string>();
  };
  const auto set_int = [&](const char* key, std::optional<int>& dst) {
    if (!dst && j.contains(key)) dst = j.at(key).get<int>();
  };
  const auto set_u64 = [&](const char* key, std::optional<std::uint64_t>& dst) {
    if (!dst && j.contains(key)) dst = j.at(key).get<std::uint64_t>();
  };
  set_str("scheme", opt.scheme);
  set_str("detector", opt.detector);
  set_int("N", opt.n);
  set_int("n_R", opt.n_r);
  set_str("modulation", opt.modulation);
  set_int("M", opt.m);
  set_str("grid", opt.grid);
  if (!opt.kappa && j.contains("kappa")) opt.kappa = j.at("kappa").get<double>();
  set_u64("seed", opt.seed);
  set_u64("min_errors", opt.min_errors);
  set_u64("max_bits", opt.max_bits);
  set_str("mode", opt.mode);
  set_str("out", opt.out);
  set_str("format", opt.format);
  set_str("figure", opt.figure);
  set_int("workers", opt.workers);
  if (!opt.gap_targets && j.contains("gap_targets"))
    opt.gap_targets = j.at("gap_targets").get<std::vector<double>>();
}

risim::Constellation make_constellation(const RawOptions& opt) {
  const int m = opt.m.value_or(2);
  std::string kind = opt.modulation.value_or(m == 2 ? "psk" : "qam");
  if (kind != "psk" && kind != "qam")
    throw std::invalid_argument("modulation must be psk or qam");
  return risim::build_constellation(kind == "psk"
                                        ? risim::ConstellationKind::PSK
                                        : risim::ConstellationKind::QAM,
                                    m, 1.0);
}

risim::SimPlan make_plan(const RawOptions& opt, bool need_grid) {
  risim::SimPlan plan;
  plan.scheme = risim::scheme_from_string(opt.scheme.value_or("ssk"));
  plan.detector = risim::detector_from_string(opt.detector.value_or("greedy"));
  plan.N = opt.n.value_or(64);
  plan.n_R = opt.n_r.value_or(2);
  if (plan.scheme == risim::Scheme::SM) plan.constellation = make_constellation(opt);
  if (opt.grid)
    plan.snr_grid_db = parse_grid(*opt.grid);
  else if (need_grid)
    throw std::invalid_argument("missing --grid");
  plan.kappa = opt.kappa;
  plan.seed = opt.seed.value_or(1);
  if (opt.min_errors) plan.stop.min_bit_errors = *opt.min_errors;
  if (opt.max_bits) plan.stop.max_bits = *opt.max_bits;
  return plan;
}

risim::theory::TheoryRequest make_request(const RawOptions& opt) {
  risim::theory::TheoryRequest req;
  req.scheme = risim::scheme_from_string(opt.scheme.value_or("ssk"));
  req.detector = risim::detector_from_string(opt.detector.value_or("greedy"));
  req.N = opt.n.value_or(64);
  req.n_R = opt.n_r.value_or(2);
  if (req.scheme == risim::Scheme::SM) req.constellation = make_constellation(opt);
  if (!opt.grid) throw std::invalid_argument("missing --grid");
  req.snr_grid_db = parse_grid(*opt.grid);
  const std::string mode = opt.mode.value_or("exact");
  if (mode != "exact" && mode != "upper_bound")
    throw std::invalid_argument("mode must be exact or upper_bound");
  req.mode = mode == "exact" ? risim::theory::SskGreedyMode::Exact
                             : risim::theory::SskGreedyMode::UpperBound;
  return req;
}

void add_common(CLI::App* cmd, RawOptions& opt) {
  cmd->add_option("--config", opt.config_path, "JSON config file (flags override it)");
  cmd->add_option("--out", opt.out, "output directory");
  cmd->add_option("--format", opt.format, "csv or json");
  cmd->add_option("--seed", opt.seed, "simulation seed");
  cmd->add_option("--grid", opt.grid, "SNR grid start:step:stop in dB");
  cmd->add_option("--workers", opt.workers, "worker threads (default RISIM_WORKERS)");
  cmd->add_flag("--svg", opt.svg, "also write an SVG overlay plot");
}

void add_model(CLI::App* cmd, RawOptions& opt) {
  cmd->add_option("--scheme", opt.scheme, "ssk or sm");
  cmd->add_option("--detector", opt.detector, "greedy or ml");
  cmd->add_option("-N,--reflectors", opt.n, "RIS reflector count");
  cmd->add_option("--nr", opt.n_r, "receive antenna count (power of two)");
  cmd->add_option("--modulation", opt.modulation, "psk or qam (SM only)");
  cmd->add_option("-M,--order", opt.m, "constellation order (SM only)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted index modulation link simulator and BEP engine"};
  app.require_subcommand(1);

  RawOptions opt;
  auto* sim = app.add_subcommand("simulate", "run a Monte Carlo BER sweep");
  add_common(sim, opt);
  add_model(sim, opt);
  sim->add_option("--kappa", opt.kappa, "von Mises phase-error concentration");
  sim->add_option("--min-errors", opt.min_errors, "stop after this many bit errors");
  sim->add_option("--max-bits", opt.max_bits, "bit budget per SNR point");

  auto* theory = app.add_subcommand("theory", "evaluate analytical BEP curves");
  add_common(theory, opt);
  add_model(theory, opt);
  theory->add_option("--mode", opt.mode, "greedy SSK PEP mode: exact or upper_bound");

  auto* compare = app.add_subcommand("compare", "greedy vs ML, simulation and theory");
  add_common(compare, opt);
  add_model(compare, opt);
  compare->add_option("--min-errors", opt.min_errors, "stop after this many bit errors");
  compare->add_option("--max-bits", opt.max_bits, "bit budget per SNR point");
  compare->add_option("--target-ber", opt.gap_targets, "gap report BER targets");

  auto* figure = app.add_subcommand("figure", "run a named figure preset");
  add_common(figure, opt);
  figure->add_option("--id", opt.figure, "fig3|fig4|fig5|fig6|fig7|fig9");
  figure->add_option("--min-errors", opt.min_errors, "stop-rule override");
  figure->add_option("--max-bits", opt.max_bits, "stop-rule override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : risim::kExitConfigError;
  }

  try {
    merge_config_file(opt);
    JobConfig cfg;
    cfg.out_dir = opt.out.value_or(".");
    cfg.format = opt.format.value_or("csv");
    cfg.workers = opt.workers.value_or(0);
    cfg.svg = opt.svg;
    if (opt.gap_targets) cfg.gap_target_bers = *opt.gap_targets;

    if (sim->parsed()) {
      cfg.kind = JobKind::Simulate;
      cfg.plan = make_plan(opt, true);
    } else if (theory->parsed()) {
      cfg.kind = JobKind::Theory;
      cfg.request = make_request(opt);
    } else if (compare->parsed()) {
      cfg.kind = JobKind::Compare;
      cfg.plan = make_plan(opt, true);
    } else {
      cfg.kind = JobKind::Figure;
      if (!opt.figure) throw std::invalid_argument("figure job needs --id");
      cfg.figure_id = *opt.figure;
      // Carry seed / stop-rule overrides into the preset plans.
      risim::SimPlan overrides;
      overrides.seed = opt.seed.value_or(1);
      if (opt.min_errors) overrides.stop.min_bit_errors = *opt.min_errors;
      if (opt.max_bits) overrides.stop.max_bits = *opt.max_bits;
      overrides.snr_grid_db = {0.0};  // placeholder; presets own their grids
      cfg.plan = overrides;
    }
    return risim::run_job(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return risim::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return risim::kExitConfigError;
  }
}
