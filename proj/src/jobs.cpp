#include "risim/jobs.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "json.hpp"

namespace risim {

namespace {

constexpr const char* kVersion = "0.1.0";

nlohmann::json plan_to_json(const SimPlan& plan) {
  nlohmann::json j;
  j["scheme"] = to_string(plan.scheme);
  j["detector"] = to_string(plan.detector);
  j["N"] = plan.N;
  j["n_R"] = plan.n_R;
  if (plan.constellation) {
    j["M"] = plan.constellation->M;
    j["constellation"] = nlohmann::json::parse(plan.constellation->to_json());
  }
  j["snr_grid_db"] = plan.snr_grid_db;
  if (plan.kappa)
    j["kappa"] = *plan.kappa;
  else
    j["kappa"] = "inf";
  j["seed"] = plan.seed;
  j["min_bit_errors"] = plan.stop.min_bit_errors;
  j["max_bits"] = plan.stop.max_bits;
  return j;
}

nlohmann::json request_to_json(const theory::TheoryRequest& req) {
  nlohmann::json j;
  j["scheme"] = to_string(req.scheme);
  j["detector"] = to_string(req.detector);
  j["N"] = req.N;
  j["n_R"] = req.n_R;
  if (req.constellation) j["M"] = req.constellation->M;
  j["snr_grid_db"] = req.snr_grid_db;
  j["mode"] = req.mode == theory::SskGreedyMode::Exact ? "exact" : "upper_bound";
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path.string());
  os << body;
}

void write_rows(const std::filesystem::path& dir, const std::string& name,
                const std::vector<CurveRow>& rows, const std::string& format,
                bool svg) {
  if (format == "csv")
    write_file(dir / (name + ".csv"), rows_to_csv(rows));
  else
    write_file(dir / (name + ".json"), rows_to_json(rows));
  if (svg) write_file(dir / (name + ".svg"), rows_to_svg(rows));
}

// Evaluates a theory request point by point so a numeric failure can name
// the offending grid point.
std::vector<CurveRow> theory_rows(const theory::TheoryRequest& req) {
  std::vector<CurveRow> rows;
  for (double snr_db : req.snr_grid_db) {
    theory::TheoryRequest one = req;
    one.snr_grid_db = {snr_db};
    try {
      const auto curve = theory::evaluate(one);
      const auto r = rows_from_theory(one, curve);
      rows.insert(rows.end(), r.begin(), r.end());
    } catch (const quad::NumericError& e) {
      throw quad::NumericError("theory evaluation failed at " +
                                   std::to_string(snr_db) + " dB: " + e.what(),
                               e.error_estimate());
    } catch (const theory::PoleError& e) {
      throw theory::PoleError("theory evaluation failed at " +
                              std::to_string(snr_db) + " dB: " + e.what());
    }
  }
  return rows;
}

std::vector<CurveRow> filter_rows(const std::vector<CurveRow>& rows,
                                  const std::string& detector,
                                  const std::string& source_prefix) {
  std::vector<CurveRow> out;
  for (const auto& r : rows)
    if (r.detector == detector && r.source.rfind(source_prefix, 0) == 0)
      out.push_back(r);
  return out;
}

// Gap report between greedy and ML rows sharing (scheme, N, n_R, M).
std::string gap_report(const std::vector<CurveRow>& rows,
                       const std::vector<double>& targets) {
  std::ostringstream os;
  os << "scheme,N,n_R,M,source,target_ber,snr_greedy_db,snr_ml_db,gap_db\n";
  // Collect distinct configurations.
  std::vector<std::tuple<std::string, int, int, int>> configs;
  for (const auto& r : rows) {
    auto key = std::make_tuple(r.scheme, r.N, r.n_R, r.M);
    if (std::find(configs.begin(), configs.end(), key) == configs.end())
      configs.push_back(key);
  }
  for (const auto& [scheme, n, n_r, m] : configs) {
    for (const std::string source : {"sim", "theory"}) {
      std::vector<CurveRow> greedy, ml;
      for (const auto& r : rows) {
        if (r.scheme != scheme || r.N != n || r.n_R != n_r || r.M != m) continue;
        const bool is_src = source == "sim" ? r.source == "sim"
                                            : r.source.rfind("theory", 0) == 0;
        if (!is_src) continue;
        (r.detector == "greedy" ? greedy : ml).push_back(r);
      }
      if (greedy.empty() || ml.empty()) continue;
      for (double target : targets) {
        const auto sg = snr_at_ber(greedy, target);
        const auto sml = snr_at_ber(ml, target);
        if (!sg || !sml) continue;
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%s,%d,%d,%d,%s,%.3g,%.4f,%.4f,%.4f\n",
                      scheme.c_str(), n, n_r, m, source.c_str(), target, *sg,
                      *sml, *sg - *sml);
        os << buf;
      }
    }
  }
  return os.str();
}

}  // namespace

int run_job(const JobConfig& cfg) {
  nlohmann::json meta;
  meta["version"] = kVersion;
  meta["format"] = cfg.format;
  meta["workers"] = resolve_workers(cfg.workers);
  const auto t0 = std::chrono::steady_clock::now();

  try {
    if (cfg.format != "csv" && cfg.format != "json") {
      std::cerr << "config error: format must be csv or json\n";
      return kExitConfigError;
    }
    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path dir(cfg.out_dir);

    switch (cfg.kind) {
      case JobKind::Simulate: {
        if (!cfg.plan) {
          std::cerr << "config error: simulate job needs a plan\n";
          return kExitConfigError;
        }
        cfg.plan->validate();
        meta["kind"] = "simulate";
        meta["plan"] = plan_to_json(*cfg.plan);
        const BerCurve curve = run_sweep(*cfg.plan, cfg.workers);
        write_rows(dir, "sim", rows_from_sim(*cfg.plan, curve), cfg.format, cfg.svg);
        for (const auto& rec : curve) meta["wall_seconds"].push_back(rec.wall_seconds);
        break;
      }
      case JobKind::Theory: {
        if (!cfg.request) {
          std::cerr << "config error: theory job needs a request\n";
          return kExitConfigError;
        }
        meta["kind"] = "theory";
        meta["request"] = request_to_json(*cfg.request);
        write_rows(dir, "theory", theory_rows(*cfg.request), cfg.format, cfg.svg);
        break;
      }
      case JobKind::Compare: {
        if (!cfg.plan) {
          std::cerr << "config error: compare job needs a plan\n";
          return kExitConfigError;
        }
        meta["kind"] = "compare";
        meta["plan"] = plan_to_json(*cfg.plan);
        std::vector<CurveRow> rows;
        for (DetectorKind det : {DetectorKind::Greedy, DetectorKind::ML}) {
          SimPlan plan = *cfg.plan;
          plan.detector = det;
          plan.validate();
          const BerCurve curve = run_sweep(plan, cfg.workers);
          auto r = rows_from_sim(plan, curve);
          rows.insert(rows.end(), r.begin(), r.end());
          for (const auto& rec : curve) meta["wall_seconds"].push_back(rec.wall_seconds);

          theory::TheoryRequest req;
          req.scheme = plan.scheme;
          req.detector = det;
          req.N = plan.N;
          req.n_R = plan.n_R;
          req.constellation = plan.constellation;
          req.snr_grid_db = plan.snr_grid_db;
          auto tr = theory_rows(req);
          rows.insert(rows.end(), tr.begin(), tr.end());
        }
        write_rows(dir, "compare", rows, cfg.format, cfg.svg);
        write_file(dir / "gaps.csv", gap_report(rows, cfg.gap_target_bers));
        break;
      }
      case JobKind::Figure: {
        meta["kind"] = "figure";
        meta["figure"] = cfg.figure_id;
        const auto jobs = figure_preset(cfg.figure_id,
                                        cfg.plan ? cfg.plan->seed : 1);
        std::vector<CurveRow> rows;
        for (const auto& job : jobs) {
          if (job.plan) {
            SimPlan plan = *job.plan;
            if (cfg.plan) {  // stop-rule / seed overrides from flags
              plan.seed = cfg.plan->seed;
              plan.stop = cfg.plan->stop;
            }
            plan.validate();
            const BerCurve curve = run_sweep(plan, cfg.workers);
            auto r = rows_from_sim(plan, curve);
            rows.insert(rows.end(), r.begin(), r.end());
            for (const auto& rec : curve) meta["wall_seconds"].push_back(rec.wall_seconds);
          }
          if (job.request) {
            auto tr = theory_rows(*job.request);
            rows.insert(rows.end(), tr.begin(), tr.end());
          }
        }
        write_rows(dir, cfg.figure_id, rows, cfg.format, cfg.svg);
        if (cfg.figure_id == "fig7")
          write_file(dir / "gaps.csv", gap_report(rows, cfg.gap_target_bers));
        break;
      }
    }

    meta["total_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_file(std::filesystem::path(cfg.out_dir) / "job.json", meta.dump(2) + "\n");
    return kExitOk;
  } catch (const quad::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumericError;
  } catch (const theory::PoleError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumericError;
  } catch (const std::domain_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumericError;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace risim
