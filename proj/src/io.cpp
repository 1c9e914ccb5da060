#include "risim/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

namespace risim {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string kappa_str(double kappa) {
  return std::isinf(kappa) ? "inf" : fmt("%.10g", kappa);
}

nlohmann::json row_to_json(const CurveRow& r) {
  nlohmann::json j;
  j["scheme"] = r.scheme;
  j["detector"] = r.detector;
  j["N"] = r.N;
  j["n_R"] = r.n_R;
  j["M"] = r.M;
  if (std::isinf(r.kappa))
    j["kappa"] = "inf";
  else
    j["kappa"] = r.kappa;
  j["snr_db"] = r.snr_db;
  j["ber"] = r.ber;
  j["ci_lo"] = r.ci_lo;
  j["ci_hi"] = r.ci_hi;
  j["bits"] = r.bits;
  j["errors"] = r.errors;
  j["source"] = r.source;
  return j;
}

CurveRow row_from_json_obj(const nlohmann::json& j) {
  CurveRow r;
  r.scheme = j.at("scheme").get<std::string>();
  r.detector = j.at("detector").get<std::string>();
  r.N = j.at("N").get<int>();
  r.n_R = j.at("n_R").get<int>();
  r.M = j.at("M").get<int>();
  const auto& k = j.at("kappa");
  r.kappa = k.is_string() ? std::numeric_limits<double>::infinity()
                          : k.get<double>();
  r.snr_db = j.at("snr_db").get<double>();
  r.ber = j.at("ber").get<double>();
  r.ci_lo = j.at("ci_lo").get<double>();
  r.ci_hi = j.at("ci_hi").get<double>();
  r.bits = j.at("bits").get<std::uint64_t>();
  r.errors = j.at("errors").get<std::uint64_t>();
  r.source = j.at("source").get<std::string>();
  return r;
}

}  // namespace

std::string csv_header() {
  return "scheme,detector,N,n_R,M,kappa,snr_db,ber,ci_lo,ci_hi,bits,errors,source";
}

std::string to_csv_line(const CurveRow& r) {
  std::ostringstream os;
  os << r.scheme << ',' << r.detector << ',' << r.N << ',' << r.n_R << ','
     << r.M << ',' << kappa_str(r.kappa) << ',' << fmt("%.10g", r.snr_db) << ','
     << fmt("%.10e", r.ber) << ',' << fmt("%.10e", r.ci_lo) << ','
     << fmt("%.10e", r.ci_hi) << ',' << r.bits << ',' << r.errors << ','
     << r.source;
  return os.str();
}

std::string rows_to_csv(const std::vector<CurveRow>& rows) {
  std::ostringstream os;
  os << csv_header() << '\n';
  for (const auto& r : rows) os << to_csv_line(r) << '\n';
  return os.str();
}

std::string rows_to_json(const std::vector<CurveRow>& rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) arr.push_back(row_to_json(r));
  return arr.dump(2);
}

std::vector<CurveRow> rows_from_json(const std::string& text) {
  const auto arr = nlohmann::json::parse(text);
  std::vector<CurveRow> rows;
  for (const auto& j : arr) rows.push_back(row_from_json_obj(j));
  return rows;
}

std::vector<CurveRow> rows_from_sim(const SimPlan& plan, const BerCurve& curve) {
  std::vector<CurveRow> rows;
  for (const auto& rec : curve) {
    CurveRow r;
    r.scheme = to_string(plan.scheme);
    r.detector = to_string(plan.detector);
    r.N = plan.N;
    r.n_R = plan.n_R;
    r.M = plan.constellation ? plan.constellation->M : 0;
    r.kappa = plan.kappa.value_or(std::numeric_limits<double>::infinity());
    r.snr_db = rec.snr_db;
    r.ber = rec.ber;
    r.ci_lo = rec.ci_lo;
    r.ci_hi = rec.ci_hi;
    r.bits = rec.bits_sent;
    r.errors = rec.bit_errors;
    r.source = "sim";
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<CurveRow> rows_from_theory(const theory::TheoryRequest& req,
                                       const theory::TheoryCurve& curve) {
  std::vector<CurveRow> rows;
  for (const auto& pt : curve.points) {
    CurveRow r;
    r.scheme = to_string(req.scheme);
    r.detector = to_string(req.detector);
    r.N = req.N;
    r.n_R = req.n_R;
    r.M = req.constellation ? req.constellation->M : 0;
    r.kappa = std::numeric_limits<double>::infinity();
    r.snr_db = pt.snr_db;
    r.ber = pt.bep;
    r.ci_lo = pt.bep;
    r.ci_hi = pt.bep;
    r.source = curve.source;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::optional<double> snr_at_ber(const std::vector<CurveRow>& rows,
                                 double target_ber) {
  std::vector<CurveRow> sorted = rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const CurveRow& a, const CurveRow& b) { return a.snr_db < b.snr_db; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double b0 = sorted[i - 1].ber;
    const double b1 = sorted[i].ber;
    if (b0 <= 0.0 || b1 <= 0.0) continue;
    const bool brackets = (b0 >= target_ber && b1 <= target_ber) ||
                          (b0 <= target_ber && b1 >= target_ber);
    if (!brackets || b0 == b1) continue;
    const double t = (std::log10(target_ber) - std::log10(b0)) /
                     (std::log10(b1) - std::log10(b0));
    return sorted[i - 1].snr_db + t * (sorted[i].snr_db - sorted[i - 1].snr_db);
  }
  return std::nullopt;
}

std::string rows_to_svg(const std::vector<CurveRow>& rows) {
  std::map<std::string, std::vector<const CurveRow*>> groups;
  double snr_min = 1e300, snr_max = -1e300, ber_min = 1.0;
  for (const auto& r : rows) {
    if (r.ber <= 0.0) continue;
    std::ostringstream key;
    key << r.scheme << '-' << r.detector << "-N" << r.N << "-nR" << r.n_R
        << "-M" << r.M << "-k" << kappa_str(r.kappa) << '-' << r.source;
    groups[key.str()].push_back(&r);
    snr_min = std::min(snr_min, r.snr_db);
    snr_max = std::max(snr_max, r.snr_db);
    ber_min = std::min(ber_min, r.ber);
  }
  if (groups.empty() || snr_max <= snr_min) return "<svg xmlns='http://www.w3.org/2000/svg'/>";
  const double y_lo = std::floor(std::log10(ber_min));
  const double w = 640, h = 480, pad = 50;
  const auto sx = [&](double snr) {
    return pad + (snr - snr_min) / (snr_max - snr_min) * (w - 2 * pad);
  };
  const auto sy = [&](double ber) {
    return pad + (std::log10(ber) / y_lo) * (h - 2 * pad);
  };
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='"
     << h << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  int ci = 0;
  double label_y = pad;
  for (const auto& [name, pts] : groups) {
    auto sorted = pts;
    std::sort(sorted.begin(), sorted.end(),
              [](const CurveRow* a, const CurveRow* b) { return a->snr_db < b->snr_db; });
    const char* color = palette[ci++ % 8];
    os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (const auto* p : sorted) os << sx(p->snr_db) << ',' << sy(p->ber) << ' ';
    os << "'/>\n<text x='" << w - pad - 180 << "' y='" << label_y
       << "' font-size='10' fill='" << color << "'>" << name << "</text>\n";
    label_y += 12;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace risim
