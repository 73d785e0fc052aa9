#include "wavenorm/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace wavenorm {
namespace {

using json = nlohmann::ordered_json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
json optional_number(const std::optional<T>& v) {
  return v ? number_or_null(*v) : json(nullptr);
}

std::string optional_csv(const std::optional<double>& v) { return v ? csv_number(*v) : std::string(); }

}  // namespace

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

void write_norm_curve_csv(std::ostream& out, const NormCurve& curve, const std::vector<FailedSample>& failed) {
  out << "t,M,method,status\n";
  std::size_t i = 0, j = 0;
  while (i < curve.samples.size() || j < failed.size()) {
    if (j == failed.size() || (i < curve.samples.size() && curve.samples[i].t < failed[j].t)) {
      const auto& s = curve.samples[i++];
      out << csv_number(s.t) << ',' << csv_number(s.M) << ',' << to_string(s.method) << ",ok\n";
    } else {
      const auto& f = failed[j++];
      out << csv_number(f.t) << ",nan,quadrature,failed\n";
    }
  }
}

void write_bounds_csv(std::ostream& out, const std::vector<BoundBreakdown>& rows) {
  out << "t,n,actual,lower,upper,term,value,bound,relation,holds\n";
  for (const auto& b : rows) {
    for (const auto& c : b.checks) {
      out << csv_number(b.t) << ',' << b.n << ',' << csv_number(b.actual) << ',' << csv_number(b.lower.final_lb) << ','
          << csv_number(b.upper.final_ub) << ',' << c.name << ',' << csv_number(c.value) << ',' << csv_number(c.bound)
          << ',' << (c.relation == TermCheck::Relation::le ? "le" : "ge") << ',' << (c.holds() ? 1 : 0) << '\n';
    }
  }
}

void write_local_energy_csv(std::ostream& out, const LocalEnergyReport& rep) {
  out << "t,R,E_R,F,G,energy,morawetz_residual,inequality_slack,M,F_bound,C_assembled,envelope,envelope_fit\n";
  for (const auto& s : rep.samples) {
    out << csv_number(s.t) << ',' << csv_number(rep.R) << ',' << csv_number(s.E_R) << ',' << csv_number(s.F) << ','
        << csv_number(s.G) << ',' << csv_number(s.energy) << ',' << csv_number(s.morawetz_residual) << ','
        << csv_number(s.inequality_slack) << ',' << csv_number(s.M) << ',' << csv_number(s.F_bound) << ','
        << optional_csv(s.C_assembled) << ',' << optional_csv(s.decay_envelope) << ','
        << optional_csv(s.decay_envelope_fit) << '\n';
  }
}

json to_json(const RateFit& fit) {
  json j;
  j["model"] = std::string(to_string(fit.model));
  json params = json::object();
  for (const auto& p : fit.params) params[p.name] = {{"value", number_or_null(p.value)}, {"stderr", number_or_null(p.std_error)}};
  j["params"] = params;
  j["t_window"] = {fit.window.lo, fit.window.hi};
  j["residual_rms"] = number_or_null(fit.residual_rms);
  j["samples_used"] = fit.samples_used;
  if (fit.slope_floor) {
    j["slope_floor"] = number_or_null(*fit.slope_floor);
    j["slope_floor_holds"] = *fit.slope_floor_holds;
  }
  return j;
}

json to_json(const ModelSelection& sel) {
  json j;
  j["selected"] = to_json(sel.chosen);
  json c = json::array();
  for (const auto& f : sel.candidates) c.push_back(to_json(f));
  j["candidates"] = c;
  return j;
}

json to_json(const std::vector<NoiseTrialSummary>& trials) {
  json arr = json::array();
  for (const auto& t : trials) {
    arr.push_back({{"generator", std::string(to_string(t.generator))}, {"trials", t.trials}, {"recovered", t.recovered}});
  }
  return arr;
}

json local_energy_summary(const LocalEnergyReport& rep) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double min_slack = inf, max_residual = 0.0, min_env = inf, min_env_fit = inf;
  for (const auto& s : rep.samples) {
    min_slack = std::min(min_slack, s.inequality_slack);
    max_residual = std::max(max_residual, s.morawetz_residual);
    if (s.decay_envelope) min_env = std::min(min_env, *s.decay_envelope - s.E_R);
    if (s.decay_envelope_fit) min_env_fit = std::min(min_env_fit, *s.decay_envelope_fit - s.E_R);
  }
  json j;
  j["R"] = rep.R;
  j["samples"] = rep.samples.size();
  j["K0"] = number_or_null(rep.K0);
  j["E0"] = number_or_null(rep.E0);
  j["I02"] = number_or_null(rep.I02);
  j["weighted_h1"] = optional_number(rep.weighted_h1);
  j["C_fit"] = optional_number(rep.C_fit);
  j["min_inequality_slack"] = number_or_null(min_slack);
  j["max_morawetz_residual"] = number_or_null(max_residual);
  j["min_envelope_slack"] = number_or_null(min_env);
  j["min_envelope_fit_slack"] = number_or_null(min_env_fit);
  return j;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path));
}

}  // namespace wavenorm
