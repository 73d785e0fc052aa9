#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "wavenorm/analysis.hpp"
#include "wavenorm/bounds.hpp"
#include "wavenorm/local_energy.hpp"
#include "wavenorm/spectral.hpp"

namespace wavenorm {

/// A time whose evaluation failed; written as a flagged row.
struct FailedSample {
  double t = 0.0;
  std::string error;
};

/// 17 significant digits; "nan"/"inf" for non-finite values.
std::string csv_number(double v);

/// t,M,method,status with rows in increasing t.
void write_norm_curve_csv(std::ostream& out, const NormCurve& curve, const std::vector<FailedSample>& failed = {});

/// One row per inequality: t,n,actual,lower,upper,term,value,bound,relation,holds
void write_bounds_csv(std::ostream& out, const std::vector<BoundBreakdown>& rows);

/// One row per sample of the local energy report.
void write_local_energy_csv(std::ostream& out, const LocalEnergyReport& rep);

nlohmann::ordered_json to_json(const RateFit& fit);
nlohmann::ordered_json to_json(const ModelSelection& sel);
nlohmann::ordered_json to_json(const std::vector<NoiseTrialSummary>& trials);
/// K0, E(0) and the extreme slacks of the report.
nlohmann::ordered_json local_energy_summary(const LocalEnergyReport& rep);

/// Writes text to path, creating parent directories. Throws
/// std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& text);
std::string dump_json(const nlohmann::ordered_json& j);

}  // namespace wavenorm
