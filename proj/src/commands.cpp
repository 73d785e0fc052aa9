#include "wavenorm/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <functional>
#include <ostream>
#include <sstream>
#include <vector>

#include "wavenorm/analysis.hpp"
#include "wavenorm/bessel.hpp"
#include "wavenorm/bounds.hpp"
#include "wavenorm/config.hpp"
#include "wavenorm/detail/parallel.hpp"
#include "wavenorm/error.hpp"
#include "wavenorm/local_energy.hpp"
#include "wavenorm/oracles.hpp"
#include "wavenorm/report_io.hpp"

namespace wavenorm {
namespace {

constexpr int kNoiseTrials = 100;
constexpr double kNoiseLevel = 0.01;

ExperimentConfig load(const CommandOptions& opt) {
  ExperimentConfig cfg = opt.config_path ? load_config(*opt.config_path) : default_config();
  if (opt.out_dir) cfg.out_dir = *opt.out_dir;
  return cfg;
}

std::string out_path(const ExperimentConfig& cfg, const char* name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

class CheckTable {
public:
  explicit CheckTable(std::ostream& out) : out_(out) {
    out_ << fmt::format("{:<44} {:>24} {:>12}  {}\n", "check", "value", "limit", "status");
  }

  void row(const std::string& name, double value, double limit, bool pass) {
    out_ << fmt::format("{:<44} {:>24.17g} {:>12.3g}  {}\n", name, value, limit, pass ? "PASS" : "FAIL");
    if (!pass) failures_.push_back(name);
  }

  void note(const std::string& name, const std::string& what) {
    out_ << fmt::format("{:<44} {:>24} {:>12}  PASS\n", name, what, "-");
  }

  const std::vector<std::string>& failures() const { return failures_; }

private:
  std::ostream& out_;
  std::vector<std::string> failures_;
};

// Times outside the regime of the estimates are dropped.
std::vector<BoundBreakdown> breakdowns(const SpectralState& s, std::vector<double> times, unsigned threads) {
  std::erase_if(times, [&](double t) { return !in_bound_regime(s.pp.dimension(), t, s.constants); });
  std::vector<BoundBreakdown> rows(times.size());
  detail::parallel_for(times.size(), threads, [&](std::size_t i) { rows[i] = bound_breakdown(s, times[i]); });
  return rows;
}

int count_failures(const std::vector<BoundBreakdown>& rows, std::ostream& err) {
  int failures = 0;
  for (const auto& b : rows) {
    if (const TermCheck* f = b.first_failure()) {
      err << fmt::format("bound violation at t = {:.17g}: {} = {:.17g} vs {:.17g}\n", b.t, f->name, f->value, f->bound);
      ++failures;
    }
  }
  return failures;
}

bool is_zero_data(const ProfilePair& pp) { return pp.u0.is_zero() && pp.u1.is_zero(); }

bool has_gaussian_tail(const ProfilePair& pp) {
  auto smooth = [](const Profile& p) { return p.is_zero() || p.fourier_envelope().rate > 0.0; };
  return smooth(pp.u0) && smooth(pp.u1);
}

}  // namespace

int cmd_verify(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load(opt);
    CheckTable table(out);

    for (const auto& r : verify_example({2.5, 5.0, 10.0, 100.0})) {
      out << fmt::format("example t0 = {}: closed form {:.10f}\n", r.t0, r.closed_form);
      table.row(fmt::format("example t0={} dalembert", r.t0), r.rel_dalembert, 1e-9, r.rel_dalembert <= 1e-9);
      table.row(fmt::format("example t0={} spectral", r.t0), r.rel_spectral, 1e-6, r.rel_spectral <= 1e-6);
      table.row(fmt::format("example t0={} grid", r.t0), r.rel_grid, 1e-6, r.rel_grid <= 1e-6);
    }

    double bessel_err = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double x = 20.0 * i / 2000.0;
      bessel_err = std::max(bessel_err, std::fabs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)));
      bessel_err = std::max(bessel_err, std::fabs(bessel_j1(x) - std::cyl_bessel_j(1.0, x)));
    }
    table.row("bessel J0/J1 on [0,20]", bessel_err, 1e-12, bessel_err <= 1e-12);

    const SpectralState s(cfg.profiles, cfg.constants, cfg.quad);
    const std::vector<double> energy_times{0.0, 1.0, 10.0, 100.0, 1000.0};
    if (has_gaussian_tail(cfg.profiles)) {
      const double e0 = energy(s, 0.0).total();
      double drift = 0.0;
      for (double t : energy_times) drift = std::max(drift, std::fabs(energy(s, t).total() - e0));
      const double rel_drift = e0 > 0.0 ? drift / e0 : drift;
      table.row("spectral energy drift", rel_drift, 1e-8, rel_drift <= 1e-8);
    } else {
      table.note("spectral energy drift", "skipped: slow tail");
    }

    if (is_zero_data(cfg.profiles)) {
      table.note("grid energy drift", "vacuous");
      table.note("moment remainder sup", "vacuous");
      table.note("sandwich", "vacuous");
    } else {
      const GridField g0 = grid_solve(cfg.profiles, cfg.grid.half_length, cfg.grid.points, 0.0);
      const double ge0 = g0.discrete_energy();
      double gdrift = 0.0;
      for (double t : energy_times) {
        if (t == 0.0 || !(t < g0.horizon())) continue;
        gdrift = std::max(gdrift, std::fabs(grid_solve(cfg.profiles, cfg.grid.half_length, cfg.grid.points, t).discrete_energy() - ge0));
      }
      const double rel_gdrift = ge0 > 0.0 ? gdrift / ge0 : gdrift;
      table.row("grid energy drift", rel_gdrift, 1e-10, rel_gdrift <= 1e-10);

      if (s.norms.l11_u1) {
        const double sup = moment_remainder_sup(s);
        table.row("moment remainder sup", sup, cfg.constants.M, sup <= cfg.constants.M);
      } else {
        table.note("moment remainder sup", "infinite l11");
      }

      const auto rows = breakdowns(s, log_space(cfg.samples.start, cfg.samples.stop, 8), opt.threads);
      const int bad = count_failures(rows, err);
      table.row("sandwich term failures", bad, 0, bad == 0);
    }

    if (!table.failures().empty()) {
      err << "failed: " << table.failures().front() << '\n';
      return static_cast<int>(kExitFailure);
    }
    return static_cast<int>(kExitPass);
  });
}

int cmd_rates(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load(opt);
    const SpectralState s(cfg.profiles, cfg.constants, cfg.quad);
    const auto times = cfg.times();

    std::vector<double> values(times.size(), 0.0);
    std::vector<std::string> errors(times.size());
    detail::parallel_for(times.size(), opt.threads, [&](std::size_t i) {
      try {
        values[i] = l2_norm(s, times[i]);
      } catch (const QuadratureError& e) {
        errors[i] = e.what();
      }
    });
    NormCurve curve;
    curve.dimension = cfg.dimension;
    curve.data_norms = s.norms;
    std::vector<FailedSample> failed;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (errors[i].empty()) {
        curve.append({times[i], values[i], NormMethod::quadrature});
      } else {
        failed.push_back({times[i], errors[i]});
        err << fmt::format("quadrature failure at t = {:.17g}: {}\n", times[i], errors[i]);
      }
    }
    std::ostringstream csv;
    write_norm_curve_csv(csv, curve, failed);
    write_text_file(out_path(cfg, "norm_curve.csv"), csv.str());

    nlohmann::ordered_json report;
    report["dimension"] = cfg.dimension;
    report["P"] = s.norms.P;
    const ModelSelection sel = model_select(curve, cfg.constants);
    report["model_select"] = to_json(sel);
    const TimeWindow window{cfg.samples.start, cfg.samples.stop};
    const RateFit fit = cfg.dimension == 1 ? fit_power(curve, window) : fit_loglinear(curve, window, cfg.constants);
    report["window_fit"] = to_json(fit);
    report["noise_trials"] = {{"seed", opt.seed},
                              {"noise", kNoiseLevel},
                              {"results", to_json(noise_trials(kNoiseTrials, kNoiseLevel, opt.seed))}};
    write_text_file(out_path(cfg, "rate_fit.json"), dump_json(report));

    const auto rows = breakdowns(s, times, opt.threads);
    std::ostringstream bcsv;
    write_bounds_csv(bcsv, rows);
    write_text_file(out_path(cfg, "bounds.csv"), bcsv.str());
    const int bad = count_failures(rows, err);

    out << fmt::format("selected model: {} (rms {:.3e})\n", to_string(sel.chosen.model), sel.chosen.residual_rms);
    for (const auto& p : fit.params) out << fmt::format("  {} = {:.10g} +- {:.3g}\n", p.name, p.value, p.std_error);
    out << fmt::format("wrote {}\n", cfg.out_dir);
    return static_cast<int>(failed.empty() && bad == 0 ? kExitPass : kExitFailure);
  });
}

int cmd_bounds(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load(opt);
    const SpectralState s(cfg.profiles, cfg.constants, cfg.quad);
    const auto rows = breakdowns(s, cfg.times(), opt.threads);
    std::ostringstream csv;
    write_bounds_csv(csv, rows);
    write_text_file(out_path(cfg, "bounds.csv"), csv.str());
    const int bad = count_failures(rows, err);
    std::size_t checks = 0;
    for (const auto& b : rows) checks += b.checks.size();
    out << fmt::format("{} inequalities over {} times, {} times with a violation\n", checks, rows.size(), bad);
    return static_cast<int>(bad == 0 ? kExitPass : kExitFailure);
  });
}

int cmd_local_energy(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load(opt);
    if (cfg.local_energy.times.empty()) throw ConfigError("local_energy.times: no times given");
    const SpectralState s(cfg.profiles, cfg.constants, cfg.quad);
    LocalEnergyReport rep;
    try {
      rep = local_energy_report(s, cfg.local_energy.R, cfg.local_energy.times, cfg.grid, opt.threads);
    } catch (const HorizonError& e) {
      throw ConfigError(fmt::format("local_energy.times: {}", e.what()));
    } catch (const DomainError& e) {
      throw ConfigError(fmt::format("local_energy: {}", e.what()));
    }
    std::ostringstream csv;
    write_local_energy_csv(csv, rep);
    write_text_file(out_path(cfg, "local_energy.csv"), csv.str());
    write_text_file(out_path(cfg, "local_energy.json"), dump_json(local_energy_summary(rep)));

    int bad = 0;
    for (const auto& smp : rep.samples) {
      std::vector<std::string> why;
      if (smp.morawetz_residual > 1e-6) why.push_back("morawetz residual");
      if (smp.inequality_slack < -1e-8 * (1.0 + rep.K0)) why.push_back("local energy inequality");
      if (smp.decay_envelope && *smp.decay_envelope < smp.E_R) why.push_back("decay envelope");
      for (const auto& w : why) err << fmt::format("t = {:.17g}: {} fails\n", smp.t, w);
      bad += !why.empty();
    }
    out << fmt::format("K0 = {:.17g}, E(0) = {:.17g}, {} samples, {} failing\n", rep.K0, rep.E0, rep.samples.size(), bad);
    return static_cast<int>(bad == 0 ? kExitPass : kExitFailure);
  });
}

int cmd_config(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.print_default) {
      out << default_config_text();
      return static_cast<int>(kExitPass);
    }
    const ExperimentConfig cfg = load(opt);
    out << fmt::format("config ok: dimension {}, u0 {}, u1 {}, {} samples on [{}, {}]\n", cfg.dimension,
                       cfg.profiles.u0.kind_name(), cfg.profiles.u1.kind_name(), cfg.samples.count, cfg.samples.start,
                       cfg.samples.stop);
    return static_cast<int>(kExitPass);
  });
}

int run_command(const std::string& name, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  if (name == "verify") return cmd_verify(opt, out, err);
  if (name == "rates") return cmd_rates(opt, out, err);
  if (name == "bounds") return cmd_bounds(opt, out, err);
  if (name == "local-energy") return cmd_local_energy(opt, out, err);
  if (name == "config") return cmd_config(opt, out, err);
  err << "unknown command '" << name << "'\n";
  return kExitConfig;
}

}  // namespace wavenorm
