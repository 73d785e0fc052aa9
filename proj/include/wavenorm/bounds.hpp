#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavenorm/spectral.hpp"

namespace wavenorm {

/// One inequality of an estimate chain, evaluated at a single t.
struct TermCheck {
  enum class Relation { le, ge };

  std::string name;
  double value = 0.0;
  double bound = 0.0;
  Relation relation = Relation::le;

  /// value <= bound (le) or value >= bound (ge) up to rounding slack.
  bool holds() const;
  double slack() const { return relation == Relation::le ? bound - value : value - bound; }
};

struct LowerTerms {
  double Ilow = 0.0;
  double J1 = 0.0;
  double J2 = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double K1_lb = 0.0;
  double K2_ub = 0.0;
  double J1_lb = 0.0;
  double J2_ub = 0.0;
  /// P^2 omega_n delta0^n t^{2-n} / (32 n), claimed for t >= t_threshold.
  double Ilow_lb = 0.0;
  /// Assembled lower envelope (the low-frequency chain for n = 1, the
  /// Gaussian-weight chain for n = 2).
  double final_lb = 0.0;

  // Gaussian-weight chain (n = 2 only).
  double T = 0.0;
  double T_lb = 0.0;
  double T_intervals = 0.0;
  double T_tail = 0.0;
  double T_unit = 0.0;
  double S1 = 0.0;
  double C0 = 0.0;
  double K2e = 0.0;
};

struct UpperTerms {
  double L1 = 0.0;
  double L2 = 0.0;
  double L1_ub = 0.0;
  double L2_ub = 0.0;
  double Ilow_ub = 0.0;
  double N1 = 0.0;
  double N2 = 0.0;
  double N2_ub = 0.0;
  /// Zone integrals of sin^2/|xi|^2 |w1^|^2, outermost zone first.
  std::vector<double> O;
  std::vector<double> O_ub;
  double N1_ub = 0.0;
  double Ihigh = 0.0;
  double Ihigh_ub = 0.0;
  double final_ub = 0.0;
};

struct BoundBreakdown {
  double t = 0.0;
  int n = 1;
  /// (2 pi)^n ||u(t)||^2 = ||w(t)||^2 from the spectral path.
  double actual = 0.0;
  LowerTerms lower;
  UpperTerms upper;
  /// Time beyond which final_lb > 0 (solved from the closed form).
  double t_star = 0.0;
  /// Time beyond which Ilow >= Ilow_lb is claimed.
  double t_threshold = 0.0;
  std::vector<TermCheck> checks;

  /// First failing check, if any.
  const TermCheck* first_failure() const;
};

/// Closed-form lower envelope for ||w(t)||^2. Throws DomainError when
/// ||u1||_{1,1} is missing or (n = 2) 5 pi / (4t) >= 1.
double lower_envelope(int n, double t, const DataNorms& norms, const ProofConstants& c);

/// Closed-form upper envelope for ||w(t)||^2. Requires t >= 1 (n = 1) or
/// log t >= 1 (n = 2).
double upper_envelope(int n, double t, const DataNorms& norms, const ProofConstants& c);

struct TBound {
  /// omega_2 e^{-1}/4 (log t + log 4 - log 5 pi)
  double bound = 0.0;
  /// T(t) = int_{R^2} e^{-|xi|^2} sin^2(t|xi|)/|xi|^2 dxi by quadrature.
  double quadrature = 0.0;
  /// (omega_2/2) sum_j int_{nu_j}^{mu_j} e^{-r^2}/r dr
  double intervals = 0.0;
  /// (omega_2/4) int_{nu_1}^inf e^{-r^2}/r dr
  double tail = 0.0;
  /// (omega_2/4) int_{nu_1}^1 e^{-r^2}/r dr
  double unit = 0.0;
};

/// Bound on T(t) and the intermediate quantities of its derivation. Throws
/// DomainError when 5 pi / (4t) >= 1.
TBound t_lower_bound_2d(double t, const ProofConstants& c, const QuadConfig& quad = {});

/// Time at which the closed-form lower envelope turns positive (infinity
/// when P = 0).
double lower_envelope_root(int n, const DataNorms& norms, const ProofConstants& c);

/// Largest |w1^(xi) - P| / (|xi| ||u1||_{1,1}) over 0 < |xi| <= 1 on a
/// polar grid (radial_points radii, angles directions; 1D uses +-rho).
/// Zero for u1 = 0. Throws DomainError when ||u1||_{1,1} is infinite.
double moment_remainder_sup(const SpectralState& s, int radial_points = 400, int angles = 64);

/// Whether bound_breakdown accepts t: t >= 1 and t > delta0 (n = 1), or
/// log t >= 1 and 5 pi / (4t) < 1 (n = 2).
bool in_bound_regime(int n, double t, const ProofConstants& c);

/// Evaluates every term of both chains at t and records each inequality.
/// Throws DomainError outside in_bound_regime.
BoundBreakdown bound_breakdown(const SpectralState& s, double t);

struct SandwichReport {
  std::vector<BoundBreakdown> rows;
  /// First sample with final_lb > 0.
  std::optional<double> t_star_sample;
};

/// bound_breakdown over the samples (in parallel, deterministic order).
/// Throws BoundViolation naming the first failing term and time.
SandwichReport sandwich_report(const SpectralState& s, const std::vector<double>& t_samples, unsigned threads = 1);

}  // namespace wavenorm
