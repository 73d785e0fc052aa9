#pragma once

#include <optional>
#include <vector>

#include "wavenorm/oracles.hpp"
#include "wavenorm/spectral.hpp"

namespace wavenorm {

/// Data integrals entering the multiplier identity, by profile quadrature.
struct DataConstants {
  /// int u1 u0
  double u1_u0 = 0.0;
  /// int u1 (x . grad u0)
  double u1_x_grad_u0 = 0.0;
  /// E(0) = (||u1||^2 + ||grad u0||^2) / 2
  double E0 = 0.0;
  /// int u1 (x . grad u0) + (1/2) int u1 u0 + E(0)
  double K0 = 0.0;
  /// ||u0|| + ||u0||_1 + ||u1|| + ||u1||_1
  double I0n = 0.0;
  std::optional<double> weighted_h1;
};

/// Throws DomainError when u0 is not differentiable.
DataConstants data_constants(const ProfilePair& pp);

/// Whole-space integrals of a solution snapshot.
struct FieldIntegrals {
  double t = 0.0;
  /// (1/2)(||u_t||^2 + ||grad u||^2)
  double energy = 0.0;
  /// F = int u_t u
  double F = 0.0;
  /// G = int u_t (x . grad u)
  double G = 0.0;
};

/// int_{|x| <= R} (u_t^2 + |grad u|^2) over grid nodes inside the ball.
/// Throws HorizonError unless t < horizon(R) (t = 0 is always allowed).
double local_energy(const GridField& g, double R);

/// (F, G) on the grid. Throws DomainError when |u| or |u_t| on the box
/// boundary exceeds 1e-12 of its maximum.
FieldIntegrals flux_functionals(const GridField& g);

/// Same quantities from the d'Alembert formula (one-dimensional data).
double local_energy_dalembert(const ProfilePair& pp, double t, double R);
FieldIntegrals flux_functionals_dalembert(const ProfilePair& pp, double t);

struct MorawetzTerms {
  /// t E(t)
  double lhs = 0.0;
  /// ((n-1)/2) int u1 u0 + int u1 (x . grad u0) - ((n-1)/2) F - G
  double rhs = 0.0;
  /// |lhs - rhs| / (1 + t E(0))
  double residual = 0.0;
};

MorawetzTerms morawetz_residual(int dimension, const FieldIntegrals& f, const DataConstants& d);

/// K0 + |F|/2 - (t - R) E_R. Throws DomainError when t <= R.
double energy_inequality_slack(double K0, double F, double E_R, double t, double R);

/// K0/(t-R) + (C/2) sqrt(2 E0) I02 sqrt(log t)/(t-R). Requires t > R, t > 1.
double decay_envelope(double t, double R, double K0, double E0, double I02, double C);

/// C(t) with ||u(t)|| <= C(t) I02 sqrt(log t) from the assembled upper chain.
double assembled_rate_constant(double t, const DataNorms& norms, const ProofConstants& c);

struct LocalEnergySample {
  double t = 0.0;
  double E_R = 0.0;
  double F = 0.0;
  double G = 0.0;
  double morawetz_residual = 0.0;
  double inequality_slack = 0.0;
  /// Envelope with the assembled constant C(t) (two dimensions only).
  std::optional<double> decay_envelope;
  /// Envelope with the fitted constant (two dimensions only).
  std::optional<double> decay_envelope_fit;
  std::optional<double> C_assembled;
  /// ||u(t)|| from the spectral path and the bound sqrt(2 E0) M(t) on |F|.
  double M = 0.0;
  double F_bound = 0.0;
  /// Discrete energy of the snapshot.
  double energy = 0.0;
};

struct LocalEnergyReport {
  double R = 0.0;
  std::vector<LocalEnergySample> samples;
  double K0 = 0.0;
  double E0 = 0.0;
  std::optional<double> weighted_h1;
  double I02 = 0.0;
  /// max over samples of M(t) / (I02 sqrt(log t)) (two dimensions only)
  std::optional<double> C_fit;
};

struct GridSpec {
  double half_length = 256.0;
  std::size_t points = 2048;
};

/// Grid experiment on two-dimensional data. Every time must satisfy
/// R < t < horizon(R) and t >= e; violations are rejected before any
/// evolution. One-dimensional data uses the d'Alembert fields instead of the
/// grid, needs only t > R, and has no envelope columns.
LocalEnergyReport local_energy_report(const SpectralState& s, double R, const std::vector<double>& times,
                                      const GridSpec& grid, unsigned threads = 1);

}  // namespace wavenorm
