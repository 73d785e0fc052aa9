#pragma once

#include <complex>
#include <functional>
#include <string_view>
#include <vector>

#include "wavenorm/profiles.hpp"
#include "wavenorm/quadrature.hpp"

namespace wavenorm {

/// Measure of the unit sphere in R^n (2 for n = 1, 2 pi for n = 2).
double sphere_measure(int dimension);

struct ProofConstants {
  /// Low-frequency radius factor; low frequencies are |xi| <= delta0 / t.
  double delta0 = 0.99;
  /// sup |sin x / x|
  double L = 1.0;
  /// |w1^(xi) - P| <= M |xi| ||u1||_{1,1}
  double M = 1.4142135623730951;

  double omega(int dimension) const { return sphere_measure(dimension); }

  /// Throws DomainError unless delta0 is in (0, 1), |sin x / x| >= 1/2 on
  /// a 1e4-point grid of (0, delta0], L = 1 and M > 0.
  void validate() const;
};

struct SpectralState {
  SpectralState(ProfilePair pp_, ProofConstants constants_ = {}, QuadConfig quad_ = {});

  ProfilePair pp;
  ProofConstants constants;
  QuadConfig quad;
  /// moments(pp), computed once at construction.
  DataNorms norms;
};

/// w(t, xi) = sin(t|xi|)/|xi| w1^(xi) + cos(t|xi|) w0^(xi).
std::complex<double> multiplier_solution(const SpectralState& s, double t, Vec2 xi);
/// d/dt w(t, xi) = cos(t|xi|) w1^(xi) - |xi| sin(t|xi|) w0^(xi).
std::complex<double> multiplier_velocity(const SpectralState& s, double t, Vec2 xi);

/// Sum of g over the sphere |xi| = rho: g(rho) + g(-rho) in 1D, the circle
/// integral in 2D (trapezoid rule fine enough for the data's bandwidth, or
/// 2 pi g(rho, 0) for radial data).
double angular_sum(const ProfilePair& pp, double rho, const std::function<double(Vec2)>& g);

/// Angular sums of |w1^|^2 (a), |w0^|^2 (b) and Re w1^ conj(w0^) (c).
RadialWeights angular_density(const ProfilePair& pp, double rho);
/// Bounds on the angular sums for rho >= 1.
RadialWeights angular_envelope(const ProfilePair& pp, double rho);
/// Panel width resolving the oscillation of the data transforms in rho.
double density_panel_width(const ProfilePair& pp);

/// int_{lo <= |xi| <= hi} |w(t, xi)|^2 dxi
QuadResult spectral_mass(const SpectralState& s, double t, double lo, double hi);

/// ||u(t)||_{L^2} = (2 pi)^{-n/2} ||w(t)||.
double l2_norm(const SpectralState& s, double t);

struct FrequencySplit {
  double low = 0.0;
  double high = 0.0;
};

/// Fourier-side mass inside and outside |xi| = delta0 / t. Requires t > delta0.
FrequencySplit frequency_split(const SpectralState& s, double t);

/// w1^(xi) - P. Requires ||u1||_{1,1} to be finite.
std::complex<double> moment_remainder(const SpectralState& s, Vec2 xi);

struct EnergyParts {
  /// (2 pi)^{-n} int |d_t w|^2 dxi
  double kinetic = 0.0;
  /// (2 pi)^{-n} int |xi|^2 |w|^2 dxi
  double potential = 0.0;

  double total() const { return 0.5 * (kinetic + potential); }
};

/// Energy from the multiplier solution, kinetic and potential parts
/// integrated separately at time t.
EnergyParts energy(const SpectralState& s, double t);

enum class NormMethod { quadrature, dalembert, grid };
std::string_view to_string(NormMethod m);

struct NormSample {
  double t = 0.0;
  double M = 0.0;
  NormMethod method = NormMethod::quadrature;
};

struct NormCurve {
  int dimension = 1;
  std::vector<NormSample> samples;
  DataNorms data_norms;

  /// Throws DomainError unless t increases strictly and M >= 0.
  void append(NormSample s);
};

/// Spectral norm curve on the given (strictly increasing) times, evaluated
/// on up to `threads` workers.
NormCurve norm_curve(const SpectralState& s, const std::vector<double>& times, unsigned threads = 1);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, int n);

}  // namespace wavenorm
