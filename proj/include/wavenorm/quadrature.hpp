#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wavenorm {

enum class OscillationRule {
  /// sin^2 = (1 - cos 2x)/2 split away from the origin; the cos/sin parts
  /// are integrated exactly against a Legendre interpolant (Filon type).
  half_angle,
  /// Plain Gauss-Legendre panels no wider than a quarter period everywhere.
  panel_per_period,
};

struct QuadConfig {
  double abs_tol = 1e-14;
  double rel_tol = 1e-11;
  std::size_t max_panels = std::size_t{1} << 20;
  OscillationRule oscillation_rule = OscillationRule::half_angle;

  /// Throws DomainError unless tolerances are positive and max_panels >= 1024.
  void validate() const;
};

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int order);
  /// Cached rule; thread-safe.
  static const GaussLegendre& get(int order);
};

/// Legendre polynomials P_0..P_{out.size()-1} at x.
void legendre_sequence(double x, std::span<double> out);

/// Spherical Bessel functions j_0..j_{out.size()-1} at kappa >= 0.
void spherical_bessel_sequence(double kappa, std::span<double> out);

/// Angular-integrated spectral density at radius rho:
///   a ~ |w1|^2, b ~ |w0|^2, c ~ Re(w1 conj(w0)), each already summed
///   over directions (two points in 1D, the circle in 2D).
struct RadialWeights {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Radial integrand
///   rho^{n-1} [ sin^2(t rho)/rho^2 a(rho) + cos^2(t rho) b(rho)
///               + sin(2 t rho)/rho c(rho) ].
struct RadialIntegrand {
  int dimension = 1;
  std::function<RadialWeights(double)> density;
  /// Upper bounds of |a|, |b|, |c| for rho >= 1, used to truncate
  /// semi-infinite ranges. Required when integrating to infinity.
  std::function<RadialWeights(double)> envelope;
  /// Largest panel width that resolves the density itself.
  double max_panel_width = 0.5;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
};

/// Integrates the radial integrand over [lo, hi] (hi may be +infinity) at
/// time t >= 0. Panels are summed in increasing rho, so results do not
/// depend on scheduling. Throws QuadratureError when max_panels is reached
/// before the tolerance max(abs_tol, rel_tol |value|).
QuadResult integrate_radial(const RadialIntegrand& f, double t, double lo, double hi, const QuadConfig& cfg);

/// Adaptive Gauss-Legendre integral of a smooth scalar function on [lo, hi].
double integrate_smooth(const std::function<double(double)>& f, double lo, double hi, double rel_tol = 1e-13);

}  // namespace wavenorm
