#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace wavenorm {

/// Point in physical or frequency space. One-dimensional quantities use
/// component 0 only.
using Vec2 = std::array<double, 2>;

/// a * exp(-|x - c|^2 / sigma^2)
struct Gaussian {
  double sigma = 1.0;
  double amplitude = 1.0;
  Vec2 center{0.0, 0.0};
};

/// a * 1{|x| <= R} on the line.
struct IndicatorInterval {
  double radius = 1.0;
  double amplitude = 1.0;
};

/// a * 1{|x| <= R} in the plane.
struct IndicatorDisk {
  double radius = 1.0;
  double amplitude = 1.0;
};

/// coef * x^px * y^py
struct Monomial {
  double coef = 1.0;
  int px = 0;
  int py = 0;
};

/// p(x) * exp(-|x|^2 / sigma^2), p a polynomial given by its monomials.
struct PolynomialGaussian {
  double sigma = 1.0;
  std::vector<Monomial> terms;
};

struct Zero {};

using ProfileKind = std::variant<Zero, Gaussian, IndicatorInterval, IndicatorDisk, PolynomialGaussian>;

/// Upper bound coef * (1 + rho)^power * exp(-rate * rho^2) for the modulus of
/// a Fourier transform at |xi| = rho, valid for rho >= 1.
struct FourierEnvelope {
  double coef = 0.0;
  double power = 0.0;
  double rate = 0.0;

  double operator()(double rho) const;
};

/// Closed-form initial-data profile on R^n, n in {1, 2}.
///
/// Fourier transforms use the unnormalised convention
/// f^(xi) = int exp(-i x.xi) f(x) dx.
class Profile {
public:
  Profile(int dimension, ProfileKind kind);

  static Profile zero(int dimension) { return {dimension, Zero{}}; }

  int dimension() const { return dimension_; }
  const ProfileKind& kind() const { return kind_; }
  std::string_view kind_name() const;

  bool is_zero() const { return std::holds_alternative<Zero>(kind_); }
  /// True iff the profile depends on |x| only.
  bool is_radial() const;
  /// True iff the gradient is an ordinary function (indicators are not).
  bool is_differentiable() const;

  double value(Vec2 x) const;
  /// Throws DomainError for non-differentiable kinds.
  Vec2 gradient(Vec2 x) const;

  std::complex<double> fourier(Vec2 xi) const;
  /// Transform as a function of rho = |xi|; radial profiles only.
  double fourier_radial(double rho) const;
  FourierEnvelope fourier_envelope() const;

  /// int f dx, i.e. the transform at the origin.
  double integral() const;
  double l1_norm() const;
  double l2_norm() const;
  /// int |x| |f(x)| dx
  double first_absolute_moment() const;
  /// ||f||_{1,1} = int (1 + |x|) |f(x)| dx
  double l11_norm() const { return l1_norm() + first_absolute_moment(); }

  /// Radius outside which |f| < rel * max|f| (support radius for indicators).
  double effective_radius(double rel = 1e-14) const;

  /// int_0^x f(r) dr, one-dimensional profiles only.
  double antiderivative(double x) const;
  /// Jump locations of a one-dimensional profile.
  std::vector<double> breakpoints() const;

  /// Same profile with all amplitudes multiplied by factor.
  Profile scaled(double factor) const;

private:
  int dimension_;
  ProfileKind kind_;
};

/// Initial data (u0, u1) of the Cauchy problem.
struct ProfilePair {
  ProfilePair(Profile u0_, Profile u1_);

  int dimension() const { return u0.dimension(); }

  Profile u0;
  Profile u1;
};

struct DataNorms {
  double l1_u0 = 0.0;
  double l2_u0 = 0.0;
  double l1_u1 = 0.0;
  double l2_u1 = 0.0;
  /// ||u1||_{1,1}; empty when infinite.
  std::optional<double> l11_u1;
  /// ||u0|| + ||u0||_1 + ||u1|| + ||u1||_1
  double I0n = 0.0;
  /// int u1 dx
  double P = 0.0;
  /// int |x| (|u1|^2 + |grad u0|^2) dx; empty when infinite.
  std::optional<double> weighted_h1;
};

DataNorms moments(const ProfilePair& pp);

/// Integral over R^n of a function of x, by adaptive Gauss-Kronrod
/// quadrature on [-radius, radius] (1D) or in polar coordinates on the disk
/// of that radius (2D). Integrand discontinuities must be listed: positions
/// for 1D, radii for 2D.
template <typename F>
double integrate_physical(int dimension, F&& f, double radius, const std::vector<double>& breaks = {});

}  // namespace wavenorm

#include "wavenorm/detail/physical_quadrature.hpp"
