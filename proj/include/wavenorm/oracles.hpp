#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "wavenorm/profiles.hpp"

namespace wavenorm {

/// u(t, x) = (u0(x - t) + u0(x + t)) / 2 + (1/2) int_{x-t}^{x+t} u1.
/// One-dimensional data only.
double dalembert_solve(const ProfilePair& pp, double t, double x);

struct PointField {
  double u = 0.0;
  double ut = 0.0;
  double ux = 0.0;
};

/// Solution and its first derivatives from the d'Alembert formula. Needs a
/// differentiable (or zero) u0.
PointField dalembert_field(const ProfilePair& pp, double t, double x);

/// Points where the d'Alembert solution or its derivatives may jump.
std::vector<double> dalembert_breakpoints(const ProfilePair& pp, double t);

/// int |u(t, x)|^2 dx for the d'Alembert solution (the squared norm).
double dalembert_l2(const ProfilePair& pp, double t);

/// Snapshot of the periodic pseudo-spectral solution on [-half_length,
/// half_length)^n with `points` nodes per axis. Arrays are row-major with
/// the x index fastest; node i sits at -half_length + i h.
struct GridField {
  int dimension = 1;
  double half_length = 0.0;
  std::size_t points = 0;
  double t = 0.0;
  /// Radius containing the data up to relative 1e-14.
  double data_radius = 0.0;
  std::vector<double> u;
  std::vector<double> ut;

  double spacing() const { return 2.0 * half_length / static_cast<double>(points); }
  double coordinate(std::size_t i) const { return -half_length + spacing() * static_cast<double>(i); }
  std::size_t size() const { return u.size(); }

  /// Last time at which an observable on the ball of radius
  /// observation_radius (0 for global observables) is certified.
  double horizon(double observation_radius = 0.0) const { return half_length - data_radius - observation_radius; }
  /// Throws HorizonError unless t < horizon(observation_radius). The
  /// sampled data at t = 0 is always accepted.
  void require_within_horizon(double observation_radius = 0.0) const;

  /// Spectral derivative of u along axis 0 (x) or 1 (y).
  std::vector<double> derivative(int axis) const;
  /// h^n sum u^2
  double l2_norm_sq() const;
  /// (1/2)(||u_t||^2 + ||grad u||^2) evaluated on the discrete spectrum.
  double discrete_energy() const;

  /// Header (dimension, half_length, points, t as little-endian 64-bit
  /// values: int64, double, int64, double), then u and u_t as doubles.
  void write_binary(std::ostream& out) const;
  void write_binary(const std::string& path) const;
};

/// Exact-in-time multiplier evolution of sampled data on the periodic box.
/// `points` must be a power of two and the data must fit in half the box.
/// Throws HorizonError when t >= horizon(observation_radius).
GridField grid_solve(const ProfilePair& pp, double half_length, std::size_t points, double t,
                     double observation_radius = 0.0);

struct ExampleRow {
  double t0 = 0.0;
  double closed_form = 0.0;
  double dalembert = 0.0;
  double grid = 0.0;
  double spectral = 0.0;
  double rel_dalembert = 0.0;
  double rel_grid = 0.0;
  double rel_spectral = 0.0;
  /// Largest pairwise relative difference among the four values.
  double max_pairwise = 0.0;
};

/// u0 = 0, u1 = 2 on [-1, 1].
ProfilePair example_data();

/// Squared norm of the example solution at t0 by every route; all relative
/// differences are taken against 8 (t0 - 1) + 16/3. The grid uses the given
/// spacing on the smallest power-of-two box containing the solution.
std::vector<ExampleRow> verify_example(const std::vector<double>& t0_list, double grid_spacing = 1.0 / 512.0);

}  // namespace wavenorm
