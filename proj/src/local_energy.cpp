#include "wavenorm/local_energy.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "wavenorm/bounds.hpp"
#include "wavenorm/detail/parallel.hpp"
#include "wavenorm/error.hpp"

namespace wavenorm {
namespace {

constexpr double kPi = std::numbers::pi;

struct Gradient {
  std::vector<double> x;
  std::vector<double> y;
};

Gradient gradient_of(const GridField& g) {
  Gradient grad;
  grad.x = g.derivative(0);
  if (g.dimension == 2) grad.y = g.derivative(1);
  return grad;
}

double cell_volume(const GridField& g) { return std::pow(g.spacing(), g.dimension); }

double ball_energy(const GridField& g, const Gradient& grad, double R) {
  const std::size_t n = g.points;
  double sum = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.coordinate(j % n);
    const double y = g.dimension == 2 ? g.coordinate(j / n) : 0.0;
    if (x * x + y * y > R * R) continue;
    double e = g.ut[j] * g.ut[j] + grad.x[j] * grad.x[j];
    if (g.dimension == 2) e += grad.y[j] * grad.y[j];
    sum += e;
  }
  return sum * cell_volume(g);
}

void require_small_boundary(const GridField& g) {
  const std::size_t n = g.points;
  double peak = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) peak = std::max({peak, std::fabs(g.u[j]), std::fabs(g.ut[j])});
  double edge = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const std::size_t ix = j % n;
    const std::size_t iy = j / n;
    const bool boundary = ix == 0 || ix == n - 1 || (g.dimension == 2 && (iy == 0 || iy == n - 1));
    if (boundary) edge = std::max({edge, std::fabs(g.u[j]), std::fabs(g.ut[j])});
  }
  if (edge > 1e-12 * std::max(peak, 1e-300)) {
    throw DomainError(fmt::format("field at t = {} is {:.3e} on the box boundary (peak {:.3e})", g.t, edge, peak));
  }
}

FieldIntegrals grid_integrals(const GridField& g, const Gradient& grad) {
  require_small_boundary(g);
  const std::size_t n = g.points;
  FieldIntegrals out;
  out.t = g.t;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.coordinate(j % n);
    const double y = g.dimension == 2 ? g.coordinate(j / n) : 0.0;
    double radial = x * grad.x[j];
    if (g.dimension == 2) radial += y * grad.y[j];
    out.F += g.ut[j] * g.u[j];
    out.G += g.ut[j] * radial;
  }
  out.F *= cell_volume(g);
  out.G *= cell_volume(g);
  out.energy = g.discrete_energy();
  return out;
}

double data_radius(const ProfilePair& pp) {
  return std::max(pp.u0.effective_radius(1e-18), pp.u1.effective_radius(1e-18));
}

std::vector<double> data_breaks(const ProfilePair& pp) {
  auto b = pp.u0.breakpoints();
  const auto b1 = pp.u1.breakpoints();
  b.insert(b.end(), b1.begin(), b1.end());
  return b;
}

}  // namespace

DataConstants data_constants(const ProfilePair& pp) {
  if (!pp.u0.is_differentiable()) throw DomainError("data constants need a differentiable u0");
  const int n = pp.dimension();
  const double radius = data_radius(pp);
  const auto breaks = data_breaks(pp);
  DataConstants d;
  if (!pp.u0.is_zero() && !pp.u1.is_zero()) {
    d.u1_u0 = integrate_physical(n, [&](Vec2 x) { return pp.u1.value(x) * pp.u0.value(x); }, radius, breaks);
    d.u1_x_grad_u0 = integrate_physical(
        n,
        [&](Vec2 x) {
          const Vec2 g = pp.u0.gradient(x);
          return pp.u1.value(x) * (x[0] * g[0] + x[1] * g[1]);
        },
        radius, breaks);
  }
  double grad_sq = 0.0;
  if (!pp.u0.is_zero()) {
    grad_sq = integrate_physical(
        n,
        [&](Vec2 x) {
          const Vec2 g = pp.u0.gradient(x);
          return g[0] * g[0] + g[1] * g[1];
        },
        radius, breaks);
  }
  const double l2 = pp.u1.l2_norm();
  d.E0 = 0.5 * (l2 * l2 + grad_sq);
  d.K0 = d.u1_x_grad_u0 + 0.5 * d.u1_u0 + d.E0;
  const DataNorms m = moments(pp);
  d.I0n = m.I0n;
  d.weighted_h1 = m.weighted_h1;
  return d;
}

double local_energy(const GridField& g, double R) {
  if (!(R > 0.0)) throw DomainError("local_energy: R must be positive");
  g.require_within_horizon(R);
  return ball_energy(g, gradient_of(g), R);
}

FieldIntegrals flux_functionals(const GridField& g) {
  g.require_within_horizon(0.0);
  return grid_integrals(g, gradient_of(g));
}

double local_energy_dalembert(const ProfilePair& pp, double t, double R) {
  auto breaks = dalembert_breakpoints(pp, t);
  breaks.push_back(-R);
  breaks.push_back(R);
  return integrate_physical(
      1,
      [&](Vec2 x) {
        if (std::fabs(x[0]) > R) return 0.0;
        const PointField f = dalembert_field(pp, t, x[0]);
        return f.ut * f.ut + f.ux * f.ux;
      },
      R, breaks);
}

FieldIntegrals flux_functionals_dalembert(const ProfilePair& pp, double t) {
  const double radius = data_radius(pp) + t;
  const auto breaks = dalembert_breakpoints(pp, t);
  auto integral = [&](auto&& f) {
    return integrate_physical(1, [&](Vec2 x) { return f(x[0], dalembert_field(pp, t, x[0])); }, radius, breaks);
  };
  FieldIntegrals out;
  out.t = t;
  out.energy = 0.5 * integral([](double, const PointField& f) { return f.ut * f.ut + f.ux * f.ux; });
  out.F = integral([](double, const PointField& f) { return f.ut * f.u; });
  out.G = integral([](double x, const PointField& f) { return f.ut * x * f.ux; });
  return out;
}

MorawetzTerms morawetz_residual(int dimension, const FieldIntegrals& f, const DataConstants& d) {
  const double c = 0.5 * (dimension - 1);
  MorawetzTerms m;
  m.lhs = f.t * f.energy;
  m.rhs = c * d.u1_u0 + d.u1_x_grad_u0 - c * f.F - f.G;
  m.residual = std::fabs(m.lhs - m.rhs) / (1.0 + f.t * d.E0);
  return m;
}

double energy_inequality_slack(double K0, double F, double E_R, double t, double R) {
  if (!(t > R)) throw DomainError(fmt::format("local energy inequality needs t > R, got t = {}, R = {}", t, R));
  return K0 + 0.5 * std::fabs(F) - (t - R) * E_R;
}

double decay_envelope(double t, double R, double K0, double E0, double I02, double C) {
  if (!(t > R)) throw DomainError(fmt::format("envelope needs t > R, got t = {}, R = {}", t, R));
  if (!(t > 1.0)) throw DomainError(fmt::format("envelope needs t > 1, got {}", t));
  return K0 / (t - R) + 0.5 * C * std::sqrt(2.0 * E0) * I02 * std::sqrt(std::log(t)) / (t - R);
}

double assembled_rate_constant(double t, const DataNorms& norms, const ProofConstants& c) {
  if (norms.I0n == 0.0) return 0.0;
  const double ub = upper_envelope(2, t, norms, c);
  return std::sqrt(ub) / (2.0 * kPi) / (norms.I0n * std::sqrt(std::log(t)));
}

LocalEnergyReport local_energy_report(const SpectralState& s, double R, const std::vector<double>& times,
                                      const GridSpec& grid, unsigned threads) {
  const int n = s.pp.dimension();
  if (!(R > 0.0)) throw DomainError("local energy report: R must be positive");
  for (double t : times) {
    if (!(t > R)) throw DomainError(fmt::format("sample t = {} does not exceed R = {}", t, R));
  }
  if (n == 2) {
    if (R < 10.0 * 2.0 * grid.half_length / static_cast<double>(grid.points)) {
      throw DomainError(fmt::format("R = {} spans fewer than 10 grid cells", R));
    }
    const double horizon = grid.half_length - std::max(s.pp.u0.effective_radius(), s.pp.u1.effective_radius()) - R;
    for (double t : times) {
      if (!(std::log(t) >= 1.0)) throw DomainError(fmt::format("sample t = {} is below e", t));
      if (!(t < horizon)) throw HorizonError(fmt::format("sample t = {} is beyond the fidelity horizon {}", t, horizon));
    }
  }

  LocalEnergyReport rep;
  rep.R = R;
  const DataConstants d = data_constants(s.pp);
  rep.K0 = d.K0;
  rep.E0 = d.E0;
  rep.weighted_h1 = d.weighted_h1;
  rep.I02 = d.I0n;
  rep.samples.resize(times.size());

  detail::parallel_for(times.size(), threads, [&](std::size_t i) {
    const double t = times[i];
    LocalEnergySample& out = rep.samples[i];
    out.t = t;
    FieldIntegrals f;
    if (n == 2) {
      const GridField g = grid_solve(s.pp, grid.half_length, grid.points, t, R);
      const Gradient grad = gradient_of(g);
      out.E_R = ball_energy(g, grad, R);
      f = grid_integrals(g, grad);
    } else {
      out.E_R = local_energy_dalembert(s.pp, t, R);
      f = flux_functionals_dalembert(s.pp, t);
    }
    out.F = f.F;
    out.G = f.G;
    out.energy = f.energy;
    out.morawetz_residual = morawetz_residual(n, f, d).residual;
    out.inequality_slack = energy_inequality_slack(d.K0, out.F, out.E_R, t, R);
    out.M = l2_norm(s, t);
    out.F_bound = std::sqrt(2.0 * d.E0) * out.M;
    if (n == 2) {
      out.C_assembled = assembled_rate_constant(t, s.norms, s.constants);
      out.decay_envelope = decay_envelope(t, R, d.K0, d.E0, d.I0n, *out.C_assembled);
    }
  });

  if (n == 2) {
    double c_fit = 0.0;
    for (const auto& smp : rep.samples) {
      if (rep.I02 > 0.0) c_fit = std::max(c_fit, smp.M / (rep.I02 * std::sqrt(std::log(smp.t))));
    }
    rep.C_fit = c_fit;
    for (auto& smp : rep.samples) smp.decay_envelope_fit = decay_envelope(smp.t, R, d.K0, d.E0, d.I0n, c_fit);
  }
  return rep;
}

}  // namespace wavenorm
