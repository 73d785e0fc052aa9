#include "wavenorm/spectral.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>

#include "wavenorm/detail/parallel.hpp"
#include "wavenorm/error.hpp"

namespace wavenorm {
namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

double sin_over(double t, double rho) {
  const double x = t * rho;
  return std::fabs(x) < 1e-8 ? t : std::sin(x) / rho;
}

// Radius whose product with |xi| sets the oscillation rate of the data
// transforms (indicator edges, Gaussian centres).
double oscillation_radius(const Profile& p) {
  return std::visit(
      [](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, IndicatorInterval> || std::is_same_v<K, IndicatorDisk>) return k.radius;
        if constexpr (std::is_same_v<K, Gaussian>) return std::hypot(k.center[0], k.center[1]);
        return 0.0;
      },
      p.kind());
}

// Trapezoid nodes on the circle |xi| = rho; the angular integrand is band
// limited to roughly rho times the data extent.
int circle_nodes(const ProfilePair& pp, double rho) {
  const double extent = pp.u0.effective_radius() + pp.u1.effective_radius();
  return 4 * (16 + static_cast<int>(std::ceil(rho * extent)));
}

}  // namespace

double sphere_measure(int dimension) {
  if (dimension == 1) return 2.0;
  if (dimension == 2) return 2.0 * kPi;
  throw DomainError(fmt::format("sphere_measure: unsupported dimension {}", dimension));
}

void ProofConstants::validate() const {
  if (!(delta0 > 0.0 && delta0 < 1.0)) throw DomainError(fmt::format("delta0 = {} is not in (0, 1)", delta0));
  constexpr int kGrid = 10000;
  for (int i = 1; i <= kGrid; ++i) {
    const double th = delta0 * i / kGrid;
    if (std::fabs(std::sin(th) / th) < 0.5) throw DomainError(fmt::format("|sin x / x| < 1/2 at x = {}", th));
  }
  if (L != 1.0) throw DomainError(fmt::format("L = {} but sup |sin x / x| = 1", L));
  if (!(M > 0.0)) throw DomainError(fmt::format("M = {} must be positive", M));
}

SpectralState::SpectralState(ProfilePair pp_, ProofConstants constants_, QuadConfig quad_)
    : pp(std::move(pp_)), constants(constants_), quad(quad_), norms(moments(pp)) {
  constants.validate();
  quad.validate();
}

cplx multiplier_solution(const SpectralState& s, double t, Vec2 xi) {
  const double rho = std::hypot(xi[0], xi[1]);
  return sin_over(t, rho) * s.pp.u1.fourier(xi) + std::cos(t * rho) * s.pp.u0.fourier(xi);
}

cplx multiplier_velocity(const SpectralState& s, double t, Vec2 xi) {
  const double rho = std::hypot(xi[0], xi[1]);
  return std::cos(t * rho) * s.pp.u1.fourier(xi) - rho * std::sin(t * rho) * s.pp.u0.fourier(xi);
}

double angular_sum(const ProfilePair& pp, double rho, const std::function<double(Vec2)>& g) {
  if (pp.dimension() == 1) return g(Vec2{rho, 0.0}) + g(Vec2{-rho, 0.0});
  if (pp.u0.is_radial() && pp.u1.is_radial()) return 2.0 * kPi * g(Vec2{rho, 0.0});
  const int n = circle_nodes(pp, rho);
  const double h = 2.0 * kPi / n;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double th = h * k;
    sum += g(Vec2{rho * std::cos(th), rho * std::sin(th)});
  }
  return h * sum;
}

RadialWeights angular_density(const ProfilePair& pp, double rho) {
  if (pp.dimension() == 2 && pp.u0.is_radial() && pp.u1.is_radial()) {
    const double w1 = pp.u1.fourier_radial(rho);
    const double w0 = pp.u0.fourier_radial(rho);
    return {2.0 * kPi * w1 * w1, 2.0 * kPi * w0 * w0, 2.0 * kPi * w1 * w0};
  }
  RadialWeights out;
  auto accumulate = [&](Vec2 xi, double weight) {
    const cplx w1 = pp.u1.fourier(xi);
    const cplx w0 = pp.u0.fourier(xi);
    out.a += weight * std::norm(w1);
    out.b += weight * std::norm(w0);
    out.c += weight * (w1 * std::conj(w0)).real();
  };
  if (pp.dimension() == 1) {
    accumulate(Vec2{rho, 0.0}, 1.0);
    accumulate(Vec2{-rho, 0.0}, 1.0);
    return out;
  }
  const int n = circle_nodes(pp, rho);
  const double h = 2.0 * kPi / n;
  for (int k = 0; k < n; ++k) {
    const double th = h * k;
    accumulate(Vec2{rho * std::cos(th), rho * std::sin(th)}, h);
  }
  return out;
}

RadialWeights angular_envelope(const ProfilePair& pp, double rho) {
  const double omega = sphere_measure(pp.dimension());
  const double e1 = pp.u1.fourier_envelope()(rho);
  const double e0 = pp.u0.fourier_envelope()(rho);
  return {omega * e1 * e1, omega * e0 * e0, omega * e1 * e0};
}

double density_panel_width(const ProfilePair& pp) {
  return 0.5 / std::max(1.0, oscillation_radius(pp.u0) + oscillation_radius(pp.u1));
}

QuadResult spectral_mass(const SpectralState& s, double t, double lo, double hi) {
  if (s.pp.u0.is_zero() && s.pp.u1.is_zero()) return {};
  RadialIntegrand f;
  f.dimension = s.pp.dimension();
  f.density = [&](double rho) { return angular_density(s.pp, rho); };
  f.envelope = [&](double rho) { return angular_envelope(s.pp, rho); };
  f.max_panel_width = density_panel_width(s.pp);
  return integrate_radial(f, t, lo, hi, s.quad);
}

double l2_norm(const SpectralState& s, double t) {
  if (!(t >= 0.0)) throw DomainError("l2_norm: t must be non-negative");
  const double mass = spectral_mass(s, t, 0.0, std::numeric_limits<double>::infinity()).value;
  return std::sqrt(std::max(mass, 0.0) / std::pow(2.0 * kPi, s.pp.dimension()));
}

FrequencySplit frequency_split(const SpectralState& s, double t) {
  const double d0 = s.constants.delta0;
  if (!(t > d0)) throw DomainError(fmt::format("frequency_split: need t > delta0 = {}, got t = {}", d0, t));
  const double cut = d0 / t;
  return {spectral_mass(s, t, 0.0, cut).value,
          spectral_mass(s, t, cut, std::numeric_limits<double>::infinity()).value};
}

cplx moment_remainder(const SpectralState& s, Vec2 xi) {
  if (!s.norms.l11_u1) throw DomainError("moment_remainder: ||u1||_{1,1} is infinite");
  return s.pp.u1.fourier(xi) - s.norms.P;
}

EnergyParts energy(const SpectralState& s, double t) {
  if (!(t >= 0.0)) throw DomainError("energy: t must be non-negative");
  if (s.pp.u0.is_zero() && s.pp.u1.is_zero()) return {};
  const double inf = std::numeric_limits<double>::infinity();
  const double norm = std::pow(2.0 * kPi, s.pp.dimension());
  RadialIntegrand kin;
  kin.dimension = s.pp.dimension();
  kin.max_panel_width = density_panel_width(s.pp);
  // |d_t w|^2 = cos^2 |w1|^2 + rho^2 sin^2 |w0|^2 - rho sin(2 t rho) Re w1 conj(w0)
  kin.density = [&](double rho) {
    const RadialWeights d = angular_density(s.pp, rho);
    const double r2 = rho * rho;
    return RadialWeights{r2 * r2 * d.b, d.a, -r2 * d.c};
  };
  kin.envelope = [&](double rho) {
    const RadialWeights e = angular_envelope(s.pp, rho);
    const double r2 = rho * rho;
    return RadialWeights{r2 * r2 * e.b, e.a, r2 * e.c};
  };
  RadialIntegrand pot = kin;
  pot.density = [&](double rho) {
    const RadialWeights d = angular_density(s.pp, rho);
    const double r2 = rho * rho;
    return RadialWeights{r2 * d.a, r2 * d.b, r2 * d.c};
  };
  pot.envelope = [&](double rho) {
    const RadialWeights e = angular_envelope(s.pp, rho);
    const double r2 = rho * rho;
    return RadialWeights{r2 * e.a, r2 * e.b, r2 * e.c};
  };
  return {integrate_radial(kin, t, 0.0, inf, s.quad).value / norm,
          integrate_radial(pot, t, 0.0, inf, s.quad).value / norm};
}

std::string_view to_string(NormMethod m) {
  switch (m) {
    case NormMethod::quadrature: return "quadrature";
    case NormMethod::dalembert: return "dalembert";
    case NormMethod::grid: return "grid";
  }
  return "unknown";
}

void NormCurve::append(NormSample s) {
  if (!(s.M >= 0.0)) throw DomainError(fmt::format("NormCurve: negative norm {} at t = {}", s.M, s.t));
  if (!samples.empty() && !(s.t > samples.back().t)) {
    throw DomainError(fmt::format("NormCurve: t = {} does not follow t = {}", s.t, samples.back().t));
  }
  samples.push_back(s);
}

NormCurve norm_curve(const SpectralState& s, const std::vector<double>& times, unsigned threads) {
  std::vector<double> values(times.size());
  detail::parallel_for(times.size(), threads, [&](std::size_t i) { values[i] = l2_norm(s, times[i]); });
  NormCurve curve;
  curve.dimension = s.pp.dimension();
  curve.data_norms = s.norms;
  for (std::size_t i = 0; i < times.size(); ++i) curve.append({times[i], values[i], NormMethod::quadrature});
  return curve;
}

std::vector<double> log_space(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("log_space: need 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[i] = lo * std::exp(step * i);
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace wavenorm
