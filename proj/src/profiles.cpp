#include "wavenorm/profiles.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <functional>
#include <numbers>

#include "wavenorm/bessel.hpp"
#include "wavenorm/error.hpp"

namespace wavenorm {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double sinc(double x) { return std::fabs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// J1(x)/x, finite at the origin.
double j1_over_x(double x) { return x < 1e-8 ? 0.5 - x * x / 16.0 : bessel_j1(x) / x; }

// Physicists' Hermite polynomial H_k(s).
double hermite(int k, double s) {
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * s;
  for (int j = 1; j < k; ++j) {
    const double next = 2.0 * s * cur - 2.0 * j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// Sum of |coefficients| of H_k, so |H_k(s)| <= sum * max(1, |s|)^k.
double hermite_abs_coef_sum(int k) {
  std::vector<double> prev{1.0};
  std::vector<double> cur{0.0, 2.0};
  if (k == 0) return 1.0;
  for (int j = 1; j < k; ++j) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2.0 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= 2.0 * j * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  double s = 0.0;
  for (double c : cur) s += std::fabs(c);
  return s;
}

// Transform of x^k exp(-x^2/sigma^2) on the line.
cplx monomial_gaussian_ft(int k, double sigma, double xi) {
  const cplx factor = std::pow(cplx(0.0, -0.5 * sigma), k);
  return kSqrtPi * sigma * factor * hermite(k, 0.5 * sigma * xi) * std::exp(-0.25 * sigma * sigma * xi * xi);
}

// int_0^x r^k exp(-r^2/sigma^2) dr
double monomial_gaussian_antiderivative(int k, double sigma, double x) {
  const double s2 = sigma * sigma;
  const double e = std::exp(-x * x / s2);
  double i0 = 0.5 * kSqrtPi * sigma * std::erf(x / sigma);
  double i1 = 0.5 * s2 * (1.0 - e);
  if (k == 0) return i0;
  if (k == 1) return i1;
  double prev2 = i0;
  double prev1 = i1;
  double cur = 0.0;
  for (int j = 2; j <= k; ++j) {
    cur = 0.5 * s2 * ((j - 1) * prev2 - std::pow(x, j - 1) * e);
    prev2 = prev1;
    prev1 = cur;
  }
  return cur;
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}


// Zeros of g on [lo, hi] found on a uniform scan of `scan` cells and
// refined by TOMS 748.
std::vector<double> sign_changes(const std::function<double(double)>& g, double lo, double hi, int scan) {
  std::vector<double> roots;
  double x0 = lo, g0 = g(lo);
  for (int i = 1; i <= scan; ++i) {
    const double x1 = lo + (hi - lo) * i / scan;
    const double g1 = g(x1);
    if (g1 == 0.0) {
      roots.push_back(x1);
    } else if (g0 != 0.0 && (g0 < 0.0) != (g1 < 0.0)) {
      std::uintmax_t iters = 100;
      const auto r = boost::math::tools::toms748_solve(g, x0, x1, g0, g1,
                                                       boost::math::tools::eps_tolerance<double>(50), iters);
      roots.push_back(0.5 * (r.first + r.second));
    }
    x0 = x1;
    g0 = g1;
  }
  return roots;
}

double polynomial_part(const PolynomialGaussian& p, Vec2 x);

// int w(|x|) |f(x)| dx for a polynomial times a Gaussian, with the zero set
// of the polynomial passed to the quadrature as breakpoints.
double polynomial_abs_integral(int dimension, const PolynomialGaussian& p, double radius,
                               const std::function<double(double)>& weight) {
  const double s2 = p.sigma * p.sigma;
  auto f = [&](Vec2 x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return weight(std::sqrt(r2)) * std::fabs(polynomial_part(p, x)) * std::exp(-r2 / s2);
  };
  if (dimension == 1) {
    const auto roots = sign_changes([&](double x) { return polynomial_part(p, {x, 0.0}); }, -radius, radius, 4000);
    return integrate_physical(1, f, radius, roots);
  }
  // Between consecutive zeros the angular integrand is analytic, so fixed
  // Gauss-Legendre panels suffice.
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  auto radial = [&](double r) {
    if (r == 0.0) return 0.0;
    auto on_circle = [&](double th) { return polynomial_part(p, {r * std::cos(th), r * std::sin(th)}); };
    auto pts = sign_changes(on_circle, 0.0, 2.0 * kPi, 256);
    for (int q = 0; q <= 16; ++q) pts.push_back(0.125 * kPi * q);
    pts = detail::segment_points(0.0, 2.0 * kPi, pts);
    auto ang = [&](double th) { return f(Vec2{r * std::cos(th), r * std::sin(th)}); };
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) sum += gauss<double, 20>::integrate(ang, pts[i], pts[i + 1]);
    return r * sum;
  };
  double total = 0.0;
  const int pieces = std::max(1, static_cast<int>(std::ceil(radius / 0.5)));
  for (int k = 0; k < pieces; ++k) {
    total += gauss_kronrod<double, 31>::integrate(radial, radius * k / pieces, radius * (k + 1) / pieces, 8, 1e-11);
  }
  return total;
}

double polynomial_part(const PolynomialGaussian& p, Vec2 x) {
  double poly = 0.0;
  for (const auto& m : p.terms) poly += m.coef * ipow(x[0], m.px) * ipow(x[1], m.py);
  return poly;
}

}  // namespace

double FourierEnvelope::operator()(double rho) const {
  if (coef == 0.0) return 0.0;
  return coef * std::pow(1.0 + rho, power) * std::exp(-rate * rho * rho);
}

Profile::Profile(int dimension, ProfileKind kind) : dimension_(dimension), kind_(std::move(kind)) {
  require(dimension == 1 || dimension == 2, "profile: dimension must be 1 or 2");
  std::visit(overloaded{
                 [](const Zero&) {},
                 [&](const Gaussian& g) {
                   require(g.sigma > 0.0 && std::isfinite(g.sigma), "gaussian: sigma must be positive");
                   require(std::isfinite(g.amplitude), "gaussian: amplitude must be finite");
                   require(dimension == 2 || g.center[1] == 0.0, "gaussian: 1D center has one component");
                 },
                 [&](const IndicatorInterval& p) {
                   require(dimension == 1, "indicator_interval is one-dimensional");
                   require(p.radius > 0.0 && std::isfinite(p.radius), "indicator_interval: radius must be positive");
                   require(std::isfinite(p.amplitude), "indicator_interval: amplitude must be finite");
                 },
                 [&](const IndicatorDisk& p) {
                   require(dimension == 2, "indicator_disk is two-dimensional");
                   require(p.radius > 0.0 && std::isfinite(p.radius), "indicator_disk: radius must be positive");
                   require(std::isfinite(p.amplitude), "indicator_disk: amplitude must be finite");
                 },
                 [&](const PolynomialGaussian& p) {
                   require(p.sigma > 0.0 && std::isfinite(p.sigma), "polynomial_gaussian: sigma must be positive");
                   for (const auto& m : p.terms) {
                     require(m.px >= 0 && m.py >= 0, "polynomial_gaussian: negative power");
                     require(dimension == 2 || m.py == 0, "polynomial_gaussian: y power in 1D");
                     require(std::isfinite(m.coef), "polynomial_gaussian: coefficient must be finite");
                   }
                 },
             },
             kind_);
}

std::string_view Profile::kind_name() const {
  return std::visit(overloaded{
                        [](const Zero&) { return std::string_view("zero"); },
                        [](const Gaussian&) { return std::string_view("gaussian"); },
                        [](const IndicatorInterval&) { return std::string_view("indicator_interval"); },
                        [](const IndicatorDisk&) { return std::string_view("indicator_disk"); },
                        [](const PolynomialGaussian&) { return std::string_view("polynomial_gaussian"); },
                    },
                    kind_);
}

bool Profile::is_radial() const {
  return std::visit(overloaded{
                        [](const Zero&) { return true; },
                        [](const Gaussian& g) { return g.center[0] == 0.0 && g.center[1] == 0.0; },
                        [](const IndicatorInterval&) { return true; },
                        [](const IndicatorDisk&) { return true; },
                        [](const PolynomialGaussian& p) {
                          return std::all_of(p.terms.begin(), p.terms.end(),
                                             [](const Monomial& m) { return m.px == 0 && m.py == 0; });
                        },
                    },
                    kind_);
}

bool Profile::is_differentiable() const {
  return !std::holds_alternative<IndicatorInterval>(kind_) && !std::holds_alternative<IndicatorDisk>(kind_);
}

double Profile::value(Vec2 x) const {
  const double r2 = x[0] * x[0] + (dimension_ == 2 ? x[1] * x[1] : 0.0);
  return std::visit(overloaded{
                        [](const Zero&) { return 0.0; },
                        [&](const Gaussian& g) {
                          const double dx = x[0] - g.center[0];
                          const double dy = dimension_ == 2 ? x[1] - g.center[1] : 0.0;
                          return g.amplitude * std::exp(-(dx * dx + dy * dy) / (g.sigma * g.sigma));
                        },
                        [&](const IndicatorInterval& p) {
                          const double ax = std::fabs(x[0]);
                          if (ax < p.radius) return p.amplitude;
                          return ax == p.radius ? 0.5 * p.amplitude : 0.0;
                        },
                        [&](const IndicatorDisk& p) {
                          const double R2 = p.radius * p.radius;
                          if (r2 < R2) return p.amplitude;
                          return r2 == R2 ? 0.5 * p.amplitude : 0.0;
                        },
                        [&](const PolynomialGaussian& p) {
                          double poly = 0.0;
                          for (const auto& m : p.terms) poly += m.coef * ipow(x[0], m.px) * ipow(x[1], m.py);
                          return poly * std::exp(-r2 / (p.sigma * p.sigma));
                        },
                    },
                    kind_);
}

Vec2 Profile::gradient(Vec2 x) const {
  if (!is_differentiable()) throw DomainError("gradient: indicator profiles are not differentiable");
  const double r2 = x[0] * x[0] + (dimension_ == 2 ? x[1] * x[1] : 0.0);
  return std::visit(overloaded{
                        [](const Zero&) { return Vec2{0.0, 0.0}; },
                        [&](const Gaussian& g) {
                          const double s2 = g.sigma * g.sigma;
                          const double dx = x[0] - g.center[0];
                          const double dy = dimension_ == 2 ? x[1] - g.center[1] : 0.0;
                          const double v = g.amplitude * std::exp(-(dx * dx + dy * dy) / s2);
                          return Vec2{-2.0 * dx / s2 * v, -2.0 * dy / s2 * v};
                        },
                        [&](const PolynomialGaussian& p) {
                          const double s2 = p.sigma * p.sigma;
                          const double e = std::exp(-r2 / s2);
                          double poly = 0.0;
                          double dpx = 0.0;
                          double dpy = 0.0;
                          for (const auto& m : p.terms) {
                            poly += m.coef * ipow(x[0], m.px) * ipow(x[1], m.py);
                            if (m.px > 0) dpx += m.coef * m.px * ipow(x[0], m.px - 1) * ipow(x[1], m.py);
                            if (m.py > 0) dpy += m.coef * m.py * ipow(x[0], m.px) * ipow(x[1], m.py - 1);
                          }
                          const double gx = (dpx - 2.0 * x[0] / s2 * poly) * e;
                          const double gy = dimension_ == 2 ? (dpy - 2.0 * x[1] / s2 * poly) * e : 0.0;
                          return Vec2{gx, gy};
                        },
                        [](const auto&) { return Vec2{0.0, 0.0}; },
                    },
                    kind_);
}

std::complex<double> Profile::fourier(Vec2 xi) const {
  const double rho = dimension_ == 2 ? std::hypot(xi[0], xi[1]) : std::fabs(xi[0]);
  return std::visit(overloaded{
                        [](const Zero&) { return cplx(0.0); },
                        [&](const Gaussian& g) {
                          const double base = g.amplitude * std::pow(kSqrtPi * g.sigma, dimension_) *
                                              std::exp(-0.25 * g.sigma * g.sigma * rho * rho);
                          const double phase = g.center[0] * xi[0] + (dimension_ == 2 ? g.center[1] * xi[1] : 0.0);
                          if (phase == 0.0) return cplx(base);
                          return base * cplx(std::cos(phase), -std::sin(phase));
                        },
                        [&](const IndicatorInterval& p) { return cplx(2.0 * p.amplitude * p.radius * sinc(p.radius * rho)); },
                        [&](const IndicatorDisk& p) {
                          return cplx(2.0 * kPi * p.radius * p.radius * p.amplitude * j1_over_x(p.radius * rho));
                        },
                        [&](const PolynomialGaussian& p) {
                          cplx sum = 0.0;
                          for (const auto& m : p.terms) {
                            cplx term = m.coef * monomial_gaussian_ft(m.px, p.sigma, xi[0]);
                            if (dimension_ == 2) term *= monomial_gaussian_ft(m.py, p.sigma, xi[1]);
                            sum += term;
                          }
                          return sum;
                        },
                    },
                    kind_);
}

double Profile::fourier_radial(double rho) const {
  if (!is_radial()) throw DomainError("fourier_radial: profile is not radially symmetric");
  Vec2 xi{rho, 0.0};
  return fourier(xi).real();
}

FourierEnvelope Profile::fourier_envelope() const {
  return std::visit(overloaded{
                        [](const Zero&) { return FourierEnvelope{}; },
                        [&](const Gaussian& g) {
                          return FourierEnvelope{std::fabs(g.amplitude) * std::pow(kSqrtPi * g.sigma, dimension_), 0.0,
                                                 0.25 * g.sigma * g.sigma};
                        },
                        // |2a sin(R rho)/rho| <= 2|a|/rho <= 4|a|/(1+rho) for rho >= 1
                        [](const IndicatorInterval& p) { return FourierEnvelope{4.0 * std::fabs(p.amplitude), -1.0, 0.0}; },
                        // |J1(x)| <= 1.1 sqrt(2/(pi x)), rho^{-3/2} <= 2^{3/2}(1+rho)^{-3/2} for rho >= 1
                        [](const IndicatorDisk& p) {
                          const double c = 2.0 * kPi * p.radius * std::fabs(p.amplitude) * 1.1 *
                                           std::sqrt(2.0 / (kPi * p.radius)) * std::pow(2.0, 1.5);
                          return FourierEnvelope{c, -1.5, 0.0};
                        },
                        [&](const PolynomialGaussian& p) {
                          double coef = 0.0;
                          int degree = 0;
                          const double half = 0.5 * p.sigma;
                          const double grow = std::max(1.0, half);
                          for (const auto& m : p.terms) {
                            double c = std::fabs(m.coef) * std::pow(kSqrtPi * p.sigma, dimension_);
                            c *= ipow(half * grow, m.px) * hermite_abs_coef_sum(m.px);
                            c *= ipow(half * grow, m.py) * hermite_abs_coef_sum(m.py);
                            coef += c;
                            degree = std::max(degree, m.px + m.py);
                          }
                          return FourierEnvelope{coef, static_cast<double>(degree), 0.25 * p.sigma * p.sigma};
                        },
                    },
                    kind_);
}

double Profile::integral() const { return fourier(Vec2{0.0, 0.0}).real(); }

double Profile::l1_norm() const {
  return std::visit(overloaded{
                        [](const Zero&) { return 0.0; },
                        [&](const Gaussian& g) { return std::fabs(g.amplitude) * std::pow(kSqrtPi * g.sigma, dimension_); },
                        [](const IndicatorInterval& p) { return 2.0 * p.radius * std::fabs(p.amplitude); },
                        [](const IndicatorDisk& p) { return kPi * p.radius * p.radius * std::fabs(p.amplitude); },
                        [&](const PolynomialGaussian& p) {
                          return polynomial_abs_integral(dimension_, p, effective_radius(1e-18),
                                                         [](double) { return 1.0; });
                        },
                    },
                    kind_);
}

double Profile::l2_norm() const {
  return std::visit(overloaded{
                        [](const Zero&) { return 0.0; },
                        [&](const Gaussian& g) {
                          return std::fabs(g.amplitude) * std::pow(g.sigma * std::sqrt(0.5 * kPi), 0.5 * dimension_);
                        },
                        [](const IndicatorInterval& p) { return std::fabs(p.amplitude) * std::sqrt(2.0 * p.radius); },
                        [](const IndicatorDisk& p) { return std::fabs(p.amplitude) * std::sqrt(kPi) * p.radius; },
                        [&](const PolynomialGaussian&) {
                          const double sq = integrate_physical(
                              dimension_,
                              [&](Vec2 x) {
                                const double v = value(x);
                                return v * v;
                              },
                              effective_radius(1e-18));
                          return std::sqrt(sq);
                        },
                    },
                    kind_);
}

double Profile::first_absolute_moment() const {
  auto numeric = [&] {
    return integrate_physical(
        dimension_, [&](Vec2 x) { return std::hypot(x[0], x[1]) * std::fabs(value(x)); }, effective_radius(1e-18));
  };
  return std::visit(overloaded{
                        [](const Zero&) { return 0.0; },
                        [&](const Gaussian& g) {
                          const double a = std::fabs(g.amplitude);
                          const double s = g.sigma;
                          if (dimension_ == 1) {
                            const double c = g.center[0];
                            return a * (s * s * std::exp(-c * c / (s * s)) + kSqrtPi * s * c * std::erf(c / s));
                          }
                          if (g.center[0] == 0.0 && g.center[1] == 0.0) return a * std::pow(kPi, 1.5) * s * s * s / 2.0;
                          return numeric();
                        },
                        [](const IndicatorInterval& p) { return p.radius * p.radius * std::fabs(p.amplitude); },
                        [](const IndicatorDisk& p) {
                          return 2.0 * kPi * p.radius * p.radius * p.radius * std::fabs(p.amplitude) / 3.0;
                        },
                        [&](const PolynomialGaussian& p) {
                          return polynomial_abs_integral(dimension_, p, effective_radius(1e-18),
                                                         [](double r) { return r; });
                        },
                    },
                    kind_);
}

double Profile::effective_radius(double rel) const {
  const double tail = std::sqrt(std::log(1.0 / rel));
  return std::visit(overloaded{
                        [](const Zero&) { return 0.0; },
                        [&](const Gaussian& g) { return std::hypot(g.center[0], g.center[1]) + g.sigma * tail; },
                        [](const IndicatorInterval& p) { return p.radius; },
                        [](const IndicatorDisk& p) { return p.radius; },
                        [&](const PolynomialGaussian& p) {
                          const double s = p.sigma;
                          auto bound = [&](double r) {
                            double b = 0.0;
                            for (const auto& m : p.terms) b += std::fabs(m.coef) * ipow(r, m.px + m.py);
                            return b * std::exp(-r * r / (s * s));
                          };
                          double scale = 0.0;
                          for (const auto& m : p.terms) {
                            const int d = m.px + m.py;
                            const double peak = d == 0 ? 1.0 : std::pow(0.5 * d * s * s, 0.5 * d) * std::exp(-0.5 * d);
                            scale += std::fabs(m.coef) * peak;
                          }
                          if (scale == 0.0) return 0.0;
                          double r = s * tail;
                          while (bound(r) > rel * scale) r += 0.05 * s;
                          return r;
                        },
                    },
                    kind_);
}

double Profile::antiderivative(double x) const {
  if (dimension_ != 1) throw DomainError("antiderivative: one-dimensional profiles only");
  return std::visit(overloaded{
                        [](const Zero&) { return 0.0; },
                        [&](const Gaussian& g) {
                          const double c = g.center[0];
                          return 0.5 * g.amplitude * g.sigma * kSqrtPi *
                                 (std::erf((x - c) / g.sigma) - std::erf(-c / g.sigma));
                        },
                        [&](const IndicatorInterval& p) { return p.amplitude * std::clamp(x, -p.radius, p.radius); },
                        [&](const PolynomialGaussian& p) {
                          double sum = 0.0;
                          for (const auto& m : p.terms) sum += m.coef * monomial_gaussian_antiderivative(m.px, p.sigma, x);
                          return sum;
                        },
                        [](const IndicatorDisk&) { return 0.0; },
                    },
                    kind_);
}

std::vector<double> Profile::breakpoints() const {
  if (const auto* p = std::get_if<IndicatorInterval>(&kind_)) return {-p->radius, p->radius};
  if (const auto* p = std::get_if<IndicatorDisk>(&kind_)) return {p->radius};
  return {};
}

Profile Profile::scaled(double factor) const {
  ProfileKind k = kind_;
  std::visit(overloaded{
                 [](Zero&) {},
                 [&](Gaussian& g) { g.amplitude *= factor; },
                 [&](IndicatorInterval& p) { p.amplitude *= factor; },
                 [&](IndicatorDisk& p) { p.amplitude *= factor; },
                 [&](PolynomialGaussian& p) {
                   for (auto& m : p.terms) m.coef *= factor;
                 },
             },
             k);
  return {dimension_, std::move(k)};
}

ProfilePair::ProfilePair(Profile u0_, Profile u1_) : u0(std::move(u0_)), u1(std::move(u1_)) {
  if (u0.dimension() != u1.dimension()) throw DomainError("profile pair: u0 and u1 dimensions differ");
}

DataNorms moments(const ProfilePair& pp) {
  DataNorms d;
  d.l1_u0 = pp.u0.l1_norm();
  d.l2_u0 = pp.u0.l2_norm();
  d.l1_u1 = pp.u1.l1_norm();
  d.l2_u1 = pp.u1.l2_norm();
  d.l11_u1 = pp.u1.l11_norm();
  d.I0n = d.l2_u0 + d.l1_u0 + d.l2_u1 + d.l1_u1;
  d.P = pp.u1.integral();
  if (pp.u0.is_differentiable()) {
    const int n = pp.dimension();
    const double radius = std::max(pp.u0.effective_radius(1e-18), pp.u1.effective_radius(1e-18));
    auto breaks = pp.u1.breakpoints();
    d.weighted_h1 = integrate_physical(
        n,
        [&](Vec2 x) {
          const double v = pp.u1.value(x);
          const Vec2 g = pp.u0.gradient(x);
          return std::hypot(x[0], x[1]) * (v * v + g[0] * g[0] + g[1] * g[1]);
        },
        radius, breaks);
  }
  return d;
}

}  // namespace wavenorm
