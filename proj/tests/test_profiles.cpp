#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "wavenorm/bessel.hpp"
#include "wavenorm/error.hpp"
#include "wavenorm/profiles.hpp"

using namespace wavenorm;
using boost::math::quadrature::gauss_kronrod;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double gk(F&& f, double a, double b) {
  double sum = 0.0;
  const int pieces = std::max(1, static_cast<int>(std::ceil(b - a)));
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + (b - a) * k / pieces;
    const double hi = a + (b - a) * (k + 1) / pieces;
    sum += gauss_kronrod<double, 61>::integrate(f, lo, hi, 10, 1e-14);
  }
  return sum;
}

// int f(x) e^{-i x xi} dx on [-L, L]
std::complex<double> ft_1d(const Profile& p, double xi, double L) {
  const double re = gk([&](double x) { return p.value({x, 0.0}) * std::cos(x * xi); }, -L, L);
  const double im = gk([&](double x) { return -p.value({x, 0.0}) * std::sin(x * xi); }, -L, L);
  return {re, im};
}

// Tensor Gauss-Legendre, 20 nodes on each of `pieces` cells per axis of [-L, L]^2.
template <class F>
double tensor(F&& f, double L, int pieces) {
  using rule = boost::math::quadrature::gauss<double, 20>;
  auto line = [&](auto&& g) {
    double s = 0.0;
    for (int k = 0; k < pieces; ++k) {
      s += rule::integrate(g, -L + 2.0 * L * k / pieces, -L + 2.0 * L * (k + 1) / pieces);
    }
    return s;
  };
  return line([&](double y) { return line([&](double x) { return f(Vec2{x, y}); }); });
}

std::complex<double> ft_2d(const Profile& p, Vec2 xi, double L) {
  auto part = [&](bool imag) {
    return tensor(
        [&](Vec2 x) {
          const double ph = x[0] * xi[0] + x[1] * xi[1];
          return p.value(x) * (imag ? -std::sin(ph) : std::cos(ph));
        },
        L, 16);
  };
  return {part(false), part(true)};
}

Profile gauss1(double sigma, double a, double c = 0.0) { return {1, Gaussian{sigma, a, {c, 0.0}}}; }
Profile gauss2(double sigma, double a, Vec2 c = {0.0, 0.0}) { return {2, Gaussian{sigma, a, c}}; }

}  // namespace

TEST_CASE("one-dimensional transforms match direct quadrature") {
  const std::vector<Profile> cases{
      gauss1(1.0, 1.0),
      gauss1(0.7, -2.0, 0.4),
      Profile(1, IndicatorInterval{1.0, 2.0}),
      Profile(1, PolynomialGaussian{1.2, {{1.0, 1, 0}, {-0.5, 2, 0}}}),
  };
  for (const auto& p : cases) {
    for (double xi : {0.0, 0.3, 1.7, 6.0}) {
      const auto want = ft_1d(p, xi, 12.0);
      const auto got = p.fourier({xi, 0.0});
      CHECK(std::abs(got - want) < 1e-11 * (1.0 + std::abs(want)));
    }
  }
}

TEST_CASE("two-dimensional transforms match tensor quadrature") {
  const std::vector<Profile> cases{
      gauss2(1.0, 1.0),
      gauss2(0.8, 1.5, {0.3, -0.2}),
      Profile(2, PolynomialGaussian{1.0, {{1.0, 1, 0}}}),
      Profile(2, PolynomialGaussian{1.1, {{0.5, 2, 1}, {1.0, 0, 0}}}),
  };
  for (const auto& p : cases) {
    for (Vec2 xi : {Vec2{0.0, 0.0}, Vec2{0.5, -0.3}, Vec2{2.0, 1.0}}) {
      const auto want = ft_2d(p, xi, 8.0);
      const auto got = p.fourier(xi);
      CHECK(std::abs(got - want) < 1e-10 * (1.0 + std::abs(want)));
    }
  }
}

TEST_CASE("closed-form transforms of the catalog") {
  const Profile interval(1, IndicatorInterval{1.5, 2.0});
  CHECK(interval.fourier({0.8, 0.0}).real() == Approx(2.0 * 2.0 * std::sin(1.5 * 0.8) / 0.8).epsilon(1e-14));
  const Profile disk(2, IndicatorDisk{1.3, 0.5});
  const double rho = 2.2;
  CHECK(disk.fourier({rho, 0.0}).real() ==
        Approx(2.0 * kPi * 0.5 * 1.3 * bessel_j1(1.3 * rho) / rho).epsilon(1e-13));
  // x1 e^{-|x|^2} -> -i pi xi1 / 2 e^{-|xi|^2/4}
  const Profile odd(2, PolynomialGaussian{1.0, {{1.0, 1, 0}}});
  const Vec2 xi{0.7, 0.4};
  const auto got = odd.fourier(xi);
  CHECK(std::fabs(got.real()) < 1e-15);
  CHECK(got.imag() == Approx(-kPi * 0.7 / 2.0 * std::exp(-(0.49 + 0.16) / 4.0)).epsilon(1e-13));
}

TEST_CASE("norms and moments match hand-computed values") {
  const double s = 0.9, a = 1.7;
  const Profile g1 = gauss1(s, a);
  CHECK(g1.integral() == Approx(a * s * std::sqrt(kPi)).epsilon(1e-14));
  CHECK(g1.l2_norm() == Approx(a * std::sqrt(s * std::sqrt(kPi / 2.0))).epsilon(1e-14));
  CHECK(g1.first_absolute_moment() == Approx(a * s * s).epsilon(1e-13));
  const Profile g2 = gauss2(s, a);
  CHECK(g2.l1_norm() == Approx(a * kPi * s * s).epsilon(1e-14));
  CHECK(g2.l2_norm() == Approx(a * s * std::sqrt(kPi / 2.0)).epsilon(1e-14));
  CHECK(g2.first_absolute_moment() == Approx(a * kPi * std::sqrt(kPi) * s * s * s / 2.0).epsilon(1e-13));
  const Profile interval(1, IndicatorInterval{1.0, 2.0});
  CHECK(interval.l11_norm() == Approx(6.0).epsilon(1e-15));
  const Profile disk(2, IndicatorDisk{2.0, 3.0});
  CHECK(disk.l1_norm() == Approx(3.0 * kPi * 4.0).epsilon(1e-15));
  CHECK(disk.first_absolute_moment() == Approx(3.0 * 2.0 * kPi * 8.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("polynomial-gaussian norms agree with quadrature") {
  const Profile p(2, PolynomialGaussian{1.1, {{0.5, 2, 1}, {1.0, 0, 0}, {-0.3, 1, 0}}});
  auto integral = [&](auto&& f) { return tensor(f, 9.0, 96); };
  CHECK(p.integral() == Approx(integral([&](Vec2 x) { return p.value(x); })).epsilon(1e-11));
  // |p| has kinks along the zero set, so the tensor rule only gives a few digits.
  CHECK(p.l1_norm() == Approx(integral([&](Vec2 x) { return std::fabs(p.value(x)); })).epsilon(1e-5));
  const double l2sq = integral([&](Vec2 x) { return p.value(x) * p.value(x); });
  CHECK(p.l2_norm() == Approx(std::sqrt(l2sq)).epsilon(1e-11));
}

TEST_CASE("absolute moments of odd polynomial profiles") {
  // int |x| e^{-x^2} dx = 1, int |x1| e^{-|x|^2} dx = sqrt(pi)
  CHECK(Profile(1, PolynomialGaussian{1.0, {{1.0, 1, 0}}}).l1_norm() == Approx(1.0).epsilon(1e-11));
  const Profile odd(2, PolynomialGaussian{1.0, {{1.0, 1, 0}}});
  CHECK(odd.l1_norm() == Approx(std::sqrt(kPi)).epsilon(1e-11));
  // int |x| |x1| e^{-|x|^2} dx = int_0^inf r^3 e^{-r^2} dr * int |cos| = 2
  CHECK(odd.first_absolute_moment() == Approx(2.0).epsilon(1e-11));
}

TEST_CASE("Plancherel holds for every catalog kind") {
  // int |f^|^2 = (2 pi)^n int |f|^2
  const Profile g1 = gauss1(0.8, 1.3, 0.2);
  const double lhs1 = gk([&](double xi) { return std::norm(g1.fourier({xi, 0.0})); }, -30.0, 30.0);
  CHECK(lhs1 == Approx(2.0 * kPi * std::pow(g1.l2_norm(), 2)).epsilon(1e-11));
  const Profile g2 = gauss2(1.0, 1.0);
  const double lhs2 =
      2.0 * kPi * gk([&](double r) { return r * std::pow(g2.fourier_radial(r), 2); }, 0.0, 30.0);
  CHECK(lhs2 == Approx(4.0 * kPi * kPi * std::pow(g2.l2_norm(), 2)).epsilon(1e-11));
}

TEST_CASE("gradient matches finite differences") {
  const Profile p(2, PolynomialGaussian{1.1, {{0.5, 2, 1}, {1.0, 0, 0}}});
  const double h = 1e-6;
  for (Vec2 x : {Vec2{0.3, -0.4}, Vec2{1.2, 0.8}}) {
    const Vec2 g = p.gradient(x);
    CHECK(g[0] == Approx((p.value({x[0] + h, x[1]}) - p.value({x[0] - h, x[1]})) / (2 * h)).epsilon(1e-7));
    CHECK(g[1] == Approx((p.value({x[0], x[1] + h}) - p.value({x[0], x[1] - h})) / (2 * h)).epsilon(1e-7));
  }
  CHECK_THROWS_AS(Profile(1, IndicatorInterval{}).gradient({0.0, 0.0}), DomainError);
}

TEST_CASE("scaling multiplies transform and norms") {
  const Profile p(2, PolynomialGaussian{1.0, {{1.0, 1, 0}}});
  const Profile q = p.scaled(3.0);
  CHECK(std::abs(q.fourier({0.4, 0.1}) - 3.0 * p.fourier({0.4, 0.1})) < 1e-15);
  CHECK(q.l1_norm() == Approx(3.0 * p.l1_norm()).epsilon(1e-14));
}

TEST_CASE("indicator takes half its amplitude on the jump") {
  const Profile interval(1, IndicatorInterval{1.0, 2.0});
  CHECK(interval.value({1.0, 0.0}) == 1.0);
  CHECK(interval.value({0.5, 0.0}) == 2.0);
  CHECK(interval.value({1.5, 0.0}) == 0.0);
}

TEST_CASE("effective radius bounds the data") {
  const Profile g = gauss2(1.0, 1.0);
  const double r = g.effective_radius();
  CHECK(std::exp(-r * r) <= 1.0001e-14);
  CHECK(Profile(1, IndicatorInterval{1.5, 1.0}).effective_radius() == 1.5);
}

TEST_CASE("invalid profiles are rejected") {
  CHECK_THROWS_AS(Profile(3, Zero{}), DomainError);
  CHECK_THROWS_AS(Profile(2, IndicatorInterval{}), DomainError);
  CHECK_THROWS_AS(Profile(1, IndicatorDisk{}), DomainError);
  CHECK_THROWS_AS(Profile(1, Gaussian{-1.0, 1.0, {0.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(Profile(1, PolynomialGaussian{1.0, {{1.0, 0, 1}}}), DomainError);
}

TEST_CASE("moments collect the data norms") {
  const ProfilePair pp(gauss1(1.0, 1.0), Profile(1, IndicatorInterval{1.0, 2.0}));
  const DataNorms d = moments(pp);
  CHECK(d.P == Approx(4.0).epsilon(1e-15));
  CHECK(d.l11_u1.value() == Approx(6.0).epsilon(1e-15));
  CHECK(d.I0n == Approx(pp.u0.l2_norm() + pp.u0.l1_norm() + pp.u1.l2_norm() + pp.u1.l1_norm()).epsilon(1e-15));
}
