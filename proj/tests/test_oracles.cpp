#include <catch_amalgamated.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>

#include "wavenorm/error.hpp"
#include "wavenorm/oracles.hpp"
#include "wavenorm/spectral.hpp"

using namespace wavenorm;
using Catch::Approx;

namespace {

template <class F>
double simpson(F&& f, double a, double b, long m) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (long i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// u(t, x) for the example: the length of [x - t, x + t] inside [-1, 1].
double example_field(double t, double x) { return std::max(0.0, std::min(x + t, 1.0) - std::max(x - t, -1.0)); }

template <class T>
T read_le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | b[i];
  T v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

TEST_CASE("d'Alembert matches the piecewise example solution") {
  const auto pp = example_data();
  CHECK(dalembert_solve(pp, 10.0, 0.0) == Approx(2.0).epsilon(1e-14));
  CHECK(dalembert_solve(pp, 10.0, 12.0) == 0.0);
  CHECK(dalembert_solve(pp, 10.0, -10.5) == Approx(0.5).epsilon(1e-14));
  for (double x : {-10.7, -9.2, 0.3, 9.0, 10.9}) CHECK(dalembert_solve(pp, 10.0, x) == Approx(example_field(10.0, x)));
}

TEST_CASE("zero velocity gives the average of shifted data") {
  const Profile g(1, Gaussian{0.8, 1.7, {0.4, 0.0}});
  const ProfilePair pp(g, Profile::zero(1));
  for (double t : {0.0, 0.6, 3.0})
    for (double x : {-1.0, 0.2, 2.5}) {
      const double want = 0.5 * (g.value({x - t, 0.0}) + g.value({x + t, 0.0}));
      CHECK(dalembert_solve(pp, t, x) == Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("d'Alembert field derivatives match finite differences") {
  const ProfilePair pp(Profile(1, Gaussian{0.9, 1.2, {0.1, 0.0}}), Profile(1, Gaussian{0.6, -0.7, {0.0, 0.0}}));
  const double h = 1e-5;
  for (double t : {0.5, 2.0})
    for (double x : {-1.3, 0.0, 0.8}) {
      const auto f = dalembert_field(pp, t, x);
      CHECK(f.u == Approx(dalembert_solve(pp, t, x)).epsilon(1e-13));
      const double ut = (dalembert_solve(pp, t + h, x) - dalembert_solve(pp, t - h, x)) / (2.0 * h);
      const double ux = (dalembert_solve(pp, t, x + h) - dalembert_solve(pp, t, x - h)) / (2.0 * h);
      CHECK(f.ut == Approx(ut).margin(1e-8));
      CHECK(f.ux == Approx(ux).margin(1e-8));
    }
}

TEST_CASE("d'Alembert norm reproduces 8(t-1) + 16/3") {
  const auto pp = example_data();
  CHECK(dalembert_l2(pp, 10.0) == Approx(77.0 + 1.0 / 3.0).epsilon(1e-9));
  CHECK(dalembert_l2(pp, 100.0) == Approx(797.0 + 1.0 / 3.0).epsilon(1e-9));
  // at t = 2.5 by direct integration of the piecewise field
  const double t = 2.5;
  const double direct = simpson([t](double x) { return std::pow(example_field(t, x), 2); }, -t - 1.0, t + 1.0, 7000);
  CHECK(dalembert_l2(pp, t) == Approx(direct).epsilon(1e-9));
  CHECK(direct == Approx(17.0 + 1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("d'Alembert norm at t = 0 is the norm of u0") {
  const Profile u0(1, PolynomialGaussian{1.0, {{1.0, 2, 0}, {-0.5, 0, 0}}});
  CHECK(dalembert_l2(ProfilePair(u0, Profile::zero(1)), 0.0) == Approx(std::pow(u0.l2_norm(), 2)).epsilon(1e-12));
}

TEST_CASE("d'Alembert refuses two-dimensional data") {
  const ProfilePair pp(Profile::zero(2), Profile(2, Gaussian{1.0, 1.0, {0.0, 0.0}}));
  CHECK_THROWS_AS(dalembert_solve(pp, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(dalembert_l2(pp, 1.0), DomainError);
}

TEST_CASE("verify_example agrees by every route") {
  const auto rows = verify_example({2.5, 5.0, 10.0});
  REQUIRE(rows.size() == 3);
  const double want[] = {17.0 + 1.0 / 3.0, 37.0 + 1.0 / 3.0, 77.0 + 1.0 / 3.0};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].closed_form == Approx(want[i]).epsilon(1e-15));
    CHECK(rows[i].rel_dalembert <= 1e-9);
    CHECK(rows[i].rel_spectral <= 1e-6);
    CHECK(rows[i].rel_grid <= 1e-6);
  }
}

TEST_CASE("grid at t = 0 is the sampled data") {
  const ProfilePair pp(Profile(2, Gaussian{1.0, 0.7, {0.5, 0.0}}), Profile(2, Gaussian{0.8, 1.0, {0.0, 0.0}}));
  const auto g = grid_solve(pp, 16.0, 64, 0.0);
  REQUIRE(g.size() == 64 * 64);
  for (std::size_t j = 0; j < 64; j += 7)
    for (std::size_t i = 0; i < 64; i += 5) {
      const Vec2 x{g.coordinate(i), g.coordinate(j)};
      CHECK(g.u[j * 64 + i] == pp.u0.value(x));
      CHECK(g.ut[j * 64 + i] == pp.u1.value(x));
    }
}

TEST_CASE("one-dimensional grid matches d'Alembert for the example") {
  const auto pp = example_data();
  const auto g = grid_solve(pp, 64.0, 1 << 14, 10.0);
  const double want = dalembert_l2(pp, 10.0);
  CHECK(std::fabs(g.l2_norm_sq() - want) / want <= 1e-6);
}

TEST_CASE("two-dimensional grid matches the spectral norm") {
  const ProfilePair pp(Profile::zero(2), Profile(2, Gaussian{1.0, 1.0, {0.0, 0.0}}));
  const auto g = grid_solve(pp, 256.0, 2048, 50.0);
  const double m = l2_norm(SpectralState(pp), 50.0);
  CHECK(std::fabs(g.l2_norm_sq() - m * m) / (m * m) <= 1e-4);
}

TEST_CASE("discrete energy is conserved by the grid evolution") {
  const ProfilePair pp(Profile(1, Gaussian{1.0, 0.5, {0.0, 0.0}}), Profile(1, Gaussian{0.7, 1.0, {0.3, 0.0}}));
  const double e0 = grid_solve(pp, 2048.0, 1 << 16, 0.0).discrete_energy();
  for (double t : {1.0, 10.0, 100.0, 1000.0}) {
    const double e = grid_solve(pp, 2048.0, 1 << 16, t).discrete_energy();
    CHECK(std::fabs(e - e0) / e0 <= 1e-10);
  }
  const ProfilePair pp2(Profile::zero(2), Profile(2, Gaussian{1.0, 1.0, {0.0, 0.0}}));
  const double f0 = grid_solve(pp2, 64.0, 256, 0.0).discrete_energy();
  for (double t : {1.0, 10.0, 40.0}) CHECK(std::fabs(grid_solve(pp2, 64.0, 256, t).discrete_energy() - f0) / f0 <= 1e-10);
}

TEST_CASE("grid solution vanishes outside the light cone") {
  const ProfilePair p1(Profile(1, Gaussian{0.7, 1.0, {0.0, 0.0}}), Profile(1, Gaussian{0.5, 2.0, {0.0, 0.0}}));
  for (double t : {3.0, 20.0}) {
    const auto g = grid_solve(p1, 64.0, 4096, t);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (std::fabs(g.coordinate(i)) > g.data_radius + t) worst = std::max(worst, std::fabs(g.u[i]));
    CHECK(worst <= 1e-12);
  }
  const ProfilePair p2(Profile::zero(2), Profile(2, Gaussian{0.7, 1.0, {0.0, 0.0}}));
  const auto g = grid_solve(p2, 32.0, 512, 10.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < g.points; ++j)
    for (std::size_t i = 0; i < g.points; ++i)
      if (std::hypot(g.coordinate(i), g.coordinate(j)) > g.data_radius + 10.0)
        worst = std::max(worst, std::fabs(g.u[j * g.points + i]));
  CHECK(worst <= 1e-12);
}

TEST_CASE("grid refuses times past the fidelity horizon") {
  const ProfilePair pp(Profile::zero(2), Profile(2, Gaussian{1.0, 1.0, {0.0, 0.0}}));
  const auto g = grid_solve(pp, 32.0, 128, 0.0);
  CHECK_NOTHROW(g.require_within_horizon(30.0));
  CHECK_THROWS_AS(grid_solve(pp, 32.0, 128, g.horizon()), HorizonError);
  CHECK_THROWS_AS(grid_solve(pp, 32.0, 128, 20.0, 10.0), HorizonError);
  CHECK_NOTHROW(grid_solve(pp, 32.0, 128, 10.0, 10.0));
  CHECK_THROWS_AS(grid_solve(pp, 32.0, 100, 1.0), DomainError);
  CHECK_THROWS_AS(grid_solve(pp, 8.0, 128, 1.0), DomainError);
}

TEST_CASE("binary export follows the documented layout") {
  const ProfilePair pp(Profile::zero(1), Profile(1, Gaussian{1.0, 1.0, {0.0, 0.0}}));
  const auto g = grid_solve(pp, 16.0, 32, 2.0);
  std::stringstream buf;
  g.write_binary(buf);
  CHECK(buf.str().size() == 32 + 2 * 32 * 8);
  CHECK(read_le<std::int64_t>(buf) == 1);
  CHECK(read_le<double>(buf) == 16.0);
  CHECK(read_le<std::int64_t>(buf) == 32);
  CHECK(read_le<double>(buf) == 2.0);
  for (std::size_t i = 0; i < 32; ++i) CHECK(read_le<double>(buf) == g.u[i]);
  for (std::size_t i = 0; i < 32; ++i) CHECK(read_le<double>(buf) == g.ut[i]);
}
