#include "wavenorm/oracles.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <memory>
#include <mutex>
#include <numbers>

#include "wavenorm/error.hpp"
#include "wavenorm/spectral.hpp"

namespace wavenorm {
namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

template <typename T>
struct FftwDeleter {
  void operator()(T* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

// Real <-> half-complex transforms on an n-dimensional cube of side N.
// The half spectrum has N/2 + 1 entries along x.
class CubeFft {
public:
  CubeFft(int dimension, std::size_t points) : dim_(dimension), n_(points) {
    real_size_ = dim_ == 1 ? n_ : n_ * n_;
    half_ = n_ / 2 + 1;
    spec_size_ = dim_ == 1 ? half_ : n_ * half_;
  }

  std::size_t half() const { return half_; }
  std::size_t spectrum_size() const { return spec_size_; }

  std::vector<cplx> forward(const std::vector<double>& in) const {
    auto r = fftw_buffer<double>(real_size_);
    auto c = fftw_buffer<fftw_complex>(spec_size_);
    fftw_plan plan;
    {
      std::lock_guard lock(planner_mutex());
      plan = dim_ == 1 ? fftw_plan_dft_r2c_1d(static_cast<int>(n_), r.get(), c.get(), FFTW_ESTIMATE)
                       : fftw_plan_dft_r2c_2d(static_cast<int>(n_), static_cast<int>(n_), r.get(), c.get(),
                                              FFTW_ESTIMATE);
    }
    std::copy(in.begin(), in.end(), r.get());
    fftw_execute(plan);
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
    std::vector<cplx> out(spec_size_);
    for (std::size_t i = 0; i < spec_size_; ++i) out[i] = cplx(c[i][0], c[i][1]);
    return out;
  }

  // Unnormalised inverse; divide by N^n afterwards.
  std::vector<double> inverse(const std::vector<cplx>& in) const {
    auto r = fftw_buffer<double>(real_size_);
    auto c = fftw_buffer<fftw_complex>(spec_size_);
    fftw_plan plan;
    {
      std::lock_guard lock(planner_mutex());
      plan = dim_ == 1 ? fftw_plan_dft_c2r_1d(static_cast<int>(n_), c.get(), r.get(), FFTW_ESTIMATE)
                       : fftw_plan_dft_c2r_2d(static_cast<int>(n_), static_cast<int>(n_), c.get(), r.get(),
                                              FFTW_ESTIMATE);
    }
    for (std::size_t i = 0; i < spec_size_; ++i) {
      c[i][0] = in[i].real();
      c[i][1] = in[i].imag();
    }
    fftw_execute(plan);
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
    return std::vector<double>(r.get(), r.get() + real_size_);
  }

private:
  int dim_;
  std::size_t n_;
  std::size_t real_size_;
  std::size_t half_;
  std::size_t spec_size_;
};

// Signed mode number of index m on an axis of N points.
long signed_mode(std::size_t m, std::size_t n) {
  return m <= n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
}

// Calls f(spectral index, kx, ky, multiplicity in the full spectrum).
template <typename F>
void for_each_mode(int dim, std::size_t n, double dk, F&& f) {
  const std::size_t half = n / 2 + 1;
  const std::size_t rows = dim == 1 ? 1 : n;
  for (std::size_t r = 0; r < rows; ++r) {
    const double ky = dim == 1 ? 0.0 : dk * static_cast<double>(signed_mode(r, n));
    for (std::size_t m = 0; m < half; ++m) {
      const double kx = dk * static_cast<double>(m);
      const double mult = (m == 0 || m == n / 2) ? 1.0 : 2.0;
      f(r * half + m, kx, ky, mult);
    }
  }
}

double data_radius(const ProfilePair& pp) { return std::max(pp.u0.effective_radius(), pp.u1.effective_radius()); }

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  char bytes[8];
  std::memcpy(bytes, &bits, 8);
  out.write(bytes, 8);
}

}  // namespace

double dalembert_solve(const ProfilePair& pp, double t, double x) {
  if (pp.dimension() != 1) throw DomainError("d'Alembert formula needs one-dimensional data");
  const double avg = 0.5 * (pp.u0.value(Vec2{x - t, 0.0}) + pp.u0.value(Vec2{x + t, 0.0}));
  return avg + 0.5 * (pp.u1.antiderivative(x + t) - pp.u1.antiderivative(x - t));
}

PointField dalembert_field(const ProfilePair& pp, double t, double x) {
  if (pp.dimension() != 1) throw DomainError("d'Alembert formula needs one-dimensional data");
  const double dl = pp.u0.gradient(Vec2{x - t, 0.0})[0];
  const double dr = pp.u0.gradient(Vec2{x + t, 0.0})[0];
  const double vl = pp.u1.value(Vec2{x - t, 0.0});
  const double vr = pp.u1.value(Vec2{x + t, 0.0});
  return {dalembert_solve(pp, t, x), 0.5 * (dr - dl) + 0.5 * (vr + vl), 0.5 * (dl + dr) + 0.5 * (vr - vl)};
}

std::vector<double> dalembert_breakpoints(const ProfilePair& pp, double t) {
  std::vector<double> out;
  for (const Profile* p : {&pp.u0, &pp.u1}) {
    for (double b : p->breakpoints()) {
      out.push_back(b - t);
      out.push_back(b + t);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double dalembert_l2(const ProfilePair& pp, double t) {
  if (pp.dimension() != 1) throw DomainError("d'Alembert formula needs one-dimensional data");
  if (!(t >= 0.0)) throw DomainError("dalembert_l2: t must be non-negative");
  const double radius = data_radius(pp) + t;
  if (radius == t) return 0.0;
  return integrate_physical(
      1,
      [&](Vec2 x) {
        const double u = dalembert_solve(pp, t, x[0]);
        return u * u;
      },
      radius, dalembert_breakpoints(pp, t));
}

void GridField::require_within_horizon(double observation_radius) const {
  if (t != 0.0 && !(t < horizon(observation_radius))) {
    throw HorizonError(fmt::format("t = {} is beyond the fidelity horizon {} (box half-length {}, data radius {}, "
                                   "observation radius {})",
                                   t, horizon(observation_radius), half_length, data_radius, observation_radius));
  }
}

std::vector<double> GridField::derivative(int axis) const {
  if (axis < 0 || axis >= dimension) throw DomainError(fmt::format("derivative: axis {} out of range", axis));
  const CubeFft fft(dimension, points);
  auto spec = fft.forward(u);
  const double dk = kPi / half_length;
  const std::size_t n = points;
  for_each_mode(dimension, n, dk, [&](std::size_t idx, double kx, double ky, double) {
    const std::size_t m = idx % fft.half();
    const std::size_t r = idx / fft.half();
    const bool nyquist = axis == 0 ? m == n / 2 : (dimension == 2 && r == n / 2);
    const double k = axis == 0 ? kx : ky;
    spec[idx] = nyquist ? cplx(0.0) : spec[idx] * cplx(0.0, k);
  });
  auto out = fft.inverse(spec);
  const double scale = 1.0 / static_cast<double>(u.size());
  for (auto& v : out) v *= scale;
  return out;
}

double GridField::l2_norm_sq() const {
  double s = 0.0;
  for (double v : u) s += v * v;
  return s * std::pow(spacing(), dimension);
}

double GridField::discrete_energy() const {
  const CubeFft fft(dimension, points);
  const auto su = fft.forward(u);
  const auto sv = fft.forward(ut);
  const double dk = kPi / half_length;
  double sum = 0.0;
  for_each_mode(dimension, points, dk, [&](std::size_t idx, double kx, double ky, double mult) {
    sum += mult * (std::norm(sv[idx]) + (kx * kx + ky * ky) * std::norm(su[idx]));
  });
  // Parseval: sum_j |f_j|^2 = N^{-n} sum_k |F_k|^2
  return 0.5 * sum * std::pow(spacing(), dimension) / static_cast<double>(u.size());
}

void GridField::write_binary(std::ostream& out) const {
  put_le<std::int64_t>(out, dimension);
  put_le<double>(out, half_length);
  put_le<std::int64_t>(out, static_cast<std::int64_t>(points));
  put_le<double>(out, t);
  for (double v : u) put_le<double>(out, v);
  for (double v : ut) put_le<double>(out, v);
}

void GridField::write_binary(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot open {} for writing", path));
  write_binary(f);
}

GridField grid_solve(const ProfilePair& pp, double half_length, std::size_t points, double t,
                     double observation_radius) {
  const int dim = pp.dimension();
  if (points < 4 || !std::has_single_bit(points)) {
    throw DomainError(fmt::format("grid_solve: points per axis must be a power of two, got {}", points));
  }
  if (!(half_length > 0.0)) throw DomainError("grid_solve: box half-length must be positive");
  if (!(t >= 0.0)) throw DomainError("grid_solve: t must be non-negative");

  GridField g;
  g.dimension = dim;
  g.half_length = half_length;
  g.points = points;
  g.t = t;
  g.data_radius = data_radius(pp);
  if (g.data_radius > 0.5 * half_length) {
    throw DomainError(fmt::format("grid_solve: data radius {} exceeds half the box half-length {}", g.data_radius,
                                  half_length));
  }
  g.require_within_horizon(observation_radius);

  const std::size_t total = dim == 1 ? points : points * points;
  std::vector<double> s0(total);
  std::vector<double> s1(total);
  for (std::size_t j = 0; j < total; ++j) {
    const Vec2 x{g.coordinate(j % points), dim == 2 ? g.coordinate(j / points) : 0.0};
    s0[j] = pp.u0.value(x);
    s1[j] = pp.u1.value(x);
  }

  if (t == 0.0) {
    g.u = std::move(s0);
    g.ut = std::move(s1);
    return g;
  }

  const CubeFft fft(dim, points);
  const auto w0 = fft.forward(s0);
  const auto w1 = fft.forward(s1);
  std::vector<cplx> w(w0.size());
  std::vector<cplx> wt(w0.size());
  const double dk = kPi / half_length;
  for_each_mode(dim, points, dk, [&](std::size_t idx, double kx, double ky, double) {
    const double k = std::hypot(kx, ky);
    if (k == 0.0) {
      w[idx] = w0[idx] + t * w1[idx];
      wt[idx] = w1[idx];
      return;
    }
    const double c = std::cos(t * k);
    const double s = std::sin(t * k);
    w[idx] = s / k * w1[idx] + c * w0[idx];
    wt[idx] = c * w1[idx] - k * s * w0[idx];
  });
  g.u = fft.inverse(w);
  g.ut = fft.inverse(wt);
  const double scale = 1.0 / static_cast<double>(total);
  for (auto& v : g.u) v *= scale;
  for (auto& v : g.ut) v *= scale;
  return g;
}

ProfilePair example_data() { return {Profile::zero(1), Profile(1, IndicatorInterval{1.0, 2.0})}; }

std::vector<ExampleRow> verify_example(const std::vector<double>& t0_list, double grid_spacing) {
  const ProfilePair pp = example_data();
  const SpectralState s(pp);
  std::vector<ExampleRow> rows;
  for (double t0 : t0_list) {
    ExampleRow r;
    r.t0 = t0;
    r.closed_form = 8.0 * (t0 - 1.0) + 16.0 / 3.0;
    r.dalembert = dalembert_l2(pp, t0);
    const double m = l2_norm(s, t0);
    r.spectral = m * m;
    double half = 1.0;
    while (!(t0 < half - 1.0) || half < 4.0) half *= 2.0;
    const auto points = static_cast<std::size_t>(std::llround(2.0 * half / grid_spacing));
    r.grid = grid_solve(pp, half, std::bit_ceil(points), t0).l2_norm_sq();
    auto rel = [&](double v) { return std::fabs(v - r.closed_form) / r.closed_form; };
    r.rel_dalembert = rel(r.dalembert);
    r.rel_grid = rel(r.grid);
    r.rel_spectral = rel(r.spectral);
    const double vals[] = {r.closed_form, r.dalembert, r.grid, r.spectral};
    for (double a : vals) {
      for (double b : vals) r.max_pairwise = std::max(r.max_pairwise, std::fabs(a - b) / r.closed_form);
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace wavenorm
