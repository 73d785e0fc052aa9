#pragma once

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace wavenorm {

namespace detail {

inline std::vector<double> segment_points(double lo, double hi, const std::vector<double>& breaks) {
  std::vector<double> pts{lo};
  for (double b : breaks) {
    if (b > lo && b < hi) pts.push_back(b);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

template <typename F>
double bisect_gk(F& f, double a, double b, double abs_tol, int depth) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0, norm = 0.0;
  const double v = gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err, &norm);
  // The estimate never drops below a roundoff floor of the panel itself.
  if (err <= abs_tol || err <= 200.0 * std::numeric_limits<double>::epsilon() * norm || depth == 0) return v;
  const double m = 0.5 * (a + b);
  return bisect_gk(f, a, m, 0.5 * abs_tol, depth - 1) + bisect_gk(f, m, b, 0.5 * abs_tol, depth - 1);
}

// Panels are refined until the error estimate is below tol times the L1
// norm of the whole integrand, so roundoff-level tails do not stall it.
template <typename F>
double integrate_segments(F&& f, const std::vector<double>& pts, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  std::vector<std::pair<double, double>> panels;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    // Uniform sub-panels so that narrow features are seen by the first pass.
    const int pieces = std::max(1, static_cast<int>(std::ceil((pts[i + 1] - pts[i]) / 0.5)));
    const double w = (pts[i + 1] - pts[i]) / pieces;
    for (int k = 0; k < pieces; ++k) {
      const double a = pts[i] + k * w;
      const double b = (k + 1 == pieces) ? pts[i + 1] : a + w;
      panels.emplace_back(a, b);
    }
  }
  double l1 = 0.0;
  for (const auto& [a, b] : panels) {
    double err = 0.0, norm = 0.0;
    gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err, &norm);
    l1 += norm;
  }
  double sum = 0.0;
  for (const auto& [a, b] : panels) {
    sum += bisect_gk(f, a, b, tol * l1 * (b - a) / (pts.back() - pts.front()), 15);
  }
  return sum;
}

}  // namespace detail

template <typename F>
double integrate_physical(int dimension, F&& f, double radius, const std::vector<double>& breaks) {
  constexpr double tol = 1e-13;
  if (dimension == 1) {
    auto g = [&](double x) { return f(Vec2{x, 0.0}); };
    std::vector<double> with_origin = breaks;
    with_origin.push_back(0.0);
    return detail::integrate_segments(g, detail::segment_points(-radius, radius, with_origin), tol);
  }
  auto radial = [&](double r) {
    if (r == 0.0) return 0.0;
    auto ang = [&](double th) { return f(Vec2{r * std::cos(th), r * std::sin(th)}); };
    // Four quarter-turn segments keep kinks on the axes at panel edges.
    const std::vector<double> quarters{0.0, 0.5 * std::numbers::pi, std::numbers::pi, 1.5 * std::numbers::pi,
                                       2.0 * std::numbers::pi};
    return r * detail::integrate_segments(ang, quarters, 0.1 * tol);
  };
  // The inner integrals carry their own error, so the outer tolerance is looser.
  return detail::integrate_segments(radial, detail::segment_points(0.0, radius, breaks), 10.0 * tol);
}

}  // namespace wavenorm
