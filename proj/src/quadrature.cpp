#include "wavenorm/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "wavenorm/error.hpp"

namespace wavenorm {
namespace {

constexpr int kOrder = 16;
constexpr double kPi = std::numbers::pi;
// Number of quarter periods of sin(t rho) integrated directly before the
// half-angle split takes over.
constexpr double kDirectZone = 8.0 * kPi;
constexpr double kNoise = 1e-14;

double sinc(double x) { return std::fabs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
};

// Maps nodal values on a Gauss-Legendre rule to Legendre coefficients.
class LegendreTransform {
public:
  LegendreTransform() : gl_(GaussLegendre::get(kOrder)) {
    std::array<double, kOrder> p{};
    for (int i = 0; i < kOrder; ++i) {
      legendre_sequence(gl_.nodes[i], p);
      for (int k = 0; k < kOrder; ++k) matrix_[k][i] = 0.5 * (2 * k + 1) * gl_.weights[i] * p[k];
    }
  }

  const GaussLegendre& rule() const { return gl_; }

  std::array<double, kOrder> coefficients(const std::array<double, kOrder>& values) const {
    std::array<double, kOrder> c{};
    for (int k = 0; k < kOrder; ++k) {
      double s = 0.0;
      for (int i = 0; i < kOrder; ++i) s += matrix_[k][i] * values[i];
      c[k] = s;
    }
    return c;
  }

private:
  const GaussLegendre& gl_;
  std::array<std::array<double, kOrder>, kOrder> matrix_{};
};

const LegendreTransform& transform() {
  static const LegendreTransform t;
  return t;
}

double tail_estimate(const std::array<double, kOrder>& c) { return std::fabs(c[kOrder - 1]) + std::fabs(c[kOrder - 2]); }

double max_abs(const std::array<double, kOrder>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

class PanelEvaluator {
public:
  PanelEvaluator(const RadialIntegrand& f, double t) : f_(f), t_(t), lt_(transform()) {}

  Panel direct(double a, double b) const {
    const auto& gl = lt_.rule();
    const double hw = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    std::array<double, kOrder> v{};
    for (int i = 0; i < kOrder; ++i) {
      const double rho = mid + hw * gl.nodes[i];
      const RadialWeights w = f_.density(rho);
      const double s = t_ * sinc(t_ * rho);
      const double c = std::cos(t_ * rho);
      double val = s * s * w.a + c * c * w.b;
      if (w.c != 0.0) val += 2.0 * t_ * sinc(2.0 * t_ * rho) * w.c;
      v[i] = f_.dimension == 2 ? rho * val : val;
    }
    const auto coef = lt_.coefficients(v);
    Panel p{a, b, 2.0 * hw * coef[0], 0.0};
    p.error = settle(2.0 * hw * tail_estimate(coef), 2.0 * hw * max_abs(v));
    return p;
  }

  Panel filon(double a, double b) const {
    const auto& gl = lt_.rule();
    const double hw = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    std::array<double, kOrder> smooth{};
    std::array<double, kOrder> cosine{};
    std::array<double, kOrder> sine{};
    for (int i = 0; i < kOrder; ++i) {
      const double rho = mid + hw * gl.nodes[i];
      const RadialWeights w = f_.density(rho);
      const double jac = f_.dimension == 2 ? rho : 1.0;
      const double ar = w.a / (rho * rho);
      smooth[i] = 0.5 * jac * (ar + w.b);
      cosine[i] = 0.5 * jac * (w.b - ar);
      sine[i] = jac * w.c / rho;
    }
    const auto cs = lt_.coefficients(smooth);
    const auto cc = lt_.coefficients(cosine);
    const auto cn = lt_.coefficients(sine);

    const double omega = 2.0 * t_;
    std::array<double, kOrder> jk{};
    spherical_bessel_sequence(omega * hw, jk);
    // sum_k c_k int_{-1}^{1} P_k(x) e^{i kappa x} dx = sum_k 2 i^k j_k(kappa) c_k
    auto moment = [&](const std::array<double, kOrder>& c) {
      double re = 0.0;
      double im = 0.0;
      for (int k = 0; k < kOrder; ++k) {
        const double term = 2.0 * c[k] * jk[k];
        switch (k % 4) {
          case 0: re += term; break;
          case 1: im += term; break;
          case 2: re -= term; break;
          default: im -= term; break;
        }
      }
      return std::array<double, 2>{re, im};
    };
    const double phase = omega * mid;
    const double cp = std::cos(phase);
    const double sp = std::sin(phase);
    const auto mc = moment(cc);
    const auto mn = moment(cn);
    const double cos_part = cp * mc[0] - sp * mc[1];
    const double sin_part = sp * mn[0] + cp * mn[1];

    Panel p{a, b, hw * (2.0 * cs[0] + cos_part + sin_part), 0.0};
    const double est = tail_estimate(cs) + tail_estimate(cc) + tail_estimate(cn);
    const double mag = max_abs(smooth) + max_abs(cosine) + max_abs(sine);
    p.error = settle(2.0 * hw * est, 2.0 * hw * mag);
    return p;
  }

private:
  // Coefficient tails at rounding level carry no information.
  static double settle(double estimate, double magnitude) { return estimate <= kNoise * magnitude ? 0.0 : estimate; }

  const RadialIntegrand& f_;
  double t_;
  const LegendreTransform& lt_;
};

class RadialIntegrator {
public:
  RadialIntegrator(const RadialIntegrand& f, double t, const QuadConfig& cfg)
      : f_(f), t_(t), cfg_(cfg), eval_(f, t) {
    split_ = (cfg.oscillation_rule == OscillationRule::half_angle && t > 0.0) ? kDirectZone / t
                                                                               : std::numeric_limits<double>::infinity();
  }

  QuadResult finite(double a, double b, double scale) {
    std::vector<Panel> panels = initial_panels(a, b);
    const double length = b - a;
    while (true) {
      double sum = 0.0;
      double err = 0.0;
      for (const auto& p : panels) {
        sum += p.value;
        err += p.error;
      }
      const double tol = std::max(cfg_.abs_tol, cfg_.rel_tol * std::max(std::fabs(sum), scale));
      if (err <= tol) return {sum, err, panels.size()};
      if (panels.size() >= cfg_.max_panels) {
        throw QuadratureError(fmt::format("radial quadrature did not converge within {} panels at t={} "
                                          "(error estimate {:.3e}, target {:.3e})",
                                          cfg_.max_panels, t_, err, tol),
                              err);
      }
      std::vector<Panel> next;
      next.reserve(panels.size() * 2);
      for (const auto& p : panels) {
        if (p.error > tol * (p.b - p.a) / length) {
          const double m = 0.5 * (p.a + p.b);
          next.push_back(evaluate(p.a, m));
          next.push_back(evaluate(m, p.b));
        } else {
          next.push_back(p);
        }
      }
      panels = std::move(next);
    }
  }

  double tail_bound(double rho) const {
    // rho = rc / s maps [rc, inf) onto (0, 1]; geometric panels toward s = 0.
    const auto& gl = GaussLegendre::get(kOrder);
    double sum = 0.0;
    for (int k = 0; k < 40; ++k) {
      const double hi = std::ldexp(1.0, -k);
      const double lo = 0.5 * hi;
      const double hw = 0.5 * (hi - lo);
      const double mid = 0.5 * (hi + lo);
      for (int i = 0; i < kOrder; ++i) {
        const double s = mid + hw * gl.nodes[i];
        const double r = rho / s;
        const RadialWeights e = f_.envelope(r);
        const double jac = f_.dimension == 2 ? r : 1.0;
        const double g = jac * (std::fabs(e.a) / (r * r) + std::fabs(e.b) + std::fabs(e.c) / r);
        sum += hw * gl.weights[i] * g * rho / (s * s);
      }
    }
    return sum;
  }

private:
  Panel evaluate(double a, double b) const { return a >= split_ ? eval_.filon(a, b) : eval_.direct(a, b); }

  std::vector<Panel> initial_panels(double a, double b) const {
    std::vector<Panel> panels;
    const double w_osc = t_ > 0.0 ? 0.25 * kPi / t_ : std::numeric_limits<double>::infinity();
    const double w_direct = std::min(f_.max_panel_width, w_osc);
    const double direct_end = std::min(b, split_);
    if (direct_end > a) {
      const double count = std::ceil((direct_end - a) / w_direct);
      if (count > static_cast<double>(cfg_.max_panels)) {
        throw QuadratureError(fmt::format("radial quadrature at t={} needs {:.3e} panels (max {})", t_, count,
                                          cfg_.max_panels),
                              std::numeric_limits<double>::infinity());
      }
      const auto n = static_cast<std::size_t>(count);
      const double w = (direct_end - a) / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double pa = a + static_cast<double>(i) * w;
        const double pb = i + 1 == n ? direct_end : pa + w;
        panels.push_back(eval_.direct(pa, pb));
      }
    }
    double p = std::max(a, split_);
    while (p < b) {
      const double w = std::min(p, f_.max_panel_width);
      double q = p + w;
      if (q >= b || b - q < 0.25 * w) q = b;
      panels.push_back(eval_.filon(p, q));
      p = q;
      if (panels.size() > cfg_.max_panels) {
        throw QuadratureError(fmt::format("radial quadrature at t={} exceeds {} initial panels", t_, cfg_.max_panels),
                              std::numeric_limits<double>::infinity());
      }
    }
    return panels;
  }

  const RadialIntegrand& f_;
  double t_;
  const QuadConfig& cfg_;
  PanelEvaluator eval_;
  double split_;
};

}  // namespace

void QuadConfig::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("quad.abs_tol must be positive");
  if (!(rel_tol > 0.0)) throw DomainError("quad.rel_tol must be positive");
  if (max_panels < 1024) throw DomainError("quad.max_panels must be at least 1024");
}

GaussLegendre::GaussLegendre(int order) : nodes(order), weights(order) {
  if (order < 1) throw DomainError("GaussLegendre: order must be positive");
  for (int i = 0; i < order; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 1; k < order; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 1; k < order; ++k) {
      const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
      p0 = p1;
      p1 = p2;
    }
    dp = order == 1 ? 1.0 : order * (x * p1 - p0) / (x * x - 1.0);
    nodes[order - 1 - i] = x;
    weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

const GaussLegendre& GaussLegendre::get(int order) {
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, GaussLegendre(order)).first;
  return it->second;
}

void legendre_sequence(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = x;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    out[k + 1] = ((2.0 * k + 1.0) * x * out[k] - k * out[k - 1]) / (k + 1.0);
  }
}

void spherical_bessel_sequence(double kappa, std::span<double> out) {
  const std::size_t n = out.size();
  if (n == 0) return;
  if (kappa < 0.0) throw DomainError("spherical_bessel_sequence: negative argument");
  if (kappa == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = 1.0;
    return;
  }
  const double s = std::sin(kappa);
  const double c = std::cos(kappa);
  const double j0 = s / kappa;
  if (kappa > static_cast<double>(n)) {
    out[0] = j0;
    if (n > 1) out[1] = (j0 - c) / kappa;
    for (std::size_t k = 1; k + 1 < n; ++k) out[k + 1] = (2.0 * k + 1.0) / kappa * out[k] - out[k - 1];
    return;
  }
  // Miller's backward recurrence from well above the requested orders.
  const std::size_t start = n + 30 + static_cast<std::size_t>(kappa);
  double next = 0.0;
  double cur = 1e-300;
  for (std::size_t k = start; k >= 1; --k) {
    const double prev = (2.0 * k + 1.0) / kappa * cur - next;
    next = cur;
    cur = prev;  // j_{k-1}
    if (k - 1 < n) out[k - 1] = cur;
    if (std::fabs(cur) > 1e200) {
      cur *= 1e-200;
      next *= 1e-200;
      for (std::size_t m = k - 1; m < n; ++m) out[m] *= 1e-200;
    }
  }
  double scale = 0.0;
  if (kappa < 1.0 || n == 1) {
    scale = j0 / out[0];
  } else {
    const double j1 = (j0 - c) / kappa;
    scale = std::fabs(j0) >= std::fabs(j1) ? j0 / out[0] : j1 / out[1];
  }
  for (auto& v : out) v *= scale;
}

QuadResult integrate_radial(const RadialIntegrand& f, double t, double lo, double hi, const QuadConfig& cfg) {
  if (!(t >= 0.0)) throw DomainError("integrate_radial: t must be non-negative");
  if (!(lo >= 0.0) || !(hi >= lo)) throw DomainError("integrate_radial: need 0 <= lo <= hi");
  if (f.dimension != 1 && f.dimension != 2) throw DomainError("integrate_radial: dimension must be 1 or 2");
  if (hi == lo) return {};
  RadialIntegrator integ(f, t, cfg);
  if (std::isfinite(hi)) return integ.finite(lo, hi, 0.0);

  if (!f.envelope) throw DomainError("integrate_radial: semi-infinite range needs an envelope");
  double cut = std::max({1.0, 2.0 * lo, lo + 4.0});
  QuadResult total = integ.finite(lo, cut, 0.0);
  for (int step = 0; step < 64; ++step) {
    const double tail = integ.tail_bound(cut);
    const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total.value));
    if (tail <= 0.25 * target) {
      total.error += tail;
      return total;
    }
    const QuadResult seg = integ.finite(cut, 2.0 * cut, std::fabs(total.value));
    total.value += seg.value;
    total.error += seg.error;
    total.panels += seg.panels;
    if (total.panels > cfg.max_panels) break;
    cut *= 2.0;
  }
  throw QuadratureError(fmt::format("radial quadrature tail did not decay by rho={} at t={}", cut, t),
                        integ.tail_bound(cut));
}

double integrate_smooth(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
  RadialIntegrand g;
  g.dimension = 1;
  g.density = [&](double x) { return RadialWeights{0.0, f(x), 0.0}; };
  g.max_panel_width = std::max(hi - lo, 1e-300) / 8.0;
  QuadConfig cfg;
  cfg.abs_tol = 1e-300;
  cfg.rel_tol = rel_tol;
  cfg.oscillation_rule = OscillationRule::panel_per_period;
  return integrate_radial(g, 0.0, lo, hi, cfg).value;
}

}  // namespace wavenorm
