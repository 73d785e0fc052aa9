#include "wavenorm/bounds.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>

#include "wavenorm/detail/parallel.hpp"
#include "wavenorm/error.hpp"

namespace wavenorm {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog5PiOver4 = std::log(5.0 * kPi / 4.0);

double sq(double x) { return x * x; }

double require_l11(const DataNorms& norms) {
  if (!norms.l11_u1) throw DomainError("lower bound needs a finite ||u1||_{1,1}");
  return *norms.l11_u1;
}

// omega_n delta0^n / n, the volume of the low-frequency ball times t^n.
double ball_factor(int n, const ProofConstants& c) { return c.omega(n) * std::pow(c.delta0, n) / n; }

// Low-frequency chain: (P^2/4)(omega delta0^n / 4n) t^{2-n} - K2_ub - J2_ub.
double low_chain(int n, double t, const DataNorms& norms, const ProofConstants& c) {
  const double l11 = require_l11(norms);
  const double v = ball_factor(n, c);
  return 0.25 * sq(norms.P) * 0.25 * v * std::pow(t, 2 - n) - sq(c.M) * v * sq(l11) * std::pow(t, -n) -
         v * sq(norms.l1_u0) * std::pow(t, -n);
}

double t_bound_closed(double t) { return sphere_measure(2) * std::exp(-1.0) / 4.0 * (std::log(t) - kLog5PiOver4); }

void require_nu1(double t) {
  if (!(5.0 * kPi / (4.0 * t) < 1.0)) {
    throw DomainError(fmt::format("need 5 pi / (4t) < 1, got t = {}", t));
  }
}

void require_upper_regime(int n, double t, const ProofConstants& c) {
  if (n == 1 && !(t >= 1.0 && t > c.delta0)) throw DomainError(fmt::format("upper chain (n = 1) needs t >= 1, got {}", t));
  if (n == 2 && !(std::log(t) >= 1.0)) throw DomainError(fmt::format("upper chain (n = 2) needs log t >= 1, got t = {}", t));
  if (n != 1 && n != 2) throw DomainError(fmt::format("unsupported dimension {}", n));
}

// Closed-form upper bounds; the *_ub fields of UpperTerms.
void fill_upper_bounds(int n, double t, const DataNorms& d, const ProofConstants& c, UpperTerms& u) {
  const double v = ball_factor(n, c);
  const double omega = c.omega(n);
  const double fourier = std::pow(2.0 * kPi, n);
  u.L1_ub = sq(d.l1_u1) * sq(c.L) * v * std::pow(t, 2 - n);
  u.L2_ub = v * sq(d.l1_u0) * std::pow(t, -n);
  u.Ilow_ub = 2.0 * u.L1_ub + 2.0 * u.L2_ub;
  u.N2_ub = fourier * sq(d.l2_u0);
  if (n == 1) {
    u.O_ub = {t / sq(c.delta0) * fourier * sq(d.l2_u1), omega / c.delta0 * sq(d.l1_u1) * (t - std::sqrt(t))};
  } else {
    const double lt = std::log(t);
    u.O_ub = {lt / sq(c.delta0) * fourier * sq(d.l2_u1), omega * sq(d.l1_u1) * 0.5 * (lt - std::log(lt)),
              omega * sq(d.l1_u1) * 0.5 * lt};
  }
  u.N1_ub = 0.0;
  for (double o : u.O_ub) u.N1_ub += o;
  u.Ihigh_ub = 2.0 * u.N1_ub + 2.0 * u.N2_ub;
  u.final_ub = u.Ilow_ub + u.Ihigh_ub;
}

// Zone edges of the high-frequency split, outermost first.
std::vector<double> zone_edges(int n, double t, double delta0) {
  if (n == 1) return {kInf, delta0 / std::sqrt(t), delta0 / t};
  return {kInf, delta0 / std::sqrt(std::log(t)), delta0 / std::sqrt(t), delta0 / t};
}

using WeightMap = std::function<RadialWeights(const RadialWeights&, double)>;

class ZoneIntegrator {
public:
  ZoneIntegrator(const SpectralState& s, double t) : s_(s), t_(t) {}

  // Integral over lo <= |xi| <= hi of the radial integrand whose weights are
  // map(angular density, rho).
  double data(double lo, double hi, const WeightMap& map) const {
    RadialIntegrand f;
    f.dimension = s_.pp.dimension();
    f.max_panel_width = density_panel_width(s_.pp);
    f.density = [&](double rho) { return map(angular_density(s_.pp, rho), rho); };
    f.envelope = [&](double rho) { return map(angular_envelope(s_.pp, rho), rho); };
    return integrate_radial(f, t_, lo, hi, s_.quad).value;
  }

  double custom(double lo, double hi, std::function<RadialWeights(double)> density,
                std::function<RadialWeights(double)> envelope = {}) const {
    RadialIntegrand f;
    f.dimension = s_.pp.dimension();
    f.max_panel_width = density_panel_width(s_.pp);
    f.density = std::move(density);
    f.envelope = std::move(envelope);
    return integrate_radial(f, t_, lo, hi, s_.quad).value;
  }

private:
  const SpectralState& s_;
  double t_;
};

RadialWeights only_a(const RadialWeights& w, double) { return {w.a, 0.0, 0.0}; }
RadialWeights only_b(const RadialWeights& w, double) { return {0.0, w.b, 0.0}; }
RadialWeights all_terms(const RadialWeights& w, double) { return w; }

void add(std::vector<TermCheck>& out, std::string name, double value, TermCheck::Relation rel, double bound) {
  out.push_back(TermCheck{std::move(name), value, bound, rel});
}

}  // namespace

bool TermCheck::holds() const {
  const double tol = 1e-9 * std::max(std::fabs(value), std::fabs(bound)) + 1e-13;
  return slack() >= -tol;
}

const TermCheck* BoundBreakdown::first_failure() const {
  for (const auto& c : checks) {
    if (!c.holds()) return &c;
  }
  return nullptr;
}

double lower_envelope(int n, double t, const DataNorms& norms, const ProofConstants& c) {
  if (n == 1) {
    if (!(t > c.delta0)) throw DomainError(fmt::format("lower envelope needs t > delta0, got {}", t));
    return low_chain(1, t, norms, c);
  }
  if (n == 2) {
    const double l11 = require_l11(norms);
    require_nu1(t);
    return 0.25 * sq(norms.P) * t_bound_closed(t) - sphere_measure(2) / 4.0 * sq(c.M) * sq(l11) -
           sq(2.0 * kPi) * sq(norms.l2_u0);
  }
  throw DomainError(fmt::format("unsupported dimension {}", n));
}

double upper_envelope(int n, double t, const DataNorms& norms, const ProofConstants& c) {
  require_upper_regime(n, t, c);
  UpperTerms u;
  fill_upper_bounds(n, t, norms, c, u);
  return u.final_ub;
}

double lower_envelope_root(int n, const DataNorms& norms, const ProofConstants& c) {
  const double l11 = require_l11(norms);
  if (norms.P == 0.0) return kInf;
  if (n == 1) return 4.0 * std::sqrt(sq(c.M * l11) + sq(norms.l1_u0)) / std::fabs(norms.P);
  if (n == 2) {
    const double loss = sphere_measure(2) / 4.0 * sq(c.M * l11) + sq(2.0 * kPi) * sq(norms.l2_u0);
    const double gain = 0.25 * sq(norms.P) * sphere_measure(2) * std::exp(-1.0) / 4.0;
    return std::exp(loss / gain + kLog5PiOver4);
  }
  throw DomainError(fmt::format("unsupported dimension {}", n));
}

TBound t_lower_bound_2d(double t, const ProofConstants& c, const QuadConfig& quad) {
  require_nu1(t);
  const double omega = c.omega(2);
  TBound out;
  out.bound = t_bound_closed(t);

  RadialIntegrand f;
  f.dimension = 2;
  f.density = [&](double rho) { return RadialWeights{omega * std::exp(-rho * rho), 0.0, 0.0}; };
  f.envelope = f.density;
  out.quadrature = integrate_radial(f, t, 0.0, kInf, quad).value;

  // int_{nu_j}^{mu_j} e^{-r^2}/r dr on each interval, until e^{-r^2} < 1e-20.
  const auto& gl = GaussLegendre::get(8);
  const double width = 0.5 * kPi / t;
  double sum = 0.0;
  for (long j = 0;; ++j) {
    const double nu = (0.25 + static_cast<double>(j)) * kPi / t;
    if (nu > 6.8) break;
    const double mid = nu + 0.5 * width;
    double part = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double r = mid + 0.5 * width * gl.nodes[i];
      part += gl.weights[i] * std::exp(-r * r) / r;
    }
    sum += 0.5 * width * part;
  }
  out.intervals = 0.5 * omega * sum;
  // int_a^b e^{-r^2}/r dr = (E1(a^2) - E1(b^2)) / 2
  const double nu1 = 1.25 * kPi / t;
  const double e1_nu = boost::math::expint(1, nu1 * nu1);
  out.tail = 0.25 * omega * 0.5 * e1_nu;
  out.unit = 0.25 * omega * 0.5 * (e1_nu - boost::math::expint(1, 1.0));
  return out;
}

double moment_remainder_sup(const SpectralState& s, int radial_points, int angles) {
  const double l11 = require_l11(s.norms);
  if (l11 == 0.0) return 0.0;
  const int dirs = s.pp.dimension() == 1 ? 2 : angles;
  double sup = 0.0;
  for (int i = 1; i <= radial_points; ++i) {
    const double rho = static_cast<double>(i) / radial_points;
    for (int k = 0; k < dirs; ++k) {
      const double th = 2.0 * kPi * k / dirs;
      const Vec2 xi{rho * std::cos(th), s.pp.dimension() == 1 ? 0.0 : rho * std::sin(th)};
      sup = std::max(sup, std::abs(moment_remainder(s, xi)) / (rho * l11));
    }
  }
  return sup;
}

bool in_bound_regime(int n, double t, const ProofConstants& c) {
  if (n == 1) return t >= 1.0 && t > c.delta0;
  if (n == 2) return std::log(t) >= 1.0 && 5.0 * kPi / (4.0 * t) < 1.0;
  return false;
}

BoundBreakdown bound_breakdown(const SpectralState& s, double t) {
  const int n = s.pp.dimension();
  const ProofConstants& c = s.constants;
  const DataNorms& d = s.norms;
  require_upper_regime(n, t, c);
  if (n == 2) require_nu1(t);
  const double l11 = require_l11(d);
  const double omega = c.omega(n);
  const double v = ball_factor(n, c);
  const double cut = c.delta0 / t;
  const double fourier = std::pow(2.0 * kPi, n);
  using R = TermCheck::Relation;

  BoundBreakdown b;
  b.t = t;
  b.n = n;
  b.t_star = lower_envelope_root(n, d, c);
  b.t_threshold = d.P == 0.0 ? kInf : std::sqrt(32.0 * (sq(c.M * l11) + sq(d.l1_u0))) / std::fabs(d.P);

  const ZoneIntegrator zi(s, t);
  b.actual = spectral_mass(s, t, 0.0, kInf).value;

  LowerTerms& lo = b.lower;
  lo.Ilow = zi.data(0.0, cut, all_terms);
  lo.J1 = zi.data(0.0, cut, only_a);
  lo.J2 = zi.data(0.0, cut, only_b);
  lo.K1 = zi.custom(0.0, cut, [&](double) { return RadialWeights{omega, 0.0, 0.0}; });
  auto remainder_sq = [&](double rho) {
    return angular_sum(s.pp, rho, [&](Vec2 xi) { return std::norm(moment_remainder(s, xi)); });
  };
  lo.K2 = zi.custom(0.0, cut, [&](double rho) { return RadialWeights{remainder_sq(rho), 0.0, 0.0}; });
  lo.K1_lb = v / 4.0 * std::pow(t, 2 - n);
  lo.K2_ub = sq(c.M) * v * sq(l11) * std::pow(t, -n);
  lo.J1_lb = 0.5 * sq(d.P) * lo.K1_lb - lo.K2_ub;
  lo.J2_ub = v * sq(d.l1_u0) * std::pow(t, -n);
  lo.Ilow_lb = sq(d.P) * omega * std::pow(c.delta0, n) * std::pow(t, 2 - n) / (32.0 * n);
  const double chain = low_chain(n, t, d, c);
  lo.final_lb = lower_envelope(n, t, d, c);

  auto& ck = b.checks;
  add(ck, "Ilow >= J1/2 - J2", lo.Ilow, R::ge, 0.5 * lo.J1 - lo.J2);
  add(ck, "J1 >= P^2 K1/2 - K2", lo.J1, R::ge, 0.5 * sq(d.P) * lo.K1 - lo.K2);
  add(ck, "K2 <= K2_ub", lo.K2, R::le, lo.K2_ub);
  add(ck, "K1 >= K1_lb", lo.K1, R::ge, lo.K1_lb);
  add(ck, "J1 >= J1_lb", lo.J1, R::ge, lo.J1_lb);
  add(ck, "J2 <= J2_ub", lo.J2, R::le, lo.J2_ub);
  add(ck, "Ilow >= low-frequency chain", lo.Ilow, R::ge, chain);
  if (t >= b.t_threshold) add(ck, "Ilow >= Ilow_lb", lo.Ilow, R::ge, lo.Ilow_lb);

  UpperTerms& up = b.upper;
  fill_upper_bounds(n, t, d, c, up);
  up.L1 = lo.J1;
  up.L2 = lo.J2;
  up.N2 = zi.data(cut, kInf, only_b);
  const auto edges = zone_edges(n, t, c.delta0);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) up.O.push_back(zi.data(edges[k + 1], edges[k], only_a));
  up.N1 = 0.0;
  for (double o : up.O) up.N1 += o;
  up.Ihigh = zi.data(cut, kInf, all_terms);

  add(ck, "Ilow + Ihigh = |w|^2", std::fabs(lo.Ilow + up.Ihigh - b.actual), R::le, 1e-8 * b.actual);
  add(ck, "Ilow <= 2 L1 + 2 L2", lo.Ilow, R::le, 2.0 * up.L1 + 2.0 * up.L2);
  add(ck, "L2 <= L2_ub", up.L2, R::le, up.L2_ub);
  add(ck, "L1 <= |u1|_1^2 K1", up.L1, R::le, sq(d.l1_u1) * lo.K1);
  add(ck, "L1 <= L1_ub", up.L1, R::le, up.L1_ub);
  add(ck, "Ilow <= Ilow_ub", lo.Ilow, R::le, up.Ilow_ub);
  add(ck, "Ihigh <= 2 N1 + 2 N2", up.Ihigh, R::le, 2.0 * up.N1 + 2.0 * up.N2);
  add(ck, "N2 <= N2_ub", up.N2, R::le, up.N2_ub);
  for (std::size_t k = 0; k < up.O.size(); ++k) {
    add(ck, fmt::format("O{} <= O{}_ub", k + 1, k + 1), up.O[k], R::le, up.O_ub[k]);
  }
  add(ck, "N1 <= N1_ub", up.N1, R::le, up.N1_ub);
  add(ck, "Ihigh <= Ihigh_ub", up.Ihigh, R::le, up.Ihigh_ub);

  if (n == 2) {
    const TBound tb = t_lower_bound_2d(t, c, s.quad);
    lo.T = tb.quadrature;
    lo.T_lb = tb.bound;
    lo.T_intervals = tb.intervals;
    lo.T_tail = tb.tail;
    lo.T_unit = tb.unit;
    lo.S1 = lo.J1 + up.N1;
    lo.C0 = lo.J2 + up.N2;
    const double P = d.P;
    lo.K2e = 0.5 * zi.custom(
                       0.0, kInf,
                       [&](double rho) { return RadialWeights{std::exp(-rho * rho) * remainder_sq(rho), 0.0, 0.0}; },
                       [&](double rho) {
                         const double e = s.pp.u1.fourier_envelope()(rho) + std::fabs(P);
                         return RadialWeights{omega * std::exp(-rho * rho) * e * e, 0.0, 0.0};
                       });
    add(ck, "|w|^2 >= S1/2 - C0", b.actual, R::ge, 0.5 * lo.S1 - lo.C0);
    add(ck, "S1/2 >= P^2 T/4 - K2e", 0.5 * lo.S1, R::ge, 0.25 * sq(P) * lo.T - lo.K2e);
    add(ck, "K2e <= omega M^2 l11^2 / 4", lo.K2e, R::le, omega / 4.0 * sq(c.M * l11));
    add(ck, "C0 <= (2pi)^2 |u0|^2", lo.C0, R::le, fourier * sq(d.l2_u0));
    add(ck, "T >= interval sum", lo.T, R::ge, lo.T_intervals);
    add(ck, "interval sum >= tail", lo.T_intervals, R::ge, lo.T_tail);
    add(ck, "tail >= unit", lo.T_tail, R::ge, lo.T_unit);
    add(ck, "unit >= T_lb", lo.T_unit, R::ge, lo.T_lb);
    add(ck, "T / log t >= omega e^-1 / 4", lo.T / std::log(t), R::ge, omega * std::exp(-1.0) / 4.0);
    add(ck, "T / log t <= omega", lo.T / std::log(t), R::le, omega);
  }
  add(ck, "|w|^2 >= final_lb", b.actual, R::ge, lo.final_lb);
  add(ck, "|w|^2 <= final_ub", b.actual, R::le, up.final_ub);
  return b;
}

SandwichReport sandwich_report(const SpectralState& s, const std::vector<double>& t_samples, unsigned threads) {
  SandwichReport report;
  report.rows.resize(t_samples.size());
  detail::parallel_for(t_samples.size(), threads,
                       [&](std::size_t i) { report.rows[i] = bound_breakdown(s, t_samples[i]); });
  for (const auto& row : report.rows) {
    if (!report.t_star_sample && row.lower.final_lb > 0.0) report.t_star_sample = row.t;
    if (const TermCheck* f = row.first_failure()) {
      throw BoundViolation(fmt::format("bound violated at t = {}: {} (value {:.17g}, bound {:.17g})", row.t, f->name,
                                       f->value, f->bound));
    }
  }
  return report;
}

}  // namespace wavenorm
