#include "wavenorm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <random>

#include "wavenorm/bounds.hpp"
#include "wavenorm/error.hpp"

namespace wavenorm {
namespace {

constexpr std::size_t kMinSamples = 20;

struct Points {
  std::vector<double> t;
  std::vector<double> m2;
};

Points select(const NormCurve& curve, TimeWindow w, bool need_positive) {
  if (!(w.lo > 0.0) || !(w.hi > w.lo)) throw DomainError(fmt::format("invalid window [{}, {}]", w.lo, w.hi));
  if (w.hi / w.lo < 100.0 * (1.0 - 1e-9)) {
    throw DomainError(fmt::format("window [{}, {}] spans less than two decades", w.lo, w.hi));
  }
  Points p;
  for (const auto& s : curve.samples) {
    if (s.t < w.lo * (1.0 - 1e-12) || s.t > w.hi * (1.0 + 1e-12)) continue;
    if (need_positive && !(s.M > 0.0)) throw DomainError(fmt::format("nonpositive M = {} at t = {}", s.M, s.t));
    p.t.push_back(s.t);
    p.m2.push_back(s.M * s.M);
  }
  if (p.t.size() < kMinSamples) {
    throw DomainError(fmt::format("{} samples in [{}, {}], need at least {}", p.t.size(), w.lo, w.hi, kMinSamples));
  }
  return p;
}

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
  double se_intercept = 0.0;
  double se_slope = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - l.intercept - l.slope * x[i];
    ssr += r * r;
  }
  const double s2 = ssr / (n - 2.0);
  l.se_slope = std::sqrt(s2 / sxx);
  l.se_intercept = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  return l;
}

template <class Model>
double relative_rms(const Points& p, Model&& model) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    const double r = p.m2[i] == 0.0 ? model(p.t[i]) : (p.m2[i] - model(p.t[i])) / p.m2[i];
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(p.t.size()));
}

TimeWindow full_window(const NormCurve& curve) {
  if (curve.samples.empty()) throw DomainError("empty norm curve");
  return {curve.samples.front().t, curve.samples.back().t};
}

}  // namespace

std::string_view to_string(RateModel m) {
  switch (m) {
    case RateModel::power: return "power";
    case RateModel::log_linear: return "log_linear";
    case RateModel::bounded: return "bounded";
  }
  return "unknown";
}

const FitParam& RateFit::param(std::string_view name) const {
  for (const auto& p : params)
    if (p.name == name) return p;
  throw DomainError(fmt::format("{} fit has no parameter {}", to_string(model), name));
}

RateFit fit_power(const NormCurve& curve, TimeWindow window) {
  const Points p = select(curve, window, true);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    x.push_back(std::log(p.t[i]));
    y.push_back(std::log(p.m2[i]));
  }
  const Line l = least_squares(x, y);
  RateFit f;
  f.model = RateModel::power;
  f.params = {{"alpha", 0.5 * l.slope, 0.5 * l.se_slope}, {"log_prefactor", l.intercept, l.se_intercept}};
  f.window = window;
  f.samples_used = p.t.size();
  f.residual_rms = relative_rms(p, [&](double t) { return std::exp(l.intercept + l.slope * std::log(t)); });
  return f;
}

RateFit fit_loglinear(const NormCurve& curve, TimeWindow window, const ProofConstants& c) {
  const Points p = select(curve, window, true);
  std::vector<double> x;
  for (double t : p.t) x.push_back(std::log(t));
  const Line l = least_squares(x, p.m2);
  RateFit f;
  f.model = RateModel::log_linear;
  f.params = {{"c0", l.intercept, l.se_intercept}, {"c1", l.slope, l.se_slope}};
  f.window = window;
  f.samples_used = p.t.size();
  f.residual_rms = relative_rms(p, [&](double t) { return l.intercept + l.slope * std::log(t); });
  if (curve.dimension == 2 && curve.data_norms.P != 0.0 && curve.data_norms.l11_u1) {
    try {
      const double lo = lower_envelope(2, p.t.front(), curve.data_norms, c);
      const double hi = lower_envelope(2, p.t.back(), curve.data_norms, c);
      const double scale = 4.0 * std::numbers::pi * std::numbers::pi;
      f.slope_floor = (hi - lo) / (std::log(p.t.back()) - std::log(p.t.front())) / scale;
      f.slope_floor_holds = l.slope >= *f.slope_floor;
    } catch (const DomainError&) {
    }
  }
  return f;
}

RateFit fit_bounded(const NormCurve& curve, TimeWindow window) {
  const Points p = select(curve, window, false);
  const double n = static_cast<double>(p.m2.size());
  double mean = 0.0;
  for (double v : p.m2) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : p.m2) var += (v - mean) * (v - mean);
  var /= (n - 1.0);
  RateFit f;
  f.model = RateModel::bounded;
  f.params = {{"level", mean, std::sqrt(var / n)}};
  f.window = window;
  f.samples_used = p.m2.size();
  f.residual_rms = relative_rms(p, [&](double) { return mean; });
  return f;
}

ModelSelection model_select(const NormCurve& curve, const ProofConstants& c) {
  const TimeWindow w = full_window(curve);
  ModelSelection sel;
  const RateFit bounded = fit_bounded(curve, w);
  sel.candidates.push_back(bounded);
  bool all_positive = std::all_of(curve.samples.begin(), curve.samples.end(), [](const auto& s) { return s.M > 0.0; });
  if (all_positive) {
    sel.candidates.push_back(fit_power(curve, w));
    sel.candidates.push_back(fit_loglinear(curve, w, c));
  }
  const RateFit* best_other = nullptr;
  for (std::size_t i = 1; i < sel.candidates.size(); ++i) {
    if (!best_other || sel.candidates[i].residual_rms < best_other->residual_rms) best_other = &sel.candidates[i];
  }
  if (!best_other || bounded.residual_rms <= kBoundedFlatTolerance ||
      best_other->residual_rms >= (1.0 - kBoundedMargin) * bounded.residual_rms) {
    sel.chosen = bounded;
  } else {
    sel.chosen = *best_other;
  }
  return sel;
}

std::vector<NoiseTrialSummary> noise_trials(int trials, double noise, std::uint64_t seed, int samples) {
  if (trials <= 0 || samples < static_cast<int>(kMinSamples) || !(noise >= 0.0)) {
    throw DomainError("noise_trials: need trials > 0, samples >= 20 and noise >= 0");
  }
  const auto times = log_space(1e2, 1e5, samples);
  struct Generator {
    RateModel model;
    double (*m2)(double);
  };
  const Generator generators[] = {
      {RateModel::power, [](double t) { return 9.0 * t; }},
      {RateModel::log_linear, [](double t) { return 2.0 + 5.0 * std::log(t); }},
      {RateModel::bounded, [](double) { return 4.0; }},
  };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<NoiseTrialSummary> out;
  for (const auto& g : generators) {
    NoiseTrialSummary s;
    s.generator = g.model;
    s.trials = trials;
    for (int k = 0; k < trials; ++k) {
      NormCurve curve;
      for (double t : times) {
        const double m = std::sqrt(g.m2(t)) * (1.0 + noise * normal(rng));
        curve.append({t, std::max(m, 0.0), NormMethod::quadrature});
      }
      if (model_select(curve).chosen.model == g.model) ++s.recovered;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace wavenorm
