#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wavenorm/spectral.hpp"

namespace wavenorm {

enum class RateModel { power, log_linear, bounded };
std::string_view to_string(RateModel m);

struct FitParam {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
};

struct TimeWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct RateFit {
  RateModel model = RateModel::bounded;
  /// power: alpha, log_prefactor (M^2 ~ exp(log_prefactor) t^(2 alpha))
  /// log_linear: c0, c1 (M^2 ~ c0 + c1 log t)
  /// bounded: level (M^2 ~ level)
  std::vector<FitParam> params;
  TimeWindow window;
  /// Root mean square of (M^2 - model) / M^2 over the samples used.
  double residual_rms = 0.0;
  std::size_t samples_used = 0;
  /// log_linear on two-dimensional curves: slope in log t of the lower
  /// envelope divided by (2 pi)^2, and whether c1 reaches it.
  std::optional<double> slope_floor;
  std::optional<bool> slope_floor_holds;

  const FitParam& param(std::string_view name) const;
};

/// Least squares of log M^2 against log t; alpha is half the slope.
/// Throws DomainError for fewer than 20 samples in the window, a window
/// narrower than two decades, or a nonpositive M.
RateFit fit_power(const NormCurve& curve, TimeWindow window);

/// Least squares of M^2 against log t. Two-dimensional curves also get the
/// slope floor from the lower envelope with the given constants.
RateFit fit_loglinear(const NormCurve& curve, TimeWindow window, const ProofConstants& c = {});

/// Constant M^2, fitted as the mean of M^2.
RateFit fit_bounded(const NormCurve& curve, TimeWindow window);

struct ModelSelection {
  RateFit chosen;
  std::vector<RateFit> candidates;
};

/// Bounded below this relative rms is accepted outright.
inline constexpr double kBoundedFlatTolerance = 0.01;
/// Bounded is kept unless another model beats its rms by this factor.
inline constexpr double kBoundedMargin = 0.10;

/// Fits all three models over the whole curve. Bounded wins when its rms is
/// at most kBoundedFlatTolerance or within kBoundedMargin of the best other
/// candidate; otherwise the smaller rms wins.
ModelSelection model_select(const NormCurve& curve, const ProofConstants& c = {});

struct NoiseTrialSummary {
  RateModel generator = RateModel::bounded;
  int trials = 0;
  int recovered = 0;
};

/// Synthetic curves from each model with multiplicative noise on M, fed to
/// model_select. Deterministic in the seed.
std::vector<NoiseTrialSummary> noise_trials(int trials, double noise, std::uint64_t seed, int samples = 40);

}  // namespace wavenorm
