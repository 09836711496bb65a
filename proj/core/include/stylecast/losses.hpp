#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stylecast {

enum class LossKind { kMse, kPoisson, kHuber };
enum class TargetScale { kLinear, kLog };

inline constexpr double kCurvatureFloor = 1e-9;
inline constexpr double kAdaptiveHuberQuantile = 0.9;

/// Loss identity plus target scale. An empty huber_delta means "adaptive":
/// the 90th percentile of absolute residuals at the current scores.
struct LossSpec {
  LossKind kind = LossKind::kMse;
  TargetScale scale = TargetScale::kLinear;
  std::optional<double> huber_delta;

  void validate() const;
  bool operator==(const LossSpec&) const = default;
};

std::string to_string(LossKind kind);
std::string to_string(TargetScale scale);
LossKind parse_loss_kind(std::string_view text);
TargetScale parse_target_scale(std::string_view text);
/// "adaptive" or a positive real.
std::optional<double> parse_huber_delta(std::string_view text);

/// Delta used for the given residual state (fixed or adaptive).
double huber_delta(const LossSpec& spec, std::span<const double> y, std::span<const double> score);

/// Mean per-observation loss. For POISSON the prediction is exp(score).
double loss_value(const LossSpec& spec, std::span<const double> y, std::span<const double> score);

struct GradHess {
  std::vector<double> gradient;
  std::vector<double> curvature;
};

/// Per-observation first and second derivatives of the loss with respect to
/// the raw score: MSE (2r, 2) for r = score - y, POISSON (mu - y, mu), HUBER
/// (r or +-delta, 1 or 0). Curvatures are floored at kCurvatureFloor.
GradHess loss_grad_hess(const LossSpec& spec, std::span<const double> y,
                        std::span<const double> score);

/// Target transform applied before training: log(1 + y) on LOG scale.
double scale_forward(TargetScale scale, double y);
/// LOG: max(0, exp(score) - 1). LINEAR: max(0, score).
double scale_inverse(TargetScale scale, double score);

/// Non-negative forecast in units for a model raw score under `spec`.
/// POISSON scores are log-means and map through exp.
double prediction_from_score(const LossSpec& spec, double score);

}  // namespace stylecast
