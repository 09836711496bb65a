#include "stylecast/losses.hpp"

#include <algorithm>
#include <cmath>

#include "stylecast/error.hpp"
#include "stylecast/fs_util.hpp"

namespace stylecast {

void LossSpec::validate() const {
  if (kind == LossKind::kPoisson && scale != TargetScale::kLinear) {
    throw ValidationError("poisson loss requires linear scale (it applies a log link itself)");
  }
  if (huber_delta && !(std::isfinite(*huber_delta) && *huber_delta > 0.0)) {
    throw ValidationError("huber_delta must be positive");
  }
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kMse: return "mse";
    case LossKind::kPoisson: return "poisson";
    case LossKind::kHuber: return "huber";
  }
  return "?";
}

std::string to_string(TargetScale scale) {
  return scale == TargetScale::kLog ? "log" : "linear";
}

LossKind parse_loss_kind(std::string_view text) {
  if (text == "mse") return LossKind::kMse;
  if (text == "poisson") return LossKind::kPoisson;
  if (text == "huber") return LossKind::kHuber;
  throw ValidationError("unknown loss '" + std::string(text) + "' (expected mse|poisson|huber)");
}

TargetScale parse_target_scale(std::string_view text) {
  if (text == "linear") return TargetScale::kLinear;
  if (text == "log") return TargetScale::kLog;
  throw ValidationError("unknown scale '" + std::string(text) + "' (expected linear|log)");
}

std::optional<double> parse_huber_delta(std::string_view text) {
  if (text == "adaptive") return std::nullopt;
  const double delta = parse_double(text, "huber_delta");
  if (!(std::isfinite(delta) && delta > 0.0)) throw ValidationError("huber_delta must be positive");
  return delta;
}

namespace {

void check_inputs(std::span<const double> y, std::span<const double> score) {
  if (y.size() != score.size()) {
    throw ValidationError("target and score lengths differ (" + std::to_string(y.size()) + " vs " +
                          std::to_string(score.size()) + ")");
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i]) || !std::isfinite(score[i])) {
      throw ValidationError("non-finite target or score at index " + std::to_string(i));
    }
  }
}

double poisson_mean(double score) {
  const double mu = std::exp(score);
  if (!std::isfinite(mu)) throw ValidationError("poisson prediction exp(score) is not finite");
  return mu;
}

}  // namespace

double huber_delta(const LossSpec& spec, std::span<const double> y, std::span<const double> score) {
  if (spec.huber_delta) return *spec.huber_delta;
  if (y.empty()) return 1.0;
  std::vector<double> abs_r(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) abs_r[i] = std::abs(score[i] - y[i]);
  const auto rank = static_cast<std::size_t>(
      std::ceil(kAdaptiveHuberQuantile * static_cast<double>(abs_r.size()))) - 1;
  auto nth = abs_r.begin() + static_cast<std::ptrdiff_t>(std::min(rank, abs_r.size() - 1));
  std::nth_element(abs_r.begin(), nth, abs_r.end());
  // A zero quantile (mostly-perfect fit) would make the loss degenerate.
  return *nth > 0.0 ? *nth : 1.0;
}

double loss_value(const LossSpec& spec, std::span<const double> y, std::span<const double> score) {
  check_inputs(y, score);
  if (y.empty()) return 0.0;
  double total = 0.0;
  switch (spec.kind) {
    case LossKind::kMse:
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = score[i] - y[i];
        total += r * r;
      }
      break;
    case LossKind::kPoisson:
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0.0) throw ValidationError("poisson loss needs non-negative targets");
        // y * log(mu) with log(mu) == score under the log link.
        total += poisson_mean(score[i]) - y[i] * score[i];
      }
      break;
    case LossKind::kHuber: {
      const double delta = huber_delta(spec, y, score);
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double a = std::abs(score[i] - y[i]);
        total += a <= delta ? 0.5 * a * a : delta * a - 0.5 * delta * delta;
      }
      break;
    }
  }
  return total / static_cast<double>(y.size());
}

GradHess loss_grad_hess(const LossSpec& spec, std::span<const double> y,
                        std::span<const double> score) {
  check_inputs(y, score);
  GradHess out{std::vector<double>(y.size()), std::vector<double>(y.size())};
  switch (spec.kind) {
    case LossKind::kMse:
      for (std::size_t i = 0; i < y.size(); ++i) {
        out.gradient[i] = 2.0 * (score[i] - y[i]);
        out.curvature[i] = 2.0;
      }
      break;
    case LossKind::kPoisson:
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0.0) throw ValidationError("poisson loss needs non-negative targets");
        const double mu = poisson_mean(score[i]);
        out.gradient[i] = mu - y[i];
        out.curvature[i] = std::max(mu, kCurvatureFloor);
      }
      break;
    case LossKind::kHuber: {
      const double delta = huber_delta(spec, y, score);
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = score[i] - y[i];
        if (std::abs(r) <= delta) {
          out.gradient[i] = r;
          out.curvature[i] = 1.0;
        } else {
          out.gradient[i] = r > 0.0 ? delta : -delta;
          out.curvature[i] = kCurvatureFloor;
        }
      }
      break;
    }
  }
  return out;
}

double scale_forward(TargetScale scale, double y) {
  if (!(y >= 0.0)) throw ValidationError("target must be non-negative, got " + format_double(y));
  return scale == TargetScale::kLog ? std::log1p(y) : y;
}

double scale_inverse(TargetScale scale, double score) {
  if (scale == TargetScale::kLog) return std::max(0.0, std::expm1(score));
  return std::max(0.0, score);
}

double prediction_from_score(const LossSpec& spec, double score) {
  if (spec.kind == LossKind::kPoisson) return std::exp(score);
  return scale_inverse(spec.scale, score);
}

}  // namespace stylecast
