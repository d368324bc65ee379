#include "litalk/ranging.hpp"

#include <cmath>
#include <string>

#include "litalk/error.hpp"

namespace litalk::ranging {
namespace {

void require_positive_diameter(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw Error(ErrorCode::kInvalidArgument, "blob diameter must be positive");
  }
}

}  // namespace

std::string_view to_string(FeatureKind kind) noexcept {
  return kind == FeatureKind::kRawDiameter ? "raw_diameter" : "reciprocal_diameter";
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "reciprocal" || text == "reciprocal_diameter") return FeatureKind::kReciprocalDiameter;
  if (text == "raw" || text == "raw_diameter") return FeatureKind::kRawDiameter;
  throw Error(ErrorCode::kInvalidArgument, "unknown feature kind '" + std::string(text) + "'");
}

double conventional_distance(double blob_diameter_px, const camera::TxParams& tx,
                             const camera::CameraParams& cam) {
  require_positive_diameter(blob_diameter_px);
  return cam.focal_length_m +
         tx.led_radius_m * cam.focal_length_m / (blob_diameter_px * cam.pixel_pitch_m);
}

double feature_value(FeatureKind kind, double blob_diameter_px) {
  require_positive_diameter(blob_diameter_px);
  return kind == FeatureKind::kReciprocalDiameter ? 1.0 / blob_diameter_px : blob_diameter_px;
}

RangeModel fit_regression(std::span<const RangeSample> samples, FeatureKind kind) {
  if (samples.size() < 2) throw Error(ErrorCode::kDegenerateFit, "need at least two samples");
  const double n = static_cast<double>(samples.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& s : samples) {
    mean_x += feature_value(kind, s.blob_diameter_px);
    mean_y += s.distance_m;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& s : samples) {
    const double dx = feature_value(kind, s.blob_diameter_px) - mean_x;
    sxx += dx * dx;
    sxy += dx * (s.distance_m - mean_y);
  }
  if (sxx == 0.0) throw Error(ErrorCode::kDegenerateFit, "all feature values are equal");

  RangeModel model;
  model.slope = sxy / sxx;
  model.intercept = mean_y - model.slope * mean_x;
  model.feature_kind = kind;
  model.iso = samples.front().iso;
  model.trained_on = samples.size();
  return model;
}

double predict_distance(const RangeModel& model, double blob_diameter_px) {
  return model.slope * feature_value(model.feature_kind, blob_diameter_px) + model.intercept;
}

double sum_squared_residuals(const RangeModel& model, std::span<const RangeSample> samples) {
  double total = 0.0;
  for (const auto& s : samples) {
    const double r = predict_distance(model, s.blob_diameter_px) - s.distance_m;
    total += r * r;
  }
  return total;
}

double mean_squared_error(std::span<const double> predicted, std::span<const double> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::kInvalidArgument, "prediction and truth lengths differ");
  }
  if (predicted.empty()) throw Error(ErrorCode::kInvalidArgument, "no values to compare");
  double total = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - truth[i];
    total += d * d;
  }
  return total / static_cast<double>(predicted.size());
}

}  // namespace litalk::ranging
