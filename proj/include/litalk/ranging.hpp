#pragma once

// Link distance from blob size.
//
// Closed form: D = f_L + S_r f_L / (S_ip S_p), with S_ip the blob size in
// pixels. Regression: ordinary least squares of distance on a feature of the
// blob size, fitted per ISO setting. Distances are in meters.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "litalk/camera.hpp"

namespace litalk::ranging {

enum class FeatureKind { kReciprocalDiameter, kRawDiameter };

std::string_view to_string(FeatureKind kind) noexcept;
/// Accepts "reciprocal_diameter"/"raw_diameter" and the short "reciprocal"/"raw".
FeatureKind parse_feature_kind(std::string_view text);

struct RangeSample {
  double distance_m = 0.0;
  double blob_diameter_px = 0.0;
  int iso = 100;
};

struct RangeModel {
  double slope = 0.0;
  double intercept = 0.0;
  FeatureKind feature_kind = FeatureKind::kReciprocalDiameter;
  int iso = 100;
  std::size_t trained_on = 0;
};

double conventional_distance(double blob_diameter_px, const camera::TxParams& tx,
                             const camera::CameraParams& cam);

double feature_value(FeatureKind kind, double blob_diameter_px);

/// Throws kDegenerateFit with fewer than two distinct feature values.
RangeModel fit_regression(std::span<const RangeSample> samples,
                          FeatureKind kind = FeatureKind::kReciprocalDiameter);

double predict_distance(const RangeModel& model, double blob_diameter_px);

double sum_squared_residuals(const RangeModel& model, std::span<const RangeSample> samples);

double mean_squared_error(std::span<const double> predicted, std::span<const double> truth);

}  // namespace litalk::ranging
