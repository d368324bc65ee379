#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "litalk/camera.hpp"
#include "litalk/error.hpp"
#include "litalk/ranging.hpp"

using namespace litalk;
using namespace litalk::ranging;

namespace {

// Solves [n sx; sx sxx] [b; a] = [sy; sxy] by Cramer's rule in long double.
std::pair<double, double> normal_equations(const std::vector<RangeSample>& s, FeatureKind kind) {
  long double n = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (const auto& r : s) {
    const long double x = kind == FeatureKind::kReciprocalDiameter ? 1.0L / r.blob_diameter_px
                                                                    : r.blob_diameter_px;
    n += 1;
    sx += x;
    sxx += x * x;
    sy += r.distance_m;
    sxy += x * r.distance_m;
  }
  const long double det = n * sxx - sx * sx;
  const long double slope = (n * sxy - sx * sy) / det;
  const long double intercept = (sxx * sy - sx * sxy) / det;
  return {static_cast<double>(slope), static_cast<double>(intercept)};
}

std::vector<RangeSample> exact_samples(const camera::CameraParams& cam, int count) {
  std::vector<RangeSample> out;
  for (int i = 0; i < count; ++i) {
    const double d = 0.1 + 0.9 * i / (count - 1);
    out.push_back({d, camera::expected_blob_diameter_px({d, {}}, {}, cam), cam.iso});
  }
  return out;
}

}  // namespace

TEST_CASE("conventional distance worked example") {
  camera::CameraParams cam;
  cam.pixel_pitch_m = 1.55e-6;
  camera::TxParams tx;
  CHECK(conventional_distance(100.0, tx, cam) == doctest::Approx(0.01997032258064516).epsilon(1e-12));
  CHECK(conventional_distance(1e12, tx, cam) == doctest::Approx(cam.focal_length_m).epsilon(1e-6));
  CHECK_THROWS_AS(conventional_distance(0.0, tx, cam), Error);
}

TEST_CASE("conventional distance inverts the blob size") {
  camera::CameraParams cam;
  for (double d : {0.1, 0.3, 1.0}) {
    const double size = camera::expected_blob_diameter_px({d, {}}, {}, cam);
    CHECK(std::abs(conventional_distance(size, {}, cam) - d) / d < 1e-9);
  }
}

TEST_CASE("exact line is recovered") {
  std::vector<RangeSample> s;
  for (double x : {10.0, 20.0, 40.0, 80.0}) s.push_back({0.5 + 2.0 / x, x, 100});
  const auto m = fit_regression(s);
  CHECK(m.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m.intercept == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m.trained_on == 4);
  CHECK(sum_squared_residuals(m, s) < 1e-24);

  std::vector<RangeSample> raw;
  for (double x : {10.0, 20.0, 40.0}) raw.push_back({3.0 - 0.01 * x, x, 100});
  const auto r = fit_regression(raw, FeatureKind::kRawDiameter);
  CHECK(r.slope == doctest::Approx(-0.01).epsilon(1e-12));
  CHECK(r.intercept == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("reciprocal fit of the pinhole model") {
  camera::CameraParams cam;
  camera::TxParams tx;
  const auto m = fit_regression(exact_samples(cam, 10));
  CHECK(m.slope == doctest::Approx(tx.led_radius_m * cam.focal_length_m / cam.pixel_pitch_m)
                       .epsilon(1e-9));
  CHECK(m.intercept == doctest::Approx(cam.focal_length_m).epsilon(1e-6));
  for (double d : {0.13, 0.5, 0.97}) {
    const double size = camera::expected_blob_diameter_px({d, {}}, {}, cam);
    CHECK(std::abs(predict_distance(m, size) - conventional_distance(size, tx, cam)) < 1e-9);
  }
}

TEST_CASE("fit agrees with the normal equations") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::uniform_real_distribution<double> size(30.0, 600.0);
  for (int k = 0; k < 20; ++k) {
    std::vector<RangeSample> s;
    const int n = 3 + k;
    for (int i = 0; i < n; ++i) {
      const double px = size(rng);
      s.push_back({0.002 + 47.0 / px + noise(rng), px, 100});
    }
    for (auto kind : {FeatureKind::kReciprocalDiameter, FeatureKind::kRawDiameter}) {
      const auto m = fit_regression(s, kind);
      const auto [slope, intercept] = normal_equations(s, kind);
      CHECK(std::abs(m.slope - slope) <= 1e-9 * std::max(1.0, std::abs(slope)));
      CHECK(std::abs(m.intercept - intercept) <= 1e-9 * std::max(1.0, std::abs(intercept)));
    }
  }
}

TEST_CASE("least squares is a minimum") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  std::vector<RangeSample> s;
  for (int i = 0; i < 15; ++i) {
    const double px = 40.0 + 30.0 * i;
    s.push_back({0.01 + 40.0 / px + u(rng), px, 100});
  }
  const auto m = fit_regression(s);
  const double best = sum_squared_residuals(m, s);
  for (double ds : {-1e-3, 1e-3}) {
    for (double di : {-1e-3, 0.0, 1e-3}) {
      RangeModel p = m;
      p.slope += ds;
      p.intercept += di;
      CHECK(sum_squared_residuals(p, s) >= best);
      p = m;
      p.intercept += ds;
      CHECK(sum_squared_residuals(p, s) >= best);
    }
  }
}

TEST_CASE("degenerate fits are rejected") {
  const std::vector<RangeSample> one{{0.2, 100.0, 100}};
  CHECK_THROWS_AS(fit_regression(one), Error);
  const std::vector<RangeSample> same{{0.2, 100.0, 100}, {0.3, 100.0, 100}};
  try {
    fit_regression(same);
    FAIL("expected a degenerate fit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateFit);
  }
}

TEST_CASE("mean squared error") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  CHECK(mean_squared_error(a, a) == 0.0);
  const std::vector<double> p{3.0}, t{1.0};
  CHECK(mean_squared_error(p, t) == 4.0);
  CHECK_THROWS_AS(mean_squared_error(a, p), Error);
  CHECK_THROWS_AS(mean_squared_error(std::vector<double>{}, std::vector<double>{}), Error);
}

TEST_CASE("predictions grow as the blob shrinks") {
  const auto m = fit_regression(exact_samples({}, 8));
  REQUIRE(m.slope > 0);
  double previous = -1.0;
  for (double px = 600.0; px > 20.0; px -= 13.0) {
    const double d = predict_distance(m, px);
    CHECK(d > previous);
    previous = d;
  }
}

TEST_CASE("regression absorbs the ISO size bias") {
  camera::CameraParams cam;
  for (int iso : {200, 400, 800, 1600}) {
    cam.iso = iso;
    const auto train = exact_samples(cam, 12);
    const auto model = fit_regression(train);
    std::vector<double> truth, reg, conv;
    for (double d = 0.12; d < 1.0; d += 0.07) {
      const double size = camera::expected_blob_diameter_px({d, {}}, {}, cam);
      truth.push_back(d);
      reg.push_back(predict_distance(model, size));
      conv.push_back(conventional_distance(size, {}, cam));
    }
    CHECK(mean_squared_error(reg, truth) < mean_squared_error(conv, truth));
  }
}

TEST_CASE("feature names") {
  CHECK(parse_feature_kind("reciprocal") == FeatureKind::kReciprocalDiameter);
  CHECK(parse_feature_kind("raw_diameter") == FeatureKind::kRawDiameter);
  CHECK(to_string(FeatureKind::kReciprocalDiameter) == "reciprocal_diameter");
  CHECK_THROWS_AS(parse_feature_kind("cubic"), Error);
}
