#pragma once

// Distance x ISO sweeps over synthesized frames: blob size, decode rate and
// ranging error per grid point.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "litalk/camera.hpp"
#include "litalk/decoder.hpp"
#include "litalk/ranging.hpp"

namespace litalk::sweep {

inline constexpr const char* kSweepCsvHeader =
    "iso,distance_cm,mean_diameter_px,decode_rate,conv_err_cm,reg_err_cm";

struct SweepConfig {
  std::vector<int> isos{100, 400, 800};
  double dmin_cm = 10.0;
  double dmax_cm = 100.0;
  double step_cm = 5.0;
  int trials = 3;
  std::uint64_t seed = 1;
  double noise_sigma = 1.0;
  std::size_t payload_bits = 8;
  camera::TxParams tx;
  camera::CameraParams cam;
  /// Regression models; each row uses the model trained at its ISO, if any.
  std::vector<ranging::RangeModel> models;
  unsigned threads = 1;

  void validate() const;
  std::vector<double> distances_cm() const;
};

struct Trial {
  /// Diameter of the largest detected blob; empty when nothing was found.
  std::optional<double> diameter_px;
  bool decoded = false;
};

struct SweepRow {
  int iso = 100;
  double distance_cm = 0.0;
  /// NaN when no trial detected a blob.
  double mean_diameter_px = 0.0;
  double decode_rate = 0.0;
  /// Mean absolute error over trials with a detected blob.
  double conv_err_cm = 0.0;
  std::optional<double> reg_err_cm;
};

/// One synthesized frame at a grid point. The seed fixes payload, transmitter
/// phase and noise.
Trial run_trial(const SweepConfig& config, int iso, double distance_cm, std::uint64_t seed);

/// Per-trial seeds come from (seed, iso, distance index, trial index), so the
/// result does not depend on `threads`.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

/// Distance where mean diameter first drops below `threshold_px` for `iso`,
/// linearly interpolated between grid points.
std::optional<double> crossing_distance_cm(const std::vector<SweepRow>& rows, int iso,
                                           double threshold_px);

}  // namespace litalk::sweep
