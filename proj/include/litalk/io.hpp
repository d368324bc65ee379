#pragma once

// File formats: training CSV, model JSON, decode report JSON.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "litalk/ranging.hpp"

namespace litalk::io {

inline constexpr const char* kTrainingCsvHeader = "distance_cm,blob_diameter_px,iso";

/// Training samples; distances are converted from centimeters to meters.
std::vector<ranging::RangeSample> read_training_csv(std::istream& in);
std::vector<ranging::RangeSample> read_training_csv(const std::filesystem::path& path);
void write_training_csv(const std::vector<ranging::RangeSample>& samples, std::ostream& out);

/// Flat object with keys slope, intercept, feature_kind, iso, trained_on.
/// Coefficients are in meters.
std::string model_to_json(const ranging::RangeModel& model);
ranging::RangeModel model_from_json(const std::string& text);
void save_model(const ranging::RangeModel& model, const std::filesystem::path& path);
ranging::RangeModel load_model(const std::filesystem::path& path);

struct BlobRecord {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius_px = 0.0;
  std::optional<std::string> payload_hex;
  std::optional<std::string> failure;
  std::string symbols;
  double conventional_distance_cm = 0.0;
  std::optional<double> regression_distance_cm;
  double decode_time_ms = 0.0;
};

struct DecodeReport {
  int width = 0;
  int height = 0;
  double decode_time_ms = 0.0;
  std::vector<BlobRecord> blobs;

  std::size_t decoded_count() const;
};

std::string report_to_json(const DecodeReport& report);
DecodeReport report_from_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace litalk::io
