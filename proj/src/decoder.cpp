#include "litalk/decoder.hpp"

#include <chrono>
#include <cmath>

#include "litalk/error.hpp"

namespace litalk {

double DecoderConfig::band_width_px() const {
  if (!(mod_freq_hz > 0.0) || !(readout_time_s > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "frequency and readout time must be positive");
  }
  return 1.0 / (2.0 * mod_freq_hz * readout_time_s);
}

int DecoderConfig::resolved_block() const {
  if (threshold_block > 0) return threshold_block;
  return 4 * static_cast<int>(std::ceil(band_width_px())) + 1;
}

std::size_t DecoderConfig::resolved_min_area() const {
  if (min_area_px > 0) return min_area_px;
  const double w = band_width_px();
  return static_cast<std::size_t>(std::ceil(4.0 * w * w));
}

std::vector<BlobDecode> decode_frame(const Frame& frame, const DecoderConfig& config,
                                     PipelineStages* stages) {
  using Clock = std::chrono::steady_clock;
  const double w = config.band_width_px();

  auto contrast = imaging::contrast_stretch(frame, config.contrast_lo_pct, config.contrast_hi_pct);
  Frame blurred = imaging::box_blur_3x3(contrast.frame);
  BinaryFrame binary =
      imaging::adaptive_threshold(blurred, config.resolved_block(), config.threshold_c);
  const auto blobs = imaging::detect_blobs(binary, config.resolved_min_area(), w, &contrast.frame);

  codec::FramingConfig framing;
  framing.payload_bits = config.payload_bits;

  std::vector<BlobDecode> results;
  results.reserve(blobs.size());
  for (const auto& blob : blobs) {
    const auto start = Clock::now();
    BlobDecode result;
    result.blob = blob;
    try {
      const auto column = imaging::extract_column(binary.frame(), blob, config.offset_fraction);
      result.symbols = imaging::column_to_symbols(column, w);
      result.payload = codec::decode_stream(result.symbols, framing, config.payload_bits);
    } catch (const Error& e) {
      result.failure = e.what();
    }
    result.decode_time_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    results.push_back(std::move(result));
  }

  if (stages != nullptr) {
    stages->contrasted = std::move(contrast.frame);
    stages->blurred = std::move(blurred);
    stages->binary = std::move(binary);
  }
  return results;
}

}  // namespace litalk
