#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "litalk/codec.hpp"
#include "litalk/frame.hpp"
#include "litalk/imaging.hpp"

namespace litalk {

struct DecoderConfig {
  double mod_freq_hz = 2500.0;
  double readout_time_s = 1.0 / 60000.0;
  double offset_fraction = 0.5;
  std::size_t payload_bits = 8;
  double contrast_lo_pct = 2.0;
  /// The top percentile is the frame maximum: a distant LED covers well under
  /// 2% of the frame, and clipping at the 98th would stretch background noise.
  double contrast_hi_pct = 100.0;
  /// 0 selects 4 * ceil(W) + 1 so every window straddles a bright and a dark band.
  int threshold_block = 0;
  /// Negative: a pixel must beat its local mean by 20 levels, which keeps
  /// flat background and sensor noise dark.
  double threshold_c = -20.0;
  /// 0 selects (2 W)^2.
  std::size_t min_area_px = 0;

  double band_width_px() const;
  int resolved_block() const;
  std::size_t resolved_min_area() const;
};

struct BlobDecode {
  imaging::Blob blob;
  std::optional<codec::Payload> payload;
  /// Set when payload is empty.
  std::string failure;
  codec::SymbolStream symbols;
  double decode_time_ms = 0.0;
};

/// Intermediate images, for debugging.
struct PipelineStages {
  Frame contrasted;
  Frame blurred;
  BinaryFrame binary;
};

/// contrast_stretch -> box_blur_3x3 -> adaptive_threshold -> detect_blobs,
/// then per blob extract_column (on the binary image) -> column_to_symbols
/// -> packet decode.
std::vector<BlobDecode> decode_frame(const Frame& frame, const DecoderConfig& config = {},
                                     PipelineStages* stages = nullptr);

}  // namespace litalk
