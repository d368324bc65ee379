#pragma once

// Receiver image processing: stretch contrast, blur, threshold against the
// local mean, find the LED blobs, then read one pixel column per blob and
// turn its band pattern back into channel symbols.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "litalk/codec.hpp"
#include "litalk/frame.hpp"

namespace litalk::imaging {

struct Blob {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius_px = 0.0;
  std::size_t area_px = 0;

  double diameter_px() const noexcept { return 2.0 * radius_px; }
};

struct ContrastResult {
  Frame frame;
  /// The two percentiles coincided; `frame` is the input, unchanged.
  bool degenerate = false;
};

/// Linear remap sending the lo_pct percentile to 0 and hi_pct to 255.
ContrastResult contrast_stretch(const Frame& frame, double lo_pct = 2.0, double hi_pct = 98.0);

/// Rounded 3x3 mean with replicated borders. Throws kFrameTooSmall below 3x3.
Frame box_blur_3x3(const Frame& frame);

/// 255 where value > (block x block mean) - c, else 0. Borders replicate.
BinaryFrame adaptive_threshold(const Frame& frame, int block = 15, double c = 5.0);

/// Morphological closing with a vertical line `height` pixels tall.
/// Pixels outside the frame count as background for the dilation and as
/// foreground for the erosion, so the result always contains the input.
BinaryFrame close_vertical(const BinaryFrame& binary, int height);

/// Closing height used by detect_blobs: tall enough to bridge the preamble's
/// three-symbol dark run.
int closing_height_px(double band_width_px);

/// Finds LED blobs. Bands are merged by a vertical closing, 8-connected
/// components below min_area_px are dropped, and each survivor's circle is
/// fitted to the left/right extent of its lit rows (the dark bands make the
/// top and bottom edges unreliable). When `gray` (the unblurred image the
/// binary was derived from) is given, chord ends are moved to its half-level
/// crossing. Sorted by descending area.
std::vector<Blob> detect_blobs(const BinaryFrame& binary, std::size_t min_area_px,
                               double band_width_px, const Frame* gray = nullptr);

/// Vertical column at x = round(center_x + offset_fraction * radius),
/// limited to the rows inside the blob circle.
std::vector<std::uint8_t> extract_column(const Frame& frame, const Blob& blob,
                                         double offset_fraction = 0.5);

/// Run-length clock recovery with a known band width. Edge runs shorter
/// than half a band are dropped; every other run becomes
/// max(1, round(run / w_px)) symbols.
codec::SymbolStream column_to_symbols(std::span<const std::uint8_t> column, double w_px);

/// Band width estimate for when the modulation frequency is unknown: median
/// of the shortest quartile of interior run lengths.
double estimate_band_width(std::span<const std::uint8_t> column);

}  // namespace litalk::imaging
