#include "litalk/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "litalk/error.hpp"

namespace litalk::imaging {
namespace {

using Runs = std::vector<std::pair<bool, std::size_t>>;

Runs run_lengths(std::span<const std::uint8_t> column, double threshold) {
  Runs runs;
  for (auto v : column) {
    const bool on = v > threshold;
    if (!runs.empty() && runs.back().first == on) {
      ++runs.back().second;
    } else {
      runs.emplace_back(on, 1);
    }
  }
  return runs;
}

// Nearest-rank percentile from a 256-bin histogram.
int percentile(const std::array<std::size_t, 256>& hist, std::size_t total, double pct) {
  const auto rank = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(total))));
  std::size_t seen = 0;
  for (int v = 0; v < 256; ++v) {
    seen += hist[v];
    if (seen >= rank) return v;
  }
  return 255;
}

struct Component {
  std::size_t area = 0;
  double sum_x = 0.0;
  double sum_y = 0.0;
  int min_x = std::numeric_limits<int>::max();
  int max_x = -1;
  int min_y = std::numeric_limits<int>::max();
  int max_y = -1;
};

struct RowExtent {
  int y;
  int x0;
  int x1;
};

// The blurred threshold spreads each chord by about a pixel per side. Move
// the ends to the half-level crossing of the unblurred row instead.
int refine_row_edges(const Frame& gray, int y, int& x0, int& x1) {
  std::vector<std::uint8_t> chord(gray.row(y).begin() + x0, gray.row(y).begin() + x1 + 1);
  auto mid_it = chord.begin() + static_cast<std::ptrdiff_t>(chord.size() / 2);
  std::nth_element(chord.begin(), mid_it, chord.end());
  const int bg = std::min<int>(gray.clamped(x0 - 3, y), gray.clamped(x1 + 3, y));
  const int level = *mid_it;
  if (level - bg < 48) return -1;
  const int mid = (level + bg + 1) / 2;
  while (x0 < x1 && gray.at(x0, y) < mid) ++x0;
  while (x0 > 0 && gray.at(x0 - 1, y) >= mid) --x0;
  while (x1 > x0 && gray.at(x1, y) < mid) --x1;
  while (x1 + 1 < gray.width() && gray.at(x1 + 1, y) >= mid) ++x1;
  return x1 > x0 ? level : -1;
}

Blob centroid_blob(const Component& comp, const std::vector<int>& labels, int label,
                   int width) {
  Blob blob;
  blob.area_px = comp.area;
  blob.center_x = comp.sum_x / static_cast<double>(comp.area);
  blob.center_y = comp.sum_y / static_cast<double>(comp.area);
  double max_d2 = 0.0;
  for (int y = comp.min_y; y <= comp.max_y; ++y) {
    for (int x = comp.min_x; x <= comp.max_x; ++x) {
      if (labels[static_cast<std::size_t>(y) * width + x] != label) continue;
      max_d2 = std::max(max_d2, (x - blob.center_x) * (x - blob.center_x) +
                                    (y - blob.center_y) * (y - blob.center_y));
    }
  }
  blob.radius_px = std::max(0.5, std::sqrt(max_d2));
  return blob;
}

// Algebraic circle fit to row chords: h^2 + y^2 = A + 2 cy y with A = R^2 - cy^2.
bool fit_circle(const std::vector<RowExtent>& rows, Blob& blob) {
  if (rows.size() < 3) return false;
  const double n = static_cast<double>(rows.size());
  double mean_y = 0.0;
  double mean_z = 0.0;
  double mean_mid = 0.0;
  for (const auto& r : rows) {
    const double half = 0.5 * (r.x1 - r.x0 + 1);
    mean_y += r.y;
    mean_z += half * half + static_cast<double>(r.y) * r.y;
    mean_mid += 0.5 * (r.x0 + r.x1);
  }
  mean_y /= n;
  mean_z /= n;
  mean_mid /= n;
  double syy = 0.0;
  double syz = 0.0;
  for (const auto& r : rows) {
    const double half = 0.5 * (r.x1 - r.x0 + 1);
    const double dy = r.y - mean_y;
    syy += dy * dy;
    syz += dy * (half * half + static_cast<double>(r.y) * r.y - mean_z);
  }
  if (syy <= 0.0) return false;
  const double slope = syz / syy;
  const double cy = 0.5 * slope;
  const double radius2 = mean_z - slope * mean_y + cy * cy;
  if (!std::isfinite(radius2) || radius2 <= 0.0) return false;
  const double radius = std::sqrt(radius2);
  blob.center_x = mean_mid;
  blob.center_y = cy;
  blob.radius_px = radius;
  return true;
}

// Geometric refinement of (cy, R): Gauss-Newton on the distance from each
// chord end to the circle, starting from the algebraic fit.
void refine_circle(const std::vector<RowExtent>& rows, Blob& blob) {
  double cy = blob.center_y;
  double radius = blob.radius_px;
  for (int iter = 0; iter < 20; ++iter) {
    // Normal equations for the 2-parameter update.
    double jcc = 0.0, jcr = 0.0, jrr = 0.0, gc = 0.0, gr = 0.0;
    for (const auto& r : rows) {
      const double half = 0.5 * (r.x1 - r.x0 + 1);
      const double dy = r.y - cy;
      const double dist = std::hypot(half, dy);
      if (dist == 0.0) continue;
      const double residual = dist - radius;
      const double d_cy = -dy / dist;
      const double d_r = -1.0;
      jcc += d_cy * d_cy;
      jcr += d_cy * d_r;
      jrr += d_r * d_r;
      gc += d_cy * residual;
      gr += d_r * residual;
    }
    const double det = jcc * jrr - jcr * jcr;
    if (!(std::abs(det) > 1e-12)) return;
    const double step_cy = -(jrr * gc - jcr * gr) / det;
    const double step_r = -(jcc * gr - jcr * gc) / det;
    cy += step_cy;
    radius += step_r;
    if (std::abs(step_cy) < 1e-6 && std::abs(step_r) < 1e-6) break;
  }
  if (std::isfinite(cy) && std::isfinite(radius) && radius > 0.0) {
    blob.center_y = cy;
    blob.radius_px = radius;
  }
}

// No chord may exceed the diameter, and a circle much larger than the region
// it was fitted to is an ill-conditioned fit.
bool plausible(const std::vector<RowExtent>& rows, const Blob& blob) {
  if (rows.size() < 3) return false;
  double max_half = 0.0;
  for (const auto& r : rows) max_half = std::max(max_half, 0.5 * (r.x1 - r.x0 + 1));
  const double extent = std::max(rows.back().y - rows.front().y + 1.0, 2.0 * max_half);
  return blob.radius_px + 2.0 >= max_half && blob.radius_px <= extent;
}

// A disc's chord half-width is concave in y, so rows well under the upper
// hull of the others are flare spots inside dark bands. Rows are sorted by y.
void drop_concave_outliers(std::vector<RowExtent>& rows, double tolerance) {
  const auto half = [](const RowExtent& r) { return 0.5 * (r.x1 - r.x0 + 1); };
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    while (hull.size() >= 2) {
      const auto& a = rows[hull[hull.size() - 2]];
      const auto& b = rows[hull.back()];
      const double cross = (b.y - a.y) * (half(rows[i]) - half(a)) -
                           (half(b) - half(a)) * static_cast<double>(rows[i].y - a.y);
      if (cross < 0.0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  std::vector<RowExtent> kept;
  std::size_t seg = 0;
  for (const auto& r : rows) {
    while (seg + 2 < hull.size() && rows[hull[seg + 1]].y <= r.y) ++seg;
    double top = half(rows[hull[seg]]);
    if (seg + 1 < hull.size()) {
      const auto& a = rows[hull[seg]];
      const auto& b = rows[hull[seg + 1]];
      if (b.y != a.y) top = half(a) + (half(b) - half(a)) * (r.y - a.y) / (b.y - a.y);
    }
    if (half(r) >= top - tolerance) kept.push_back(r);
  }
  rows = std::move(kept);
}

// Fits, drops rows that disagree with the circle (bloom spots inside dark
// bands, rim artifacts), refits.
bool fit_rows(std::vector<RowExtent> rows, Blob& blob) {
  drop_concave_outliers(rows, 2.0);
  for (int pass = 0; pass < 3; ++pass) {
    if (!fit_circle(rows, blob)) return false;
    refine_circle(rows, blob);
    const double tolerance = std::max(1.5, 0.02 * blob.radius_px);
    const auto outlier = [&](const RowExtent& r) {
      const double dy = r.y - blob.center_y;
      const double expected = std::sqrt(std::max(0.0, blob.radius_px * blob.radius_px - dy * dy));
      return std::abs(0.5 * (r.x1 - r.x0 + 1) - expected) > tolerance;
    };
    const auto before = rows.size();
    std::erase_if(rows, outlier);
    if (rows.size() == before) return plausible(rows, blob);
  }
  if (!fit_circle(rows, blob)) return false;
  refine_circle(rows, blob);
  return plausible(rows, blob);
}

}  // namespace

ContrastResult contrast_stretch(const Frame& frame, double lo_pct, double hi_pct) {
  if (!(lo_pct >= 0.0 && lo_pct < hi_pct && hi_pct <= 100.0)) {
    throw Error(ErrorCode::kInvalidArgument, "percentiles must satisfy 0 <= lo < hi <= 100");
  }
  std::array<std::size_t, 256> hist{};
  for (auto v : frame.pixels()) ++hist[v];
  const std::size_t total = frame.pixels().size();
  const int lo = percentile(hist, total, lo_pct);
  const int hi = percentile(hist, total, hi_pct);
  if (hi <= lo) return {frame, true};

  std::array<std::uint8_t, 256> lut{};
  const double scale = 255.0 / (hi - lo);
  for (int v = 0; v < 256; ++v) {
    lut[v] = static_cast<std::uint8_t>(std::clamp(std::lround((v - lo) * scale), 0L, 255L));
  }
  Frame out = frame;
  for (auto& v : out.pixels()) v = lut[v];
  return {std::move(out), false};
}

Frame box_blur_3x3(const Frame& frame) {
  if (frame.width() < 3 || frame.height() < 3) {
    throw Error(ErrorCode::kFrameTooSmall, "3x3 blur needs a frame of at least 3x3");
  }
  const int w = frame.width();
  const int h = frame.height();
  // Horizontal pass of 3-sums, then vertical.
  std::vector<int> rows(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      rows[static_cast<std::size_t>(y) * w + x] =
          frame.clamped(x - 1, y) + frame.at(x, y) + frame.clamped(x + 1, y);
    }
  }
  Frame out(w, h);
  for (int y = 0; y < h; ++y) {
    const int up = std::max(y - 1, 0);
    const int down = std::min(y + 1, h - 1);
    for (int x = 0; x < w; ++x) {
      const int sum = rows[static_cast<std::size_t>(up) * w + x] +
                      rows[static_cast<std::size_t>(y) * w + x] +
                      rows[static_cast<std::size_t>(down) * w + x];
      out.at(x, y) = static_cast<std::uint8_t>((sum + 4) / 9);
    }
  }
  return out;
}

BinaryFrame adaptive_threshold(const Frame& frame, int block, double c) {
  if (block < 3 || block % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "threshold block must be odd and >= 3");
  }
  const int w = frame.width();
  const int h = frame.height();
  const int r = block / 2;
  const int pw = w + 2 * r;
  const int ph = h + 2 * r;
  // Integral image of the edge-replicated frame, one extra leading row/column.
  std::vector<std::int64_t> integral(static_cast<std::size_t>(pw + 1) * (ph + 1), 0);
  auto at = [&](int x, int y) -> std::int64_t& {
    return integral[static_cast<std::size_t>(y) * (pw + 1) + x];
  };
  for (int y = 0; y < ph; ++y) {
    std::int64_t row_sum = 0;
    for (int x = 0; x < pw; ++x) {
      row_sum += frame.clamped(x - r, y - r);
      at(x + 1, y + 1) = at(x + 1, y) + row_sum;
    }
  }
  const double area = static_cast<double>(block) * block;
  BinaryFrame out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Window [x, x + block) in padded coordinates is centered on pixel x.
      const std::int64_t sum =
          at(x + block, y + block) - at(x, y + block) - at(x + block, y) + at(x, y);
      out.set(x, y, frame.at(x, y) > static_cast<double>(sum) / area - c);
    }
  }
  return out;
}

BinaryFrame close_vertical(const BinaryFrame& binary, int height) {
  if (height < 1) throw Error(ErrorCode::kInvalidArgument, "closing height must be >= 1");
  const int w = binary.width();
  const int h = binary.height();
  const int above = (height - 1) / 2;
  const int below = height - 1 - above;
  std::vector<int> prefix(static_cast<std::size_t>(h) + 1);
  std::vector<std::uint8_t> dilated(static_cast<std::size_t>(h));
  BinaryFrame out(w, h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) prefix[y + 1] = prefix[y] + (binary.is_set(x, y) ? 1 : 0);
    // Dilation window [y - above, y + below].
    for (int y = 0; y < h; ++y) {
      const int lo = std::max(0, y - above);
      const int hi = std::min(h - 1, y + below);
      dilated[y] = prefix[hi + 1] - prefix[lo] > 0;
    }
    for (int y = 0; y < h; ++y) prefix[y + 1] = prefix[y] + dilated[y];
    // Erosion uses the reflected window [y - below, y + above]; outside is set.
    for (int y = 0; y < h; ++y) {
      const int lo = std::max(0, y - below);
      const int hi = std::min(h - 1, y + above);
      out.set(x, y, prefix[hi + 1] - prefix[lo] == hi - lo + 1);
    }
  }
  return out;
}

int closing_height_px(double band_width_px) {
  return std::max(2, 4 * static_cast<int>(std::ceil(band_width_px)));
}

std::vector<Blob> detect_blobs(const BinaryFrame& binary, std::size_t min_area_px,
                               double band_width_px, const Frame* gray) {
  if (gray && (gray->width() != binary.width() || gray->height() != binary.height())) {
    throw Error(ErrorCode::kInvalidArgument, "gray frame size differs from binary frame");
  }
  const BinaryFrame closed = close_vertical(binary, closing_height_px(band_width_px));
  const int w = closed.width();
  const int h = closed.height();
  std::vector<int> labels(static_cast<std::size_t>(w) * h, -1);
  std::vector<Component> comps;
  std::vector<std::pair<int, int>> stack;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!closed.is_set(x, y) || labels[static_cast<std::size_t>(y) * w + x] >= 0) continue;
      const int label = static_cast<int>(comps.size());
      Component comp;
      labels[static_cast<std::size_t>(y) * w + x] = label;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [px, py] = stack.back();
        stack.pop_back();
        ++comp.area;
        comp.sum_x += px;
        comp.sum_y += py;
        comp.min_x = std::min(comp.min_x, px);
        comp.max_x = std::max(comp.max_x, px);
        comp.min_y = std::min(comp.min_y, py);
        comp.max_y = std::max(comp.max_y, py);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = px + dx;
            const int ny = py + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            auto& l = labels[static_cast<std::size_t>(ny) * w + nx];
            if (l >= 0 || !closed.is_set(nx, ny)) continue;
            l = label;
            stack.emplace_back(nx, ny);
          }
        }
      }
      comps.push_back(comp);
    }
  }

  std::vector<Blob> blobs;
  for (int label = 0; label < static_cast<int>(comps.size()); ++label) {
    const Component& comp = comps[label];
    if (comp.area < min_area_px) continue;
    // Lit rows as they were before closing.
    std::vector<RowExtent> rows;
    std::vector<int> levels;
    for (int y = comp.min_y; y <= comp.max_y; ++y) {
      int x0 = -1;
      int x1 = -1;
      int lit = 0;
      for (int x = comp.min_x; x <= comp.max_x; ++x) {
        if (labels[static_cast<std::size_t>(y) * w + x] != label || !binary.is_set(x, y)) continue;
        if (x0 < 0) x0 = x;
        x1 = x;
        ++lit;
      }
      // Only rows lit across the whole chord measure the circle.
      if (x0 < 0 || lit < 0.9 * (x1 - x0 + 1)) continue;
      if (gray) {
        const int level = refine_row_edges(*gray, y, x0, x1);
        if (level < 0) continue;
        levels.push_back(level);
      }
      rows.push_back({y, x0, x1});
    }
    if (!levels.empty()) {
      // Dim rows are the flare spot inside a dark band, not the disc.
      const int top = *std::max_element(levels.begin(), levels.end());
      std::size_t keep = 0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (4 * levels[i] >= 3 * top) rows[keep++] = rows[i];
      }
      rows.resize(keep);
    }
    Blob blob;
    blob.area_px = comp.area;
    if (!fit_rows(rows, blob)) blob = centroid_blob(comp, labels, label, w);
    blobs.push_back(blob);
  }
  std::stable_sort(blobs.begin(), blobs.end(),
                   [](const Blob& a, const Blob& b) { return a.area_px > b.area_px; });
  return blobs;
}

std::vector<std::uint8_t> extract_column(const Frame& frame, const Blob& blob,
                                         double offset_fraction) {
  if (!(offset_fraction >= 0.0 && offset_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "offset fraction must lie in [0, 1)");
  }
  if (!(blob.radius_px > 0.0)) throw Error(ErrorCode::kInvalidArgument, "blob radius must be > 0");
  const long x = std::lround(blob.center_x + offset_fraction * blob.radius_px);
  const double dx = static_cast<double>(x) - blob.center_x;
  const double half2 = blob.radius_px * blob.radius_px - dx * dx;
  if (x < 0 || x >= frame.width() || half2 <= 0.0) {
    throw Error(ErrorCode::kOffsetOutsideBlob, "column x=" + std::to_string(x) +
                                                   " misses the blob circle");
  }
  const double half = std::sqrt(half2);
  const int top = std::max(0, static_cast<int>(std::ceil(blob.center_y - half)));
  const int bottom = std::min(frame.height() - 1, static_cast<int>(std::floor(blob.center_y + half)));
  if (bottom < top) {
    throw Error(ErrorCode::kOffsetOutsideBlob, "column chord is empty");
  }
  std::vector<std::uint8_t> column;
  column.reserve(static_cast<std::size_t>(bottom - top + 1));
  for (int y = top; y <= bottom; ++y) column.push_back(frame.at(static_cast<int>(x), y));
  return column;
}

codec::SymbolStream column_to_symbols(std::span<const std::uint8_t> column, double w_px) {
  if (!(w_px >= 2.0)) throw Error(ErrorCode::kInvalidArgument, "band width must be >= 2 px");
  if (static_cast<double>(column.size()) < 3.0 * w_px) {
    throw Error(ErrorCode::kColumnTooShort, "column of " + std::to_string(column.size()) +
                                                " px is shorter than three bands");
  }
  // Outermost pixels sit on the blob rim; keep them out of the threshold.
  const auto core = column.subspan(2, column.size() - 4);
  const auto [lo, hi] = std::minmax_element(core.begin(), core.end());
  if (*lo == *hi) throw Error(ErrorCode::kNoTransitions, "column is constant");
  const Runs runs = run_lengths(column, 0.5 * (*lo + *hi));

  std::vector<codec::Symbol> symbols;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto [on, length] = runs[i];
    const double bands = static_cast<double>(length) / w_px;
    const bool edge = i == 0 || i + 1 == runs.size();
    if (edge && bands < 0.5) continue;
    const auto copies = std::max<long>(1, std::lround(bands));
    symbols.insert(symbols.end(), static_cast<std::size_t>(copies), on ? 1 : 0);
  }
  if (runs.size() < 2 || symbols.empty()) {
    throw Error(ErrorCode::kNoTransitions, "no band transitions in column");
  }
  return codec::SymbolStream(std::move(symbols));
}

double estimate_band_width(std::span<const std::uint8_t> column) {
  if (column.size() < 8) throw Error(ErrorCode::kColumnTooShort, "column too short to estimate");
  const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
  if (*lo == *hi) throw Error(ErrorCode::kNoTransitions, "column is constant");
  const Runs runs = run_lengths(column, 0.5 * (*lo + *hi));
  if (runs.size() < 3) throw Error(ErrorCode::kNoTransitions, "too few bands to estimate");
  std::vector<std::size_t> lengths;
  for (std::size_t i = 1; i + 1 < runs.size(); ++i) lengths.push_back(runs[i].second);
  std::sort(lengths.begin(), lengths.end());
  const std::size_t quartile = std::max<std::size_t>(1, lengths.size() / 4);
  const std::size_t mid = quartile / 2;
  if (quartile % 2 == 1) return static_cast<double>(lengths[mid]);
  return 0.5 * static_cast<double>(lengths[mid - 1] + lengths[mid]);
}

}  // namespace litalk::imaging
