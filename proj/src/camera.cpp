#include "litalk/camera.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "litalk/error.hpp"
#include "litalk/rng.hpp"

namespace litalk::camera {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

constexpr double kFitSlack = 1e-9;

}  // namespace

void CameraParams::validate() const {
  require(width_px > 0 && height_px > 0, "frame dimensions must be positive");
  require(readout_time_s > 0.0, "readout time must be positive");
  require(exposure_time_s > 0.0, "exposure time must be positive");
  require(iso >= 100, "iso must be >= 100");
  require(pixel_pitch_m > 0.0, "pixel pitch must be positive");
  require(focal_length_m > 0.0, "focal length must be positive");
  require(iso_gain_kappa >= 0.0, "iso gain coefficient must be non-negative");
}

void TxParams::validate() const {
  require(mod_freq_hz > 0.0, "modulation frequency must be positive");
  require(duty_cycle > 0.0 && duty_cycle < 1.0, "duty cycle must lie in (0, 1)");
  require(led_radius_m > 0.0, "LED radius must be positive");
}

double symbol_duration_s(const TxParams& tx) {
  require(tx.mod_freq_hz > 0.0, "modulation frequency must be positive");
  return 0.5 / tx.mod_freq_hz;
}

double band_width_px(const TxParams& tx, const CameraParams& cam) {
  require(tx.mod_freq_hz > 0.0, "modulation frequency must be positive");
  require(cam.readout_time_s > 0.0, "readout time must be positive");
  return 1.0 / (2.0 * tx.mod_freq_hz * cam.readout_time_s);
}

double iso_gain(int iso, double kappa) {
  require(iso > 0, "iso must be positive");
  return 1.0 + kappa * std::log2(static_cast<double>(iso) / 100.0);
}

double expected_blob_diameter_px(const LinkGeometry& geom, const TxParams& tx,
                                 const CameraParams& cam) {
  tx.validate();
  cam.validate();
  if (!(geom.distance_m > cam.focal_length_m)) {
    throw Error(ErrorCode::kInvalidArgument, "link distance must exceed the focal length");
  }
  return iso_gain(cam.iso, cam.iso_gain_kappa) * tx.led_radius_m * cam.focal_length_m /
         (cam.pixel_pitch_m * (geom.distance_m - cam.focal_length_m));
}

double distance_for_blob_diameter(double diameter_px, const TxParams& tx,
                                  const CameraParams& cam) {
  tx.validate();
  cam.validate();
  require(diameter_px > 0.0, "blob diameter must be positive");
  return cam.focal_length_m + iso_gain(cam.iso, cam.iso_gain_kappa) * tx.led_radius_m *
                                  cam.focal_length_m / (cam.pixel_pitch_m * diameter_px);
}

double decodability_bound_px(std::size_t n_bits, const TxParams& tx, const CameraParams& cam,
                             const codec::FramingConfig& framing) {
  return band_width_px(tx, cam) * static_cast<double>(codec::packet_size(n_bits, framing));
}

LightWaveform::LightWaveform(const codec::SymbolStream& stream, const TxParams& tx) {
  tx.validate();
  require(!stream.empty(), "symbol stream must not be empty");
  const double slot = symbol_duration_s(tx);
  const std::size_t n = stream.size();
  period_s_ = slot * static_cast<double>(n);

  const auto ones = static_cast<std::size_t>(std::count(stream.begin(), stream.end(), 1));
  if (ones == n) {
    on_.push_back({0.0, period_s_});
  } else if (ones > 0) {
    // Walk lit runs starting just after some dark symbol so no run is split.
    const std::size_t dark = static_cast<std::size_t>(
        std::find(stream.begin(), stream.end(), 0) - stream.begin());
    const double edge_shift = (2.0 * tx.duty_cycle - 1.0) * slot;
    std::size_t i = 0;
    while (i < n) {
      const std::size_t idx = (dark + 1 + i) % n;
      if (stream[idx] == 0) {
        ++i;
        continue;
      }
      std::size_t len = 0;
      while (i + len < n && stream[(dark + 1 + i + len) % n] == 1) ++len;
      double begin = static_cast<double>(idx) * slot;
      double end = begin + static_cast<double>(len) * slot + edge_shift;
      // Fold into [0, period).
      if (end > period_s_) {
        on_.push_back({begin, period_s_});
        on_.push_back({0.0, end - period_s_});
      } else {
        on_.push_back({begin, end});
      }
      i += len;
    }
  }
  for (const auto& iv : on_) on_per_period_ += iv.end - iv.begin;
}

double LightWaveform::lit_time_in_period(double u) const {
  double lit = 0.0;
  for (const auto& iv : on_) lit += std::clamp(u - iv.begin, 0.0, iv.end - iv.begin);
  return lit;
}

double LightWaveform::lit_time_until(double t) const {
  const double cycles = std::floor(t / period_s_);
  return cycles * on_per_period_ + lit_time_in_period(t - cycles * period_s_);
}

double LightWaveform::lit_fraction(double t0, double t1) const {
  if (t1 < t0) std::swap(t0, t1);
  if (t1 - t0 <= 0.0) {
    const double u = t0 - std::floor(t0 / period_s_) * period_s_;
    for (const auto& iv : on_) {
      if (u >= iv.begin && u < iv.end) return 1.0;
    }
    return 0.0;
  }
  return std::clamp((lit_time_until(t1) - lit_time_until(t0)) / (t1 - t0), 0.0, 1.0);
}

Frame synthesize_frame(const codec::SymbolStream& stream, const LinkGeometry& geom,
                       const TxParams& tx, const CameraParams& cam,
                       const SynthesisOptions& options, double phase_s) {
  const LightSource source{stream, geom, phase_s};
  return synthesize_scene(std::span<const LightSource>(&source, 1), tx, cam, options);
}

Frame synthesize_scene(std::span<const LightSource> sources, const TxParams& tx,
                       const CameraParams& cam, const SynthesisOptions& options) {
  tx.validate();
  cam.validate();
  require(options.noise_sigma >= 0.0, "noise sigma must be non-negative");

  const int width = cam.width_px;
  const int height = cam.height_px;
  std::vector<double> level(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                            options.dark_level);

  for (const auto& source : sources) {
    const double radius = 0.5 * expected_blob_diameter_px(source.geometry, tx, cam);
    const PixelPoint center = source.geometry.center_px.value_or(
        PixelPoint{0.5 * (width - 1), 0.5 * (height - 1)});
    if (center.x - radius < -0.5 - kFitSlack || center.x + radius > width - 0.5 + kFitSlack ||
        center.y - radius < -0.5 - kFitSlack || center.y + radius > height - 0.5 + kFitSlack) {
      throw Error(ErrorCode::kBlobOutOfFrame,
                  "blob of diameter " + std::to_string(2.0 * radius) + " px at (" +
                      std::to_string(center.x) + ", " + std::to_string(center.y) +
                      ") does not fit the frame");
    }

    const LightWaveform wave(source.stream, tx);
    const double spread_s = options.bloom.spread_rows * cam.readout_time_s;
    std::vector<double> lit(static_cast<std::size_t>(height));
    std::vector<double> bloom(static_cast<std::size_t>(height), 0.0);
    for (int y = 0; y < height; ++y) {
      const double start = y * cam.readout_time_s + source.phase_s;
      lit[y] = wave.lit_fraction(start, start + cam.exposure_time_s);
      if (options.bloom.enabled) {
        bloom[y] = wave.lit_fraction(start - spread_s, start + cam.exposure_time_s + spread_s);
      }
    }

    const double bloom_radius = options.bloom.radius_fraction * radius;
    const int y0 = std::max(0, static_cast<int>(std::floor(center.y - radius)));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(center.y + radius)));
    const int x0 = std::max(0, static_cast<int>(std::floor(center.x - radius)));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(center.x + radius)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double d = std::hypot(x - center.x, y - center.y);
        if (d > radius) continue;
        const double falloff =
            options.cosine_falloff ? std::cos(0.5 * std::numbers::pi * d / radius) : 1.0;
        double v = 255.0 * lit[y] * falloff;
        if (options.bloom.enabled && d < bloom_radius) {
          v += options.bloom.level * (1.0 - d / bloom_radius) *
               std::min(1.0, options.bloom.gain * bloom[y]);
        }
        level[static_cast<std::size_t>(y) * width + x] += v;
      }
    }
  }

  const double sigma = options.noise_sigma * static_cast<double>(cam.iso) / 100.0;
  GaussianSource noise(options.seed);
  std::vector<std::uint8_t> pixels(level.size());
  for (std::size_t i = 0; i < level.size(); ++i) {
    double v = level[i];
    if (sigma > 0.0) v += sigma * noise.normal();
    pixels[i] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
  }
  return Frame(width, height, std::move(pixels));
}

}  // namespace litalk::camera
