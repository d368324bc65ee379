#pragma once

// Rolling-shutter camera model.
//
// Rows are read out one after another, T_r seconds apart, so a light that
// toggles at f Hz paints horizontal bands 1 / (2 f T_r) rows tall across its
// image. One channel symbol occupies half a modulation period, i.e. exactly
// one band.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "litalk/codec.hpp"
#include "litalk/frame.hpp"

namespace litalk::camera {

struct CameraParams {
  int width_px = 1280;
  int height_px = 720;
  double readout_time_s = 1.0 / 60000.0;
  /// Shortest practical exposure: one row time.
  double exposure_time_s = 1.0 / 60000.0;
  int iso = 100;
  /// Effective pitch. It stands in for the sensor pitch and absorbs the scale
  /// of the 0.28 mm focal length so that blob sizes at desk distances match
  /// what the receiver sees (a 276 px blob around 18 cm at ISO 100).
  double pixel_pitch_m = 6.4e-8;
  double focal_length_m = 0.28e-3;
  /// Blooming coefficient of the ISO size gain 1 + kappa * log2(iso / 100).
  /// Not a measured quantity; chosen to order the ISO curves.
  double iso_gain_kappa = 0.15;

  void validate() const;
};

struct TxParams {
  double mod_freq_hz = 2500.0;
  /// On-time fraction of one modulation period for an isolated 1 symbol.
  /// Below 0.5 every lit run ends early by (0.5 - duty) / f.
  double duty_cycle = 0.40;
  double led_radius_m = 10.9e-3;

  void validate() const;
};

struct PixelPoint {
  double x = 0.0;
  double y = 0.0;
};

struct LinkGeometry {
  double distance_m = 0.2;
  /// Blob center; the frame center when unset.
  std::optional<PixelPoint> center_px;
};

/// Overexposure near the blob center. A pixel there also collects light from
/// `spread_rows` rows either side of its own exposure, amplified by `gain`,
/// so bright bands swell and the dark bands between them shrink. Strength
/// tapers linearly from `level` at the center to zero at `radius_fraction`
/// of the blob radius.
struct BloomModel {
  bool enabled = true;
  double level = 255.0;
  double spread_rows = 12.0;
  double gain = 4.0;
  double radius_fraction = 0.5;
};

struct SynthesisOptions {
  /// Gaussian noise stddev at ISO 100; scales linearly with iso / 100.
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  double dark_level = 10.0;
  bool cosine_falloff = false;
  BloomModel bloom;
};

struct LightSource {
  codec::SymbolStream stream;
  LinkGeometry geometry;
  /// Transmitter clock offset relative to the first row's exposure start.
  double phase_s = 0.0;
};

/// Seconds per channel symbol: half a modulation period.
double symbol_duration_s(const TxParams& tx);

/// W = 1 / (2 f T_r), in rows.
double band_width_px(const TxParams& tx, const CameraParams& cam);

/// 1 + kappa * log2(iso / 100).
double iso_gain(int iso, double kappa);

/// gain(iso) * S_r * f_L / (S_p * (D - f_L)). Throws when D <= f_L.
double expected_blob_diameter_px(const LinkGeometry& geom, const TxParams& tx,
                                 const CameraParams& cam);

/// Inverse of expected_blob_diameter_px including the ISO gain.
double distance_for_blob_diameter(double diameter_px, const TxParams& tx,
                                  const CameraParams& cam);

/// band_width_px * packet_size(n_bits): the blob extent carrying one packet.
double decodability_bound_px(std::size_t n_bits, const TxParams& tx, const CameraParams& cam,
                             const codec::FramingConfig& framing = {});

/// The light output of a transmitter looping over one symbol stream.
class LightWaveform {
 public:
  LightWaveform(const codec::SymbolStream& stream, const TxParams& tx);

  double period_s() const noexcept { return period_s_; }
  /// Fraction of [t0, t1] during which the light is on; state at t0 if t1 == t0.
  double lit_fraction(double t0, double t1) const;

 private:
  struct Interval {
    double begin;
    double end;
  };
  double lit_time_until(double t) const;
  double lit_time_in_period(double u) const;

  double period_s_ = 0.0;
  double on_per_period_ = 0.0;
  std::vector<Interval> on_;
};

/// One LED in the frame. Throws kBlobOutOfFrame when the blob circle leaves
/// the frame.
Frame synthesize_frame(const codec::SymbolStream& stream, const LinkGeometry& geom,
                       const TxParams& tx, const CameraParams& cam,
                       const SynthesisOptions& options = {}, double phase_s = 0.0);

/// Several LEDs; contributions add before clipping.
Frame synthesize_scene(std::span<const LightSource> sources, const TxParams& tx,
                       const CameraParams& cam, const SynthesisOptions& options = {});

}  // namespace litalk::camera
