// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "litalk/camera.hpp"
#include "litalk/cli.hpp"
#include "litalk/codec.hpp"
#include "litalk/decoder.hpp"
#include "litalk/io.hpp"
#include "litalk/ranging.hpp"
#include "litalk/rng.hpp"
#include "litalk/sweep.hpp"

using namespace litalk;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Lengths of the interior runs along column x, split at a fixed level.
std::vector<std::pair<bool, int>> column_runs(const Frame& f, int x, int level) {
  std::vector<std::pair<bool, int>> runs;
  int top = 0;
  while (top < f.height() && f.at(x, top) <= 10) ++top;
  int bottom = f.height() - 1;
  while (bottom > top && f.at(x, bottom) <= 10) --bottom;
  for (int y = top; y <= bottom;) {
    const bool on = f.at(x, y) >= level;
    int n = 0;
    while (y <= bottom && (f.at(x, y) >= level) == on) ++n, ++y;
    runs.emplace_back(on, n);
  }
  if (runs.size() > 2) runs = {runs.begin() + 1, runs.end() - 1};
  return runs;
}

Outcome band_width() {
  camera::TxParams tx;
  camera::CameraParams cam;
  cam.readout_time_s = 16.67e-6;
  const double w = camera::band_width_px(tx, cam);
  bool ok = std::abs(w - 12.0) <= 0.01;

  // Single-symbol bands of an alternating stream. A 50% duty keeps the band
  // boundaries on symbol edges; at the default duty the rising edges still
  // are, so their spacing is checked too.
  std::vector<codec::Symbol> alt(46);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 == 0;
  const codec::SymbolStream stream(alt);
  camera::SynthesisOptions clean;
  clean.bloom.enabled = false;
  double mean_runs[2] = {0, 0};
  int lo = 1 << 30, hi = 0;
  int pitch_bad = 0;
  for (int k = 0; k < 2; ++k) {
    const double d = k == 0 ? 0.15 : 0.40;
    camera::TxParams half = tx;
    half.duty_cycle = 0.5;
    const Frame f = camera::synthesize_frame(stream, {d, {}}, half, cam, clean, 1.1e-5);
    const auto runs = column_runs(f, cam.width_px / 2, 133);
    if (runs.size() < 3) ok = false;
    for (auto [on, n] : runs) {
      lo = std::min(lo, n);
      hi = std::max(hi, n);
      mean_runs[k] += n;
    }
    mean_runs[k] /= std::max<std::size_t>(1, runs.size());

    const Frame g = camera::synthesize_frame(stream, {d, {}}, tx, cam, clean, 1.1e-5);
    const auto gr = column_runs(g, cam.width_px / 2, 133);
    for (std::size_t i = 0; i + 1 < gr.size(); i += 1) {
      if (!gr[i].first) continue;
      const int pitch = gr[i].second + gr[i + 1].second;
      if (std::abs(pitch - 2.0 * w) > 1.0) ++pitch_bad;
    }
  }
  ok = ok && lo >= 11 && hi <= 13 && std::abs(mean_runs[0] - mean_runs[1]) <= 1.0 && pitch_bad == 0;
  return {ok, fmt("W=%.4f px; runs %d..%d px; mean %.2f (15 cm) vs %.2f (40 cm); "
                  "40%% duty pitch misses=%d",
                  w, lo, hi, mean_runs[0], mean_runs[1], pitch_bad)};
}

Outcome packet_arithmetic() {
  const auto n = codec::packet_size(8);
  const double bound = camera::decodability_bound_px(8, {}, {});
  return {n == 23 && std::abs(bound - 276.0) < 1e-9,
          fmt("packet_size(8)=%zu, bound=%.9f px", n, bound)};
}

Outcome codec_exhaustive() {
  int round_trip_failures = 0;
  int counterexamples = 0;
  for (unsigned v = 0; v < 256; ++v) {
    const auto p = codec::Payload::from_value(v, 8);
    const auto packet = codec::build_packet(p);
    try {
      if (!(codec::parse_packet(packet, {}, 8) == p)) ++round_trip_failures;
    } catch (const std::exception&) {
      ++round_trip_failures;
    }
    const std::size_t n = packet.size();
    for (std::size_t shift = 0; shift < n; ++shift) {
      const auto s = packet.rotated(shift).repeated(2);
      for (std::size_t i = 0; i + 3 <= s.size(); ++i) {
        if (!s[i] && !s[i + 1] && !s[i + 2] && (i + shift) % n != 1) ++counterexamples;
      }
    }
  }
  return {round_trip_failures == 0 && counterexamples == 0,
          fmt("round-trip failures=%d/256, preamble counterexamples=%d", round_trip_failures,
              counterexamples)};
}

int link_trials(int count, double diameter, double sigma, std::uint64_t seed) {
  camera::CameraParams cam;
  const double d = camera::distance_for_blob_diameter(diameter, {}, cam);
  std::mt19937_64 rng(seed);
  int ok = 0;
  for (int i = 0; i < count; ++i) {
    const auto p = codec::Payload::from_value(rng() & 0xff, 8);
    camera::SynthesisOptions o;
    o.noise_sigma = sigma;
    o.seed = rng();
    const double phase = std::uniform_real_distribution<double>(0.0, 23.0 / 5000.0)(rng);
    const auto r = decode_frame(camera::synthesize_frame(codec::build_packet(p), {d, {}}, {}, cam,
                                                         o, phase));
    ok += !r.empty() && r[0].payload == p;
  }
  return ok;
}

Outcome end_to_end() {
  const int clean = link_trials(100, 560.0, 0.0, 11);
  const int noisy = link_trials(100, 560.0, 8.0, 12);
  return {clean == 100 && noisy >= 95,
          fmt("diameter 560 px: noiseless %d/100, sigma=8 iso 100 %d/100", clean, noisy)};
}

Outcome iso_sweep() {
  sweep::SweepConfig cfg;
  cfg.isos = {100, 400, 800};
  cfg.dmin_cm = 10;
  cfg.dmax_cm = 100;
  cfg.step_cm = 5;
  const auto rows = sweep::run_sweep(cfg);
  const auto n = cfg.distances_cm().size();
  auto curve = [&](int idx) {
    return std::vector<sweep::SweepRow>(rows.begin() + idx * n, rows.begin() + (idx + 1) * n);
  };
  bool monotone = true;
  for (int k = 0; k < 3; ++k) {
    const auto c = curve(k);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isnan(c[i].mean_diameter_px)) monotone = false;
      if (i > 0 && !(c[i].mean_diameter_px < c[i - 1].mean_diameter_px)) monotone = false;
    }
  }
  bool above = true;
  const auto c100 = curve(0), c800 = curve(2);
  for (std::size_t i = 0; i < n; ++i) above = above && c800[i].mean_diameter_px > c100[i].mean_diameter_px;
  const auto x100 = sweep::crossing_distance_cm(rows, 100, 276.0);
  const auto x400 = sweep::crossing_distance_cm(rows, 400, 276.0);
  const auto x800 = sweep::crossing_distance_cm(rows, 800, 276.0);
  const bool ordered = x100 && x400 && x800 && *x800 > *x100 && *x800 > *x400;
  return {monotone && above && ordered,
          fmt("(a) monotone=%s (b) iso800 above iso100=%s (c) 276 px crossing "
              "iso100=%.1f cm, iso400=%.1f cm, iso800=%.1f cm",
              monotone ? "yes" : "no", above ? "yes" : "no", x100.value_or(NAN),
              x400.value_or(NAN), x800.value_or(NAN))};
}

// Measured diameters of synthesized frames at the given distances.
std::vector<ranging::RangeSample> measure(int iso, const std::vector<double>& cm, double sigma,
                                          std::uint64_t seed) {
  camera::CameraParams cam;
  cam.iso = iso;
  std::vector<ranging::RangeSample> out;
  for (std::size_t i = 0; i < cm.size(); ++i) {
    const auto s = derive_seed(seed, {static_cast<std::uint64_t>(iso), i});
    GaussianSource rng(s);
    const auto p = codec::Payload::from_value(s & 0xff, 8);
    camera::SynthesisOptions o;
    o.noise_sigma = sigma;
    o.seed = s;
    const Frame f = camera::synthesize_frame(codec::build_packet(p), {cm[i] / 100.0, {}}, {}, cam,
                                             o, rng.uniform() * 23.0 / 5000.0);
    const auto r = decode_frame(f);
    if (r.empty()) continue;
    out.push_back({cm[i] / 100.0, r[0].blob.diameter_px(), iso});
  }
  return out;
}

std::pair<double, double> mse_cm2(const ranging::RangeModel& m,
                                  const std::vector<ranging::RangeSample>& test, int iso) {
  camera::CameraParams cam;
  cam.iso = iso;
  std::vector<double> truth, reg, conv;
  for (const auto& s : test) {
    truth.push_back(100.0 * s.distance_m);
    reg.push_back(100.0 * ranging::predict_distance(m, s.blob_diameter_px));
    conv.push_back(100.0 * ranging::conventional_distance(s.blob_diameter_px, {}, cam));
  }
  return {ranging::mean_squared_error(reg, truth), ranging::mean_squared_error(conv, truth)};
}

Outcome ranging_comparison() {
  std::vector<double> train_cm, test_cm;
  for (double d = 10; d <= 60.01; d += 5) train_cm.push_back(d);
  for (double d = 12.5; d <= 57.51; d += 5) test_cm.push_back(d);
  const auto train800 = measure(800, train_cm, 1.0, 101);
  const auto test800 = measure(800, test_cm, 1.0, 202);
  const auto [reg800, conv800] = mse_cm2(ranging::fit_regression(train800), test800, 800);
  const auto train100 = measure(100, train_cm, 0.0, 303);
  const auto test100 = measure(100, test_cm, 0.0, 404);
  const auto [reg100, conv100] = mse_cm2(ranging::fit_regression(train100), test100, 100);
  const bool complete = train800.size() == train_cm.size() && test800.size() == test_cm.size() &&
                        train100.size() == train_cm.size() && test100.size() == test_cm.size();
  return {complete && reg800 <= 0.5 * conv800 && reg100 <= 0.1,
          fmt("iso 800: regression MSE %.3g cm^2 vs conventional %.3g cm^2 (ratio %.3gx); "
              "clean iso 100 regression MSE %.5f cm^2",
              reg800, conv800, conv800 / reg800, reg100)};
}

Outcome inverse_consistency() {
  const camera::CameraParams cam;
  const camera::TxParams tx;
  double worst = 0.0;
  const double lo = std::log(cam.focal_length_m * 1.01);
  const double hi = std::log(2.0);
  for (int i = 0; i < 20; ++i) {
    const double d = std::exp(lo + (hi - lo) * i / 19.0);
    const double back =
        ranging::conventional_distance(camera::expected_blob_diameter_px({d, {}}, tx, cam), tx, cam);
    worst = std::max(worst, std::abs(back - d) / d);
  }
  return {worst <= 1e-9, fmt("worst relative error %.3g over 20 distances", worst)};
}

Outcome offset_benefit() {
  camera::CameraParams cam;
  const double d = camera::distance_for_blob_diameter(560.0, {}, cam);
  DecoderConfig center;
  center.offset_fraction = 0.0;
  const DecoderConfig offset;
  int ok_center = 0, ok_offset = 0;
  for (int i = 0; i < 50; ++i) {
    const auto s = derive_seed(8, {static_cast<std::uint64_t>(i)});
    GaussianSource rng(s);
    const auto p = codec::Payload::from_value(s & 0xff, 8);
    camera::SynthesisOptions o;
    o.noise_sigma = 1.0;
    o.seed = s;
    const Frame f = camera::synthesize_frame(codec::build_packet(p), {d, {}}, {}, cam, o,
                                             rng.uniform() * 23.0 / 5000.0);
    const auto a = decode_frame(f, center);
    const auto b = decode_frame(f, offset);
    ok_center += !a.empty() && a[0].payload == p;
    ok_offset += !b.empty() && b[0].payload == p;
  }
  return {ok_offset >= ok_center,
          fmt("bloom on, 50 frames: offset 0.5 decoded %d, offset 0 decoded %d", ok_offset,
              ok_center)};
}

Outcome decode_time() {
  const auto path = (std::filesystem::temp_directory_path() / "litalk_acceptance_two.pgm").string();
  std::ostringstream out, err;
  if (cli::run({"litalk", "simulate", "--payload", "0x5a", "--payload", "0xc3", "--distance-cm",
                "10", "--out", path},
               out, err) != 0) {
    return {false, "simulate failed: " + err.str()};
  }
  std::ostringstream report, derr;
  const auto start = Clock::now();
  const int code = cli::run({"litalk", "decode", "--in", path}, report, derr);
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  std::filesystem::remove(path);
  const auto parsed = io::report_from_json(report.str());
  return {code == 0 && parsed.decoded_count() == 2 && ms < 500.0,
          fmt("1280x720, two LEDs: %zu decoded in %.1f ms", parsed.decoded_count(), ms)};
}

Outcome ols_oracle() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> size(25.0, 650.0);
  std::normal_distribution<double> noise(0.0, 0.02);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    std::vector<ranging::RangeSample> s;
    const int n = 2 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      const double px = size(rng);
      s.push_back({0.0003 + 47.7 / px + noise(rng), px, 100});
    }
    long double sn = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (const auto& r : s) {
      const long double x = 1.0L / r.blob_diameter_px;
      sn += 1, sx += x, sxx += x * x, sy += r.distance_m, sxy += x * r.distance_m;
    }
    const long double det = sn * sxx - sx * sx;
    const double slope = static_cast<double>((sn * sxy - sx * sy) / det);
    const double intercept = static_cast<double>((sxx * sy - sx * sxy) / det);
    const auto m = ranging::fit_regression(s);
    worst = std::max(worst, std::abs(m.slope - slope) / std::max(1.0, std::abs(slope)));
    worst = std::max(worst, std::abs(m.intercept - intercept) / std::max(1.0, std::abs(intercept)));
  }
  return {worst <= 1e-9, fmt("worst coefficient deviation %.3g over 20 datasets", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"band-width physics", band_width},
      {"packet arithmetic", packet_arithmetic},
      {"codec exhaustive round-trip", codec_exhaustive},
      {"end-to-end link", end_to_end},
      {"ISO sweep shape", iso_sweep},
      {"regression vs conventional ranging", ranging_comparison},
      {"blob-size inverse consistency", inverse_consistency},
      {"offset-column benefit", offset_benefit},
      {"two-LED decode time", decode_time},
      {"OLS oracle equivalence", ols_oracle},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("[%s] %2zu %s: %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                r.detail.c_str(), s);
    std::fflush(stdout);
    failed += !r.pass;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
