#include "litalk/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "litalk/error.hpp"
#include "litalk/rng.hpp"

namespace litalk::sweep {
namespace {

const ranging::RangeModel* model_for(const SweepConfig& config, int iso) {
  for (const auto& m : config.models) {
    if (m.iso == iso) return &m;
  }
  return nullptr;
}

struct Task {
  std::size_t iso_index;
  std::size_t distance_index;
  int trial;
};

}  // namespace

void SweepConfig::validate() const {
  if (isos.empty()) throw Error(ErrorCode::kInvalidArgument, "at least one ISO is required");
  for (int iso : isos) {
    if (iso < 100) throw Error(ErrorCode::kInvalidArgument, "iso must be >= 100");
  }
  if (!(dmin_cm > 0.0) || !(dmin_cm < dmax_cm)) {
    throw Error(ErrorCode::kInvalidArgument, "distances must satisfy 0 < dmin < dmax");
  }
  if (!(step_cm > 0.0)) throw Error(ErrorCode::kInvalidArgument, "step must be positive");
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "noise must be >= 0");
  tx.validate();
  cam.validate();
}

std::vector<double> SweepConfig::distances_cm() const {
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double d = dmin_cm + k * step_cm;
    if (d > dmax_cm + 1e-9) break;
    out.push_back(d);
  }
  return out;
}

Trial run_trial(const SweepConfig& config, int iso, double distance_cm, std::uint64_t seed) {
  camera::CameraParams cam = config.cam;
  cam.iso = iso;
  GaussianSource rng(seed);
  const std::uint64_t value = derive_seed(seed, {0xB17});
  const std::uint64_t mask =
      config.payload_bits >= 64 ? ~0ULL : ((1ULL << config.payload_bits) - 1);
  codec::FramingConfig framing;
  framing.payload_bits = config.payload_bits;
  const auto payload = codec::Payload::from_value(value & mask, config.payload_bits);
  const auto packet = codec::build_packet(payload, framing);
  const camera::LightWaveform wave(packet, config.tx);
  const double phase = rng.uniform() * wave.period_s();

  camera::SynthesisOptions options;
  options.noise_sigma = config.noise_sigma;
  options.seed = derive_seed(seed, {0xF4A3E});
  const camera::LinkGeometry geom{distance_cm / 100.0, std::nullopt};
  const Frame frame = camera::synthesize_frame(packet, geom, config.tx, cam, options, phase);

  DecoderConfig decoder;
  decoder.mod_freq_hz = config.tx.mod_freq_hz;
  decoder.readout_time_s = cam.readout_time_s;
  decoder.payload_bits = config.payload_bits;
  const auto results = decode_frame(frame, decoder);

  Trial trial;
  if (!results.empty()) {
    trial.diameter_px = results.front().blob.diameter_px();
    trial.decoded = results.front().payload.has_value() && *results.front().payload == payload;
  }
  return trial;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  config.validate();
  const auto distances = config.distances_cm();
  const std::size_t per_iso = distances.size() * static_cast<std::size_t>(config.trials);

  std::vector<Task> tasks;
  for (std::size_t i = 0; i < config.isos.size(); ++i) {
    for (std::size_t d = 0; d < distances.size(); ++d) {
      for (int t = 0; t < config.trials; ++t) tasks.push_back({i, d, t});
    }
  }
  std::vector<Trial> trials(tasks.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t k = first; k < tasks.size(); k += stride) {
      const Task& task = tasks[k];
      const int iso = config.isos[task.iso_index];
      const std::uint64_t seed =
          derive_seed(config.seed, {static_cast<std::uint64_t>(iso), task.distance_index,
                                    static_cast<std::uint64_t>(task.trial)});
      trials[k] = run_trial(config, iso, distances[task.distance_index], seed);
    }
  };
  const unsigned threads = std::max(1u, config.threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }

  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < config.isos.size(); ++i) {
    camera::CameraParams cam = config.cam;
    cam.iso = config.isos[i];
    const auto* model = model_for(config, cam.iso);
    for (std::size_t d = 0; d < distances.size(); ++d) {
      SweepRow row;
      row.iso = cam.iso;
      row.distance_cm = distances[d];
      double sum_diameter = 0.0;
      double sum_conv = 0.0;
      double sum_reg = 0.0;
      int seen = 0;
      int decoded = 0;
      for (int t = 0; t < config.trials; ++t) {
        const Trial& trial = trials[i * per_iso + d * config.trials + static_cast<std::size_t>(t)];
        decoded += trial.decoded ? 1 : 0;
        if (!trial.diameter_px) continue;
        ++seen;
        sum_diameter += *trial.diameter_px;
        sum_conv += std::abs(ranging::conventional_distance(*trial.diameter_px, config.tx, cam) *
                                 100.0 - row.distance_cm);
        if (model) {
          sum_reg += std::abs(ranging::predict_distance(*model, *trial.diameter_px) * 100.0 -
                              row.distance_cm);
        }
      }
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.decode_rate = static_cast<double>(decoded) / config.trials;
      row.mean_diameter_px = seen > 0 ? sum_diameter / seen : nan;
      row.conv_err_cm = seen > 0 ? sum_conv / seen : nan;
      if (model) row.reg_err_cm = seen > 0 ? sum_reg / seen : nan;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << kSweepCsvHeader << '\n';
  const auto old = out.precision(10);
  for (const auto& r : rows) {
    out << r.iso << ',' << r.distance_cm << ',' << r.mean_diameter_px << ',' << r.decode_rate
        << ',' << r.conv_err_cm << ',';
    if (r.reg_err_cm) out << *r.reg_err_cm;
    out << '\n';
  }
  out.precision(old);
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader) {
    throw Error(ErrorCode::kFormat, std::string("sweep CSV header must be '") +
                                        kSweepCsvHeader + "'");
  }
  auto number = [](const std::string& s) {
    if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw Error(ErrorCode::kFormat, "sweep CSV: bad number '" + s + "'");
    }
    return v;
  };
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 6) throw Error(ErrorCode::kFormat, "sweep CSV: expected 6 fields");
    SweepRow r;
    r.iso = static_cast<int>(number(f[0]));
    r.distance_cm = number(f[1]);
    r.mean_diameter_px = number(f[2]);
    r.decode_rate = number(f[3]);
    r.conv_err_cm = number(f[4]);
    if (!f[5].empty()) r.reg_err_cm = number(f[5]);
    rows.push_back(r);
  }
  return rows;
}

std::optional<double> crossing_distance_cm(const std::vector<SweepRow>& rows, int iso,
                                           double threshold_px) {
  const SweepRow* prev = nullptr;
  for (const auto& r : rows) {
    if (r.iso != iso || std::isnan(r.mean_diameter_px)) continue;
    if (r.mean_diameter_px < threshold_px) {
      if (prev == nullptr) return r.distance_cm;
      const double t = (prev->mean_diameter_px - threshold_px) /
                       (prev->mean_diameter_px - r.mean_diameter_px);
      return prev->distance_cm + t * (r.distance_cm - prev->distance_cm);
    }
    prev = &r;
  }
  return std::nullopt;
}

}  // namespace litalk::sweep
