#include "litalk/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "litalk/camera.hpp"
#include "litalk/codec.hpp"
#include "litalk/decoder.hpp"
#include "litalk/error.hpp"
#include "litalk/io.hpp"
#include "litalk/ranging.hpp"
#include "litalk/sweep.hpp"

namespace litalk::cli {
namespace {

std::uint64_t parse_hex(std::string text) {
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) text.erase(0, 2);
  if (text.empty() || text.size() > 16 ||
      text.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "payload must be hexadecimal, e.g. 0x2a");
  }
  return std::stoull(text, nullptr, 16);
}

codec::Payload payload_from_flags(const std::string& hex, std::size_t bits) {
  return codec::Payload::from_value(parse_hex(hex), bits);
}

int exit_code_for(const Error& e) {
  return (e.code() == ErrorCode::kIo || e.code() == ErrorCode::kFormat) ? kExitIo : kExitUsage;
}

struct EncodeOptions {
  std::string payload;
  std::size_t bits = 8;
};

struct SimulateOptions {
  std::vector<std::string> payloads;
  std::size_t bits = 8;
  double distance_cm = 20.0;
  int iso = 100;
  double freq_hz = 2500.0;
  double duty = 0.40;
  double noise = 1.0;
  std::uint64_t seed = 42;
  double phase_us = 0.0;
  bool no_bloom = false;
  std::string out;
};

struct DecodeOptions {
  std::string in;
  double freq_hz = 2500.0;
  double readout_us = 1e6 / 60000.0;
  std::string model;
  double offset = 0.5;
  std::size_t bits = 8;
  std::string debug_dir;
};

struct TrainOptions {
  std::string csv;
  int iso = 0;
  std::string feature = "reciprocal";
  std::string out;
};

struct RangeOptions {
  double diameter_px = 0.0;
  std::string model;
};

struct SweepOptions {
  std::vector<int> isos{100, 400, 800};
  double dmin_cm = 10.0;
  double dmax_cm = 100.0;
  double step_cm = 5.0;
  int trials = 3;
  std::uint64_t seed = 1;
  double noise = 1.0;
  std::vector<std::string> models;
  unsigned threads = 1;
  std::string out;
};

int cmd_encode(const EncodeOptions& o, std::ostream& out) {
  codec::FramingConfig framing;
  framing.payload_bits = o.bits;
  out << codec::build_packet(payload_from_flags(o.payload, o.bits), framing).to_string() << '\n';
  return kExitOk;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& err) {
  camera::TxParams tx;
  tx.mod_freq_hz = o.freq_hz;
  tx.duty_cycle = o.duty;
  camera::CameraParams cam;
  cam.iso = o.iso;
  codec::FramingConfig framing;
  framing.payload_bits = o.bits;

  // LEDs side by side across the frame, with staggered transmitter clocks.
  std::vector<camera::LightSource> sources;
  const auto n = static_cast<double>(o.payloads.size());
  for (std::size_t i = 0; i < o.payloads.size(); ++i) {
    camera::LightSource s;
    s.stream = codec::build_packet(payload_from_flags(o.payloads[i], o.bits), framing);
    s.geometry.distance_m = o.distance_cm / 100.0;
    s.geometry.center_px = camera::PixelPoint{(static_cast<double>(i) + 0.5) * cam.width_px / n - 0.5,
                                              0.5 * (cam.height_px - 1)};
    s.phase_s = (o.phase_us + 137.0 * static_cast<double>(i)) * 1e-6;
    sources.push_back(std::move(s));
  }
  camera::SynthesisOptions options;
  options.noise_sigma = o.noise;
  options.seed = o.seed;
  options.bloom.enabled = !o.no_bloom;

  const double diameter =
      camera::expected_blob_diameter_px({o.distance_cm / 100.0, std::nullopt}, tx, cam);
  err << "expected blob diameter: " << diameter << " px\n";
  err << "decodability bound: " << camera::decodability_bound_px(o.bits, tx, cam, framing)
      << " px\n";
  const Frame frame = camera::synthesize_scene(sources, tx, cam, options);
  write_pgm(frame, o.out);
  return kExitOk;
}

int cmd_decode(const DecodeOptions& o, std::ostream& out, std::ostream& err) {
  using Clock = std::chrono::steady_clock;
  const Frame frame = read_pgm(o.in);
  std::optional<ranging::RangeModel> model;
  if (!o.model.empty()) model = io::load_model(o.model);

  DecoderConfig config;
  config.mod_freq_hz = o.freq_hz;
  config.readout_time_s = o.readout_us * 1e-6;
  config.offset_fraction = o.offset;
  config.payload_bits = o.bits;

  PipelineStages stages;
  const auto start = Clock::now();
  const auto results = decode_frame(frame, config, o.debug_dir.empty() ? nullptr : &stages);
  const double elapsed = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  camera::TxParams tx;
  tx.mod_freq_hz = o.freq_hz;
  camera::CameraParams cam;
  cam.readout_time_s = config.readout_time_s;

  io::DecodeReport report;
  report.width = frame.width();
  report.height = frame.height();
  report.decode_time_ms = elapsed;
  for (const auto& r : results) {
    io::BlobRecord b;
    b.center_x = r.blob.center_x;
    b.center_y = r.blob.center_y;
    b.radius_px = r.blob.radius_px;
    if (r.payload) {
      b.payload_hex = r.payload->to_hex();
    } else {
      b.failure = r.failure;
    }
    b.symbols = r.symbols.to_string();
    b.conventional_distance_cm =
        ranging::conventional_distance(r.blob.diameter_px(), tx, cam) * 100.0;
    if (model) {
      b.regression_distance_cm = ranging::predict_distance(*model, r.blob.diameter_px()) * 100.0;
    }
    b.decode_time_ms = r.decode_time_ms;
    report.blobs.push_back(std::move(b));
  }
  out << io::report_to_json(report) << '\n';

  if (!o.debug_dir.empty()) {
    const std::filesystem::path dir(o.debug_dir);
    std::filesystem::create_directories(dir);
    write_pgm(stages.contrasted, dir / "1_contrast.pgm");
    write_pgm(stages.blurred, dir / "2_blur.pgm");
    write_pgm(stages.binary.frame(), dir / "3_threshold.pgm");
    err << "debug frames written to " << dir.string() << '\n';
  }
  return report.decoded_count() > 0 ? kExitOk : kExitUndecoded;
}

int cmd_train(const TrainOptions& o, std::ostream& out) {
  auto samples = io::read_training_csv(o.csv);
  const int iso = o.iso > 0 ? o.iso : (samples.empty() ? 100 : samples.front().iso);
  std::erase_if(samples, [iso](const ranging::RangeSample& s) { return s.iso != iso; });
  if (samples.size() < 2) {
    throw Error(ErrorCode::kDegenerateFit,
                "need at least two rows at iso " + std::to_string(iso));
  }
  const auto model = ranging::fit_regression(samples, ranging::parse_feature_kind(o.feature));
  std::vector<double> predicted;
  std::vector<double> truth;
  for (const auto& s : samples) {
    predicted.push_back(ranging::predict_distance(model, s.blob_diameter_px) * 100.0);
    truth.push_back(s.distance_m * 100.0);
  }
  io::save_model(model, o.out);
  out << std::setprecision(12) << "training MSE: " << ranging::mean_squared_error(predicted, truth)
      << " cm^2 over " << samples.size() << " samples\n";
  return kExitOk;
}

int cmd_range(const RangeOptions& o, std::ostream& out) {
  const camera::TxParams tx;
  const camera::CameraParams cam;
  nlohmann::json j;
  j["blob_diameter_px"] = o.diameter_px;
  j["conventional_distance_cm"] = ranging::conventional_distance(o.diameter_px, tx, cam) * 100.0;
  if (!o.model.empty()) {
    const auto model = io::load_model(o.model);
    j["regression_distance_cm"] = ranging::predict_distance(model, o.diameter_px) * 100.0;
    j["model_iso"] = model.iso;
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_sweep(const SweepOptions& o, std::ostream& out) {
  sweep::SweepConfig config;
  config.isos = o.isos;
  config.dmin_cm = o.dmin_cm;
  config.dmax_cm = o.dmax_cm;
  config.step_cm = o.step_cm;
  config.trials = o.trials;
  config.seed = o.seed;
  config.noise_sigma = o.noise;
  config.threads = o.threads;
  for (const auto& path : o.models) config.models.push_back(io::load_model(path));
  const auto rows = sweep::run_sweep(config);
  if (o.out.empty() || o.out == "-") {
    sweep::write_sweep_csv(rows, out);
  } else {
    std::ofstream file(o.out);
    if (!file) throw Error(ErrorCode::kIo, "cannot write " + o.out);
    sweep::write_sweep_csv(rows, file);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"LED-to-camera link: encode, simulate, decode and range"};
  app.require_subcommand(1);

  EncodeOptions enc;
  auto* encode = app.add_subcommand("encode", "Print the packet for a payload as a 0/1 string");
  encode->add_option("--payload", enc.payload, "Payload in hex")->required();
  encode->add_option("--bits", enc.bits, "Payload width N")->check(CLI::Range(1, 64));

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Synthesize a rolling-shutter frame (PGM)");
  simulate->add_option("--payload", sim.payloads, "Payload in hex; repeat for more LEDs")
      ->required();
  simulate->add_option("--bits", sim.bits, "Payload width N")->check(CLI::Range(1, 64));
  simulate->add_option("--distance-cm", sim.distance_cm, "Link distance");
  simulate->add_option("--iso", sim.iso, "Film speed")->check(CLI::Range(100, 1 << 20));
  simulate->add_option("--freq-hz", sim.freq_hz, "Modulation frequency");
  simulate->add_option("--duty", sim.duty, "Duty cycle");
  simulate->add_option("--noise", sim.noise, "Noise sigma at ISO 100");
  simulate->add_option("--seed", sim.seed, "Noise seed");
  simulate->add_option("--phase-us", sim.phase_us, "Transmitter clock offset");
  simulate->add_flag("--no-bloom", sim.no_bloom, "Disable center overexposure");
  simulate->add_option("--out", sim.out, "Output PGM")->required();

  DecodeOptions dec;
  auto* decode = app.add_subcommand("decode", "Decode every LED in a PGM frame; JSON report");
  decode->add_option("--in", dec.in, "Input PGM")->required();
  decode->add_option("--freq-hz", dec.freq_hz, "Modulation frequency");
  decode->add_option("--readout-us", dec.readout_us, "Row readout time");
  decode->add_option("--model", dec.model, "Regression model JSON");
  decode->add_option("--offset", dec.offset, "Column offset as a fraction of the radius");
  decode->add_option("--bits", dec.bits, "Payload width N")->check(CLI::Range(1, 64));
  decode->add_option("--debug-dir", dec.debug_dir, "Write intermediate frames here");

  TrainOptions tr;
  auto* train = app.add_subcommand("train", "Fit a distance regression model from CSV");
  train->add_option("--csv", tr.csv, "distance_cm,blob_diameter_px,iso")->required();
  train->add_option("--iso", tr.iso, "Use rows at this ISO (default: first row's)");
  train->add_option("--feature", tr.feature, "reciprocal | raw");
  train->add_option("--out", tr.out, "Model JSON")->required();

  RangeOptions rg;
  auto* range = app.add_subcommand("range", "Distance estimate for one blob diameter");
  range->add_option("--diameter-px", rg.diameter_px, "Blob diameter")->required();
  range->add_option("--model", rg.model, "Regression model JSON");

  SweepOptions sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Blob size / decode / ranging sweep; CSV");
  sweep_cmd->add_option("--iso", sw.isos, "ISO list")->delimiter(',');
  sweep_cmd->add_option("--dmin-cm", sw.dmin_cm, "First distance");
  sweep_cmd->add_option("--dmax-cm", sw.dmax_cm, "Last distance");
  sweep_cmd->add_option("--step-cm", sw.step_cm, "Distance step");
  sweep_cmd->add_option("--trials", sw.trials, "Frames per grid point");
  sweep_cmd->add_option("--seed", sw.seed, "Base seed");
  sweep_cmd->add_option("--noise", sw.noise, "Noise sigma at ISO 100");
  sweep_cmd->add_option("--model", sw.models, "Regression model JSON; repeat per ISO");
  sweep_cmd->add_option("--threads", sw.threads, "Worker threads");
  sweep_cmd->add_option("--out", sw.out, "Output CSV ('-' for stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*encode) return cmd_encode(enc, out);
    if (*simulate) return cmd_simulate(sim, err);
    if (*decode) return cmd_decode(dec, out, err);
    if (*train) return cmd_train(tr, out);
    if (*range) return cmd_range(rg, out);
    if (*sweep_cmd) return cmd_sweep(sw, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace litalk::cli
