#include "litalk/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "litalk/error.hpp"

namespace litalk::io {
namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string strip(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_number(const std::string& text, std::size_t line_no) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw Error(ErrorCode::kFormat,
                "line " + std::to_string(line_no) + ": '" + text + "' is not a number");
  }
  return value;
}

}  // namespace

std::vector<ranging::RangeSample> read_training_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kFormat, "training CSV is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (strip(line) != kTrainingCsvHeader) {
    throw Error(ErrorCode::kFormat,
                std::string("training CSV header must be '") + kTrainingCsvHeader + "'");
  }
  std::vector<ranging::RangeSample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) {
      throw Error(ErrorCode::kFormat, "line " + std::to_string(line_no) + ": expected 3 fields");
    }
    ranging::RangeSample s;
    s.distance_m = parse_number(strip(fields[0]), line_no) / 100.0;
    s.blob_diameter_px = parse_number(strip(fields[1]), line_no);
    const double iso = parse_number(strip(fields[2]), line_no);
    s.iso = static_cast<int>(iso);
    if (!(s.distance_m > 0.0) || !(s.blob_diameter_px > 0.0) || s.iso != iso || s.iso <= 0) {
      throw Error(ErrorCode::kFormat, "line " + std::to_string(line_no) +
                                          ": distance and diameter must be positive, iso integer");
    }
    samples.push_back(s);
  }
  return samples;
}

std::vector<ranging::RangeSample> read_training_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_training_csv(in);
}

void write_training_csv(const std::vector<ranging::RangeSample>& samples, std::ostream& out) {
  out << kTrainingCsvHeader << '\n';
  const auto old = out.precision(17);
  for (const auto& s : samples) {
    out << s.distance_m * 100.0 << ',' << s.blob_diameter_px << ',' << s.iso << '\n';
  }
  out.precision(old);
}

std::string model_to_json(const ranging::RangeModel& model) {
  json j;
  j["slope"] = model.slope;
  j["intercept"] = model.intercept;
  j["feature_kind"] = std::string(ranging::to_string(model.feature_kind));
  j["iso"] = model.iso;
  j["trained_on"] = model.trained_on;
  return j.dump(2);
}

ranging::RangeModel model_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    ranging::RangeModel model;
    model.slope = j.at("slope").get<double>();
    model.intercept = j.at("intercept").get<double>();
    model.feature_kind = ranging::parse_feature_kind(j.at("feature_kind").get<std::string>());
    model.iso = j.at("iso").get<int>();
    model.trained_on = j.at("trained_on").get<std::size_t>();
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("model JSON: ") + e.what());
  }
}

void save_model(const ranging::RangeModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << model_to_json(model) << '\n';
}

ranging::RangeModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_text_file(path));
}

std::size_t DecodeReport::decoded_count() const {
  return static_cast<std::size_t>(std::count_if(
      blobs.begin(), blobs.end(), [](const BlobRecord& b) { return b.payload_hex.has_value(); }));
}

std::string report_to_json(const DecodeReport& report) {
  json blobs = json::array();
  for (const auto& b : report.blobs) {
    json r;
    r["center_x"] = b.center_x;
    r["center_y"] = b.center_y;
    r["radius_px"] = b.radius_px;
    r["payload"] = b.payload_hex ? json(*b.payload_hex) : json(nullptr);
    r["failure"] = b.failure ? json(*b.failure) : json(nullptr);
    r["symbols"] = b.symbols;
    r["conventional_distance_cm"] = b.conventional_distance_cm;
    if (b.regression_distance_cm) r["regression_distance_cm"] = *b.regression_distance_cm;
    r["decode_time_ms"] = b.decode_time_ms;
    blobs.push_back(std::move(r));
  }
  json j;
  j["width"] = report.width;
  j["height"] = report.height;
  j["decode_time_ms"] = report.decode_time_ms;
  j["blobs"] = std::move(blobs);
  return j.dump(2);
}

DecodeReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    DecodeReport report;
    report.width = j.at("width").get<int>();
    report.height = j.at("height").get<int>();
    report.decode_time_ms = j.at("decode_time_ms").get<double>();
    for (const auto& r : j.at("blobs")) {
      BlobRecord b;
      b.center_x = r.at("center_x").get<double>();
      b.center_y = r.at("center_y").get<double>();
      b.radius_px = r.at("radius_px").get<double>();
      if (!r.at("payload").is_null()) b.payload_hex = r.at("payload").get<std::string>();
      if (!r.at("failure").is_null()) b.failure = r.at("failure").get<std::string>();
      b.symbols = r.at("symbols").get<std::string>();
      b.conventional_distance_cm = r.at("conventional_distance_cm").get<double>();
      if (r.contains("regression_distance_cm")) {
        b.regression_distance_cm = r.at("regression_distance_cm").get<double>();
      }
      b.decode_time_ms = r.at("decode_time_ms").get<double>();
      report.blobs.push_back(std::move(b));
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("report JSON: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace litalk::io
