#include "litalk/frame.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "litalk/error.hpp"

namespace litalk {

Frame::Frame(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "frame dimensions must be positive");
  }
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Frame::Frame(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "frame dimensions must be positive");
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::kInvalidArgument, "pixel count does not match width x height");
  }
}

std::uint8_t Frame::clamped(int x, int y) const {
  return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
}

std::span<const std::uint8_t> Frame::row(int y) const {
  return std::span<const std::uint8_t>(pixels_).subspan(index(0, y),
                                                        static_cast<std::size_t>(width_));
}

BinaryFrame::BinaryFrame(int width, int height) : frame_(width, height, 0) {}

BinaryFrame::BinaryFrame(Frame frame) : frame_(std::move(frame)) {
  for (auto v : frame_.pixels()) {
    if (v != 0 && v != 255) {
      throw Error(ErrorCode::kInvalidArgument, "binary frame may only hold 0 and 255");
    }
  }
}

std::size_t BinaryFrame::count_set() const {
  const auto px = frame_.pixels();
  return static_cast<std::size_t>(std::count(px.begin(), px.end(), std::uint8_t{255}));
}

namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

int parse_header_int(std::istream& in, const char* field) {
  const std::string token = next_token(in);
  if (token.empty() || !std::all_of(token.begin(), token.end(), ::isdigit)) {
    throw Error(ErrorCode::kFormat, std::string("PGM header: bad ") + field);
  }
  try {
    return std::stoi(token);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kFormat, std::string("PGM header: bad ") + field);
  }
}

}  // namespace

Frame read_pgm(std::istream& in) {
  if (next_token(in) != "P5") throw Error(ErrorCode::kFormat, "not a binary PGM (missing P5)");
  const int width = parse_header_int(in, "width");
  const int height = parse_header_int(in, "height");
  const int maxval = parse_header_int(in, "maxval");
  if (width <= 0 || height <= 0) throw Error(ErrorCode::kFormat, "PGM dimensions must be positive");
  if (maxval != 255) throw Error(ErrorCode::kFormat, "only maxval 255 is supported");
  // next_token consumed exactly one whitespace byte after maxval.
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) *
                                   static_cast<std::size_t>(height));
  in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != pixels.size()) {
    throw Error(ErrorCode::kFormat, "PGM raster truncated");
  }
  return Frame(width, height, std::move(pixels));
}

Frame read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_pgm(in);
}

void write_pgm(const Frame& frame, std::ostream& out) {
  out << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
  const auto px = frame.pixels();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

void write_pgm(const Frame& frame, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_pgm(frame, out);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace litalk
