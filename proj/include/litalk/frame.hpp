#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace litalk {

/// 8-bit grayscale raster, row-major.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, std::uint8_t fill = 0);
  Frame(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return pixels_.empty(); }

  std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
  std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }
  /// Clamps coordinates to the frame (replicated border).
  std::uint8_t clamped(int x, int y) const;

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }
  std::span<const std::uint8_t> row(int y) const;

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Frame restricted to the values 0 and 255.
class BinaryFrame {
 public:
  BinaryFrame() = default;
  BinaryFrame(int width, int height);
  /// Throws kInvalidArgument when any pixel is not 0 or 255.
  explicit BinaryFrame(Frame frame);

  int width() const noexcept { return frame_.width(); }
  int height() const noexcept { return frame_.height(); }
  bool is_set(int x, int y) const { return frame_.at(x, y) != 0; }
  void set(int x, int y, bool on) { frame_.at(x, y) = on ? 255 : 0; }
  std::size_t count_set() const;

  const Frame& frame() const noexcept { return frame_; }

  friend bool operator==(const BinaryFrame&, const BinaryFrame&) = default;

 private:
  Frame frame_;
};

// Binary PGM (P5, maxval 255). Comments in the header are accepted on read.
Frame read_pgm(std::istream& in);
Frame read_pgm(const std::filesystem::path& path);
void write_pgm(const Frame& frame, std::ostream& out);
void write_pgm(const Frame& frame, const std::filesystem::path& path);

}  // namespace litalk
