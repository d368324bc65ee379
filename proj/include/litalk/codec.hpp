#pragma once

// Packet framing for the LED link.
//
// A packet is   preamble | sfd | manchester(payload)
//               1 0 0 0 1  0 1   (bit 0 -> 1 0, bit 1 -> 0 1)
//
// Symbol 1 means the light is on, 0 means off. Manchester codewords never
// produce more than two identical symbols in a row, so the preamble's run of
// three zeros cannot appear inside the payload.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace litalk::codec {

using Symbol = std::uint8_t;

/// Channel symbols at the modulation rate, one entry per symbol slot.
class SymbolStream {
 public:
  SymbolStream() = default;
  explicit SymbolStream(std::vector<Symbol> symbols);
  SymbolStream(std::initializer_list<Symbol> symbols);

  /// Parses the '0'/'1' text form ("10001" for the preamble).
  static SymbolStream from_string(std::string_view text);
  std::string to_string() const;

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  auto begin() const noexcept { return symbols_.begin(); }
  auto end() const noexcept { return symbols_.end(); }

  void append(std::span<const Symbol> more);
  /// Returns the stream repeated `copies` times back to back.
  SymbolStream repeated(std::size_t copies) const;
  /// Cyclic left rotation by `shift` symbols.
  SymbolStream rotated(std::size_t shift) const;
  SymbolStream slice(std::size_t first, std::size_t count) const;

  friend bool operator==(const SymbolStream&, const SymbolStream&) = default;

 private:
  std::vector<Symbol> symbols_;
};

/// Data bits carried by one packet, most significant bit first.
class Payload {
 public:
  Payload() = default;
  explicit Payload(std::vector<std::uint8_t> bits);

  /// Big-endian bit expansion of `value` into `n_bits` bits. Throws when the
  /// value does not fit.
  static Payload from_value(std::uint64_t value, std::size_t n_bits);

  std::uint64_t to_value() const;
  /// Lowercase hex with 0x prefix, e.g. "0x2a".
  std::string to_hex() const;

  std::size_t size() const noexcept { return bits_.size(); }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  friend bool operator==(const Payload&, const Payload&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct FramingConfig {
  std::vector<Symbol> preamble{1, 0, 0, 0, 1};
  std::vector<Symbol> sfd{0, 1};
  std::size_t symbols_per_bit = 2;
  std::size_t payload_bits = 8;

  /// Throws when the framing is not the Manchester layout this codec speaks.
  void validate() const;
};

/// preamble + sfd + n_bits * symbols_per_bit.
std::size_t packet_size(std::size_t n_bits, const FramingConfig& framing = {});

SymbolStream manchester_encode(const Payload& payload);
Payload manchester_decode(const SymbolStream& symbols);

SymbolStream build_packet(const Payload& payload, const FramingConfig& framing = {});

/// Every index where the preamble starts, ascending.
std::vector<std::size_t> find_preamble(const SymbolStream& stream,
                                       const FramingConfig& framing = {});

/// Decodes every complete packet in the stream (preamble, sfd, valid
/// codewords) and returns the payload seen most often; ties go to the
/// earliest copy. Throws kNoPacket when nothing decodes.
Payload parse_packet(const SymbolStream& stream, const FramingConfig& framing,
                     std::size_t n_bits);

/// Reassembles a packet from any packet_size() consecutive symbols of a
/// looping transmission: each window is read cyclically and must hold a
/// rotation of a valid packet. Majority vote over all windows.
Payload parse_packet_cyclic(const SymbolStream& stream, const FramingConfig& framing,
                            std::size_t n_bits);

/// parse_packet, falling back to parse_packet_cyclic when no complete packet
/// is present.
Payload decode_stream(const SymbolStream& stream, const FramingConfig& framing,
                      std::size_t n_bits);

}  // namespace litalk::codec
