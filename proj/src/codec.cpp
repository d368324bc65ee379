#include "litalk/codec.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "litalk/error.hpp"

namespace litalk::codec {
namespace {

void check_symbols(std::span<const Symbol> symbols) {
  for (Symbol s : symbols) {
    if (s > 1) throw Error(ErrorCode::kInvalidArgument, "symbol values must be 0 or 1");
  }
}

bool matches_at(std::span<const Symbol> stream, std::size_t at,
                std::span<const Symbol> pattern) {
  if (at + pattern.size() > stream.size()) return false;
  return std::equal(pattern.begin(), pattern.end(), stream.begin() + at);
}

// Decodes n_bits Manchester pairs starting at `at`; nullopt on any invalid pair.
std::optional<Payload> try_decode_pairs(std::span<const Symbol> stream, std::size_t at,
                                        std::size_t n_bits) {
  if (at + 2 * n_bits > stream.size()) return std::nullopt;
  std::vector<std::uint8_t> bits(n_bits);
  for (std::size_t i = 0; i < n_bits; ++i) {
    const Symbol a = stream[at + 2 * i];
    const Symbol b = stream[at + 2 * i + 1];
    if (a == b) return std::nullopt;
    bits[i] = (a == 0) ? 1 : 0;
  }
  return Payload(std::move(bits));
}

// Plurality vote; ties resolve to the candidate seen first.
Payload vote(const std::vector<Payload>& candidates) {
  std::size_t best = 0;
  std::size_t best_count = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto count = static_cast<std::size_t>(
        std::count(candidates.begin(), candidates.end(), candidates[i]));
    if (count > best_count) {
      best = i;
      best_count = count;
    }
  }
  return candidates[best];
}

}  // namespace

SymbolStream::SymbolStream(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  check_symbols(symbols_);
}

SymbolStream::SymbolStream(std::initializer_list<Symbol> symbols) : symbols_(symbols) {
  check_symbols(symbols_);
}

SymbolStream SymbolStream::from_string(std::string_view text) {
  std::vector<Symbol> out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("symbol text may only contain '0' and '1', got '") + c + "'");
    }
    out.push_back(static_cast<Symbol>(c - '0'));
  }
  return SymbolStream(std::move(out));
}

std::string SymbolStream::to_string() const {
  std::string out;
  out.reserve(symbols_.size());
  for (Symbol s : symbols_) out.push_back(static_cast<char>('0' + s));
  return out;
}

void SymbolStream::append(std::span<const Symbol> more) {
  check_symbols(more);
  symbols_.insert(symbols_.end(), more.begin(), more.end());
}

SymbolStream SymbolStream::repeated(std::size_t copies) const {
  std::vector<Symbol> out;
  out.reserve(symbols_.size() * copies);
  for (std::size_t i = 0; i < copies; ++i) out.insert(out.end(), symbols_.begin(), symbols_.end());
  return SymbolStream(std::move(out));
}

SymbolStream SymbolStream::rotated(std::size_t shift) const {
  if (symbols_.empty()) return *this;
  std::vector<Symbol> out(symbols_);
  std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(shift % out.size()),
              out.end());
  return SymbolStream(std::move(out));
}

SymbolStream SymbolStream::slice(std::size_t first, std::size_t count) const {
  first = std::min(first, symbols_.size());
  count = std::min(count, symbols_.size() - first);
  return SymbolStream(std::vector<Symbol>(symbols_.begin() + static_cast<std::ptrdiff_t>(first),
                                          symbols_.begin() +
                                              static_cast<std::ptrdiff_t>(first + count)));
}

Payload::Payload(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  check_symbols(bits_);
}

Payload Payload::from_value(std::uint64_t value, std::size_t n_bits) {
  if (n_bits == 0 || n_bits > 64) {
    throw Error(ErrorCode::kInvalidArgument, "payload width must be 1..64 bits");
  }
  if (n_bits < 64 && (value >> n_bits) != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "payload value does not fit in " + std::to_string(n_bits) + " bits");
  }
  std::vector<std::uint8_t> bits(n_bits);
  for (std::size_t i = 0; i < n_bits; ++i) {
    bits[i] = static_cast<std::uint8_t>((value >> (n_bits - 1 - i)) & 1u);
  }
  return Payload(std::move(bits));
}

std::uint64_t Payload::to_value() const {
  if (bits_.size() > 64) throw Error(ErrorCode::kInvalidArgument, "payload wider than 64 bits");
  std::uint64_t value = 0;
  for (auto b : bits_) value = (value << 1) | b;
  return value;
}

std::string Payload::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  // Pad the front to a whole number of nibbles.
  std::vector<std::uint8_t> padded((4 - bits_.size() % 4) % 4, 0);
  padded.insert(padded.end(), bits_.begin(), bits_.end());
  std::string out = "0x";
  for (std::size_t i = 0; i < padded.size(); i += 4) {
    const int nibble = padded[i] << 3 | padded[i + 1] << 2 | padded[i + 2] << 1 | padded[i + 3];
    out.push_back(kDigits[nibble]);
  }
  if (padded.empty()) out.push_back('0');
  return out;
}

void FramingConfig::validate() const {
  if (preamble.empty()) throw Error(ErrorCode::kInvalidArgument, "preamble must not be empty");
  if (symbols_per_bit != 2) {
    throw Error(ErrorCode::kInvalidArgument, "Manchester framing uses 2 symbols per bit");
  }
  if (payload_bits == 0) throw Error(ErrorCode::kInvalidArgument, "payload_bits must be >= 1");
  check_symbols(preamble);
  check_symbols(sfd);
}

std::size_t packet_size(std::size_t n_bits, const FramingConfig& framing) {
  if (n_bits == 0) throw Error(ErrorCode::kInvalidArgument, "packet needs at least one data bit");
  return framing.preamble.size() + framing.sfd.size() + n_bits * framing.symbols_per_bit;
}

SymbolStream manchester_encode(const Payload& payload) {
  if (payload.size() == 0) throw Error(ErrorCode::kInvalidArgument, "empty payload");
  std::vector<Symbol> out;
  out.reserve(2 * payload.size());
  for (auto bit : payload.bits()) {
    out.push_back(bit ? 0 : 1);
    out.push_back(bit ? 1 : 0);
  }
  return SymbolStream(std::move(out));
}

Payload manchester_decode(const SymbolStream& symbols) {
  if (symbols.size() % 2 != 0) {
    throw Error(ErrorCode::kOddLength, "Manchester stream has odd length " +
                                           std::to_string(symbols.size()));
  }
  auto decoded = try_decode_pairs(symbols.symbols(), 0, symbols.size() / 2);
  if (!decoded) {
    // Locate the offending pair for the message.
    std::size_t i = 0;
    while (symbols[2 * i] != symbols[2 * i + 1]) ++i;
    throw Error(ErrorCode::kInvalidPair, "symbol pair " + std::to_string(i) + " is not a codeword");
  }
  return *decoded;
}

SymbolStream build_packet(const Payload& payload, const FramingConfig& framing) {
  framing.validate();
  if (payload.size() != framing.payload_bits) {
    throw Error(ErrorCode::kPayloadLengthMismatch,
                "payload has " + std::to_string(payload.size()) + " bits, framing expects " +
                    std::to_string(framing.payload_bits));
  }
  SymbolStream packet(framing.preamble);
  packet.append(framing.sfd);
  packet.append(manchester_encode(payload).symbols());
  return packet;
}

std::vector<std::size_t> find_preamble(const SymbolStream& stream, const FramingConfig& framing) {
  std::vector<std::size_t> hits;
  const auto s = stream.symbols();
  for (std::size_t i = 0; i + framing.preamble.size() <= s.size(); ++i) {
    if (matches_at(s, i, framing.preamble)) hits.push_back(i);
  }
  return hits;
}

Payload parse_packet(const SymbolStream& stream, const FramingConfig& framing,
                     std::size_t n_bits) {
  framing.validate();
  const auto s = stream.symbols();
  std::vector<Payload> copies;
  for (std::size_t start : find_preamble(stream, framing)) {
    const std::size_t sfd_at = start + framing.preamble.size();
    if (!matches_at(s, sfd_at, framing.sfd)) continue;
    if (auto p = try_decode_pairs(s, sfd_at + framing.sfd.size(), n_bits)) {
      copies.push_back(std::move(*p));
    }
  }
  if (copies.empty()) throw Error(ErrorCode::kNoPacket, "no complete packet in stream");
  return vote(copies);
}

Payload parse_packet_cyclic(const SymbolStream& stream, const FramingConfig& framing,
                            std::size_t n_bits) {
  framing.validate();
  const std::size_t length = packet_size(n_bits, framing);
  if (stream.size() < length) {
    throw Error(ErrorCode::kNoPacket, "stream shorter than one packet");
  }
  std::vector<Symbol> header(framing.preamble);
  header.insert(header.end(), framing.sfd.begin(), framing.sfd.end());

  std::vector<Payload> copies;
  std::vector<Symbol> unrolled(length);
  const auto s = stream.symbols();
  for (std::size_t window = 0; window + length <= s.size(); ++window) {
    for (std::size_t shift = 0; shift < length; ++shift) {
      for (std::size_t k = 0; k < length; ++k) unrolled[k] = s[window + (shift + k) % length];
      if (!matches_at(unrolled, 0, header)) continue;
      if (auto p = try_decode_pairs(unrolled, header.size(), n_bits)) {
        copies.push_back(std::move(*p));
      }
    }
  }
  if (copies.empty()) throw Error(ErrorCode::kNoPacket, "no packet rotation in any window");
  return vote(copies);
}

Payload decode_stream(const SymbolStream& stream, const FramingConfig& framing,
                      std::size_t n_bits) {
  try {
    return parse_packet(stream, framing, n_bits);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoPacket) throw;
  }
  return parse_packet_cyclic(stream, framing, n_bits);
}

}  // namespace litalk::codec
