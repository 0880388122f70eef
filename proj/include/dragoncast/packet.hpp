#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "dragoncast/encoding_vector.hpp"
#include "dragoncast/types.hpp"

namespace dragoncast {

struct SourcePacket {
  std::uint16_t index = 0;  // 1-based position in the generation
  std::vector<std::uint8_t> payload;
};

// Rank advertisement carried by every broadcast. rank == D acts as an ACK,
// rank < D as a NACK; lifetime tells receivers how long to trust the entry.
struct PiggybackHeader {
  NodeId sender_id = 0;
  std::uint16_t sender_rank = 0;
  std::uint16_t sender_low_index = 0;  // decoded prefix of the sender
  Micros lifetime = 0;                 // validity horizon of this advertisement
  bool is_control = false;             // payload-free advertisement packet
};

struct CodedPacket {
  EncodingVector encoding;
  std::vector<std::uint8_t> payload;
  PiggybackHeader header;
};

// dst += factor * src over the session field, element-wise on payload bytes.
void payload_add_scaled(std::vector<std::uint8_t>& dst,
                        std::span<const std::uint8_t> src, std::uint8_t factor,
                        const GaloisField& gf);

// dst *= factor (factor nonzero).
void payload_scale(std::vector<std::uint8_t>& dst, std::uint8_t factor,
                   const GaloisField& gf);

struct PacketFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wire layout, little-endian:
//   [0]    coefficient width in bits (1 = GF(2), 8 = GF(256))
//   [1:2]  generation size D
//   [3:4]  window_lo: first source index covered by the coefficient block
//          (0 for control packets)
//   [5]    window_len: number of coefficients in the block (0 for control)
//   [...]  dense coefficients over [window_lo, window_lo + window_len):
//          bit-packed for GF(2) (ceil(len/8) bytes), one byte each for GF(256)
//   [...]  piggyback header: sender_id u16 | sender_rank u16 |
//          sender_low_index u16 | lifetime in ms u16 | flags u8 (bit0=control)
//   [...]  payload (empty for control packets)
//
// The one-byte window_len caps the dense span at 255 coefficients; configs
// whose window exceeds that are rejected up front.
std::vector<std::uint8_t> serialize_packet(const CodedPacket& pkt);

// Parses and validates; throws PacketFormatError on malformed input.
CodedPacket parse_packet(std::span<const std::uint8_t> bytes);

}  // namespace dragoncast
