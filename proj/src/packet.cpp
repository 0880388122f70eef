#include "dragoncast/packet.hpp"

#include <string>

namespace dragoncast {

void payload_add_scaled(std::vector<std::uint8_t>& dst,
                        std::span<const std::uint8_t> src, std::uint8_t factor,
                        const GaloisField& gf) {
  if (dst.size() != src.size())
    throw std::invalid_argument("payload length mismatch");
  if (factor == 0) return;
  if (factor == 1) {  // xor path is exact in characteristic 2
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
    return;
  }
  for (std::size_t i = 0; i < dst.size(); ++i)
    dst[i] ^= gf.mul(factor, src[i]);
}

void payload_scale(std::vector<std::uint8_t>& dst, std::uint8_t factor,
                   const GaloisField& gf) {
  if (factor == 0) throw std::invalid_argument("scaling a payload by zero");
  if (factor == 1) return;
  for (auto& b : dst) b = gf.mul(factor, b);
}

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::uint16_t get_u16(std::span<const std::uint8_t> in, std::size_t at) {
  return static_cast<std::uint16_t>(in[at] | (in[at + 1] << 8));
}

constexpr std::size_t kFixedPrefix = 6;   // field byte + D + window_lo + window_len
constexpr std::size_t kHeaderBytes = 9;   // piggyback header

}  // namespace

std::vector<std::uint8_t> serialize_packet(const CodedPacket& pkt) {
  const FieldOrder order = pkt.encoding.order();
  const std::uint16_t d = pkt.encoding.generation_size();

  std::uint16_t lo = 0;
  std::uint16_t len = 0;
  if (!pkt.header.is_control) {
    if (pkt.encoding.is_zero())
      throw std::invalid_argument("data packet with a zero encoding vector");
    const PacketSupport s = support(pkt.encoding);
    lo = s.lowest;
    const std::uint32_t span = s.highest - s.lowest + 1u;
    if (span > 255)
      throw std::length_error("coefficient span " + std::to_string(span) +
                              " exceeds the 255-coefficient wire limit");
    len = static_cast<std::uint16_t>(span);
  }

  std::vector<std::uint8_t> out;
  out.reserve(kFixedPrefix + kHeaderBytes + len + pkt.payload.size());
  out.push_back(order == FieldOrder::gf2 ? 1 : 8);
  put_u16(out, d);
  put_u16(out, lo);
  out.push_back(static_cast<std::uint8_t>(len));

  if (order == FieldOrder::gf2) {
    std::uint8_t acc = 0;
    for (std::uint16_t k = 0; k < len; ++k) {
      if (pkt.encoding.coeff(static_cast<std::uint16_t>(lo + k)))
        acc |= static_cast<std::uint8_t>(1u << (k & 7u));
      if ((k & 7u) == 7u) {
        out.push_back(acc);
        acc = 0;
      }
    }
    if (len & 7u) out.push_back(acc);
  } else {
    for (std::uint16_t k = 0; k < len; ++k)
      out.push_back(pkt.encoding.coeff(static_cast<std::uint16_t>(lo + k)));
  }

  put_u16(out, pkt.header.sender_id);
  put_u16(out, pkt.header.sender_rank);
  put_u16(out, pkt.header.sender_low_index);
  const Micros ms = pkt.header.lifetime / 1000;
  if (ms <= 0 || ms > 0xffff)
    throw std::invalid_argument("header lifetime outside (0, 65535] ms");
  put_u16(out, static_cast<std::uint16_t>(ms));
  out.push_back(pkt.header.is_control ? 1 : 0);

  if (pkt.header.is_control) {
    if (!pkt.payload.empty())
      throw std::invalid_argument("control packet with a payload");
  } else {
    out.insert(out.end(), pkt.payload.begin(), pkt.payload.end());
  }
  return out;
}

CodedPacket parse_packet(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFixedPrefix + kHeaderBytes)
    throw PacketFormatError("packet shorter than fixed prefix");

  const std::uint8_t field_bits = bytes[0];
  if (field_bits != 1 && field_bits != 8)
    throw PacketFormatError("unknown coefficient width " + std::to_string(field_bits));
  const FieldOrder order = field_bits == 1 ? FieldOrder::gf2 : FieldOrder::gf256;

  const std::uint16_t d = get_u16(bytes, 1);
  if (d == 0) throw PacketFormatError("zero generation size");
  const std::uint16_t lo = get_u16(bytes, 3);
  const std::uint16_t len = bytes[5];

  const std::size_t coeff_bytes =
      order == FieldOrder::gf2 ? (len + 7u) / 8u : len;
  const std::size_t header_at = kFixedPrefix + coeff_bytes;
  if (bytes.size() < header_at + kHeaderBytes)
    throw PacketFormatError("packet truncated inside coefficient block");

  CodedPacket pkt{EncodingVector(order, d), {}, {}};
  pkt.header.sender_id = get_u16(bytes, header_at);
  pkt.header.sender_rank = get_u16(bytes, header_at + 2);
  pkt.header.sender_low_index = get_u16(bytes, header_at + 4);
  const std::uint16_t lifetime_ms = get_u16(bytes, header_at + 6);
  const std::uint8_t flags = bytes[header_at + 8];
  if (flags > 1) throw PacketFormatError("unknown header flags");
  pkt.header.is_control = flags == 1;
  if (lifetime_ms == 0) throw PacketFormatError("zero header lifetime");
  pkt.header.lifetime = static_cast<Micros>(lifetime_ms) * 1000;
  if (pkt.header.sender_rank > d)
    throw PacketFormatError("advertised rank exceeds generation size");
  if (pkt.header.sender_low_index > d)
    throw PacketFormatError("advertised low index exceeds generation size");

  if (pkt.header.is_control) {
    if (lo != 0 || len != 0)
      throw PacketFormatError("control packet with a coefficient block");
    if (bytes.size() != header_at + kHeaderBytes)
      throw PacketFormatError("control packet with trailing bytes");
    return pkt;
  }

  if (len == 0) throw PacketFormatError("data packet without coefficients");
  if (lo == 0 || static_cast<std::uint32_t>(lo) + len - 1u > d)
    throw PacketFormatError("coefficient window outside [1, D]");

  for (std::uint16_t k = 0; k < len; ++k) {
    std::uint8_t c;
    if (order == FieldOrder::gf2)
      c = (bytes[kFixedPrefix + (k >> 3)] >> (k & 7u)) & 1u;
    else
      c = bytes[kFixedPrefix + k];
    if (c) pkt.encoding.set_coeff(static_cast<std::uint16_t>(lo + k), c);
  }
  if (pkt.encoding.is_zero())
    throw PacketFormatError("data packet with a zero encoding vector");

  pkt.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header_at + kHeaderBytes),
                     bytes.end());
  return pkt;
}

}  // namespace dragoncast
