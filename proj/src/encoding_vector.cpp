#include "dragoncast/encoding_vector.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace dragoncast {

EncodingVector::EncodingVector(FieldOrder order, std::uint16_t generation_size)
    : order_(order), gen_size_(generation_size) {
  if (generation_size == 0)
    throw std::invalid_argument("generation size must be positive");
  if (order_ == FieldOrder::gf2)
    bits_.assign((gen_size_ + 63u) / 64u, 0);
  else
    bytes_.assign(gen_size_, 0);
}

EncodingVector EncodingVector::unit(FieldOrder order, std::uint16_t generation_size,
                                    std::uint16_t index) {
  EncodingVector v(order, generation_size);
  v.set_coeff(index, 1);
  return v;
}

void EncodingVector::check_index(std::uint16_t index) const {
  if (index == 0 || index > gen_size_)
    throw std::invalid_argument("source index " + std::to_string(index) +
                                " outside [1, " + std::to_string(gen_size_) + "]");
}

std::uint8_t EncodingVector::coeff(std::uint16_t index) const {
  check_index(index);
  const std::size_t i = index - 1u;
  if (order_ == FieldOrder::gf2)
    return static_cast<std::uint8_t>((bits_[i >> 6] >> (i & 63u)) & 1u);
  return bytes_[i];
}

void EncodingVector::set_coeff(std::uint16_t index, std::uint8_t value) {
  check_index(index);
  const std::size_t i = index - 1u;
  if (order_ == FieldOrder::gf2) {
    if (value > 1) throw std::invalid_argument("GF(2) coefficient out of range");
    const std::uint64_t mask = 1ull << (i & 63u);
    if (value)
      bits_[i >> 6] |= mask;
    else
      bits_[i >> 6] &= ~mask;
  } else {
    bytes_[i] = value;
  }
}

bool EncodingVector::is_zero() const {
  if (order_ == FieldOrder::gf2) {
    for (std::uint64_t w : bits_)
      if (w) return false;
    return true;
  }
  for (std::uint8_t b : bytes_)
    if (b) return false;
  return true;
}

std::uint16_t EncodingVector::lowest_index() const {
  if (order_ == FieldOrder::gf2) {
    for (std::size_t wi = 0; wi < bits_.size(); ++wi)
      if (bits_[wi])
        return static_cast<std::uint16_t>(wi * 64u + static_cast<unsigned>(std::countr_zero(bits_[wi])) + 1u);
    return 0;
  }
  for (std::size_t i = 0; i < bytes_.size(); ++i)
    if (bytes_[i]) return static_cast<std::uint16_t>(i + 1u);
  return 0;
}

std::uint16_t EncodingVector::highest_index() const {
  if (order_ == FieldOrder::gf2) {
    for (std::size_t wi = bits_.size(); wi-- > 0;)
      if (bits_[wi])
        return static_cast<std::uint16_t>(wi * 64u + (63u - static_cast<unsigned>(std::countl_zero(bits_[wi]))) + 1u);
    return 0;
  }
  for (std::size_t i = bytes_.size(); i-- > 0;)
    if (bytes_[i]) return static_cast<std::uint16_t>(i + 1u);
  return 0;
}

std::size_t EncodingVector::nonzero_count() const {
  std::size_t n = 0;
  if (order_ == FieldOrder::gf2) {
    for (std::uint64_t w : bits_) n += static_cast<std::size_t>(std::popcount(w));
  } else {
    for (std::uint8_t b : bytes_) n += b != 0;
  }
  return n;
}

bool EncodingVector::support_within(std::uint16_t lo, std::uint16_t hi) const {
  const std::uint16_t first = lowest_index();
  if (first == 0) return true;
  return first >= lo && highest_index() <= hi;
}

void EncodingVector::add_scaled(const EncodingVector& other, std::uint8_t factor,
                                const GaloisField& gf) {
  if (other.order_ != order_ || other.gen_size_ != gen_size_)
    throw std::invalid_argument("encoding vector shape mismatch");
  if (factor == 0) return;
  if (order_ == FieldOrder::gf2) {
    if (factor > 1) throw std::invalid_argument("GF(2) coefficient out of range");
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= other.bits_[i];
    return;
  }
  if (factor == 1) {
    for (std::size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= other.bytes_[i];
    return;
  }
  for (std::size_t i = 0; i < bytes_.size(); ++i)
    bytes_[i] ^= gf.mul(factor, other.bytes_[i]);
}

void EncodingVector::scale(std::uint8_t factor, const GaloisField& gf) {
  if (factor == 0) throw std::invalid_argument("scaling a row by zero");
  if (order_ == FieldOrder::gf2 || factor == 1) return;
  for (auto& b : bytes_) b = gf.mul(factor, b);
}

PacketSupport support(const EncodingVector& v) {
  if (v.is_zero()) throw std::domain_error("zero vector has no support");
  return {v.lowest_index(), v.highest_index()};
}

}  // namespace dragoncast
