#pragma once

#include <cstdint>

namespace dragoncast {

enum class FieldOrder : std::uint16_t {
  gf2 = 2,
  gf256 = 256,
};

// GF(2^8) is generated by x over the irreducible polynomial
// x^8 + x^4 + x^3 + x^2 + 1 (0x11d). GF(2) is plain xor/and.
constexpr std::uint16_t kGf256Polynomial = 0x11d;

// Arithmetic handle for one field order. Cheap to copy; GF(256) log/exp
// tables are built once per process and shared. Pure functions over
// immutable tables, safe for concurrent use from sweep workers.
class GaloisField {
 public:
  explicit GaloisField(FieldOrder order);

  FieldOrder order() const { return order_; }
  std::uint16_t size() const { return static_cast<std::uint16_t>(order_); }

  // Modulus polynomial; 0 for GF(2) where none is used.
  std::uint16_t polynomial() const {
    return order_ == FieldOrder::gf256 ? kGf256Polynomial : 0;
  }

  // Addition and subtraction coincide in characteristic 2.
  std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return a ^ b; }
  std::uint8_t sub(std::uint8_t a, std::uint8_t b) const { return a ^ b; }

  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const;

  // Multiplicative inverse; throws std::domain_error for 0.
  std::uint8_t inv(std::uint8_t a) const;

 private:
  FieldOrder order_;
};

// Checked element type for callers that mix fields; heavy inner loops use
// the raw uint8_t interface above.
struct FieldElement {
  std::uint8_t value = 0;
  FieldOrder order = FieldOrder::gf2;
};

// Throw std::invalid_argument when the operands live in different fields or
// hold out-of-range values.
FieldElement add(FieldElement a, FieldElement b);
FieldElement mul(FieldElement a, FieldElement b);
FieldElement inv(FieldElement a);

}  // namespace dragoncast
