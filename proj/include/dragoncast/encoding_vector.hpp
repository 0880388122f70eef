#pragma once

#include <cstdint>
#include <vector>

#include "dragoncast/galois.hpp"

namespace dragoncast {

// Global encoding vector of one coded packet: the coefficients of source
// packets P_1..P_D in the combination. Source packet indices are 1-based.
//
// GF(2) vectors are stored bit-packed (bit i-1 = coefficient of P_i) so row
// reduction is word-wise xor; GF(256) vectors are one byte per coefficient.
class EncodingVector {
 public:
  EncodingVector(FieldOrder order, std::uint16_t generation_size);

  // Unit vector e_index (a raw source packet).
  static EncodingVector unit(FieldOrder order, std::uint16_t generation_size,
                             std::uint16_t index);

  FieldOrder order() const { return order_; }
  std::uint16_t generation_size() const { return gen_size_; }

  // index in [1, generation_size]; throws std::invalid_argument otherwise.
  std::uint8_t coeff(std::uint16_t index) const;
  void set_coeff(std::uint16_t index, std::uint8_t value);

  bool is_zero() const;

  // Lowest / highest index with a nonzero coefficient; 0 for the zero vector.
  std::uint16_t lowest_index() const;
  std::uint16_t highest_index() const;

  std::size_t nonzero_count() const;

  // True when every nonzero coefficient lies in [lo, hi] (vacuously true for
  // the zero vector).
  bool support_within(std::uint16_t lo, std::uint16_t hi) const;

  // this += factor * other. Operands must share order and generation size.
  void add_scaled(const EncodingVector& other, std::uint8_t factor,
                  const GaloisField& gf);

  // this *= factor (factor must be nonzero).
  void scale(std::uint8_t factor, const GaloisField& gf);

  bool operator==(const EncodingVector&) const = default;

 private:
  void check_index(std::uint16_t index) const;

  FieldOrder order_;
  std::uint16_t gen_size_;
  std::vector<std::uint64_t> bits_;   // GF(2) storage
  std::vector<std::uint8_t> bytes_;   // GF(256) storage
};

struct PacketSupport {
  std::uint16_t lowest = 0;
  std::uint16_t highest = 0;
};

// Support of a nonzero vector; throws std::domain_error for the zero vector.
PacketSupport support(const EncodingVector& v);

}  // namespace dragoncast
