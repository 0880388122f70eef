#include "dragoncast/galois.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace dragoncast {
namespace {

struct Gf256Tables {
  std::array<std::uint8_t, 256> exp{};   // exp[i] = x^i, i mod 255
  std::array<std::uint8_t, 256> log{};   // log[exp[i]] = i, log[0] unused
  std::array<std::uint8_t, 256> inverse{};

  Gf256Tables() {
    std::uint16_t v = 1;
    for (int i = 0; i < 255; ++i) {
      exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
      log[static_cast<std::uint8_t>(v)] = static_cast<std::uint8_t>(i);
      v <<= 1;  // multiply by the generator x
      if (v & 0x100) v ^= kGf256Polynomial;
    }
    exp[255] = exp[0];
    inverse[0] = 0;
    for (int a = 1; a < 256; ++a) {
      const int e = (255 - log[static_cast<std::size_t>(a)]) % 255;
      inverse[static_cast<std::size_t>(a)] = exp[static_cast<std::size_t>(e)];
    }
  }
};

const Gf256Tables& tables() {
  static const Gf256Tables t;
  return t;
}

void check_element(FieldElement e) {
  if (e.order == FieldOrder::gf2 && e.value > 1)
    throw std::invalid_argument("GF(2) element out of range: " + std::to_string(e.value));
}

void check_same_order(FieldElement a, FieldElement b) {
  if (a.order != b.order)
    throw std::invalid_argument("field order mismatch between operands");
  check_element(a);
  check_element(b);
}

}  // namespace

GaloisField::GaloisField(FieldOrder order) : order_(order) {
  if (order != FieldOrder::gf2 && order != FieldOrder::gf256)
    throw std::invalid_argument("unsupported field order");
  if (order == FieldOrder::gf256) (void)tables();  // force one-time build
}

std::uint8_t GaloisField::mul(std::uint8_t a, std::uint8_t b) const {
  if (order_ == FieldOrder::gf2) return a & b;
  if (a == 0 || b == 0) return 0;
  const auto& t = tables();
  const int s = t.log[a] + t.log[b];
  return t.exp[static_cast<std::size_t>(s >= 255 ? s - 255 : s)];
}

std::uint8_t GaloisField::inv(std::uint8_t a) const {
  if (a == 0) throw std::domain_error("zero has no multiplicative inverse");
  if (order_ == FieldOrder::gf2) return 1;
  return tables().inverse[a];
}

FieldElement add(FieldElement a, FieldElement b) {
  check_same_order(a, b);
  return {GaloisField(a.order).add(a.value, b.value), a.order};
}

FieldElement mul(FieldElement a, FieldElement b) {
  check_same_order(a, b);
  return {GaloisField(a.order).mul(a.value, b.value), a.order};
}

FieldElement inv(FieldElement a) {
  check_element(a);
  return {GaloisField(a.order).inv(a.value), a.order};
}

}  // namespace dragoncast
