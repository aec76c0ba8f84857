#pragma once

#include <cstddef>
#include <cstdint>

namespace zl::gf {

// GF(2^8) with reduction polynomial x^8 + x^4 + x^3 + x + 1 (0x11b),
// multiplication through log/antilog tables over generator 0x03.

uint8_t mul(uint8_t a, uint8_t b);
uint8_t inv(uint8_t a);  // a must be nonzero
inline uint8_t add(uint8_t a, uint8_t b) { return a ^ b; }

// dst[i] ^= c * src[i] for i in [0, n)
void mul_acc(uint8_t* dst, const uint8_t* src, size_t n, uint8_t c);

// dst[i] = c * dst[i]
void scale(uint8_t* dst, size_t n, uint8_t c);

}  // namespace zl::gf
