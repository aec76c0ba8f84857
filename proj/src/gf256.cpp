#include "zl/gf256.hpp"

namespace zl::gf {

namespace {

struct Tables {
  uint8_t exp[512];
  uint8_t log[256];

  Tables() {
    uint16_t x = 1;
    for (int i = 0; i < 255; i++) {
      exp[i] = uint8_t(x);
      log[x] = uint8_t(i);
      // multiply by the generator 0x03 = x + 1
      x = uint16_t(x << 1) ^ x;
      if (x & 0x100) x ^= 0x11b;
    }
    for (int i = 255; i < 512; i++) exp[i] = exp[i - 255];
    log[0] = 0;  // never consulted; mul() guards zero operands
  }
};

const Tables& t() {
  static const Tables tables;
  return tables;
}

}  // namespace

uint8_t mul(uint8_t a, uint8_t b) {
  if (a == 0 || b == 0) return 0;
  const Tables& tb = t();
  return tb.exp[tb.log[a] + tb.log[b]];
}

uint8_t inv(uint8_t a) {
  const Tables& tb = t();
  return tb.exp[255 - tb.log[a]];
}

void mul_acc(uint8_t* dst, const uint8_t* src, size_t n, uint8_t c) {
  if (c == 0) return;
  if (c == 1) {
    for (size_t i = 0; i < n; i++) dst[i] ^= src[i];
    return;
  }
  const Tables& tb = t();
  const uint8_t* row = tb.exp + tb.log[c];
  for (size_t i = 0; i < n; i++) {
    uint8_t s = src[i];
    if (s) dst[i] ^= row[tb.log[s]];
  }
}

void scale(uint8_t* dst, size_t n, uint8_t c) {
  if (c == 1) return;
  const Tables& tb = t();
  if (c == 0) {
    for (size_t i = 0; i < n; i++) dst[i] = 0;
    return;
  }
  const uint8_t* row = tb.exp + tb.log[c];
  for (size_t i = 0; i < n; i++) {
    uint8_t s = dst[i];
    dst[i] = s ? row[tb.log[s]] : 0;
  }
}

}  // namespace zl::gf
