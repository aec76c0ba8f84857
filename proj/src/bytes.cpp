#include "zl/bytes.hpp"

#include "zl/errors.hpp"

namespace zl {

void append_u32be(Bytes& out, uint32_t v) {
  out.push_back(uint8_t(v >> 24));
  out.push_back(uint8_t(v >> 16));
  out.push_back(uint8_t(v >> 8));
  out.push_back(uint8_t(v));
}

void append_u64be(Bytes& out, uint64_t v) {
  for (int i = 56; i >= 0; i -= 8) out.push_back(uint8_t(v >> i));
}

uint32_t read_u32be(const uint8_t* p) {
  return uint32_t(p[0]) << 24 | uint32_t(p[1]) << 16 | uint32_t(p[2]) << 8 |
         uint32_t(p[3]);
}

uint64_t read_u64be(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; i++) v = v << 8 | p[i];
  return v;
}

static const char* kHexDigits = "0123456789abcdef";

std::string to_hex(ByteView v) {
  std::string s;
  s.reserve(v.size() * 2);
  for (uint8_t b : v) {
    s.push_back(kHexDigits[b >> 4]);
    s.push_back(kHexDigits[b & 0xf]);
  }
  return s;
}

static int hex_val(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

Bytes from_hex(std::string_view s) {
  if (s.size() % 2 != 0) throw CodecError("hex string has odd length");
  Bytes out;
  out.reserve(s.size() / 2);
  for (size_t i = 0; i < s.size(); i += 2) {
    int hi = hex_val(s[i]), lo = hex_val(s[i + 1]);
    if (hi < 0 || lo < 0) throw CodecError("bad hex digit");
    out.push_back(uint8_t(hi << 4 | lo));
  }
  return out;
}

}  // namespace zl
