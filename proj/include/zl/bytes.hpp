#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zl {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

inline ByteView view(const Bytes& b) { return {b.data(), b.size()}; }
inline ByteView view(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

inline void append(Bytes& out, ByteView v) { out.insert(out.end(), v.begin(), v.end()); }

void append_u32be(Bytes& out, uint32_t v);
void append_u64be(Bytes& out, uint64_t v);
uint32_t read_u32be(const uint8_t* p);
uint64_t read_u64be(const uint8_t* p);

std::string to_hex(ByteView v);
// throws CodecError on odd length or non-hex characters
Bytes from_hex(std::string_view s);

}  // namespace zl
