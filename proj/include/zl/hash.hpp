#pragma once

#include <array>
#include <compare>

#include "zl/bytes.hpp"

namespace zl {

struct Digest {
  std::array<uint8_t, 32> v{};
  auto operator<=>(const Digest&) const = default;
};

Digest sha3_256(ByteView data);

std::string to_hex(const Digest& d);

}  // namespace zl
