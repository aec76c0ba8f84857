#include "zl/hash.hpp"

#include <openssl/evp.h>

#include "zl/errors.hpp"

namespace zl {

Digest sha3_256(ByteView data) {
  Digest d;
  size_t len = 0;
  if (EVP_Q_digest(nullptr, "SHA3-256", nullptr, data.data(), data.size(),
                   d.v.data(), &len) != 1 ||
      len != d.v.size()) {
    throw Error("SHA3-256 digest failed");
  }
  return d;
}

std::string to_hex(const Digest& d) { return to_hex(ByteView{d.v}); }

}  // namespace zl
