#pragma once

#include <array>
#include <compare>

#include "zl/bytes.hpp"
#include "zl/hash.hpp"
#include "zl/rng.hpp"

namespace zl {

struct PublicKey {
  std::array<uint8_t, 32> v{};
  auto operator<=>(const PublicKey&) const = default;
};

struct Signature {
  std::array<uint8_t, 64> v{};
  auto operator<=>(const Signature&) const = default;
};

// Ed25519. The private key is its 32-byte seed, drawn from the run RNG so
// key generation is reproducible. Signatures are deterministic.
class KeyPair {
 public:
  static KeyPair generate(Rng& rng);
  static KeyPair from_seed(const std::array<uint8_t, 32>& seed);

  const PublicKey& pub() const { return pub_; }
  const std::array<uint8_t, 32>& seed() const { return seed_; }

  Signature sign(const Digest& msg) const;

 private:
  std::array<uint8_t, 32> seed_{};
  PublicKey pub_{};
};

bool verify_sig(const PublicKey& key, const Digest& msg, const Signature& sig);

}  // namespace zl
