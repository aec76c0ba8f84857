#include "zl/keys.hpp"

#include <openssl/evp.h>

#include <memory>

#include "zl/errors.hpp"

namespace zl {

namespace {

struct PkeyFree {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct CtxFree {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyFree>;
using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxFree>;

PkeyPtr private_key(const std::array<uint8_t, 32>& seed) {
  PkeyPtr pk(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                          seed.data(), seed.size()));
  if (!pk) throw Error("ed25519 private key construction failed");
  return pk;
}

}  // namespace

KeyPair KeyPair::from_seed(const std::array<uint8_t, 32>& seed) {
  KeyPair kp;
  kp.seed_ = seed;
  PkeyPtr pk = private_key(seed);
  size_t len = kp.pub_.v.size();
  if (EVP_PKEY_get_raw_public_key(pk.get(), kp.pub_.v.data(), &len) != 1 ||
      len != kp.pub_.v.size()) {
    throw Error("ed25519 public key extraction failed");
  }
  return kp;
}

KeyPair KeyPair::generate(Rng& rng) {
  std::array<uint8_t, 32> seed;
  rng.fill(seed.data(), seed.size());
  return from_seed(seed);
}

Signature KeyPair::sign(const Digest& msg) const {
  PkeyPtr pk = private_key(seed_);
  CtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx ||
      EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pk.get()) != 1) {
    throw Error("ed25519 sign init failed");
  }
  Signature sig;
  size_t len = sig.v.size();
  if (EVP_DigestSign(ctx.get(), sig.v.data(), &len, msg.v.data(),
                     msg.v.size()) != 1 ||
      len != sig.v.size()) {
    throw Error("ed25519 sign failed");
  }
  return sig;
}

bool verify_sig(const PublicKey& key, const Digest& msg, const Signature& sig) {
  PkeyPtr pk(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr,
                                         key.v.data(), key.v.size()));
  if (!pk) return false;
  CtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx ||
      EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pk.get()) !=
          1) {
    return false;
  }
  return EVP_DigestVerify(ctx.get(), sig.v.data(), sig.v.size(), msg.v.data(),
                          msg.v.size()) == 1;
}

}  // namespace zl
