#pragma once

#include <map>
#include <mutex>
#include <optional>

#include "zl/bytes.hpp"
#include "zl/keys.hpp"
#include "zl/rng.hpp"
#include "zl/types.hpp"

namespace zl {

// Root of trust that vouches for sequencer keys. A verifier holding the
// root's public key can extract the application key from an attestation.
class EnclaveRoot {
 public:
  EnclaveRoot(KeyPair kp, Digest image) : kp_(std::move(kp)), image_(image) {}

  EnclaveAttestation attest(const PublicKey& app) const;
  const PublicKey& pub() const { return kp_.pub(); }
  const Digest& image() const { return image_; }

 private:
  KeyPair kp_;
  Digest image_;
};

// the attested application key on success, nothing on a bad signature
std::optional<PublicKey> verify_enclave(const PublicKey& root, const EnclaveAttestation& e);

// Issues signed, gap-free counter attestations. Each distinct byte string
// gets the next counter value exactly once; repeats return the stored
// attestation, so a given instance never binds one counter to two strings.
class SequenceService {
 public:
  SequenceService(KeyPair kp, ObjectId sequence_id, uint32_t latency_ms = 0)
      : kp_(std::move(kp)), id_(sequence_id), latency_ms_(latency_ms) {}

  SequenceService(SequenceService&& o) noexcept
      : kp_(std::move(o.kp_)),
        id_(o.id_),
        latency_ms_(o.latency_ms_),
        next_(o.next_),
        issued_(std::move(o.issued_)),
        down_(o.down_) {}

  static SequenceService fresh(Rng& rng, uint32_t latency_ms = 0);

  SequenceAttestation sequence(const Link& l);
  SequenceAttestation sequence_bytes(const Bytes& bytes);

  const PublicKey& pub() const { return kp_.pub(); }
  const KeyPair& keypair() const { return kp_; }
  const ObjectId& id() const { return id_; }
  uint64_t next_ctr() const { return next_; }

  void set_down(bool down) { down_ = down; }
  bool down() const { return down_; }
  void set_latency(uint32_t ms) { latency_ms_ = ms; }

  // persistence support: dump issued attestations, rebuild from a dump
  std::vector<SequenceAttestation> issued() const;
  static SequenceService restore(KeyPair kp, ObjectId id, const std::vector<SequenceAttestation>& issued,
                                 uint32_t latency_ms = 0);

 private:
  KeyPair kp_;
  ObjectId id_;
  uint32_t latency_ms_;
  uint64_t next_ = 0;
  std::map<Bytes, SequenceAttestation> issued_;
  bool down_ = false;
  mutable std::mutex mu_;
};

// true iff the attestation's signature opens under `key`
bool check(const PublicKey& key, const SequenceAttestation& q);

}  // namespace zl
