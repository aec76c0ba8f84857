#pragma once

#include <mutex>

#include "zl/clock.hpp"
#include "zl/keys.hpp"
#include "zl/rng.hpp"
#include "zl/types.hpp"

namespace zl {

// Issues signed timestamp attestations over submitted links. Timestamps are
// monotone non-decreasing per service instance even if the backing clock
// steps backwards.
class TimestampService {
 public:
  TimestampService(KeyPair kp, Clock& clock, Rng& rng, uint32_t latency_ms = 0)
      : kp_(std::move(kp)), clock_(clock), rng_(rng), latency_ms_(latency_ms) {}

  TimestampAttestation stamp(const Link& l);

  const PublicKey& pub() const { return kp_.pub(); }
  const KeyPair& keypair() const { return kp_; }
  void set_down(bool down) { down_ = down; }
  bool down() const { return down_; }
  void set_latency(uint32_t ms) { latency_ms_ = ms; }

 private:
  KeyPair kp_;
  Clock& clock_;
  Rng& rng_;
  uint32_t latency_ms_;
  bool down_ = false;
  uint64_t last_ts_ = 0;
  std::mutex mu_;
};

// true iff the attestation's signature opens under `key`
bool validate(const PublicKey& key, const TimestampAttestation& t);

}  // namespace zl
