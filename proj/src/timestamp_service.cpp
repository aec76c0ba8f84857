#include "zl/timestamp_service.hpp"

#include <chrono>
#include <thread>

#include "zl/codec.hpp"
#include "zl/errors.hpp"

namespace zl {

TimestampAttestation TimestampService::stamp(const Link& l) {
  if (latency_ms_ > 0) std::this_thread::sleep_for(std::chrono::milliseconds(latency_ms_));

  std::lock_guard lk(mu_);
  if (down_) throw ServiceDown("timestamp service down");

  // requests address the service by the link's mailbox rendering
  std::string mailbox = email_encode(l);
  if (mailbox.find('@') != 64) throw Error("malformed mailbox address");

  TimestampAttestation t;
  t.bytes = encode(l);
  t.ts = std::max(clock_.now_ms(), last_ts_);
  last_ts_ = t.ts;
  t.uuid = uuid4(rng_);
  t.sig = kp_.sign(time_att_digest(t.bytes, t.ts, t.uuid));
  return t;
}

bool validate(const PublicKey& key, const TimestampAttestation& t) {
  return verify_sig(key, time_att_digest(t.bytes, t.ts, t.uuid), t.sig);
}

}  // namespace zl
