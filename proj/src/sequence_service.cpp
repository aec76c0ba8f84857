#include "zl/sequence_service.hpp"

#include <chrono>
#include <thread>

#include "zl/codec.hpp"
#include "zl/errors.hpp"

namespace zl {

EnclaveAttestation EnclaveRoot::attest(const PublicKey& app) const {
  EnclaveAttestation e;
  e.image_digest = image_;
  e.app_pubkey = app;
  e.sig = kp_.sign(enclave_att_digest(e.image_digest, e.app_pubkey));
  return e;
}

std::optional<PublicKey> verify_enclave(const PublicKey& root, const EnclaveAttestation& e) {
  if (!verify_sig(root, enclave_att_digest(e.image_digest, e.app_pubkey), e.sig)) return std::nullopt;
  return e.app_pubkey;
}

SequenceService SequenceService::fresh(Rng& rng, uint32_t latency_ms) {
  return SequenceService(KeyPair::generate(rng), uuid4(rng), latency_ms);
}

SequenceAttestation SequenceService::sequence(const Link& l) { return sequence_bytes(encode(l)); }

SequenceAttestation SequenceService::sequence_bytes(const Bytes& bytes) {
  if (latency_ms_ > 0) std::this_thread::sleep_for(std::chrono::milliseconds(latency_ms_));

  std::lock_guard lk(mu_);
  if (down_) throw ServiceDown("sequence service down");

  auto it = issued_.find(bytes);
  if (it != issued_.end()) return it->second;

  SequenceAttestation q;
  q.bytes = bytes;
  q.ctr = next_++;
  q.sequence_id = id_;
  q.sig = kp_.sign(seq_att_digest(q.bytes, q.ctr));
  issued_.emplace(bytes, q);
  return q;
}

std::vector<SequenceAttestation> SequenceService::issued() const {
  std::lock_guard lk(mu_);
  std::vector<SequenceAttestation> out;
  out.reserve(issued_.size());
  for (const auto& [_, q] : issued_) out.push_back(q);
  return out;
}

SequenceService SequenceService::restore(KeyPair kp, ObjectId id, const std::vector<SequenceAttestation>& issued,
                                         uint32_t latency_ms) {
  SequenceService s(std::move(kp), id, latency_ms);
  for (const auto& q : issued) {
    s.issued_.emplace(q.bytes, q);
    s.next_ = std::max(s.next_, q.ctr + 1);
  }
  return s;
}

bool check(const PublicKey& key, const SequenceAttestation& q) {
  return verify_sig(key, seq_att_digest(q.bytes, q.ctr), q.sig);
}

}  // namespace zl
