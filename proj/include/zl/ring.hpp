#pragma once

#include <deque>
#include <map>
#include <set>
#include <vector>

#include "zl/pipeline.hpp"
#include "zl/snapshot.hpp"

namespace zl {

// One counter service plus the enclave attestation that vouches for its key.
struct RingMember {
  SequenceService svc;
  EnclaveAttestation att;
};

// Sequencing backend backed by a replacement ring: requests go to whichever
// member is reachable (round robin), and every stored attestation is echoed
// back as an acknowledgment for a later block to embed.
class RingSequencer : public Sequencer {
 public:
  explicit RingSequencer(std::vector<RingMember> members);
  // n fresh members attested under the given enclave root
  static RingSequencer create(size_t n, EnclaveRoot& root, Rng& rng, uint32_t latency_ms = 0);

  SequenceAttestation sequence_link(const Link& time_link) override;
  const PublicKey& genesis_pub() const override;  // member 0 anchors the chain
  std::vector<EnclaveAttestation> ring_members() const override;
  bool ring_mode() const override { return true; }
  std::vector<RingAck> peek_acks() const override;
  void drop_acks(size_t n) override;
  void on_replicated(const SequenceAttestation& q, const Link& time_link) override;

  size_t size() const { return members_.size(); }
  // re-seed the acknowledgment pool (e.g. after reloading persisted state)
  void preload_ack(RingAck a) { pending_.push_back(std::move(a)); }
  SequenceService& member(size_t i) { return members_.at(i).svc; }
  const EnclaveAttestation& attestation(size_t i) const { return members_.at(i).att; }
  void halt(size_t i, bool down) { members_.at(i).svc.set_down(down); }

 private:
  std::vector<RingMember> members_;
  std::deque<RingAck> pending_;
  size_t rr_ = 0;
};

// Per-member progress the vote walk tracks: the member's key and the last
// counter the walk has seen acknowledged for it (-1 before any).
struct VoteEntry {
  PublicKey key;
  int64_t ctr = -1;
};
using VoteState = std::map<std::array<uint8_t, 32>, VoteEntry>;

// Consume a block's embedded acknowledgments into the vote state: counter
// order, attested timestamp already on the accepted chain, consecutive
// counter, and a verifying signature under the member's key.
void advance_votes(VoteState& st, const AnyBlock& b, const std::set<Link>& chain_times);

// Number of distinct ring members whose next attestation lands on stamp t or
// on a descendant reachable within `depth` blocks. Each member counts once.
uint64_t votes(const TimestampAttestation& t, uint64_t depth, VoteState st,
               const std::set<Link>& chain_times, const Snapshot& snap);

struct RingChainEntry {
  AnyBlock block;
  TimestampAttestation time;
};

// Majority-vote main-chain extraction for ring chains. Ring membership and
// the timestamp key come from the genesis control payload; a stamp is
// accepted when more than half the recorded ring votes for it.
std::vector<RingChainEntry> omc_ring(const Block& genesis, const PublicKey& enclave_root,
                                     const Snapshot& snap);

}  // namespace zl
