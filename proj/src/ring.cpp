#include "zl/ring.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "zl/codec.hpp"
#include "zl/errors.hpp"

namespace zl {

RingSequencer::RingSequencer(std::vector<RingMember> members) : members_(std::move(members)) {
  if (members_.empty()) throw Error("a ring needs at least one member");
}

RingSequencer RingSequencer::create(size_t n, EnclaveRoot& root, Rng& rng, uint32_t latency_ms) {
  std::vector<RingMember> members;
  members.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    SequenceService svc = SequenceService::fresh(rng, latency_ms);
    EnclaveAttestation att = root.attest(svc.pub());
    members.push_back(RingMember{std::move(svc), att});
  }
  return RingSequencer(std::move(members));
}

SequenceAttestation RingSequencer::sequence_link(const Link& time_link) {
  const size_t n = members_.size();
  for (size_t k = 0; k < n; ++k) {
    const size_t idx = (rr_ + k) % n;
    try {
      SequenceAttestation q = members_[idx].svc.sequence(time_link);
      rr_ = (idx + 1) % n;
      return q;
    } catch (const ServiceDown&) {
      // try the next member
    }
  }
  throw ServiceDown("every ring member is unreachable");
}

const PublicKey& RingSequencer::genesis_pub() const { return members_.front().svc.pub(); }

std::vector<EnclaveAttestation> RingSequencer::ring_members() const {
  std::vector<EnclaveAttestation> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m.att);
  return out;
}

std::vector<RingAck> RingSequencer::peek_acks() const {
  return std::vector<RingAck>(pending_.begin(), pending_.end());
}

void RingSequencer::drop_acks(size_t n) {
  for (size_t i = 0; i < n && !pending_.empty(); ++i) pending_.pop_front();
}

void RingSequencer::on_replicated(const SequenceAttestation& q, const Link& time_link) {
  for (const auto& m : members_) {
    if (m.svc.id() == q.sequence_id) {
      assert(q.bytes == encode(time_link));
      pending_.push_back(RingAck{q.sig, q.ctr, m.svc.pub(), time_link});
      return;
    }
  }
  // attestation from an unknown issuer: nothing to acknowledge
}

void advance_votes(VoteState& st, const AnyBlock& b, const std::set<Link>& chain_times) {
  const RingBlock* rb = std::get_if<RingBlock>(&b);
  if (rb == nullptr) return;
  std::vector<RingAck> acks = rb->seqs;
  std::sort(acks.begin(), acks.end(),
            [](const RingAck& x, const RingAck& y) { return x.ctr < y.ctr; });
  for (const auto& a : acks) {
    if (chain_times.count(a.time_link) == 0) continue;  // attested stamp not on the chain
    auto it = st.find(a.issuer.v);
    if (it == st.end()) continue;                        // not a ring member
    if (int64_t(a.ctr) != it->second.ctr + 1) continue;  // counters must stay gap-free
    if (!verify_sig(it->second.key, seq_att_digest(encode(a.time_link), a.ctr), a.sig)) continue;
    it->second.ctr = int64_t(a.ctr);
  }
}

uint64_t votes(const TimestampAttestation& t, uint64_t depth, VoteState st,
               const std::set<Link>& chain_times, const Snapshot& snap) {
  uint64_t v = 0;
  const Bytes tl = encode(link_of(t));

  // members whose next attestation sits directly on t; each counts once
  for (auto it = st.begin(); it != st.end();) {
    bool counted = false;
    for (const auto& q : snap.seqs) {
      if (q.bytes != tl || int64_t(q.ctr) != it->second.ctr + 1) continue;
      if (check(it->second.key, q)) {
        counted = true;
        break;
      }
    }
    if (counted) {
      ++v;
      it = st.erase(it);
    } else {
      ++it;
    }
  }
  if (st.empty() || depth == 0) return v;

  // walk into each block hanging off t; its acknowledgments move the
  // watermarks for everything below it
  const Link t_link = link_of(t);
  for (const auto& b : snap.blocks) {
    auto prev = block_prev_time_link(b);
    if (!prev || !(*prev == t_link)) continue;
    VoteState branch = st;
    advance_votes(branch, b, chain_times);
    const Bytes bl = encode(link_of(b));
    for (const auto& t2 : snap.times) {
      if (t2.bytes != bl) continue;
      v += votes(t2, depth - 1, branch, chain_times, snap);
    }
  }
  return v;
}

std::vector<RingChainEntry> omc_ring(const Block& genesis, const PublicKey& enclave_root,
                                     const Snapshot& snap) {
  std::vector<RingChainEntry> z;
  auto control = snap.control_by_link(genesis.payload_link);
  if (!control || control->ring.empty()) return z;
  const PublicKey time_pub = control->time_pubkey;
  const size_t ring_size = control->ring.size();

  // members enter with watermark -1; an unverifiable attestation leaves the
  // member voiceless but it still counts toward the majority denominator
  VoteState st;
  for (const auto& e : control->ring) {
    if (auto key = verify_enclave(enclave_root, e)) st[key->v] = VoteEntry{*key, -1};
  }
  if (st.empty()) return z;

  std::set<Link> chain_times;
  std::set<Bytes> seen_stamp;  // tolerate duplicated objects in hand-built snapshots
  std::vector<AnyBlock> frontier{AnyBlock{genesis}};
  while (true) {
    // candidate stamps: verifying timestamp attestations of the frontier blocks
    std::vector<std::pair<AnyBlock, const TimestampAttestation*>> cands;
    for (const auto& fb : frontier) {
      const Bytes want = encode(link_of(fb));
      for (const auto& t : snap.times) {
        if (t.bytes != want || !validate(time_pub, t)) continue;
        if (!seen_stamp.insert(encode(t)).second) continue;
        cands.emplace_back(fb, &t);
      }
    }

    const AnyBlock* won_block = nullptr;
    const TimestampAttestation* won_time = nullptr;
    for (const auto& [fb, t] : cands) {
      // the candidate stamp covers fb, so fb's own acknowledgments are part
      // of the history the voters testify about
      VoteState ctx = st;
      advance_votes(ctx, fb, chain_times);
      if (2 * votes(*t, 100, ctx, chain_times, snap) > ring_size) {
        // honest members attest one stamp per counter, so a second winner at
        // the same level means equivocation, not a fork
        if (won_time != nullptr) throw std::logic_error("two stamps at one level both reached majority");
        won_block = &fb;
        won_time = t;
      }
    }
    if (won_time == nullptr) return z;

    z.push_back(RingChainEntry{*won_block, *won_time});
    chain_times.insert(link_of(*won_time));
    // the accepted block's acknowledgments move every member's watermark
    if (const RingBlock* rb = std::get_if<RingBlock>(won_block)) {
      for (const auto& a : rb->seqs) {
        auto it = st.find(a.issuer.v);
        if (it != st.end() && int64_t(a.ctr) > it->second.ctr) it->second.ctr = int64_t(a.ctr);
      }
    }
    const Link tl = link_of(*won_time);
    frontier.clear();
    for (const auto& b : snap.blocks) {
      auto prev = block_prev_time_link(b);
      if (prev && *prev == tl) frontier.push_back(b);
    }
  }
}

}  // namespace zl
