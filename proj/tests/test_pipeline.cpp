#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <memory>
#include <set>

#include "zl/codec.hpp"
#include "zl/errors.hpp"
#include "zl/pipeline.hpp"
#include "zl/ring.hpp"

using namespace zl;

namespace {

Link some_link(Rng& rng) {
  Link l;
  l.uuid = uuid4(rng);
  for (auto& b : l.digest.v) b = uint8_t(rng.u64());
  return l;
}

TxLink tx_of(Rng& rng, const std::string& tag) { return TxLink{"s1", tag, some_link(rng)}; }

std::vector<std::unique_ptr<BucketStore>> mem_buckets(size_t n) {
  std::vector<std::unique_ptr<BucketStore>> bs;
  for (size_t i = 0; i < n; ++i) bs.push_back(std::make_unique<BucketStore>(i, "region-" + std::to_string(i % 3)));
  return bs;
}

// everything a single-sequencer writer needs, wired together
struct Rig {
  Rng rng;
  ManualClock clock{1'000};
  TimestampService ts;
  SingleSequencer seq;
  ReplicationService rep;
  ChainWriter w;

  explicit Rig(uint64_t seed, uint32_t time_lat = 0, uint32_t rep_lat = 0, size_t batch_max = 4096)
      : rng(seed),
        ts(KeyPair::generate(rng), clock, rng, time_lat),
        seq(SequenceService::fresh(rng)),
        rep(CodingScheme{}, mem_buckets(CodingScheme{}.n), seed ^ 0x5eedULL, rep_lat),
        w(ts, seq, rep, rng, batch_max) {}
};

// sequencer wrapper that runs a hook right after sequencing succeeds, to
// exercise the window between ordering and storing the attestation
struct HookedSequencer : Sequencer {
  Sequencer& inner;
  std::function<void()> after_sequence;

  explicit HookedSequencer(Sequencer& s) : inner(s) {}
  SequenceAttestation sequence_link(const Link& l) override {
    SequenceAttestation q = inner.sequence_link(l);
    if (after_sequence) after_sequence();
    return q;
  }
  const PublicKey& genesis_pub() const override { return inner.genesis_pub(); }
  std::vector<EnclaveAttestation> ring_members() const override { return inner.ring_members(); }
  bool ring_mode() const override { return inner.ring_mode(); }
  std::vector<RingAck> peek_acks() const override { return inner.peek_acks(); }
  void drop_acks(size_t n) override { inner.drop_acks(n); }
  void on_replicated(const SequenceAttestation& q, const Link& l) override { inner.on_replicated(q, l); }
};

}  // namespace

TEST_CASE("genesis construction binds keys and starts the chain") {
  Rig rig(1);
  Triad g = rig.w.init_chain();

  const Block* b0 = std::get_if<Block>(&g.block);
  REQUIRE(b0 != nullptr);
  CHECK(!b0->prev_time_link.has_value());
  CHECK(g.time.bytes == encode(link_of(g.block)));
  CHECK(g.seq.bytes == encode(link_of(g.time)));
  CHECK(g.seq.ctr == 0);

  // genesis payload carries the service keys
  auto control = rig.rep.fetch<ControlPayload>(b0->payload_link);
  CHECK(control.seq_pubkey == rig.seq.service().pub());
  CHECK(control.time_pubkey == rig.ts.pub());
  CHECK(control.ring.empty());

  // all four genesis objects are retrievable
  CHECK(rig.rep.fetch<TimestampAttestation>(link_of(g.time)) == g.time);
  CHECK(rig.rep.fetch<SequenceAttestation>(link_of(g.seq)) == g.seq);
  CHECK(encode(rig.rep.fetch<Block>(rig.w.handle().genesis_link)) == encode(*b0));

  CHECK(rig.w.handle().last_time_link == link_of(g.time));
  CHECK_THROWS_AS(rig.w.init_chain(), Error);
}

TEST_CASE("creating a chain against a used sequencer yields a nonzero start counter") {
  Rig rig(2);
  rig.seq.service().sequence(some_link(rig.rng));  // someone used this sequencer before
  Triad g = rig.w.init_chain();
  CHECK(g.seq.ctr == 1);  // construction does not reject; verification will
}

TEST_CASE("steps drain the queue in order and zip blocks together") {
  Rig rig(3, 0, 0, /*batch_max=*/4);
  Triad g = rig.w.init_chain();

  std::vector<TxLink> txs;
  for (int i = 0; i < 10; ++i) txs.push_back(tx_of(rig.rng, std::to_string(i)));
  for (const auto& t : txs) rig.w.write(t);

  std::vector<Triad> triads;
  std::vector<size_t> batches;
  for (;;) {
    StepReport r = rig.w.zip_step();
    if (r.outcome == StepOutcome::Idle) break;
    REQUIRE(r.outcome == StepOutcome::Finalized);
    REQUIRE(r.triad.has_value());
    triads.push_back(*r.triad);
    batches.push_back(r.batch);
  }
  CHECK(batches == std::vector<size_t>{4, 4, 2});

  // leaves come back in exactly the order they were written
  std::vector<TxLink> seen;
  for (const auto& tri : triads) {
    MerkleTree m = rig.rep.fetch<MerkleTree>(block_payload_link(tri.block));
    seen.insert(seen.end(), m.leaves.begin(), m.leaves.end());
  }
  CHECK(seen == txs);

  // each block points at the previous step's stamp; counters step by one
  Link prev_time = link_of(g.time);
  uint64_t prev_ts = g.time.ts;
  for (size_t i = 0; i < triads.size(); ++i) {
    auto pl = block_prev_time_link(triads[i].block);
    REQUIRE(pl.has_value());
    CHECK(*pl == prev_time);
    CHECK(triads[i].seq.ctr == i + 1);
    CHECK(triads[i].time.ts >= prev_ts);
    CHECK(triads[i].time.bytes == encode(link_of(triads[i].block)));
    CHECK(triads[i].seq.bytes == encode(link_of(triads[i].time)));
    prev_time = link_of(triads[i].time);
    prev_ts = triads[i].time.ts;
  }
  CHECK(rig.w.handle().last_time_link == prev_time);
}

TEST_CASE("stage events respect the barrier: nothing is sequenced before all three legs land") {
  Rig rig(4, /*time_lat=*/3, /*rep_lat=*/3);
  rig.w.init_chain();
  for (int i = 0; i < 6; ++i) rig.w.write(tx_of(rig.rng, std::to_string(i)));
  RunReport rep = rig.w.run(0, 0);
  CHECK(rep.finalized >= 1);

  std::map<std::string, StageEvent> by_stage;  // per block uuid
  std::map<std::array<uint8_t, 16>, std::map<std::string, StageEvent>> blocks;
  for (const auto& e : rep.events) blocks[e.block_uuid.v][e.stage] = e;

  size_t checked = 0;
  for (const auto& [uuid, stages] : blocks) {
    if (!stages.count("sequence")) continue;  // aborted before the barrier
    ++checked;
    REQUIRE(stages.count("merkle_replicate"));
    REQUIRE(stages.count("block_replicate"));
    REQUIRE(stages.count("stamp"));
    REQUIRE(stages.count("time_replicate"));
    const StageEvent& sq = stages.at("sequence");
    // the stamp exists before its replication, which ends before sequencing
    CHECK(stages.at("stamp").end_us <= stages.at("time_replicate").start_us);
    CHECK(stages.at("merkle_replicate").end_us <= sq.start_us);
    CHECK(stages.at("block_replicate").end_us <= sq.start_us);
    CHECK(stages.at("time_replicate").end_us <= sq.start_us);
    if (stages.count("seq_replicate")) CHECK(sq.end_us <= stages.at("seq_replicate").start_us);
  }
  CHECK(checked >= 1);
}

TEST_CASE("a pre-barrier storage failure aborts the step and requeues the batch") {
  Rig rig(5);
  rig.w.init_chain();
  uint64_t ctr_before = rig.seq.service().next_ctr();
  Link tip_before = rig.w.handle().last_time_link;

  std::vector<TxLink> txs{tx_of(rig.rng, "a"), tx_of(rig.rng, "b")};
  for (const auto& t : txs) rig.w.write(t);

  rig.rep.bucket(0).set_available(false);
  StepReport r = rig.w.zip_step();
  CHECK(r.outcome == StepOutcome::Aborted);
  CHECK(!r.triad.has_value());
  CHECK(rig.w.queue().size() == 2);                      // batch went back
  CHECK(rig.w.handle().last_time_link == tip_before);    // chain did not move
  CHECK(rig.seq.service().next_ctr() == ctr_before);     // nothing was sequenced

  rig.rep.bucket(0).set_available(true);
  StepReport r2 = rig.w.zip_step();
  REQUIRE(r2.outcome == StepOutcome::Finalized);
  MerkleTree m = rig.rep.fetch<MerkleTree>(block_payload_link(r2.triad->block));
  CHECK(m.leaves == txs);  // same batch, same order
}

TEST_CASE("a refused sequencing abandons the block but keeps the batch") {
  Rig rig(6);
  rig.w.init_chain();
  Link tip_before = rig.w.handle().last_time_link;
  rig.w.write(tx_of(rig.rng, "x"));

  rig.seq.service().set_down(true);
  StepReport r = rig.w.zip_step();
  CHECK(r.outcome == StepOutcome::SequenceRefused);
  CHECK(rig.w.queue().size() == 1);
  CHECK(rig.w.handle().last_time_link == tip_before);

  rig.seq.service().set_down(false);
  StepReport r2 = rig.w.zip_step();
  REQUIRE(r2.outcome == StepOutcome::Finalized);
  CHECK(r2.triad->seq.ctr == 1);
  CHECK(rig.w.queue().size() == 0);
}

TEST_CASE("a failed attestation store leaves the step unfinalized and retries later") {
  Rig rig(7);
  HookedSequencer hooked(rig.seq);
  ChainWriter w(rig.ts, hooked, rig.rep, rig.rng);
  w.init_chain();

  // storage goes dark in the window between sequencing and storing
  hooked.after_sequence = [&] { rig.rep.bucket(2).set_available(false); };
  w.write(tx_of(rig.rng, "x"));
  StepReport r = w.zip_step();
  CHECK(r.outcome == StepOutcome::Unfinalized);
  REQUIRE(r.triad.has_value());
  CHECK(w.pending_retries() == 1);
  // the chain advanced anyway: the attestation exists even if not yet stored
  CHECK(w.handle().last_time_link == link_of(r.triad->time));
  CHECK_THROWS_AS(rig.rep.fetch<SequenceAttestation>(link_of(r.triad->seq)), Unavailable);

  // the next step stores the straggler before doing anything else
  hooked.after_sequence = {};
  rig.rep.bucket(2).set_available(true);
  StepReport r2 = w.zip_step();
  CHECK(r2.outcome == StepOutcome::Idle);
  CHECK(w.pending_retries() == 0);
  CHECK(rig.rep.fetch<SequenceAttestation>(link_of(r.triad->seq)) == r.triad->seq);
}

TEST_CASE("every written transaction lands in exactly one stored tree, in order") {
  Rig rig(8, 0, 0, /*batch_max=*/3);
  rig.w.init_chain();
  std::vector<TxLink> txs;
  for (int i = 0; i < 20; ++i) txs.push_back(tx_of(rig.rng, std::to_string(i)));
  for (const auto& t : txs) rig.w.write(t);

  // a rough ride: storage flaps, the sequencer flaps, then everything heals
  auto faults = [&](size_t step, ChainWriter& cw) {
    if (step == 1) cw.replicator().bucket(3).set_available(false);
    if (step == 2) cw.replicator().bucket(3).set_available(true);
    if (step == 3) rig.seq.service().set_down(true);
    if (step == 4) rig.seq.service().set_down(false);
  };
  RunReport rep = rig.w.run(0, 0, faults);
  CHECK(rep.aborted >= 1);
  CHECK(rep.refused >= 1);
  CHECK(rig.w.queue().size() == 0);

  std::vector<TxLink> seen;
  for (const auto& s : rep.steps) {
    if (!s.triad.has_value()) continue;
    MerkleTree m = rig.rep.fetch<MerkleTree>(block_payload_link(s.triad->block));
    seen.insert(seen.end(), m.leaves.begin(), m.leaves.end());
  }
  CHECK(seen == txs);  // nothing lost, nothing duplicated, order preserved
}

TEST_CASE("empty queue produces no blocks") {
  Rig rig(9);
  rig.w.init_chain();
  CHECK(rig.w.zip_step().outcome == StepOutcome::Idle);
  RunReport rep = rig.w.run(0, 0);
  CHECK(rep.idle == 1);
  CHECK(rep.finalized == 0);
}

TEST_CASE("ring chains embed each attestation's acknowledgment in the next block") {
  Rng rng(10);
  ManualClock clock(5'000);
  TimestampService ts(KeyPair::generate(rng), clock, rng);
  EnclaveRoot root(KeyPair::generate(rng), sha3_256(Bytes{'i', 'm', 'g'}));
  RingSequencer ring = RingSequencer::create(3, root, rng);
  ReplicationService rep(CodingScheme{}, mem_buckets(CodingScheme{}.n), 99);
  ChainWriter w(ts, ring, rep, rng, /*batch_max=*/2);

  Triad g = w.init_chain();
  const Block* b0 = std::get_if<Block>(&g.block);
  REQUIRE(b0 != nullptr);  // genesis keeps the plain shape even in ring mode
  auto control = rep.fetch<ControlPayload>(b0->payload_link);
  CHECK(control.ring.size() == 3);
  CHECK(control.seq_pubkey == ring.member(0).pub());
  CHECK(g.seq.sequence_id == ring.member(0).id());

  for (int i = 0; i < 8; ++i) w.write(tx_of(rng, std::to_string(i)));
  std::vector<Triad> triads;
  for (;;) {
    StepReport r = w.zip_step();
    if (r.outcome == StepOutcome::Idle) break;
    REQUIRE(r.outcome == StepOutcome::Finalized);
    triads.push_back(*r.triad);
  }
  REQUIRE(triads.size() == 4);

  // members take turns: genesis used member 0, steps continue 1, 2, 0, 1
  CHECK(triads[0].seq.sequence_id == ring.member(1).id());
  CHECK(triads[1].seq.sequence_id == ring.member(2).id());
  CHECK(triads[2].seq.sequence_id == ring.member(0).id());
  CHECK(triads[3].seq.sequence_id == ring.member(1).id());

  // block j carries exactly the acknowledgment of attestation j-1
  Link prev_time = link_of(g.time);
  SequenceAttestation prev_seq = g.seq;
  for (const auto& tri : triads) {
    const RingBlock* rb = std::get_if<RingBlock>(&tri.block);
    REQUIRE(rb != nullptr);
    CHECK(rb->prev_time_uuid == prev_time.uuid);
    CHECK(rb->prev_time_hash == prev_time.digest);
    REQUIRE(rb->seqs.size() == 1);
    CHECK(rb->seqs[0].ctr == prev_seq.ctr);
    CHECK(rb->seqs[0].sig == prev_seq.sig);
    CHECK(encode(rb->seqs[0].time_link) == prev_seq.bytes);
    prev_time = link_of(tri.time);
    prev_seq = tri.seq;
  }

  // each member's own counters are gap-free
  std::map<std::array<uint8_t, 16>, uint64_t> next_ctr;
  next_ctr[g.seq.sequence_id.v] = 1;
  for (const auto& tri : triads) {
    auto [it, fresh] = next_ctr.try_emplace(tri.seq.sequence_id.v, 0);
    CHECK(tri.seq.ctr == it->second);
    it->second = tri.seq.ctr + 1;
  }
}

TEST_CASE("a halted ring member is skipped; a fully halted ring refuses") {
  Rng rng(11);
  ManualClock clock(5'000);
  TimestampService ts(KeyPair::generate(rng), clock, rng);
  EnclaveRoot root(KeyPair::generate(rng), sha3_256(Bytes{'i', 'm', 'g'}));
  RingSequencer ring = RingSequencer::create(3, root, rng);
  ReplicationService rep(CodingScheme{}, mem_buckets(CodingScheme{}.n), 100);
  ChainWriter w(ts, ring, rep, rng, 1);
  w.init_chain();

  ring.halt(1, true);
  for (int i = 0; i < 4; ++i) w.write(tx_of(rng, std::to_string(i)));
  std::set<std::array<uint8_t, 16>> issuers;
  for (int i = 0; i < 4; ++i) {
    StepReport r = w.zip_step();
    REQUIRE(r.outcome == StepOutcome::Finalized);
    issuers.insert(r.triad->seq.sequence_id.v);
  }
  CHECK(issuers.size() == 2);
  CHECK(issuers.count(ring.member(1).id().v) == 0);

  // with everyone down, sequencing is refused but acknowledgments survive
  ring.halt(0, true);
  ring.halt(2, true);
  size_t pool_before = ring.peek_acks().size();
  w.write(tx_of(rng, "late"));
  StepReport refused = w.zip_step();
  CHECK(refused.outcome == StepOutcome::SequenceRefused);
  CHECK(ring.peek_acks().size() == pool_before);

  ring.halt(0, false);
  StepReport healed = w.zip_step();
  REQUIRE(healed.outcome == StepOutcome::Finalized);
  const RingBlock* rb = std::get_if<RingBlock>(&healed.triad->block);
  REQUIRE(rb != nullptr);
  CHECK(rb->seqs.size() == pool_before);  // nothing was lost in the refusal
}
