#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <set>

#include "zl/bucket_store.hpp"
#include "zl/clock.hpp"
#include "zl/codec.hpp"
#include "zl/errors.hpp"
#include "zl/kvconfig.hpp"
#include "zl/replication.hpp"
#include "zl/sequence_service.hpp"
#include "zl/timestamp_service.hpp"
#include "zl/tx_queue.hpp"

using namespace zl;
namespace fs = std::filesystem;

namespace {

Link some_link(Rng& rng) {
  Link l;
  l.uuid = uuid4(rng);
  Bytes b{1, 2, 3};
  rng.fill(b.data(), b.size());
  l.digest = sha3_256(view(b));
  return l;
}

std::vector<std::unique_ptr<BucketStore>> mem_buckets(size_t n) {
  std::vector<std::unique_ptr<BucketStore>> out;
  for (size_t i = 0; i < n; ++i)
    out.push_back(std::make_unique<BucketStore>(uint32_t(i), "region-" + std::to_string(i)));
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("zl-test-" + std::to_string(Rng::entropy_seed()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing") {
  auto c = KvConfig::parse_text("a = 1\n# comment\n b.c =  hello world \nx=2.5\nempty =\n");
  CHECK(c.num("a", 0) == 1);
  CHECK(c.str("b.c", "") == "hello world");
  CHECK(c.real("x", 0) == doctest::Approx(2.5));
  CHECK(c.str("empty", "zz") == "");
  CHECK(c.str("missing", "dflt") == "dflt");
  CHECK(c.num("missing", 7) == 7);
  CHECK_THROWS_AS(c.require("missing"), CodecError);
  CHECK_THROWS_AS(c.num("b.c", 0), CodecError);
  CHECK_THROWS_AS(KvConfig::parse_text("just a line\n"), CodecError);
  CHECK_THROWS_AS(KvConfig::parse_text("= noval\n"), CodecError);
  CHECK(KvConfig::parse_text("a=1 # trailing comment\n").num("a", 0) == 1);
}

TEST_CASE("timestamp service issues valid monotone attestations") {
  Rng rng(11);
  ManualClock clock(1000);
  TimestampService ts(KeyPair::generate(rng), clock, rng);

  Link l = some_link(rng);
  TimestampAttestation t1 = ts.stamp(l);
  CHECK(t1.bytes == encode(l));
  CHECK(t1.ts == 1000);
  CHECK(validate(ts.pub(), t1));

  // same link again: fresh uuid, new attestation, still valid
  TimestampAttestation t1b = ts.stamp(l);
  CHECK(validate(ts.pub(), t1b));
  CHECK(t1b.uuid.v != t1.uuid.v);

  // clock stepping backwards must not produce a decreasing timestamp
  clock.set(500);
  TimestampAttestation t2 = ts.stamp(some_link(rng));
  CHECK(t2.ts >= t1.ts);

  clock.set(5000);
  TimestampAttestation t3 = ts.stamp(some_link(rng));
  CHECK(t3.ts == 5000);

  SUBCASE("tampered fields fail validation") {
    TimestampAttestation bad = t1;
    bad.ts += 1;
    CHECK_FALSE(validate(ts.pub(), bad));
    bad = t1;
    bad.bytes.push_back(0);
    CHECK_FALSE(validate(ts.pub(), bad));
    bad = t1;
    bad.uuid.v[0] ^= 1;
    CHECK_FALSE(validate(ts.pub(), bad));
    Rng rng2(12);
    CHECK_FALSE(validate(KeyPair::generate(rng2).pub(), t1));
  }

  SUBCASE("halted service refuses") {
    ts.set_down(true);
    CHECK_THROWS_AS(ts.stamp(l), ServiceDown);
    ts.set_down(false);
    CHECK(validate(ts.pub(), ts.stamp(l)));
  }
}

TEST_CASE("sequence service: consecutive counters, idempotent repeats") {
  Rng rng(21);
  SequenceService seq = SequenceService::fresh(rng);

  Link a = some_link(rng), b = some_link(rng), c = some_link(rng);
  SequenceAttestation qa = seq.sequence(a);
  SequenceAttestation qb = seq.sequence(b);
  CHECK(qa.ctr == 0);
  CHECK(qb.ctr == 1);
  CHECK(check(seq.pub(), qa));
  CHECK(check(seq.pub(), qb));
  CHECK(qa.sequence_id.v == seq.id().v);

  // resubmitting the same bytes returns the stored attestation verbatim
  SequenceAttestation qa2 = seq.sequence(a);
  CHECK(qa2 == qa);
  CHECK(seq.next_ctr() == 2);

  SequenceAttestation qc = seq.sequence(c);
  CHECK(qc.ctr == 2);

  SUBCASE("tampering breaks the check") {
    SequenceAttestation bad = qa;
    bad.ctr += 1;
    CHECK_FALSE(check(seq.pub(), bad));
    bad = qa;
    bad.bytes[0] ^= 1;
    CHECK_FALSE(check(seq.pub(), bad));
  }

  SUBCASE("sequence_id does not feed the signature but rides along") {
    SequenceAttestation moved = qa;
    moved.sequence_id.v[3] ^= 0xff;
    CHECK(check(seq.pub(), moved));  // signature covers bytes and ctr only
    CHECK(link_of(moved).uuid.v != link_of(qa).uuid.v);
  }

  SUBCASE("halted service refuses, resumes where it left off") {
    seq.set_down(true);
    CHECK_THROWS_AS(seq.sequence(some_link(rng)), ServiceDown);
    seq.set_down(false);
    CHECK(seq.sequence(some_link(rng)).ctr == 3);
  }
}

TEST_CASE("sequence service restore round trip") {
  Rng rng(22);
  SequenceService seq = SequenceService::fresh(rng);
  Link a = some_link(rng), b = some_link(rng);
  SequenceAttestation qa = seq.sequence(a);
  SequenceAttestation qb = seq.sequence(b);

  SequenceService back = SequenceService::restore(KeyPair::from_seed(seq.keypair().seed()), seq.id(), seq.issued());
  CHECK(back.pub().v == seq.pub().v);
  CHECK(back.next_ctr() == 2);
  CHECK(back.sequence(a) == qa);  // replay hits the stored attestation
  CHECK(back.sequence(b) == qb);
  CHECK(back.sequence(some_link(rng)).ctr == 2);
}

TEST_CASE("a replacement sequencer is a different identity") {
  Rng rng(23);
  SequenceService s1 = SequenceService::fresh(rng);
  SequenceService s2 = SequenceService::fresh(rng);
  CHECK(s1.pub().v != s2.pub().v);
  CHECK(s1.id().v != s2.id().v);

  Link l = some_link(rng);
  SequenceAttestation q1 = s1.sequence(l);
  SequenceAttestation q2 = s2.sequence(l);
  CHECK(q1.ctr == q2.ctr);           // both start at zero...
  CHECK_FALSE(check(s1.pub(), q2));  // ...but attestations do not cross over
  CHECK_FALSE(check(s2.pub(), q1));
}

TEST_CASE("enclave attestation binds application keys to the root") {
  Rng rng(31);
  EnclaveRoot root(KeyPair::generate(rng), sha3_256(view("measured image")));
  KeyPair app = KeyPair::generate(rng);

  EnclaveAttestation e = root.attest(app.pub());
  auto got = verify_enclave(root.pub(), e);
  REQUIRE(got.has_value());
  CHECK(got->v == app.pub().v);

  EnclaveAttestation bad = e;
  bad.app_pubkey.v[0] ^= 1;
  CHECK_FALSE(verify_enclave(root.pub(), bad).has_value());
  bad = e;
  bad.image_digest.v[0] ^= 1;
  CHECK_FALSE(verify_enclave(root.pub(), bad).has_value());
  Rng rng2(32);
  CHECK_FALSE(verify_enclave(KeyPair::generate(rng2).pub(), e).has_value());
}

TEST_CASE("bucket store write-once semantics") {
  BucketStore b(0, "r0");
  Bytes k{1, 2, 3}, v{9, 9};
  b.put(k, v);
  CHECK(b.get(k) == v);
  CHECK_NOTHROW(b.put(k, v));  // identical rewrite is a no-op
  CHECK_THROWS_AS(b.put(k, Bytes{8}), WormViolation);
  CHECK(b.get(Bytes{0}) == std::nullopt);
  CHECK(b.keys().size() == 1);

  b.set_available(false);
  CHECK_THROWS_AS(b.put(Bytes{4}, v), ServiceDown);
  CHECK_THROWS_AS(b.get(k), ServiceDown);
  CHECK_THROWS_AS(b.keys(), ServiceDown);
  b.set_available(true);
  CHECK(b.get(k) == v);
}

TEST_CASE("replication round trip and shard placement") {
  Rng rng(41);
  CodingScheme scheme;
  ReplicationService rep(scheme, mem_buckets(scheme.n), 777);

  MerkleTree m;
  m.uuid = uuid4(rng);
  m.leaves.push_back(TxLink{"s", "t", some_link(rng)});
  Link l = rep.replicate(m);
  CHECK(l.uuid.v == m.uuid.v);

  MerkleTree back = rep.fetch<MerkleTree>(l);
  CHECK(back == m);

  // each bucket holds exactly one shard, keyed by the encoded link
  Bytes key = encode(l);
  for (size_t i = 0; i < rep.bucket_count(); ++i) {
    auto v = rep.bucket(i).get(key);
    REQUIRE(v.has_value());
    Shard s = decode<Shard>(view(*v));
    CHECK(s.index == i);
    CHECK(s.object_link == l);
  }

  // replaying the same write is accepted (shards are deterministic)
  CHECK_NOTHROW(rep.replicate(m));

  // a different object under the same link would violate write-once
  MerkleTree other = m;
  other.leaves.push_back(TxLink{"s", "u", some_link(rng)});
  CHECK_THROWS_AS(rep.replicate_raw(l, encode(other)), WormViolation);
}

TEST_CASE("replication survives bucket loss up to the coding margin") {
  Rng rng(42);
  CodingScheme scheme;
  ReplicationService rep(scheme, mem_buckets(scheme.n), 778);

  MerkleTree m;
  m.uuid = uuid4(rng);
  for (int i = 0; i < 60; ++i) m.leaves.push_back(TxLink{"s", "t", some_link(rng)});
  Link l = rep.replicate(m);

  rep.bucket(0).set_available(false);
  rep.bucket(3).set_available(false);
  rep.bucket(5).set_available(false);
  CHECK(rep.fetch<MerkleTree>(l) == m);
  CHECK(rep.any_bucket_down());

  rep.bucket(1).set_available(false);
  CHECK_THROWS_AS(rep.fetch_raw(l), Unavailable);

  rep.bucket(0).set_available(true);
  rep.bucket(1).set_available(true);
  rep.bucket(3).set_available(true);
  rep.bucket(5).set_available(true);
  CHECK_FALSE(rep.any_bucket_down());

  // unknown link: every bucket is up but nothing is stored
  CHECK_THROWS_AS(rep.fetch_raw(some_link(rng)), Unavailable);
}

TEST_CASE("corrupted shards are outvoted by clean subsets") {
  Rng rng(43);
  CodingScheme scheme;
  ReplicationService rep(scheme, mem_buckets(scheme.n), 779);

  MerkleTree m;
  m.uuid = uuid4(rng);
  for (int i = 0; i < 20; ++i) m.leaves.push_back(TxLink{"s", "t", some_link(rng)});
  Link l = rep.replicate(m);
  Bytes key = encode(l);

  // flip one byte inside one stored shard's payload
  auto stored = rep.bucket(2).get(key);
  REQUIRE(stored.has_value());
  Shard s = decode<Shard>(view(*stored));
  s.payload[10] ^= 0x40;
  BucketStore tampered(2, "r2");
  tampered.put(key, encode(s));

  std::vector<std::unique_ptr<BucketStore>> bs = mem_buckets(scheme.n);
  for (size_t i = 0; i < scheme.n; ++i) {
    if (i == 2) {
      bs[i] = std::make_unique<BucketStore>(uint32_t(i), "r2");
      bs[i]->put(key, encode(s));
    } else {
      auto v = rep.bucket(i).get(key);
      REQUIRE(v.has_value());
      bs[i]->put(key, *v);
    }
  }
  ReplicationService rep2(scheme, std::move(bs), 779);
  CHECK(rep2.fetch<MerkleTree>(l) == m);  // clean subset exists, fetch heals over the bad shard
}

TEST_CASE("enumerate_links unions available buckets") {
  Rng rng(44);
  CodingScheme scheme;
  ReplicationService rep(scheme, mem_buckets(scheme.n), 780);

  std::set<std::string> want;
  for (int i = 0; i < 5; ++i) {
    MerkleTree m;
    m.uuid = uuid4(rng);
    m.leaves.push_back(TxLink{"s", "t", some_link(rng)});
    Link l = rep.replicate(m);
    want.insert(to_hex(l.digest));
  }
  rep.bucket(0).set_available(false);
  rep.bucket(1).set_available(false);

  std::set<std::string> got;
  for (const Link& l : rep.enumerate_links()) got.insert(to_hex(l.digest));
  CHECK(got == want);
}

TEST_CASE("bucket persistence round trip") {
  TempDir tmp;
  Rng rng(45);
  CodingScheme scheme;

  MerkleTree m;
  m.uuid = uuid4(rng);
  m.leaves.push_back(TxLink{"s", "t", some_link(rng)});
  Link l;

  {
    std::vector<std::unique_ptr<BucketStore>> bs;
    for (size_t i = 0; i < scheme.n; ++i)
      bs.push_back(std::make_unique<BucketStore>(uint32_t(i), "r", (tmp.path / std::to_string(i)).string()));
    ReplicationService rep(scheme, std::move(bs), 781);
    l = rep.replicate(m);
  }

  {
    std::vector<std::unique_ptr<BucketStore>> bs;
    for (size_t i = 0; i < scheme.n; ++i) {
      bs.push_back(std::make_unique<BucketStore>(uint32_t(i), "r", (tmp.path / std::to_string(i)).string()));
      bs[i]->load();
    }
    ReplicationService rep(scheme, std::move(bs), 781);
    CHECK(rep.fetch<MerkleTree>(l) == m);
    CHECK(rep.enumerate_links().size() == 1);
  }
}

TEST_CASE("tx queue ordering, bounds, requeue") {
  Rng rng(46);
  TxQueue q(4);
  for (int i = 0; i < 4; ++i) q.enqueue(TxLink{"s", std::to_string(i), some_link(rng)});
  CHECK_THROWS_AS(q.enqueue(TxLink{"s", "overflow", some_link(rng)}), QueueFull);
  CHECK(q.size() == 4);

  auto batch = q.dequeue_batch(3);
  REQUIRE(batch.size() == 3);
  CHECK(batch[0].tx_type == "0");
  CHECK(batch[2].tx_type == "2");
  CHECK(q.size() == 1);

  // aborted batch goes back in front, order preserved
  q.requeue_front(std::move(batch));
  auto all = q.dequeue_batch(10);
  REQUIRE(all.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(all[size_t(i)].tx_type == std::to_string(i));
  CHECK(q.dequeue_batch(10).empty());
}
