#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zl/codec.hpp"
#include "zl/errors.hpp"
#include "zl/keys.hpp"
#include "zl/merkle.hpp"
#include "zl/types.hpp"

using namespace zl;

namespace {

ObjectId id_from(uint8_t b) {
  ObjectId id;
  id.v.fill(b);
  return id;
}

Digest digest_from(uint8_t b) {
  Digest d;
  d.v.fill(b);
  return d;
}

Link link_from(uint8_t b) { return Link{id_from(b), digest_from(b)}; }

TxLink tx_from(uint8_t b) {
  return TxLink{"tx/v1", "transfer", link_from(b)};
}

}  // namespace

TEST_CASE("sha3-256 matches reference vectors") {
  // reference digests computed with an independent implementation
  CHECK(to_hex(sha3_256(ByteView{})) ==
        "a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a");
  CHECK(to_hex(sha3_256(view(std::string_view("abc")))) ==
        "3a985da74fe225b2045c172d6bd390bd855f086e3e9d525b46bfe24511431532");
  Bytes seq(32);
  for (size_t i = 0; i < seq.size(); i++) seq[i] = uint8_t(i);
  CHECK(to_hex(sha3_256(view(seq))) ==
        "050a48733bd5c2756ba95c5828cc83ee16fabcd3c086885b7744f84a0f9e0d94");
}

TEST_CASE("hex round trip") {
  Bytes b = {0x00, 0x7f, 0x80, 0xff, 0x12};
  CHECK(to_hex(view(b)) == "007f80ff12");
  CHECK(from_hex("007f80ff12") == b);
  CHECK(from_hex("007F80FF12") == b);
  CHECK_THROWS_AS(from_hex("abc"), CodecError);
  CHECK_THROWS_AS(from_hex("zz"), CodecError);
}

TEST_CASE("seeded rng and uuid4 are reproducible") {
  Rng a(42), b(42);
  ObjectId ua = uuid4(a), ub = uuid4(b);
  CHECK(ua == ub);
  CHECK((ua.v[6] & 0xf0) == 0x40);
  CHECK((ua.v[8] & 0xc0) == 0x80);
  CHECK(uuid4(a) != ua);
}

TEST_CASE("ed25519 sign and verify") {
  Rng rng(7);
  KeyPair kp = KeyPair::generate(rng);
  KeyPair same = KeyPair::from_seed(kp.seed());
  CHECK(kp.pub() == same.pub());

  Digest msg = sha3_256(view(std::string_view("payload")));
  Signature sig = kp.sign(msg);
  CHECK(sig == kp.sign(msg));  // deterministic scheme
  CHECK(verify_sig(kp.pub(), msg, sig));

  Signature bad = sig;
  bad.v[0] ^= 1;
  CHECK_FALSE(verify_sig(kp.pub(), msg, bad));

  Digest other = sha3_256(view(std::string_view("payload2")));
  CHECK_FALSE(verify_sig(kp.pub(), other, sig));

  KeyPair stranger = KeyPair::generate(rng);
  CHECK_FALSE(verify_sig(stranger.pub(), msg, sig));
}

TEST_CASE("canonical encoding round trips every wire type") {
  Rng rng(1);
  KeyPair kp = KeyPair::generate(rng);

  Link link{uuid4(rng), sha3_256(view(std::string_view("x")))};
  CHECK(decode<Link>(view(encode(link))) == link);

  TxLink tx{"tx/v1", "mint", link};
  CHECK(decode<TxLink>(view(encode(tx))) == tx);

  TxLink empty_schema{"", "", link};
  CHECK(decode<TxLink>(view(encode(empty_schema))) == empty_schema);

  MerkleTree m{uuid4(rng), {tx, tx_from(9), tx_from(17)}};
  CHECK(decode<MerkleTree>(view(encode(m))) == m);
  MerkleTree m0{uuid4(rng), {}};
  CHECK(decode<MerkleTree>(view(encode(m0))) == m0);

  Block genesis{uuid4(rng), link, std::nullopt};
  CHECK(decode<Block>(view(encode(genesis))) == genesis);
  Block inner{uuid4(rng), link, link_from(3)};
  CHECK(decode<Block>(view(encode(inner))) == inner);

  EnclaveAttestation att{digest_from(5), kp.pub(), kp.sign(digest_from(6))};
  CHECK(decode<EnclaveAttestation>(view(encode(att))) == att);

  ControlPayload ctl{uuid4(rng), kp.pub(), kp.pub(), {att, att}};
  CHECK(decode<ControlPayload>(view(encode(ctl))) == ctl);

  TimestampAttestation t{encode(link), 123456789, uuid4(rng),
                         kp.sign(digest_from(1))};
  CHECK(decode<TimestampAttestation>(view(encode(t))) == t);

  SequenceAttestation q{encode(link), 42, kp.sign(digest_from(2)), uuid4(rng)};
  CHECK(decode<SequenceAttestation>(view(encode(q))) == q);

  Certificate cert{tx, link, 99, 7, 2};
  CHECK(decode<Certificate>(view(encode(cert))) == cert);

  Shard s{link, {1, 2, 3}, {9, 8, 7, 6}, 4, 10};
  CHECK(decode<Shard>(view(encode(s))) == s);

  RingAck ack{kp.sign(digest_from(3)), 11, kp.pub(), link_from(8)};
  CHECK(decode<RingAck>(view(encode(ack))) == ack);

  RingBlock rb{digest_from(1), id_from(2), digest_from(3),
               id_from(4),     uuid4(rng), {ack, ack}};
  CHECK(decode<RingBlock>(view(encode(rb))) == rb);

  AnyBlock ab1 = genesis, ab2 = rb;
  CHECK(decode_any(view(encode(ab1))) == DecodedObject{genesis});
  CHECK(decode_any(view(encode(ab2))) == DecodedObject{rb});
}

TEST_CASE("decoder rejects malformed input") {
  Link link = link_from(1);
  Bytes good = encode(link);

  Bytes trailing = good;
  trailing.push_back(0);
  CHECK_THROWS_AS(decode<Link>(view(trailing)), CodecError);

  Bytes truncated(good.begin(), good.end() - 1);
  CHECK_THROWS_AS(decode<Link>(view(truncated)), CodecError);

  Bytes wrong_tag = good;
  wrong_tag[0] = TAG_BLOCK;
  CHECK_THROWS_AS(decode<Link>(view(wrong_tag)), CodecError);

  Bytes unknown = good;
  unknown[0] = 0x7f;
  CHECK_THROWS_AS(decode_any(view(unknown)), CodecError);

  CHECK_THROWS_AS(decode<Link>(ByteView{}), CodecError);

  // fixed-width field with the wrong length
  Bytes bad_len = good;
  bad_len[4] = 15;  // uuid length 16 -> 15
  CHECK_THROWS_AS(decode<Link>(view(bad_len)), CodecError);
}

TEST_CASE("encodings of distinct values differ") {
  CHECK(encode(link_from(1)) != encode(link_from(2)));
  Block a{id_from(1), link_from(2), std::nullopt};
  Block b = a;
  b.prev_time_link = link_from(0);
  CHECK(encode(a) != encode(b));
  TxLink t1{"s", "ab", link_from(1)};
  TxLink t2{"sa", "b", link_from(1)};  // same concatenation, split differently
  CHECK(encode(t1) != encode(t2));
}

TEST_CASE("merkle root: single, pair, odd promotion") {
  CHECK_THROWS_AS(merkle_root({}), EmptyBatch);

  auto leaf_hash = [](const TxLink& l) { return sha3_256(view(encode(l))); };
  auto pair_hash = [](const Digest& a, const Digest& b) {
    Bytes cat(a.v.begin(), a.v.end());
    append(cat, ByteView{b.v});
    return sha3_256(view(cat));
  };

  std::vector<TxLink> leaves;
  for (uint8_t i = 1; i <= 5; i++) leaves.push_back(tx_from(i));
  std::vector<Digest> h;
  for (const TxLink& l : leaves) h.push_back(leaf_hash(l));

  CHECK(merkle_root({leaves[0]}) == h[0]);
  CHECK(merkle_root({leaves[0], leaves[1]}) == pair_hash(h[0], h[1]));
  // three leaves: the odd third rises one level
  CHECK(merkle_root({leaves[0], leaves[1], leaves[2]}) ==
        pair_hash(pair_hash(h[0], h[1]), h[2]));
  // five leaves: h5 rises two levels
  Digest expect5 =
      pair_hash(pair_hash(pair_hash(h[0], h[1]), pair_hash(h[2], h[3])), h[4]);
  CHECK(merkle_root(leaves) == expect5);

  // order sensitivity
  CHECK(merkle_root({leaves[0], leaves[1]}) !=
        merkle_root({leaves[1], leaves[0]}));
}

TEST_CASE("link text form round trips") {
  Link zero{};
  std::string s = email_encode(zero);
  CHECK(s == std::string(64, '0') + "@" + std::string(32, '0') + ".bky.sh");

  Rng rng(3);
  for (int i = 0; i < 20; i++) {
    Link l{uuid4(rng), sha3_256(view(encode(link_from(uint8_t(i)))))};
    std::string e = email_encode(l);
    size_t at = e.find('@');
    CHECK(at == 64);                   // local part is exactly 64 chars
    CHECK(e.size() - at - 1 <= 256);   // domain part within mailbox limits
    CHECK(email_parse(e) == l);
  }

  CHECK_THROWS_AS(email_parse("nope"), CodecError);
  CHECK_THROWS_AS(email_parse(std::string(63, '0') + "@" +
                              std::string(32, '0') + ".bky.sh"),
                  CodecError);
  CHECK_THROWS_AS(email_parse(std::string(64, '0') + "@" +
                              std::string(32, '0') + ".other"),
                  CodecError);
}

TEST_CASE("sequence attestation retrieval id folds the counter in") {
  Rng rng(5);
  KeyPair kp = KeyPair::generate(rng);
  SequenceAttestation q{encode(link_from(1)), 0x0102,
                        kp.sign(digest_from(0)), uuid4(rng)};
  Link l = link_of(q);
  CHECK(l.digest == sha3_256(view(encode(q))));
  ObjectId expect = q.sequence_id;
  expect.v[14] ^= 0x01;
  expect.v[15] ^= 0x02;
  CHECK(l.uuid == expect);

  SequenceAttestation q2 = q;
  q2.ctr = 0x0103;
  CHECK(link_of(q2).uuid != l.uuid);  // distinct counters, distinct ids
}

TEST_CASE("block view helpers cover both block shapes") {
  Block b{id_from(1), link_from(2), link_from(3)};
  AnyBlock ab = b;
  CHECK(block_uuid(ab) == b.uuid);
  CHECK(block_payload_link(ab) == b.payload_link);
  CHECK(block_prev_time_link(ab) == b.prev_time_link);

  RingBlock rb{digest_from(4), id_from(5), digest_from(6), id_from(7),
               id_from(8),     {}};
  AnyBlock arb = rb;
  CHECK(block_uuid(arb) == rb.uuid);
  CHECK(block_payload_link(arb) == Link{id_from(5), digest_from(4)});
  CHECK(block_prev_time_link(arb) == Link{id_from(7), digest_from(6)});
  CHECK(link_of(arb) == link_of(rb));
}
