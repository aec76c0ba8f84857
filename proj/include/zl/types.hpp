#pragma once

#include <compare>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zl/bytes.hpp"
#include "zl/hash.hpp"
#include "zl/keys.hpp"
#include "zl/rng.hpp"

namespace zl {

struct ObjectId {
  std::array<uint8_t, 16> v{};
  auto operator<=>(const ObjectId&) const = default;
};

// random (version 4) id
ObjectId uuid4(Rng& rng);
std::string to_hex(const ObjectId& id);

// ⟨uuid, digest-of-canonical-encoding⟩: the universal object reference.
// Encoded links double as retrieval keys in the replication layer.
struct Link {
  ObjectId uuid;
  Digest digest;
  auto operator<=>(const Link&) const = default;
};

// leaf of a block's tree; data itself stays off-chain
struct TxLink {
  std::string schema;
  std::string tx_type;
  Link data;
  auto operator<=>(const TxLink&) const = default;
};

struct MerkleTree {
  ObjectId uuid;
  std::vector<TxLink> leaves;
  auto operator<=>(const MerkleTree&) const = default;
};

struct Block {
  ObjectId uuid;
  Link payload_link;                      // merkle tree, or control payload at genesis
  std::optional<Link> prev_time_link;     // absent only at genesis
  auto operator<=>(const Block&) const = default;
};

struct EnclaveAttestation {
  Digest image_digest;
  PublicKey app_pubkey;
  Signature sig;  // root key over sha3(image_digest ‖ app_pubkey)
  auto operator<=>(const EnclaveAttestation&) const = default;
};

// genesis payload: names the service keys a chain is bound to
struct ControlPayload {
  ObjectId uuid;
  PublicKey seq_pubkey;
  PublicKey time_pubkey;
  std::vector<EnclaveAttestation> ring;  // empty for single-sequencer chains
  auto operator<=>(const ControlPayload&) const = default;
};

struct TimestampAttestation {
  Bytes bytes;  // encoded link of the stamped object
  uint64_t ts = 0;
  ObjectId uuid;
  Signature sig;  // over sha3(bytes ‖ ts ‖ uuid)
  auto operator<=>(const TimestampAttestation&) const = default;
};

struct SequenceAttestation {
  Bytes bytes;  // encoded link of the sequenced object
  uint64_t ctr = 0;
  Signature sig;  // over sha3(bytes ‖ ctr)
  ObjectId sequence_id;
  auto operator<=>(const SequenceAttestation&) const = default;
};

// a sequencer's acknowledgment carried inside a later block
struct RingAck {
  Signature sig;
  uint64_t ctr = 0;
  PublicKey issuer;
  Link time_link;  // the attested timestamp
  auto operator<=>(const RingAck&) const = default;
};

// block shape used by multi-sequencer chains: previous-timestamp reference is
// split into its hash/uuid parts and the block carries acknowledgments
struct RingBlock {
  Digest merkle_hash;
  ObjectId merkle_uuid;
  Digest prev_time_hash;
  ObjectId prev_time_uuid;
  ObjectId uuid;
  std::vector<RingAck> seqs;
  auto operator<=>(const RingBlock&) const = default;
};

using AnyBlock = std::variant<Block, RingBlock>;

struct Triad {
  AnyBlock block;
  TimestampAttestation time;
  SequenceAttestation seq;
  bool operator==(const Triad&) const = default;
};

struct Certificate {
  TxLink tx;
  Link genesis_link;
  uint64_t ts = 0;
  uint64_t height = 0;
  uint64_t rank = 0;
  auto operator<=>(const Certificate&) const = default;
};

// one erasure-coded fragment of a replicated object
struct Shard {
  Link object_link;
  Bytes coefficients;  // one GF(256) element per source chunk
  Bytes payload;
  uint64_t index = 0;     // ordinal in [0, n)
  uint64_t orig_len = 0;  // object length before chunk padding
  auto operator<=>(const Shard&) const = default;
};

// uniform view over the two block shapes
const ObjectId& block_uuid(const AnyBlock& b);
Link block_payload_link(const AnyBlock& b);
std::optional<Link> block_prev_time_link(const AnyBlock& b);

Link link_of(const MerkleTree& m);
Link link_of(const Block& b);
Link link_of(const RingBlock& b);
Link link_of(const AnyBlock& b);
Link link_of(const ControlPayload& p);
Link link_of(const TimestampAttestation& t);
// id is sequence_id with its low 8 bytes xor'ed with the counter, so every
// issued counter gets a distinct 16-byte retrieval id
Link link_of(const SequenceAttestation& q);

// signing preimages
Digest time_att_digest(ByteView bytes, uint64_t ts, const ObjectId& uuid);
Digest seq_att_digest(ByteView bytes, uint64_t ctr);
Digest enclave_att_digest(const Digest& image, const PublicKey& app);

// mailbox-shaped rendering of a link: 64 hex chars, '@', 32 hex chars, fixed suffix
std::string email_encode(const Link& l);
Link email_parse(std::string_view s);

}  // namespace zl
