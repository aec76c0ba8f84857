#include "zl/types.hpp"

#include "zl/codec.hpp"
#include "zl/errors.hpp"

namespace zl {

static constexpr std::string_view kLinkDomain = ".bky.sh";

ObjectId uuid4(Rng& rng) {
  ObjectId id;
  rng.fill(id.v.data(), id.v.size());
  id.v[6] = (id.v[6] & 0x0f) | 0x40;
  id.v[8] = (id.v[8] & 0x3f) | 0x80;
  return id;
}

std::string to_hex(const ObjectId& id) { return to_hex(ByteView{id.v}); }

const ObjectId& block_uuid(const AnyBlock& b) {
  return std::visit([](const auto& x) -> const ObjectId& { return x.uuid; }, b);
}

Link block_payload_link(const AnyBlock& b) {
  if (const Block* p = std::get_if<Block>(&b)) return p->payload_link;
  const RingBlock& r = std::get<RingBlock>(b);
  return Link{r.merkle_uuid, r.merkle_hash};
}

std::optional<Link> block_prev_time_link(const AnyBlock& b) {
  if (const Block* p = std::get_if<Block>(&b)) return p->prev_time_link;
  const RingBlock& r = std::get<RingBlock>(b);
  return Link{r.prev_time_uuid, r.prev_time_hash};
}

template <class T>
static Link hash_link(const T& x) {
  return Link{x.uuid, sha3_256(view(encode(x)))};
}

Link link_of(const MerkleTree& m) { return hash_link(m); }
Link link_of(const Block& b) { return hash_link(b); }
Link link_of(const RingBlock& b) { return hash_link(b); }
Link link_of(const ControlPayload& p) { return hash_link(p); }
Link link_of(const TimestampAttestation& t) { return hash_link(t); }

Link link_of(const AnyBlock& b) {
  return std::visit([](const auto& x) { return link_of(x); }, b);
}

Link link_of(const SequenceAttestation& q) {
  Link l{q.sequence_id, sha3_256(view(encode(q)))};
  uint64_t ctr = q.ctr;
  for (int i = 0; i < 8; i++) {
    l.uuid.v[15 - i] ^= uint8_t(ctr >> (8 * i));
  }
  return l;
}

Digest time_att_digest(ByteView bytes, uint64_t ts, const ObjectId& uuid) {
  Bytes pre(bytes.begin(), bytes.end());
  append_u64be(pre, ts);
  append(pre, ByteView{uuid.v});
  return sha3_256(view(pre));
}

Digest seq_att_digest(ByteView bytes, uint64_t ctr) {
  Bytes pre(bytes.begin(), bytes.end());
  append_u64be(pre, ctr);
  return sha3_256(view(pre));
}

Digest enclave_att_digest(const Digest& image, const PublicKey& app) {
  Bytes pre(image.v.begin(), image.v.end());
  append(pre, ByteView{app.v});
  return sha3_256(view(pre));
}

std::string email_encode(const Link& l) {
  std::string s = to_hex(l.digest);
  s += '@';
  s += to_hex(l.uuid);
  s += kLinkDomain;
  return s;
}

Link email_parse(std::string_view s) {
  size_t at = s.find('@');
  if (at == std::string_view::npos) throw CodecError("link string missing '@'");
  std::string_view local = s.substr(0, at);
  std::string_view domain = s.substr(at + 1);
  if (local.size() != 64) throw CodecError("link digest part must be 64 hex chars");
  if (domain.size() != 32 + kLinkDomain.size() ||
      domain.substr(32) != kLinkDomain) {
    throw CodecError("link id part malformed");
  }
  Bytes dg = from_hex(local);
  Bytes id = from_hex(domain.substr(0, 32));
  Link l;
  std::copy(dg.begin(), dg.end(), l.digest.v.begin());
  std::copy(id.begin(), id.end(), l.uuid.v.begin());
  return l;
}

}  // namespace zl
