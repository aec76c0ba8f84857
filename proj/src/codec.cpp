#include "zl/codec.hpp"

#include "zl/errors.hpp"

namespace zl {

namespace {

// guards against absurd allocations when fed garbage
constexpr uint32_t kMaxField = 1u << 26;

struct Writer {
  Bytes out;

  void tag(uint8_t t) { out.push_back(t); }

  void field(ByteView v) {
    if (v.size() > kMaxField) throw CodecError("field too large");
    append_u32be(out, uint32_t(v.size()));
    append(out, v);
  }

  void field_u64(uint64_t v) {
    append_u32be(out, 8);
    append_u64be(out, v);
  }

  void field_absent() { append_u32be(out, 0); }
};

struct Reader {
  ByteView in;
  size_t pos = 0;

  explicit Reader(ByteView v) : in(v) {}

  uint8_t tag() {
    if (pos >= in.size()) throw CodecError("missing type tag");
    return in[pos++];
  }

  void expect_tag(uint8_t t) {
    if (tag() != t) throw CodecError("type tag mismatch");
  }

  ByteView field() {
    if (pos + 4 > in.size()) throw CodecError("truncated field length");
    uint32_t len = read_u32be(in.data() + pos);
    pos += 4;
    if (len > kMaxField) throw CodecError("field too large");
    if (pos + len > in.size()) throw CodecError("truncated field");
    ByteView v = in.subspan(pos, len);
    pos += len;
    return v;
  }

  uint64_t field_u64() {
    ByteView v = field();
    if (v.size() != 8) throw CodecError("bad integer field width");
    return read_u64be(v.data());
  }

  void end() {
    if (pos != in.size()) throw CodecError("trailing bytes");
  }
};

template <size_t N>
void read_fixed(Reader& r, std::array<uint8_t, N>& out) {
  ByteView v = r.field();
  if (v.size() != N) throw CodecError("bad fixed field width");
  std::copy(v.begin(), v.end(), out.begin());
}

Bytes read_bytes(Reader& r) {
  ByteView v = r.field();
  return Bytes(v.begin(), v.end());
}

std::string read_string(Reader& r) {
  ByteView v = r.field();
  return std::string(v.begin(), v.end());
}

template <class T, class Enc>
Bytes list_payload(const std::vector<T>& xs, Enc enc) {
  Bytes p;
  append_u32be(p, uint32_t(xs.size()));
  for (const T& x : xs) {
    Bytes e = enc(x);
    append_u32be(p, uint32_t(e.size()));
    append(p, view(e));
  }
  return p;
}

template <class T>
std::vector<T> read_list(Reader& r) {
  ByteView p = r.field();
  if (p.size() < 4) throw CodecError("truncated list");
  uint32_t count = read_u32be(p.data());
  size_t pos = 4;
  std::vector<T> out;
  out.reserve(std::min<uint32_t>(count, 4096));
  for (uint32_t i = 0; i < count; i++) {
    if (pos + 4 > p.size()) throw CodecError("truncated list element length");
    uint32_t len = read_u32be(p.data() + pos);
    pos += 4;
    if (len > kMaxField || pos + len > p.size())
      throw CodecError("truncated list element");
    out.push_back(decode<T>(p.subspan(pos, len)));
    pos += len;
  }
  if (pos != p.size()) throw CodecError("trailing list bytes");
  return out;
}

}  // namespace

Bytes encode(const Link& x) {
  Writer w;
  w.tag(TAG_LINK);
  w.field(ByteView{x.uuid.v});
  w.field(ByteView{x.digest.v});
  return std::move(w.out);
}

template <>
Link decode<Link>(ByteView in) {
  Reader r(in);
  r.expect_tag(TAG_LINK);
  Link x;
  read_fixed(r, x.uuid.v);
  read_fixed(r, x.digest.v);
  r.end();
  return x;
}

Bytes encode(const TxLink& x) {
  Writer w;
  w.tag(TAG_TXLINK);
  w.field(view(x.schema));
  w.field(view(x.tx_type));
  w.field(view(encode(x.data)));
  return std::move(w.out);
}

template <>
TxLink decode<TxLink>(ByteView in) {
  Reader r(in);
  r.expect_tag(TAG_TXLINK);
  TxLink x;
  x.schema = read_string(r);
  x.tx_type = read_string(r);
  x.data = decode<Link>(r.field());
  r.end();
  return x;
}

Bytes encode(const MerkleTree& x) {
  Writer w;
  w.tag(TAG_MERKLE);
  w.field(ByteView{x.uuid.v});
  w.field(view(list_payload(x.leaves, [](const TxLink& l) { return encode(l); })));
  return std::move(w.out);
}

template <>
MerkleTree decode<MerkleTree>(ByteView in) {
  Reader r(in);
  r.expect_tag(TAG_MERKLE);
  MerkleTree x;
  read_fixed(r, x.uuid.v);
  x.leaves = read_list<TxLink>(r);
  r.end();
  return x;
}

Bytes encode(const Block& x) {
  Writer w;
  w.tag(TAG_BLOCK);
  w.field(ByteView{x.uuid.v});
  w.field(view(encode(x.payload_link)));
  if (x.prev_time_link) {
    w.field(view(encode(*x.prev_time_link)));
  } else {
    w.field_absent();
  }
  return std::move(w.out);
}

template <>
Block decode<Block>(ByteView in) {
  Reader r(in);
  r.expect_tag(TAG_BLOCK);
  Block x;
  read_fixed(r, x.uuid.v);
  x.payload_link = decode<Link>(r.field());
  ByteView prev = r.field();
  if (!prev.empty()) x.prev_time_link = decode<Link>(prev);
  r.end();
  return x;
}

Bytes encode(const ControlPayload& x) {
  Writer w;
  w.tag(TAG_CONTROL);
  w.field(ByteView{x.uuid.v});
  w.field(ByteView{x.seq_pubkey.v});
  w.field(ByteView{x.time_pubkey.v});
  w.field(view(list_payload(
      x.ring, [](const EnclaveAttestation& e) { return encode(e); })));
  return std::move(w.out);
}

template <>
ControlPayload decode<ControlPayload>(ByteView in) {
  Reader r(in);
  r.expect_tag(TAG_CONTROL);
  ControlPayload x;
  read_fixed(r, x.uuid.v);
  read_fixed(r, x.seq_pubkey.v);
  read_fixed(r, x.time_pubkey.v);
  x.ring = read_list<EnclaveAttestation>(r);
  r.end();
  return x;
}

Bytes encode(const TimestampAttestation& x) {
  Writer w;
  w.tag(TAG_TIME_ATT);
  w.field(view(x.bytes));
  w.field_u64(x.ts);
  w.field(ByteView{x.uuid.v});
  w.field(ByteView{x.sig.v});
  return std::move(w.out);
}

template <>
TimestampAttestation decode<TimestampAttestation>(ByteView in) {
  Reader r(in);
  r.expect_tag(TAG_TIME_ATT);
  TimestampAttestation x;
  x.bytes = read_bytes(r);
  x.ts = r.field_u64();
  read_fixed(r, x.uuid.v);
  read_fixed(r, x.sig.v);
  r.end();
  return x;
}

Bytes encode(const SequenceAttestation& x) {
  Writer w;
  w.tag(TAG_SEQ_ATT);
  w.field(view(x.bytes));
  w.field_u64(x.ctr);
  w.field(ByteView{x.sig.v});
  w.field(ByteView{x.sequence_id.v});
  return std::move(w.out);
}

template <>
SequenceAttestation decode<SequenceAttestation>(ByteView in) {
  Reader r(in);
  r.expect_tag(TAG_SEQ_ATT);
  SequenceAttestation x;
  x.bytes = read_bytes(r);
  x.ctr = r.field_u64();
  read_fixed(r, x.sig.v);
  read_fixed(r, x.sequence_id.v);
  r.end();
  return x;
}

Bytes encode(const EnclaveAttestation& x) {
  Writer w;
  w.tag(TAG_ENCLAVE_ATT);
  w.field(ByteView{x.image_digest.v});
  w.field(ByteView{x.app_pubkey.v});
  w.field(ByteView{x.sig.v});
  return std::move(w.out);
}

template <>
EnclaveAttestation decode<EnclaveAttestation>(ByteView in) {
  Reader r(in);
  r.expect_tag(TAG_ENCLAVE_ATT);
  EnclaveAttestation x;
  read_fixed(r, x.image_digest.v);
  read_fixed(r, x.app_pubkey.v);
  read_fixed(r, x.sig.v);
  r.end();
  return x;
}

Bytes encode(const Certificate& x) {
  Writer w;
  w.tag(TAG_CERT);
  w.field(view(encode(x.tx)));
  w.field(view(encode(x.genesis_link)));
  w.field_u64(x.ts);
  w.field_u64(x.height);
  w.field_u64(x.rank);
  return std::move(w.out);
}

template <>
Certificate decode<Certificate>(ByteView in) {
  Reader r(in);
  r.expect_tag(TAG_CERT);
  Certificate x;
  x.tx = decode<TxLink>(r.field());
  x.genesis_link = decode<Link>(r.field());
  x.ts = r.field_u64();
  x.height = r.field_u64();
  x.rank = r.field_u64();
  r.end();
  return x;
}

Bytes encode(const Shard& x) {
  Writer w;
  w.tag(TAG_SHARD);
  w.field(view(encode(x.object_link)));
  w.field(view(x.coefficients));
  w.field(view(x.payload));
  w.field_u64(x.index);
  w.field_u64(x.orig_len);
  return std::move(w.out);
}

template <>
Shard decode<Shard>(ByteView in) {
  Reader r(in);
  r.expect_tag(TAG_SHARD);
  Shard x;
  x.object_link = decode<Link>(r.field());
  x.coefficients = read_bytes(r);
  x.payload = read_bytes(r);
  x.index = r.field_u64();
  x.orig_len = r.field_u64();
  r.end();
  return x;
}

Bytes encode(const RingBlock& x) {
  Writer w;
  w.tag(TAG_RING_BLOCK);
  w.field(ByteView{x.merkle_hash.v});
  w.field(ByteView{x.merkle_uuid.v});
  w.field(ByteView{x.prev_time_hash.v});
  w.field(ByteView{x.prev_time_uuid.v});
  w.field(ByteView{x.uuid.v});
  w.field(view(list_payload(x.seqs, [](const RingAck& a) { return encode(a); })));
  return std::move(w.out);
}

template <>
RingBlock decode<RingBlock>(ByteView in) {
  Reader r(in);
  r.expect_tag(TAG_RING_BLOCK);
  RingBlock x;
  read_fixed(r, x.merkle_hash.v);
  read_fixed(r, x.merkle_uuid.v);
  read_fixed(r, x.prev_time_hash.v);
  read_fixed(r, x.prev_time_uuid.v);
  read_fixed(r, x.uuid.v);
  x.seqs = read_list<RingAck>(r);
  r.end();
  return x;
}

Bytes encode(const RingAck& x) {
  Writer w;
  w.tag(TAG_RING_ACK);
  w.field(ByteView{x.sig.v});
  w.field_u64(x.ctr);
  w.field(ByteView{x.issuer.v});
  w.field(view(encode(x.time_link)));
  return std::move(w.out);
}

template <>
RingAck decode<RingAck>(ByteView in) {
  Reader r(in);
  r.expect_tag(TAG_RING_ACK);
  RingAck x;
  read_fixed(r, x.sig.v);
  x.ctr = r.field_u64();
  read_fixed(r, x.issuer.v);
  x.time_link = decode<Link>(r.field());
  r.end();
  return x;
}

Bytes encode(const AnyBlock& x) {
  return std::visit([](const auto& b) { return encode(b); }, x);
}

uint8_t peek_tag(ByteView in) {
  if (in.empty()) throw CodecError("empty input");
  return in[0];
}

DecodedObject decode_any(ByteView in) {
  switch (peek_tag(in)) {
    case TAG_LINK: return decode<Link>(in);
    case TAG_TXLINK: return decode<TxLink>(in);
    case TAG_MERKLE: return decode<MerkleTree>(in);
    case TAG_BLOCK: return decode<Block>(in);
    case TAG_CONTROL: return decode<ControlPayload>(in);
    case TAG_TIME_ATT: return decode<TimestampAttestation>(in);
    case TAG_SEQ_ATT: return decode<SequenceAttestation>(in);
    case TAG_ENCLAVE_ATT: return decode<EnclaveAttestation>(in);
    case TAG_CERT: return decode<Certificate>(in);
    case TAG_SHARD: return decode<Shard>(in);
    case TAG_RING_BLOCK: return decode<RingBlock>(in);
    case TAG_RING_ACK: return decode<RingAck>(in);
    default: throw CodecError("unknown type tag");
  }
}

}  // namespace zl
