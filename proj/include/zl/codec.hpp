#pragma once

#include <variant>

#include "zl/types.hpp"

namespace zl {

/*
 * Canonical wire form. One byte of type tag, then every field in declared
 * order as a u32 big-endian length followed by the payload. Integers are
 * 8-byte big-endian payloads, nested structs embed their own full encoding,
 * lists are a u32 count of length-prefixed elements, and an absent optional
 * is a zero-length field. Decoding demands exact consumption; any trailing
 * byte is an error. The layout is pinned by the golden files under vectors/.
 */

enum : uint8_t {
  TAG_LINK = 0x01,
  TAG_TXLINK = 0x02,
  TAG_MERKLE = 0x03,
  TAG_BLOCK = 0x04,
  TAG_CONTROL = 0x05,
  TAG_TIME_ATT = 0x06,
  TAG_SEQ_ATT = 0x07,
  TAG_ENCLAVE_ATT = 0x08,
  TAG_CERT = 0x09,
  TAG_SHARD = 0x0a,
  TAG_RING_BLOCK = 0x0b,
  TAG_RING_ACK = 0x0c,
};

Bytes encode(const Link& x);
Bytes encode(const TxLink& x);
Bytes encode(const MerkleTree& x);
Bytes encode(const Block& x);
Bytes encode(const ControlPayload& x);
Bytes encode(const TimestampAttestation& x);
Bytes encode(const SequenceAttestation& x);
Bytes encode(const EnclaveAttestation& x);
Bytes encode(const Certificate& x);
Bytes encode(const Shard& x);
Bytes encode(const RingBlock& x);
Bytes encode(const RingAck& x);
Bytes encode(const AnyBlock& x);

template <class T>
T decode(ByteView in);

template <> Link decode<Link>(ByteView in);
template <> TxLink decode<TxLink>(ByteView in);
template <> MerkleTree decode<MerkleTree>(ByteView in);
template <> Block decode<Block>(ByteView in);
template <> ControlPayload decode<ControlPayload>(ByteView in);
template <> TimestampAttestation decode<TimestampAttestation>(ByteView in);
template <> SequenceAttestation decode<SequenceAttestation>(ByteView in);
template <> EnclaveAttestation decode<EnclaveAttestation>(ByteView in);
template <> Certificate decode<Certificate>(ByteView in);
template <> Shard decode<Shard>(ByteView in);
template <> RingBlock decode<RingBlock>(ByteView in);
template <> RingAck decode<RingAck>(ByteView in);

uint8_t peek_tag(ByteView in);

using DecodedObject =
    std::variant<Link, TxLink, MerkleTree, Block, ControlPayload,
                 TimestampAttestation, SequenceAttestation, EnclaveAttestation,
                 Certificate, Shard, RingBlock, RingAck>;

DecodedObject decode_any(ByteView in);

}  // namespace zl
