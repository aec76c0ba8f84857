#pragma once

// Fixed object instances whose wire encodings are pinned by the golden file
// under vectors/. The generator and the regression test both build this exact
// set; any layout change shows up as a mismatch against the committed file.

#include <string>
#include <utility>
#include <vector>

#include "zl/codec.hpp"
#include "zl/keys.hpp"
#include "zl/types.hpp"

namespace zlvec {

template <size_t N>
std::array<uint8_t, N> pat(uint8_t base, uint8_t step) {
  std::array<uint8_t, N> a{};
  for (size_t i = 0; i < N; ++i) a[i] = static_cast<uint8_t>(base + i * step);
  return a;
}

template <size_t N>
std::string hex_of(const std::array<uint8_t, N>& a) {
  return zl::to_hex(zl::ByteView{a.data(), a.size()});
}

inline std::vector<std::pair<std::string, std::string>> vector_set() {
  using namespace zl;
  std::vector<std::pair<std::string, std::string>> out;
  auto put = [&](const char* name, const auto& obj) {
    out.emplace_back(name, to_hex(view(encode(obj))));
  };

  const ObjectId id_a{pat<16>(0xa0, 1)};
  const ObjectId id_b{pat<16>(0x0b, 7)};
  const ObjectId id_c{pat<16>(0xc1, 3)};
  const Digest dg_a{pat<32>(0x10, 3)};
  const Digest dg_b{pat<32>(0x55, 5)};
  const Link link_a{id_a, dg_a};
  const Link link_b{id_b, dg_b};
  const PublicKey pk_a{pat<32>(0x21, 2)};
  const PublicKey pk_b{pat<32>(0x42, 9)};
  const Signature sig_a{pat<64>(0x03, 11)};

  put("link", link_a);

  const TxLink tx_note{"zl.v1", "note", link_a};
  const TxLink tx_xfer{"pay.v2", "transfer", link_b};
  put("txlink_note", tx_note);
  put("txlink_transfer", tx_xfer);

  put("merkle", MerkleTree{id_c, {tx_note, tx_xfer}});
  put("merkle_empty", MerkleTree{id_b, {}});

  put("block", Block{id_a, link_b, link_a});
  put("block_genesis", Block{id_b, link_a, std::nullopt});

  const EnclaveAttestation encl{dg_a, pk_a, sig_a};
  put("enclave_att", encl);
  put("control_single", ControlPayload{id_c, pk_a, pk_b, {}});
  put("control_ring", ControlPayload{id_c, pk_a, pk_b, {encl, encl}});

  const TimestampAttestation time_att{encode(link_a), 0x0123456789abcdefULL, id_b, sig_a};
  put("time_att", time_att);
  const SequenceAttestation seq_att{encode(link_b), 7, sig_a, id_c};
  put("seq_att", seq_att);

  const RingAck ack{sig_a, 3, pk_b, link_a};
  put("ring_ack", ack);
  put("ring_block", RingBlock{dg_a, id_a, dg_b, id_b, id_c, {ack}});
  put("ring_block_no_acks", RingBlock{dg_b, id_b, dg_a, id_a, id_c, {}});

  put("certificate", Certificate{tx_note, link_b, 1234, 5, 2});
  put("shard", Shard{link_a, Bytes{1, 2, 3}, Bytes{9, 8, 7, 6, 5}, 4, 11});

  // derived references and signing preimages
  out.emplace_back("link_of_merkle",
                   to_hex(view(encode(link_of(MerkleTree{id_c, {tx_note, tx_xfer}})))));
  out.emplace_back("link_of_seq_att", to_hex(view(encode(link_of(seq_att)))));
  out.emplace_back("sha3_empty", hex_of(sha3_256({}).v));
  out.emplace_back("sha3_abc", hex_of(sha3_256(view("abc")).v));
  out.emplace_back("time_att_digest",
                   hex_of(time_att_digest(view(time_att.bytes), time_att.ts, time_att.uuid).v));
  out.emplace_back("seq_att_digest", hex_of(seq_att_digest(view(seq_att.bytes), seq_att.ctr).v));
  out.emplace_back("enclave_att_digest", hex_of(enclave_att_digest(dg_a, pk_a).v));
  out.emplace_back("email", email_encode(link_a));

  // deterministic keys: fixed seed, deterministic signatures
  const KeyPair kp = KeyPair::from_seed(pat<32>(0x01, 1));
  out.emplace_back("ed25519_pub", hex_of(kp.pub().v));
  out.emplace_back("ed25519_sig", hex_of(kp.sign(sha3_256(view("vector message"))).v));

  return out;
}

}  // namespace zlvec
