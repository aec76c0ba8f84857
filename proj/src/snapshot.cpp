#include "zl/snapshot.hpp"

#include "zl/errors.hpp"

namespace zl {

void Snapshot::insert(DecodedObject obj) {
  std::visit(
      [this](auto&& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Block>)
          blocks.push_back(AnyBlock(std::move(x)));
        else if constexpr (std::is_same_v<T, RingBlock>)
          blocks.push_back(AnyBlock(std::move(x)));
        else if constexpr (std::is_same_v<T, TimestampAttestation>)
          times.push_back(std::move(x));
        else if constexpr (std::is_same_v<T, SequenceAttestation>)
          seqs.push_back(std::move(x));
        else if constexpr (std::is_same_v<T, MerkleTree>)
          merkles.push_back(std::move(x));
        else if constexpr (std::is_same_v<T, ControlPayload>)
          controls.push_back(std::move(x));
        // other kinds (certificates, stray links) carry no chain state
      },
      std::move(obj));
}

std::optional<AnyBlock> Snapshot::block_by_link(const Link& l) const {
  for (const auto& b : blocks)
    if (link_of(b) == l) return b;
  return std::nullopt;
}

std::optional<MerkleTree> Snapshot::merkle_by_link(const Link& l) const {
  for (const auto& m : merkles)
    if (link_of(m) == l) return m;
  return std::nullopt;
}

std::optional<ControlPayload> Snapshot::control_by_link(const Link& l) const {
  for (const auto& c : controls)
    if (link_of(c) == l) return c;
  return std::nullopt;
}

Snapshot download_snapshot(ReplicationService& rep) {
  Snapshot snap;
  for (const Link& l : rep.enumerate_links()) {
    Bytes raw;
    try {
      raw = rep.fetch_raw(l);
    } catch (const Error&) {
      snap.complete = false;  // unreachable or unreconstructable object
      continue;
    }
    try {
      snap.insert(decode_any(view(raw)));
    } catch (const CodecError&) {
      snap.complete = false;
    }
  }
  return snap;
}

}  // namespace zl
