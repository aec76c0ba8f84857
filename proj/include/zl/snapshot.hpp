#pragma once

#include <optional>
#include <vector>

#include "zl/replication.hpp"
#include "zl/types.hpp"

namespace zl {

// Everything a verifier could pull from storage at one moment, sorted into
// object kinds. `complete` is false when some stored object could not be
// reconstructed (buckets down or shards corrupted), in which case negative
// verification answers are not trustworthy.
struct Snapshot {
  std::vector<AnyBlock> blocks;
  std::vector<TimestampAttestation> times;
  std::vector<SequenceAttestation> seqs;
  std::vector<MerkleTree> merkles;
  std::vector<ControlPayload> controls;
  bool complete = true;

  void insert(DecodedObject obj);

  std::optional<AnyBlock> block_by_link(const Link& l) const;
  std::optional<MerkleTree> merkle_by_link(const Link& l) const;
  std::optional<ControlPayload> control_by_link(const Link& l) const;
};

// pull and decode every enumerable object from storage
Snapshot download_snapshot(ReplicationService& rep);

}  // namespace zl
