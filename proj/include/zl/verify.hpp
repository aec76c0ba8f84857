#pragma once

#include <optional>
#include <vector>

#include "zl/snapshot.hpp"
#include "zl/types.hpp"

namespace zl {

// the four-condition attestation chain test: stamp covers the block,
// counter covers the stamp, both signatures open
bool truetriad(const Triad& tri, const PublicKey& time_pub, const PublicKey& seq_pub);

// number of hops from the triad's block back to the chain root, following
// prev-stamp references through the snapshot; throws on a broken path
uint64_t height(const Triad& tri, const Snapshot& snap);

// the total order on triads: by height, then by counter
bool triad_less(const Triad& a, const Triad& b, const Snapshot& snap);

// Derive the main chain from an untrusted snapshot: seed with the counter-0
// triad of the given genesis block, then repeatedly append the
// minimal-counter true successor, refusing to continue across counter gaps
// that the snapshot cannot account for. Returns the longest provable
// prefix; empty when the genesis or its keys cannot be established.
std::vector<Triad> omc(const Block& genesis, const EnclaveAttestation& encl, const PublicKey& enclave_root,
                       const Snapshot& snap);

// first main-chain occurrence of the transaction, as a certificate
std::optional<Certificate> makecert(const TxLink& tx, const std::vector<MerkleTree>& merkles,
                                    const std::vector<Triad>& z);

// certificate order within one chain; throws on cross-chain comparison
bool cert_precedes(const Certificate& a, const Certificate& b);

// End-to-end client verification: download everything, derive the chain,
// search for the transaction. A missing transaction with an incomplete
// snapshot throws SnapshotIncomplete instead of reporting a false negative.
std::optional<Certificate> verify_tx(const Link& genesis_link, const TxLink& tx, const EnclaveAttestation& encl,
                                     const PublicKey& enclave_root, ReplicationService& rep);

}  // namespace zl
