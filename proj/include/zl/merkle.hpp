#pragma once

#include "zl/types.hpp"

namespace zl {

// Root over the leaf list. Leaf hash is sha3 of the leaf's canonical
// encoding, an interior node hashes the concatenation of its children, and an
// odd node at any level is promoted unchanged. Empty batches are an error.
Digest merkle_root(const std::vector<TxLink>& leaves);

}  // namespace zl
