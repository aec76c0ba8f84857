#pragma once

#include "zl/rng.hpp"
#include "zl/types.hpp"

namespace zl {

struct CodingScheme {
  uint32_t n = 6;  // shards emitted
  uint32_t k = 3;  // shards that may be lost
  uint32_t chunks() const { return n - k; }
};

// Splits data into n-k zero-padded chunks and emits n shards, each a random
// linear combination of the chunks. Coefficient rows are drawn from a local
// generator seeded with coeff_seed and redrawn (bounded) until every
// (n-k)-subset of rows is invertible; after 64 failed draws a fixed
// Vandermonde matrix takes over. Same seed, same shards.
std::vector<Shard> rlnc_encode(ByteView data, const CodingScheme& s,
                               const Link& object_link, uint64_t coeff_seed);

// Recovers the object from any n-k independent shards via Gaussian
// elimination, truncates to the recorded length, and checks the digest
// against the object link. Throws InsufficientShards, DependentCoefficients,
// or IntegrityFailure.
Bytes rlnc_decode(const std::vector<Shard>& shards, const CodingScheme& s);

namespace detail {
bool all_subsets_independent(const std::vector<Bytes>& rows, uint32_t m);
std::vector<Bytes> vandermonde_rows(const CodingScheme& s);
}  // namespace detail

}  // namespace zl
