#pragma once

#include <memory>
#include <vector>

#include "zl/bucket_store.hpp"
#include "zl/codec.hpp"
#include "zl/rlnc.hpp"
#include "zl/types.hpp"

namespace zl {

// Spreads each object across n buckets as coded shards, one shard per
// bucket, any k of which reconstruct it. Writes go to all n buckets and
// fail if any bucket rejects. Shard coefficients are derived
// deterministically from the object's link, so replaying a write produces
// byte-identical shards and write-once buckets accept the replay.
class ReplicationService {
 public:
  ReplicationService(CodingScheme scheme, std::vector<std::unique_ptr<BucketStore>> buckets, uint64_t seed_base,
                     uint32_t latency_ms = 0);

  void replicate_raw(const Link& l, const Bytes& value);
  Bytes fetch_raw(const Link& l);

  template <class T>
  Link replicate(const T& x) {
    Link l = link_of(x);
    replicate_raw(l, encode(x));
    return l;
  }

  template <class T>
  T fetch(const Link& l) {
    return decode<T>(view(fetch_raw(l)));
  }

  // union of object links present in the available buckets
  std::vector<Link> enumerate_links() const;

  BucketStore& bucket(size_t i) { return *buckets_.at(i); }
  size_t bucket_count() const { return buckets_.size(); }
  const CodingScheme& scheme() const { return scheme_; }
  bool any_bucket_down() const;
  void set_latency(uint32_t ms) { latency_ms_ = ms; }

 private:
  uint64_t shard_seed(const Link& l) const;

  CodingScheme scheme_;
  std::vector<std::unique_ptr<BucketStore>> buckets_;
  uint64_t seed_base_;
  uint32_t latency_ms_;
};

}  // namespace zl
