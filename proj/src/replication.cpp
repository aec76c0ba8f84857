#include "zl/replication.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>
#include <thread>

#include "zl/errors.hpp"
#include "zl/hash.hpp"

namespace zl {

ReplicationService::ReplicationService(CodingScheme scheme, std::vector<std::unique_ptr<BucketStore>> buckets,
                                       uint64_t seed_base, uint32_t latency_ms)
    : scheme_(scheme), buckets_(std::move(buckets)), seed_base_(seed_base), latency_ms_(latency_ms) {
  if (buckets_.size() != scheme_.n) throw Error("bucket count does not match coding scheme");
}

uint64_t ReplicationService::shard_seed(const Link& l) const {
  Bytes pre = encode(l);
  append_u64be(pre, seed_base_);
  Digest d = sha3_256(view(pre));
  uint64_t s = 0;
  for (int i = 0; i < 8; ++i) s = (s << 8) | d.v[size_t(i)];
  return s;
}

void ReplicationService::replicate_raw(const Link& l, const Bytes& value) {
  if (latency_ms_ > 0) std::this_thread::sleep_for(std::chrono::milliseconds(latency_ms_));

  std::vector<Shard> shards = rlnc_encode(view(value), scheme_, l, shard_seed(l));
  Bytes key = encode(l);
  // all-n write policy: every bucket must take its shard
  for (size_t i = 0; i < buckets_.size(); ++i) buckets_[i]->put(key, encode(shards[i]));
}

Bytes ReplicationService::fetch_raw(const Link& l) {
  if (latency_ms_ > 0) std::this_thread::sleep_for(std::chrono::milliseconds(latency_ms_));

  Bytes key = encode(l);
  std::vector<Shard> shards;
  for (auto& b : buckets_) {
    if (!b->available()) continue;
    std::optional<Bytes> v;
    try {
      v = b->get(key);
    } catch (const ServiceDown&) {
      continue;
    }
    if (!v) continue;
    try {
      shards.push_back(decode<Shard>(view(*v)));
    } catch (const CodecError&) {
      // mangled shard record: treat as missing
    }
  }

  const size_t m = scheme_.chunks();
  if (shards.size() < m)
    throw Unavailable("object has " + std::to_string(shards.size()) + " reachable shards, needs " +
                      std::to_string(m));

  // try shard subsets until one decodes cleanly, so isolated corruption
  // cannot mask the object while enough good shards survive
  std::vector<size_t> idx(m);
  std::iota(idx.begin(), idx.end(), size_t{0});
  bool saw_integrity = false;
  while (true) {
    std::vector<Shard> pick;
    pick.reserve(m);
    for (size_t i : idx) pick.push_back(shards[i]);
    try {
      return rlnc_decode(pick, scheme_);
    } catch (const IntegrityFailure&) {
      saw_integrity = true;
    } catch (const DependentCoefficients&) {
    } catch (const Error&) {
      saw_integrity = true;  // malformed shapes read as tampering
    }

    size_t i = m;
    while (i > 0 && idx[i - 1] == shards.size() - m + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (saw_integrity) throw IntegrityFailure("no shard subset reconstructs the object cleanly");
  throw DependentCoefficients("reachable shards do not span the object");
}

std::vector<Link> ReplicationService::enumerate_links() const {
  std::set<Bytes> seen;
  for (const auto& b : buckets_) {
    if (!b->available()) continue;
    std::vector<Bytes> ks;
    try {
      ks = b->keys();
    } catch (const ServiceDown&) {
      continue;
    }
    for (auto& k : ks) seen.insert(std::move(k));
  }
  std::vector<Link> out;
  out.reserve(seen.size());
  for (const auto& k : seen) out.push_back(decode<Link>(view(k)));
  return out;
}

bool ReplicationService::any_bucket_down() const {
  for (const auto& b : buckets_)
    if (!b->available()) return true;
  return false;
}

}  // namespace zl
