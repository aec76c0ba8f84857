#include "zl/bucket_store.hpp"

#include <filesystem>
#include <fstream>

#include "zl/codec.hpp"
#include "zl/errors.hpp"
#include "zl/hash.hpp"

namespace fs = std::filesystem;

namespace zl {

void BucketStore::put(const Bytes& key, const Bytes& value) {
  std::lock_guard lk(mu_);
  if (!available_) throw ServiceDown("bucket " + std::to_string(index_) + " unavailable");

  auto it = data_.find(key);
  if (it != data_.end()) {
    if (it->second != value)
      throw WormViolation("bucket " + std::to_string(index_) + ": conflicting rewrite of stored object");
    return;
  }

  if (!dir_.empty()) {
    fs::create_directories(dir_);
    fs::path p = fs::path(dir_) / to_hex(sha3_256(view(key)));
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("bucket " + std::to_string(index_) + ": cannot write " + p.string());
    out.write(reinterpret_cast<const char*>(value.data()), std::streamsize(value.size()));
    if (!out) throw Error("bucket " + std::to_string(index_) + ": short write " + p.string());
  }
  data_.emplace(key, value);
}

std::optional<Bytes> BucketStore::get(const Bytes& key) const {
  std::lock_guard lk(mu_);
  if (!available_) throw ServiceDown("bucket " + std::to_string(index_) + " unavailable");
  auto it = data_.find(key);
  if (it == data_.end()) return std::nullopt;
  return it->second;
}

std::vector<Bytes> BucketStore::keys() const {
  std::lock_guard lk(mu_);
  if (!available_) throw ServiceDown("bucket " + std::to_string(index_) + " unavailable");
  std::vector<Bytes> out;
  out.reserve(data_.size());
  for (const auto& [k, _] : data_) out.push_back(k);
  return out;
}

void BucketStore::load() {
  std::lock_guard lk(mu_);
  if (dir_.empty() || !fs::exists(dir_)) return;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    if (!in) throw Error("bucket " + std::to_string(index_) + ": cannot read " + entry.path().string());
    Bytes value((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    // stored values are self-describing shards; the retrieval key is the
    // encoded link of the object the shard belongs to
    Shard s = decode<Shard>(view(value));
    data_[encode(s.object_link)] = std::move(value);
  }
}

}  // namespace zl
