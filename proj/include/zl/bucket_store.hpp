#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "zl/bytes.hpp"

namespace zl {

// One write-once object bucket. Values are immutable after first write:
// rewriting the same bytes is a no-op, rewriting different bytes is an
// error. With a backing directory set, objects persist as one file per key
// named by the key's hash; `load` reads them back.
class BucketStore {
 public:
  BucketStore(uint32_t index, std::string region, std::string dir = "")
      : index_(index), region_(std::move(region)), dir_(std::move(dir)) {}

  void put(const Bytes& key, const Bytes& value);
  std::optional<Bytes> get(const Bytes& key) const;
  std::vector<Bytes> keys() const;

  bool available() const { return available_; }
  void set_available(bool up) { available_ = up; }
  uint32_t index() const { return index_; }
  const std::string& region() const { return region_; }

  void load();

 private:
  uint32_t index_;
  std::string region_;
  std::string dir_;
  bool available_ = true;
  std::map<Bytes, Bytes> data_;
  mutable std::mutex mu_;
};

}  // namespace zl
