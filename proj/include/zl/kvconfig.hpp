#pragma once

#include <map>
#include <string>
#include <string_view>

namespace zl {

// flat `key = value` text; '#' starts a comment; blank lines ignored
class KvConfig {
 public:
  static KvConfig parse_file(const std::string& path);
  static KvConfig parse_text(std::string_view text);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string str(const std::string& key, const std::string& dflt) const;
  std::string require(const std::string& key) const;
  int64_t num(const std::string& key, int64_t dflt) const;
  uint64_t unum(const std::string& key, uint64_t dflt) const;
  double real(const std::string& key, double dflt) const;
  double require_real(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace zl
