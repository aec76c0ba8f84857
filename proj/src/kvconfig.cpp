#include "zl/kvconfig.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "zl/errors.hpp"

namespace zl {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

KvConfig KvConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

KvConfig KvConfig::parse_text(std::string_view text) {
  KvConfig c;
  size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = (nl == std::string_view::npos) ? std::string_view{} : text.substr(nl + 1);

    size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw CodecError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string_view key = trim(line.substr(0, eq));
    std::string_view val = trim(line.substr(eq + 1));
    if (key.empty()) throw CodecError("config line " + std::to_string(lineno) + ": empty key");
    c.kv_[std::string(key)] = std::string(val);
  }
  return c;
}

std::string KvConfig::str(const std::string& key, const std::string& dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

std::string KvConfig::require(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw CodecError("missing config key: " + key);
  return it->second;
}

int64_t KvConfig::num(const std::string& key, int64_t dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  char* end = nullptr;
  long long v = std::strtoll(it->second.c_str(), &end, 0);
  if (end == it->second.c_str() || *end != '\0')
    throw CodecError("config key " + key + ": not an integer: " + it->second);
  return v;
}

uint64_t KvConfig::unum(const std::string& key, uint64_t dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  char* end = nullptr;
  unsigned long long v = std::strtoull(it->second.c_str(), &end, 0);
  if (end == it->second.c_str() || *end != '\0')
    throw CodecError("config key " + key + ": not an unsigned integer: " + it->second);
  return v;
}

double KvConfig::real(const std::string& key, double dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  char* end = nullptr;
  double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str() || *end != '\0')
    throw CodecError("config key " + key + ": not a number: " + it->second);
  return v;
}

double KvConfig::require_real(const std::string& key) const {
  require(key);
  return real(key, 0.0);
}

}  // namespace zl
