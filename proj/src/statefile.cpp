#include "zl/statefile.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "zl/codec.hpp"
#include "zl/kvconfig.hpp"

namespace zl {

namespace fs = std::filesystem;

namespace {

std::string kv_path(const std::string& dir) { return dir + "/state.kv"; }

template <size_t N>
std::array<uint8_t, N> arr_from_hex(const std::string& hex, const char* what) {
  Bytes b = from_hex(hex);
  if (b.size() != N) throw std::runtime_error(std::string("bad length for ") + what);
  std::array<uint8_t, N> a{};
  std::copy(b.begin(), b.end(), a.begin());
  return a;
}

Link link_from_hex(const std::string& hex) { return decode<Link>(from_hex(hex)); }

// one hex-encoded object per line
template <class T>
std::vector<T> read_lines(const std::string& path) {
  std::vector<T> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(decode<T>(from_hex(line)));
  }
  return out;
}

template <class T>
void write_lines(const std::string& path, const std::vector<T>& objs) {
  std::ofstream out(path, std::ios::trunc);
  for (const auto& o : objs) out << to_hex(encode(o)) << "\n";
  if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace

std::string bucket_dir(const std::string& dir, uint32_t index) {
  return dir + "/bucket." + std::to_string(index);
}

bool state_exists(const std::string& dir) { return fs::exists(kv_path(dir)); }

ChainState load_state(const std::string& dir) {
  if (!state_exists(dir)) throw std::runtime_error("no chain state under " + dir);
  KvConfig kv = KvConfig::parse_file(kv_path(dir));

  ChainState st;
  st.seed = kv.unum("seed", 1);
  st.run_counter = kv.unum("run_counter", 0);
  st.clock_ms = kv.unum("clock_ms", 1'000'000);
  st.ring_size = size_t(kv.unum("ring_size", 1));
  st.time_seed = arr_from_hex<32>(kv.require("time_seed"), "time_seed");
  st.enclave_seed = arr_from_hex<32>(kv.require("enclave_seed"), "enclave_seed");
  st.enclave_image.v = arr_from_hex<32>(kv.require("enclave_image"), "enclave_image");
  st.handle.genesis_link = link_from_hex(kv.require("genesis_link"));
  st.handle.last_time_link = link_from_hex(kv.require("last_time_link"));
  for (size_t i = 0; i < st.ring_size; ++i) {
    std::string n = std::to_string(i);
    st.seq_seeds.push_back(arr_from_hex<32>(kv.require("seq_seed." + n), "seq_seed"));
    st.seq_ids.push_back(ObjectId{arr_from_hex<16>(kv.require("seq_id." + n), "seq_id")});
    st.member_atts.push_back(decode<EnclaveAttestation>(from_hex(kv.require("member_att." + n))));
    st.issued.push_back(read_lines<SequenceAttestation>(dir + "/issued." + n + ".txt"));
  }
  st.queue = read_lines<TxLink>(dir + "/queue.txt");
  st.acks = read_lines<RingAck>(dir + "/acks.txt");
  {
    std::ifstream in(dir + "/retry.txt");
    std::string qh, lh;
    while (in >> qh >> lh)
      st.retries.emplace_back(decode<SequenceAttestation>(from_hex(qh)), link_from_hex(lh));
  }
  return st;
}

void save_state(const std::string& dir, const ChainState& st) {
  fs::create_directories(dir);
  std::ostringstream kv;
  kv << "seed=" << st.seed << "\n";
  kv << "run_counter=" << st.run_counter << "\n";
  kv << "clock_ms=" << st.clock_ms << "\n";
  kv << "ring_size=" << st.ring_size << "\n";
  kv << "time_seed=" << to_hex(ByteView(st.time_seed.data(), st.time_seed.size())) << "\n";
  kv << "enclave_seed=" << to_hex(ByteView(st.enclave_seed.data(), st.enclave_seed.size()))
     << "\n";
  kv << "enclave_image=" << to_hex(ByteView(st.enclave_image.v.data(), st.enclave_image.v.size()))
     << "\n";
  kv << "genesis_link=" << to_hex(encode(st.handle.genesis_link)) << "\n";
  kv << "last_time_link=" << to_hex(encode(st.handle.last_time_link)) << "\n";
  for (size_t i = 0; i < st.ring_size; ++i) {
    std::string n = std::to_string(i);
    kv << "seq_seed." << n << "="
       << to_hex(ByteView(st.seq_seeds.at(i).data(), st.seq_seeds.at(i).size())) << "\n";
    kv << "seq_id." << n << "="
       << to_hex(ByteView(st.seq_ids.at(i).v.data(), st.seq_ids.at(i).v.size())) << "\n";
    kv << "member_att." << n << "=" << to_hex(encode(st.member_atts.at(i))) << "\n";
    write_lines(dir + "/issued." + n + ".txt", st.issued.at(i));
  }
  std::ofstream out(kv_path(dir), std::ios::trunc);
  out << kv.str();
  if (!out) throw std::runtime_error("cannot write " + kv_path(dir));

  write_lines(dir + "/queue.txt", st.queue);
  write_lines(dir + "/acks.txt", st.acks);
  {
    std::ofstream r(dir + "/retry.txt", std::ios::trunc);
    for (const auto& [q, l] : st.retries) r << to_hex(encode(q)) << " " << to_hex(encode(l)) << "\n";
    if (!r) throw std::runtime_error("cannot write retry state");
  }
}

}  // namespace zl
