#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "zl/pipeline.hpp"
#include "zl/types.hpp"

namespace zl {

// Everything one chain instance needs to continue across process runs: key
// seeds, the chain handle, pending work, and each sequencer's issued record.
// Bulky object storage lives in the per-bucket directories next to it.
struct ChainState {
  uint64_t seed = 1;
  uint64_t run_counter = 0;  // bumped per invocation so randomness never repeats
  uint64_t clock_ms = 1'000'000;
  size_t ring_size = 1;
  std::array<uint8_t, 32> time_seed{};
  std::array<uint8_t, 32> enclave_seed{};
  Digest enclave_image{};
  std::vector<std::array<uint8_t, 32>> seq_seeds;
  std::vector<ObjectId> seq_ids;
  std::vector<EnclaveAttestation> member_atts;
  ChainHandle handle{};
  std::vector<TxLink> queue;
  std::vector<std::pair<SequenceAttestation, Link>> retries;
  std::vector<RingAck> acks;
  std::vector<std::vector<SequenceAttestation>> issued;  // per sequencer
};

bool state_exists(const std::string& dir);
// throws std::runtime_error when the directory holds no usable state
ChainState load_state(const std::string& dir);
void save_state(const std::string& dir, const ChainState& st);
std::string bucket_dir(const std::string& dir, uint32_t index);

}  // namespace zl
