#pragma once

#include <cstddef>
#include <cstdint>

namespace zl {

// Write-path benchmark: N user threads enqueue transactions against one
// writer backed by in-memory services with injected per-call latencies,
// and per-transaction finality (enqueue until the counter attestation is
// durably stored) is measured on a wall clock.
struct BenchConfig {
  uint64_t seed = 1;
  size_t users = 4;
  size_t txs_per_user = 25;
  uint32_t stamp_latency_ms = 0;
  uint32_t replicate_latency_ms = 0;
  uint32_t sequence_latency_ms = 0;
  size_t batch_max = 4096;
  size_t ring_size = 1;
};

struct BenchReport {
  size_t txs = 0;
  size_t blocks = 0;
  double duration_s = 0;
  double mean_finality_ms = 0;
  double p90_finality_ms = 0;
  double tps = 0;
};

BenchReport run_bench(const BenchConfig& cfg);

}  // namespace zl
