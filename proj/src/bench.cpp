#include "zl/bench.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <memory>
#include <stdexcept>
#include <thread>
#include <vector>

#include "zl/clock.hpp"
#include "zl/codec.hpp"
#include "zl/pipeline.hpp"
#include "zl/ring.hpp"

namespace zl {

namespace {

using SteadyPoint = std::chrono::steady_clock::time_point;

std::vector<std::unique_ptr<BucketStore>> mem_buckets(size_t n) {
  std::vector<std::unique_ptr<BucketStore>> out;
  for (size_t i = 0; i < n; ++i)
    out.push_back(std::make_unique<BucketStore>(static_cast<uint32_t>(i), "bench"));
  return out;
}

TxLink bench_tx(size_t user, size_t i) {
  Bytes salt;
  append_u64be(salt, user);
  append_u64be(salt, i);
  TxLink tx;
  tx.schema = "bench.v1";
  tx.tx_type = "note";
  tx.data.digest = sha3_256(view(salt));
  std::copy_n(tx.data.digest.v.begin(), tx.data.uuid.v.size(), tx.data.uuid.v.begin());
  return tx;
}

}  // namespace

BenchReport run_bench(const BenchConfig& cfg) {
  if (cfg.users == 0 || cfg.txs_per_user == 0) throw std::invalid_argument("bench needs at least one transaction");
  if (cfg.ring_size == 0) throw std::invalid_argument("bench ring size must be positive");

  Rng rng(cfg.seed);
  SystemClock clock;
  TimestampService time_svc(KeyPair::generate(rng), clock, rng, cfg.stamp_latency_ms);

  EnclaveRoot root(KeyPair::generate(rng), sha3_256(view("bench-enclave")));
  std::unique_ptr<Sequencer> seq;
  if (cfg.ring_size == 1) {
    seq = std::make_unique<SingleSequencer>(SequenceService::fresh(rng, cfg.sequence_latency_ms));
  } else {
    seq = std::make_unique<RingSequencer>(
        RingSequencer::create(cfg.ring_size, root, rng, cfg.sequence_latency_ms));
  }

  ReplicationService rep(CodingScheme{}, mem_buckets(6), cfg.seed * 1299709 + 17,
                         cfg.replicate_latency_ms);
  ChainWriter writer(time_svc, *seq, rep, rng, cfg.batch_max);
  writer.init_chain();

  // Enqueue from one thread per user, stamping each handle with its enqueue
  // instant. Per-thread logs avoid a shared lock on the hot path.
  std::vector<std::vector<std::pair<TxLink, SteadyPoint>>> logs(cfg.users);
  const SteadyPoint bench_start = std::chrono::steady_clock::now();
  {
    std::vector<std::thread> producers;
    producers.reserve(cfg.users);
    for (size_t u = 0; u < cfg.users; ++u) {
      producers.emplace_back([&, u] {
        auto& log = logs[u];
        log.reserve(cfg.txs_per_user);
        for (size_t i = 0; i < cfg.txs_per_user; ++i) {
          TxLink tx = bench_tx(u, i);
          log.emplace_back(tx, std::chrono::steady_clock::now());
          writer.write(std::move(tx));
        }
      });
    }
    for (auto& t : producers) t.join();
  }

  std::map<Bytes, SteadyPoint> enqueued;
  for (auto& log : logs)
    for (auto& [tx, at] : log) enqueued.emplace(encode(tx), at);

  // Drive the writer until the queue drains, attributing each finalized
  // block's finality instant to every transaction in its batch.
  std::vector<double> finality_ms;
  finality_ms.reserve(enqueued.size());
  size_t blocks = 0;
  SteadyPoint last_done = bench_start;
  while (true) {
    StepReport sr = writer.zip_step();
    const SteadyPoint done = std::chrono::steady_clock::now();
    if (sr.outcome == StepOutcome::Idle) {
      if (writer.queue().size() == 0 && writer.pending_retries() == 0) break;
      continue;
    }
    if (sr.outcome != StepOutcome::Finalized || !sr.triad) continue;
    ++blocks;
    last_done = done;
    const MerkleTree tree = rep.fetch<MerkleTree>(block_payload_link(sr.triad->block));
    for (const TxLink& leaf : tree.leaves) {
      auto it = enqueued.find(encode(leaf));
      if (it == enqueued.end()) continue;
      finality_ms.push_back(std::chrono::duration<double, std::milli>(done - it->second).count());
      enqueued.erase(it);
    }
  }

  BenchReport out;
  out.txs = finality_ms.size();
  out.blocks = blocks;
  out.duration_s = std::chrono::duration<double>(last_done - bench_start).count();
  if (!finality_ms.empty()) {
    double sum = 0;
    for (double f : finality_ms) sum += f;
    out.mean_finality_ms = sum / static_cast<double>(finality_ms.size());
    std::sort(finality_ms.begin(), finality_ms.end());
    size_t idx = (finality_ms.size() * 9 + 9) / 10;  // ceil(0.9 n)
    out.p90_finality_ms = finality_ms[std::min(idx, finality_ms.size()) - 1];
  }
  if (out.duration_s > 0) out.tps = static_cast<double>(out.txs) / out.duration_s;
  return out;
}

}  // namespace zl
