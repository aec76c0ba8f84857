#pragma once

#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "zl/replication.hpp"
#include "zl/sequence_service.hpp"
#include "zl/timestamp_service.hpp"
#include "zl/tx_queue.hpp"

namespace zl {

// one instrumented stage of a write step, for reports and ordering checks
struct StageEvent {
  std::string stage;
  ObjectId block_uuid;
  uint64_t start_us = 0;
  uint64_t end_us = 0;
};

enum class StepOutcome {
  Idle,             // nothing queued
  Finalized,        // triad fully stored, chain advanced
  Unfinalized,      // chain advanced but the counter attestation still needs storing
  Aborted,          // failure before the barrier; batch requeued, nothing sequenced
  SequenceRefused,  // sequencing failed after the barrier; block abandoned, batch requeued
};

struct StepReport {
  StepOutcome outcome = StepOutcome::Idle;
  std::optional<Triad> triad;
  size_t batch = 0;
  std::string note;
};

struct RunReport {
  std::vector<StepReport> steps;
  std::vector<StageEvent> events;
  size_t finalized = 0, unfinalized = 0, aborted = 0, refused = 0, idle = 0;
};

// Sequencing backend the writer talks to: a single counter service, or a
// replacement ring that fans out to whichever member is reachable.
struct Sequencer {
  virtual ~Sequencer() = default;
  virtual SequenceAttestation sequence_link(const Link& time_link) = 0;
  // key recorded in the genesis control payload
  virtual const PublicKey& genesis_pub() const = 0;
  // enclave attestations recorded at chain creation (empty for single mode)
  virtual std::vector<EnclaveAttestation> ring_members() const { return {}; }
  virtual bool ring_mode() const { return false; }
  // acknowledgments waiting to be embedded in the next block (ring mode)
  virtual std::vector<RingAck> peek_acks() const { return {}; }
  virtual void drop_acks(size_t) {}
  // called once an attestation is durably replicated
  virtual void on_replicated(const SequenceAttestation&, const Link&) {}
};

class SingleSequencer : public Sequencer {
 public:
  explicit SingleSequencer(SequenceService svc) : svc_(std::move(svc)) {}
  SequenceAttestation sequence_link(const Link& time_link) override { return svc_.sequence(time_link); }
  const PublicKey& genesis_pub() const override { return svc_.pub(); }
  SequenceService& service() { return svc_; }

 private:
  SequenceService svc_;
};

struct ChainHandle {
  Link genesis_link;
  Link last_time_link;
};

// Drives the write path: dequeue a batch, build tree and block, race the
// replication and stamping legs to a barrier, then sequence and store the
// counter attestation. One writer mutates one chain; writes may arrive from
// any thread.
class ChainWriter {
 public:
  ChainWriter(TimestampService& time_svc, Sequencer& seq, ReplicationService& rep, Rng& rng,
              size_t batch_max = 4096, size_t queue_bound = 1 << 16)
      : time_svc_(time_svc), seq_(seq), rep_(rep), rng_(rng), batch_max_(batch_max), queue_(queue_bound) {}

  // build and store the genesis triad; afterwards the chain accepts writes
  Triad init_chain();
  // resume writing an existing chain
  void adopt(const ChainHandle& h) {
    handle_ = h;
    initialized_ = true;
  }

  void write(TxLink tx) { queue_.enqueue(std::move(tx)); }

  StepReport zip_step();

  // loop zip_step on a cadence; stops after max_steps (0 = run until the
  // queue and retry backlog drain). on_step runs before each step and is the
  // fault-injection hook.
  RunReport run(uint32_t interval_ms, size_t max_steps,
                const std::function<void(size_t, ChainWriter&)>& on_step = {});

  const ChainHandle& handle() const { return handle_; }
  bool initialized() const { return initialized_; }
  TxQueue& queue() { return queue_; }
  TimestampService& time_service() { return time_svc_; }
  Sequencer& sequencer() { return seq_; }
  ReplicationService& replicator() { return rep_; }

  const std::vector<StageEvent>& events() const { return events_; }
  size_t pending_retries() const { return retry_.size(); }
  // sequenced attestations whose storage still has to be retried
  const std::vector<std::pair<SequenceAttestation, Link>>& retry_backlog() const { return retry_; }
  void push_retry(SequenceAttestation q, Link time_link) { retry_.emplace_back(std::move(q), time_link); }

 private:
  AnyBlock make_block(const MerkleTree& m, size_t& acks_taken);
  void retry_pending();
  template <class F>
  void timed(const char* stage, const ObjectId& buid, F&& f);

  TimestampService& time_svc_;
  Sequencer& seq_;
  ReplicationService& rep_;
  Rng& rng_;
  size_t batch_max_;
  TxQueue queue_;
  ChainHandle handle_{};
  bool initialized_ = false;
  std::vector<std::pair<SequenceAttestation, Link>> retry_;
  std::vector<StageEvent> events_;
  std::mutex events_mu_;
  uint64_t epoch_us_ = 0;
};

}  // namespace zl
