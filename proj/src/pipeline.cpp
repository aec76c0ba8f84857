#include "zl/pipeline.hpp"

#include <chrono>
#include <future>
#include <thread>

#include "zl/errors.hpp"

namespace zl {

namespace {

uint64_t steady_us() {
  return uint64_t(
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now().time_since_epoch())
          .count());
}

}  // namespace

template <class F>
void ChainWriter::timed(const char* stage, const ObjectId& buid, F&& f) {
  if (epoch_us_ == 0) epoch_us_ = steady_us();
  uint64_t start = steady_us() - epoch_us_;
  f();
  uint64_t end = steady_us() - epoch_us_;
  std::lock_guard lk(events_mu_);
  events_.push_back(StageEvent{stage, buid, start, end});
}

Triad ChainWriter::init_chain() {
  if (initialized_) throw Error("chain already initialized");

  ControlPayload control;
  control.uuid = uuid4(rng_);
  control.seq_pubkey = seq_.genesis_pub();
  control.time_pubkey = time_svc_.pub();
  control.ring = seq_.ring_members();
  Link control_link = rep_.replicate(control);

  Block b0odd{uuid4(rng_), control_link, std::nullopt};
  AnyBlock b0 = b0odd;
  Link b0_link = rep_.replicate(b0odd);

  TimestampAttestation t0 = time_svc_.stamp(b0_link);
  rep_.replicate(t0);
  Link t0_link = link_of(t0);

  SequenceAttestation q0 = seq_.sequence_link(t0_link);
  rep_.replicate(q0);
  seq_.on_replicated(q0, t0_link);  // in ring mode the first block embeds this ack

  handle_.genesis_link = b0_link;
  handle_.last_time_link = t0_link;
  initialized_ = true;
  return Triad{b0, t0, q0};
}

AnyBlock ChainWriter::make_block(const MerkleTree& m, size_t& acks_taken) {
  Link mlink = link_of(m);
  if (!seq_.ring_mode()) {
    acks_taken = 0;
    return Block{uuid4(rng_), mlink, handle_.last_time_link};
  }
  RingBlock rb;
  rb.merkle_hash = mlink.digest;
  rb.merkle_uuid = m.uuid;
  rb.prev_time_hash = handle_.last_time_link.digest;
  rb.prev_time_uuid = handle_.last_time_link.uuid;
  rb.uuid = uuid4(rng_);
  rb.seqs = seq_.peek_acks();
  acks_taken = rb.seqs.size();
  return rb;
}

void ChainWriter::retry_pending() {
  for (auto it = retry_.begin(); it != retry_.end();) {
    try {
      rep_.replicate(it->first);
      seq_.on_replicated(it->first, it->second);
      it = retry_.erase(it);
    } catch (const Error&) {
      ++it;
    }
  }
}

StepReport ChainWriter::zip_step() {
  if (!initialized_) throw Error("chain not initialized");
  StepReport r;
  retry_pending();

  std::vector<TxLink> batch = queue_.dequeue_batch(batch_max_);
  if (batch.empty()) {
    r.outcome = StepOutcome::Idle;
    return r;
  }
  r.batch = batch.size();

  MerkleTree m;
  m.uuid = uuid4(rng_);
  m.leaves = batch;
  size_t acks_taken = 0;
  AnyBlock block = make_block(m, acks_taken);
  const ObjectId buid = block_uuid(block);
  const Link block_link = link_of(block);

  // Three legs race to the barrier: the tree and the block replicate while
  // the block is stamped and the stamp replicated. Only when all three have
  // acknowledged is it safe to bind a counter to the stamp.
  std::optional<TimestampAttestation> time_att;
  auto leg_tree = std::async(std::launch::async, [&] { timed("merkle_replicate", buid, [&] { rep_.replicate(m); }); });
  auto leg_block = std::async(std::launch::async, [&] {
    timed("block_replicate", buid, [&] { rep_.replicate_raw(block_link, encode(block)); });
  });
  auto leg_stamp = std::async(std::launch::async, [&] {
    TimestampAttestation t;
    timed("stamp", buid, [&] { t = time_svc_.stamp(block_link); });
    timed("time_replicate", buid, [&] { rep_.replicate(t); });
    time_att = std::move(t);
  });

  bool barrier_failed = false;
  std::string err;
  auto harvest = [&](std::future<void>& f) {
    try {
      f.get();
    } catch (const std::exception& e) {
      barrier_failed = true;
      if (err.empty()) err = e.what();
    }
  };
  harvest(leg_tree);
  harvest(leg_block);
  harvest(leg_stamp);

  if (barrier_failed) {
    queue_.requeue_front(std::move(batch));
    r.outcome = StepOutcome::Aborted;
    r.note = err;
    return r;
  }

  const Link time_link = link_of(*time_att);
  SequenceAttestation q;
  try {
    timed("sequence", buid, [&] { q = seq_.sequence_link(time_link); });
  } catch (const std::exception& e) {
    // block and stamp exist in storage but never entered the order: a
    // benign dead end; the batch goes back for a fresh block
    queue_.requeue_front(std::move(batch));
    r.outcome = StepOutcome::SequenceRefused;
    r.note = e.what();
    return r;
  }

  r.triad = Triad{block, *time_att, q};
  bool stored = true;
  try {
    timed("seq_replicate", buid, [&] { rep_.replicate(q); });
  } catch (const std::exception& e) {
    retry_.emplace_back(q, time_link);
    stored = false;
    r.note = e.what();
  }
  if (stored) seq_.on_replicated(q, time_link);

  seq_.drop_acks(acks_taken);
  handle_.last_time_link = time_link;
  r.outcome = stored ? StepOutcome::Finalized : StepOutcome::Unfinalized;
  return r;
}

RunReport ChainWriter::run(uint32_t interval_ms, size_t max_steps,
                           const std::function<void(size_t, ChainWriter&)>& on_step) {
  RunReport report;
  size_t events_start = events_.size();
  size_t step = 0;
  size_t stalled = 0;
  while (true) {
    if (max_steps > 0 && step >= max_steps) break;
    if (on_step) on_step(step, *this);

    StepReport r = zip_step();
    switch (r.outcome) {
      case StepOutcome::Idle: report.idle++; break;
      case StepOutcome::Finalized: report.finalized++; break;
      case StepOutcome::Unfinalized: report.unfinalized++; break;
      case StepOutcome::Aborted: report.aborted++; break;
      case StepOutcome::SequenceRefused: report.refused++; break;
    }
    bool advanced = r.outcome == StepOutcome::Finalized || r.outcome == StepOutcome::Unfinalized;
    bool was_idle = r.outcome == StepOutcome::Idle;
    report.steps.push_back(std::move(r));
    ++step;

    if (max_steps == 0) {
      // drain mode: stop once everything is flushed, and refuse to spin
      // forever against a service that keeps failing the same work
      if (was_idle && queue_.size() == 0 && retry_.empty()) break;
      stalled = advanced ? 0 : stalled + 1;
      if (stalled > 3) break;
    }
    if (interval_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(interval_ms));
  }
  report.events.assign(events_.begin() + std::ptrdiff_t(events_start), events_.end());
  return report;
}

}  // namespace zl
