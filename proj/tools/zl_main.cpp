// zl — command-line front end for the append-only ledger library.
//
// Subcommands: init, write, run, verify, bench, durability.
// Exit codes: 0 success, 1 requested item not found, 2 usage or bad input,
// 3 service or storage failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zl/bench.hpp"
#include "zl/clock.hpp"
#include "zl/codec.hpp"
#include "zl/durability.hpp"
#include "zl/errors.hpp"
#include "zl/kvconfig.hpp"
#include "zl/pipeline.hpp"
#include "zl/ring.hpp"
#include "zl/statefile.hpp"
#include "zl/verify.hpp"

namespace {

using namespace zl;

constexpr int kOk = 0;
constexpr int kNotFound = 1;
constexpr int kUsage = 2;
constexpr int kService = 3;

struct Ctx {
  KvConfig cfg;
  bool records = false;  // --format records

  uint64_t seed() const { return cfg.unum("seed", 1); }
  std::string state_dir() const { return cfg.str("state.dir", "zlstate"); }
  uint64_t ring_size() const { return cfg.unum("ring.size", 1); }
  uint64_t batch_max() const { return cfg.unum("batch.max", 64); }
  uint32_t interval_ms() const { return static_cast<uint32_t>(cfg.unum("interval.ms", 0)); }
  uint64_t clock_step_ms() const { return cfg.unum("clock.step_ms", 100); }
  uint32_t lat_time() const { return static_cast<uint32_t>(cfg.unum("latency.time_ms", 0)); }
  uint32_t lat_rep() const { return static_cast<uint32_t>(cfg.unum("latency.replicate_ms", 0)); }
  uint32_t lat_seq() const { return static_cast<uint32_t>(cfg.unum("latency.sequence_ms", 0)); }
  std::string tx_schema() const { return cfg.str("tx.schema", "zl.v1"); }
};

uint64_t run_seed(const ChainState& st) {
  // distinct random stream per invocation; uuids must never repeat across runs
  return st.seed + 0x9E3779B97F4A7C15ULL * (st.run_counter + 1);
}

std::vector<size_t> parse_index_list(const std::string& s, size_t bound, const char* what) {
  std::vector<size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t start = item.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    size_t end = item.find_last_not_of(" \t");
    size_t idx = 0, pos = 0;
    idx = std::stoul(item.substr(start, end - start + 1), &pos);
    if (pos != end - start + 1) throw std::invalid_argument(std::string(what) + ": bad index '" + item + "'");
    if (idx >= bound) throw std::invalid_argument(std::string(what) + ": index " + std::to_string(idx) + " out of range");
    out.push_back(idx);
  }
  return out;
}

std::vector<std::unique_ptr<BucketStore>> open_buckets(const std::string& dir, size_t n) {
  std::vector<std::unique_ptr<BucketStore>> v;
  for (uint32_t i = 0; i < n; ++i) {
    auto b = std::make_unique<BucketStore>(i, "zone-" + std::to_string(i), bucket_dir(dir, i));
    b->load();
    v.push_back(std::move(b));
  }
  return v;
}

// One fully wired chain instance. Never moved after assembly: the writer and
// services hold references into this struct.
struct Chain {
  ChainState st;
  ManualClock clock;
  std::optional<Rng> rng;
  std::optional<TimestampService> time;
  std::unique_ptr<Sequencer> seq;
  SingleSequencer* single = nullptr;
  RingSequencer* ring = nullptr;
  std::optional<ReplicationService> rep;
  std::optional<ChainWriter> writer;

  SequenceService& member(size_t i) { return single ? single->service() : ring->member(i); }
};

void assemble(const Ctx& c, Chain& ch) {
  ch.clock.set(ch.st.clock_ms);
  ch.rng.emplace(run_seed(ch.st));
  ch.time.emplace(KeyPair::from_seed(ch.st.time_seed), ch.clock, *ch.rng, c.lat_time());
  if (ch.st.ring_size == 1) {
    auto s = std::make_unique<SingleSequencer>(SequenceService::restore(
        KeyPair::from_seed(ch.st.seq_seeds.at(0)), ch.st.seq_ids.at(0), ch.st.issued.at(0), c.lat_seq()));
    ch.single = s.get();
    ch.seq = std::move(s);
  } else {
    std::vector<RingMember> members;
    for (size_t i = 0; i < ch.st.ring_size; ++i) {
      SequenceService svc = SequenceService::restore(KeyPair::from_seed(ch.st.seq_seeds.at(i)),
                                                     ch.st.seq_ids.at(i), ch.st.issued.at(i), c.lat_seq());
      members.push_back(RingMember{std::move(svc), ch.st.member_atts.at(i)});
    }
    auto r = std::make_unique<RingSequencer>(std::move(members));
    for (const RingAck& a : ch.st.acks) r->preload_ack(a);
    ch.ring = r.get();
    ch.seq = std::move(r);
  }
  ch.rep.emplace(CodingScheme{}, open_buckets(c.state_dir(), CodingScheme{}.n), ch.st.seed * 31 + 7,
                 c.lat_rep());
  for (size_t i : parse_index_list(c.cfg.str("fault.bucket_down", ""), ch.rep->bucket_count(), "fault.bucket_down"))
    ch.rep->bucket(i).set_available(false);
  ch.writer.emplace(*ch.time, *ch.seq, *ch.rep, *ch.rng, c.batch_max());
}

// fold the writer's post-run state back into the persistable snapshot
void capture(Chain& ch) {
  ch.st.handle = ch.writer->handle();
  ch.st.queue = ch.writer->queue().drain();
  ch.st.retries = ch.writer->retry_backlog();
  ch.st.acks = ch.seq->peek_acks();
  for (size_t i = 0; i < ch.st.ring_size; ++i) ch.st.issued.at(i) = ch.member(i).issued();
  ch.st.clock_ms = ch.clock.now_ms();
  ch.st.run_counter += 1;
}

const char* outcome_name(StepOutcome o) {
  switch (o) {
    case StepOutcome::Idle: return "idle";
    case StepOutcome::Finalized: return "finalized";
    case StepOutcome::Unfinalized: return "unfinalized";
    case StepOutcome::Aborted: return "aborted";
    case StepOutcome::SequenceRefused: return "refused";
  }
  return "?";
}

// ---------------------------------------------------------------- commands

int cmd_init(const Ctx& c) {
  const std::string dir = c.state_dir();
  if (state_exists(dir)) {
    std::cerr << "error: chain state already present in " << dir << "\n";
    return kService;
  }
  if (c.ring_size() == 0) {
    std::cerr << "error: ring.size must be at least 1\n";
    return kUsage;
  }
  ChainState st;
  st.seed = c.seed();
  st.ring_size = c.ring_size();
  Rng boot(st.seed);
  boot.fill(st.time_seed.data(), st.time_seed.size());
  boot.fill(st.enclave_seed.data(), st.enclave_seed.size());
  st.enclave_image = sha3_256(view("zl sequencer image v1"));
  EnclaveRoot root(KeyPair::from_seed(st.enclave_seed), st.enclave_image);
  for (size_t i = 0; i < st.ring_size; ++i) {
    std::array<uint8_t, 32> seed{};
    boot.fill(seed.data(), seed.size());
    st.seq_seeds.push_back(seed);
    st.seq_ids.push_back(uuid4(boot));
    st.member_atts.push_back(root.attest(KeyPair::from_seed(seed).pub()));
    st.issued.emplace_back();
  }

  Chain ch;
  ch.st = std::move(st);
  assemble(c, ch);
  ch.writer->init_chain();
  capture(ch);
  save_state(dir, ch.st);

  const std::string link = email_encode(ch.st.handle.genesis_link);
  if (c.records)
    std::cout << "record=genesis link=" << link << "\n";
  else
    std::cout << "genesis " << link << "\n";
  return kOk;
}

int cmd_write(const Ctx& c, const std::vector<std::string>& files) {
  const std::string dir = c.state_dir();
  ChainState st = load_state(dir);
  const std::string schema = c.tx_schema();
  size_t added = 0;
  for (const std::string& f : files) {
    std::ifstream file_in;
    std::istream* in = &std::cin;
    if (f != "-") {
      file_in.open(f);
      if (!file_in) {
        std::cerr << "error: cannot open " << f << "\n";
        return kUsage;
      }
      in = &file_in;
    }
    std::string line;
    while (std::getline(*in, line)) {
      if (line.empty()) continue;
      TxLink tx;
      tx.schema = schema;
      tx.tx_type = "note";
      tx.data.digest = sha3_256(view(line));
      Digest u = sha3_256(view("uuid:" + line));
      std::copy_n(u.v.begin(), tx.data.uuid.v.size(), tx.data.uuid.v.begin());
      st.queue.push_back(tx);
      ++added;
      const std::string handle = to_hex(view(encode(tx)));
      if (c.records)
        std::cout << "record=tx handle=" << handle << "\n";
      else
        std::cout << "tx " << handle << "\n";
    }
  }
  save_state(dir, st);
  if (!c.records) std::cout << "queued " << added << " transaction(s)\n";
  return kOk;
}

int cmd_run(const Ctx& c, uint64_t steps) {
  const std::string dir = c.state_dir();
  Chain ch;
  ch.st = load_state(dir);
  assemble(c, ch);
  ch.writer->adopt(ch.st.handle);
  for (TxLink& tx : ch.st.queue) ch.writer->write(std::move(tx));
  ch.st.queue.clear();
  for (auto& [q, l] : ch.st.retries) ch.writer->push_retry(std::move(q), l);
  ch.st.retries.clear();

  if (ch.ring)
    for (size_t i : parse_index_list(c.cfg.str("fault.ring_halt", ""), ch.ring->size(), "fault.ring_halt"))
      ch.ring->halt(i, true);

  const uint64_t halt_step = c.cfg.unum("fault.sequencer_halt_step", 0);  // 1-based; 0 = off
  const uint64_t tick = c.clock_step_ms();
  auto on_step = [&](size_t step, ChainWriter&) {
    ch.clock.advance(tick);
    if (halt_step > 0 && step == halt_step - 1) {
      if (ch.single) ch.single->service().set_down(true);
      if (ch.ring)
        for (size_t i = 0; i < ch.ring->size(); ++i) ch.ring->halt(i, true);
    }
  };

  RunReport report = ch.writer->run(c.interval_ms(), steps, on_step);
  capture(ch);
  save_state(dir, ch.st);

  for (size_t i = 0; i < report.steps.size(); ++i) {
    const StepReport& s = report.steps[i];
    const std::string block = s.triad ? to_hex(block_uuid(s.triad->block)) : std::string("-");
    if (c.records) {
      std::cout << "record=step index=" << i << " outcome=" << outcome_name(s.outcome) << " block="
                << block << " batch=" << s.batch;
      if (!s.note.empty()) std::cout << " note=" << s.note;
      std::cout << "\n";
    } else {
      std::cout << "step " << i << " " << outcome_name(s.outcome) << " block=" << block
                << " batch=" << s.batch;
      if (!s.note.empty()) std::cout << " note=" << s.note;
      std::cout << "\n";
    }
  }
  if (c.records)
    for (const StageEvent& e : report.events)
      std::cout << "record=stage name=" << e.stage << " block=" << to_hex(e.block_uuid)
                << " start_us=" << e.start_us << " end_us=" << e.end_us << "\n";
  std::ostream& out = std::cout;
  if (c.records)
    out << "record=run ";
  else
    out << "run ";
  out << "finalized=" << report.finalized << " unfinalized=" << report.unfinalized
      << " aborted=" << report.aborted << " refused=" << report.refused << " idle=" << report.idle
      << " queued=" << ch.st.queue.size() << " retries=" << ch.st.retries.size()
      << " tip=" << to_hex(view(encode(ch.st.handle.last_time_link))) << "\n";
  return kOk;
}

int cmd_verify(const Ctx& c, const std::string& genesis_email, const std::string& tx_hex) {
  Link genesis_link;
  TxLink tx;
  try {
    genesis_link = email_parse(genesis_email);
    tx = decode<TxLink>(view(from_hex(tx_hex)));
  } catch (const std::exception& e) {
    std::cerr << "error: bad argument: " << e.what() << "\n";
    return kUsage;
  }
  Chain ch;
  ch.st = load_state(c.state_dir());
  assemble(c, ch);
  EnclaveRoot root(KeyPair::from_seed(ch.st.enclave_seed), ch.st.enclave_image);
  std::optional<Certificate> cert;
  try {
    cert = verify_tx(genesis_link, tx, ch.st.member_atts.at(0), root.pub(), *ch.rep);
  } catch (const SnapshotIncomplete& e) {
    std::cerr << "error: snapshot incomplete: " << e.what() << "\n";
    return kService;
  }
  if (!cert) {
    std::cout << (c.records ? "record=certificate found=0" : "not found") << "\n";
    return kNotFound;
  }
  if (c.records)
    std::cout << "record=certificate found=1 height=" << cert->height << " rank=" << cert->rank
              << " ts=" << cert->ts << " schema=" << cert->tx.schema << "\n";
  else
    std::cout << "certified height=" << cert->height << " rank=" << cert->rank << " ts=" << cert->ts
              << " schema=" << cert->tx.schema << "\n";
  return kOk;
}

int cmd_bench(const Ctx& c, uint64_t users, uint64_t txs_per_user) {
  BenchConfig bc;
  bc.seed = c.seed();
  bc.users = users > 0 ? users : c.cfg.unum("bench.users", 4);
  bc.txs_per_user = txs_per_user > 0 ? txs_per_user : c.cfg.unum("bench.txs_per_user", 25);
  bc.stamp_latency_ms = c.lat_time();
  bc.replicate_latency_ms = c.lat_rep();
  bc.sequence_latency_ms = c.lat_seq();
  bc.batch_max = c.cfg.unum("bench.batch_max", 4096);
  bc.ring_size = c.cfg.unum("bench.ring_size", 1);
  BenchReport r = run_bench(bc);
  char buf[256];
  if (c.records) {
    std::snprintf(buf, sizeof buf,
                  "record=bench txs=%zu blocks=%zu duration_s=%.6f mean_finality_ms=%.3f "
                  "p90_finality_ms=%.3f tps=%.3f\n",
                  r.txs, r.blocks, r.duration_s, r.mean_finality_ms, r.p90_finality_ms, r.tps);
    std::cout << buf;
  } else {
    std::snprintf(buf, sizeof buf,
                  "txs %zu\nblocks %zu\nduration_s %.6f\nmean_finality_ms %.3f\n"
                  "p90_finality_ms %.3f\ntps %.3f\n",
                  r.txs, r.blocks, r.duration_s, r.mean_finality_ms, r.p90_finality_ms, r.tps);
    std::cout << buf;
  }
  return kOk;
}

DurabilityModel parse_model(const std::string& path) {
  const KvConfig kv = KvConfig::parse_file(path);
  static const char* kKeys[] = {"store_annual_rate", "block_interval_s",  "blocks",
                                "objects_per_block", "disk_annual_rate",  "disk_recovery_s",
                                "disk_shards",       "disk_parity",       "store_shards",
                                "store_parity",      "bytes_per_block",   "transfer_mbps",
                                "monthly_availability"};
  for (const char* k : kKeys)
    if (!kv.has(k)) throw std::invalid_argument(std::string("missing model field: ") + k);
  DurabilityModel m;
  m.store_annual_rate = kv.require_real("store_annual_rate");
  m.block_interval_s = kv.require_real("block_interval_s");
  m.blocks = kv.require_real("blocks");
  m.objects_per_block = kv.require_real("objects_per_block");
  m.disk_annual_rate = kv.require_real("disk_annual_rate");
  m.disk_recovery_s = kv.require_real("disk_recovery_s");
  m.disk_shards = static_cast<uint32_t>(kv.unum("disk_shards", 0));
  m.disk_parity = static_cast<uint32_t>(kv.unum("disk_parity", 0));
  m.store_shards = static_cast<uint32_t>(kv.unum("store_shards", 0));
  m.store_parity = static_cast<uint32_t>(kv.unum("store_parity", 0));
  m.bytes_per_block = kv.require_real("bytes_per_block");
  m.transfer_mbps = kv.require_real("transfer_mbps");
  m.monthly_availability = kv.require_real("monthly_availability");
  validate(m);
  return m;
}

void print_rule(const Ctx& c, const char* rule_name, const char* when, const ChainDurabilityReport& r) {
  char buf[512];
  if (c.records) {
    std::snprintf(buf, sizeof buf,
                  "record=durability_rule rule=%s p_z=%.17g cdf_z=%.17g annual_complement=%.17g "
                  "annual_nines=%d cumulative_complement=%.17g cumulative_nines=%d\n",
                  rule_name, r.store.p_shard, std::exp(r.store.ln_cdf), r.store.annual.complement(),
                  r.store.annual.nines(), r.cumulative.complement(), r.cumulative.nines());
    std::cout << buf;
    return;
  }
  std::snprintf(buf, sizeof buf,
                "[rule %s]  (object lost when erasures %s)\n"
                "  store_period_loss          p_z   = %.9e\n"
                "  store_tail_cdf             CDF_z = %.9e\n"
                "  store_annual_durability    d_z   : complement = %.9e  nines = %d\n"
                "  chain_cumulative           d*_z  : complement = %.9e  nines = %d\n",
                rule_name, when, r.store.p_shard, std::exp(r.store.ln_cdf),
                r.store.annual.complement(), r.store.annual.nines(), r.cumulative.complement(),
                r.cumulative.nines());
  std::cout << buf;
}

int cmd_durability(const Ctx& c, const std::string& model_path) {
  DurabilityModel m;
  try {
    m = parse_model(model_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  const ChainDurabilityReport strict = chain_durability_full(m, LossRule::MoreThanParity);
  const ChainDurabilityReport loose = chain_durability_full(m, LossRule::AtLeastParity);
  char buf[1024];
  if (c.records) {
    std::snprintf(buf, sizeof buf,
                  "record=durability_base f_c=%.17g p_c=%.17g deficit=%.17g single_ln=%.17g "
                  "single_p=%.17g p_s=%.17g cdf_s=%.17g d_c_complement=%.17g d_c_nines=%d r_z=%.17g\n",
                  strict.f_c, strict.p_c, strict.fc_minus_pc, strict.single_store.ln_probability,
                  strict.single_store.probability(), strict.disk.p_shard, std::exp(strict.disk.ln_cdf),
                  strict.disk.annual.complement(), strict.disk.annual.nines(), strict.r_z);
    std::cout << buf;
  } else {
    std::snprintf(buf, sizeof buf,
                  "interval_failure_rate        f_c   = %.9e\n"
                  "interval_loss_probability    p_c   = %.9e\n"
                  "poisson_gap                  f_c-p_c = %.9e\n"
                  "single_store_chain           ln = %.9f  p = %.9e\n"
                  "disk_shard_period_loss       p_s   = %.9e\n"
                  "disk_tail_cdf                CDF_s = %.9e\n"
                  "disk_annual_durability       d_c   : complement = %.9e  nines = %d\n"
                  "store_recovery_seconds       r_z   = %.1f\n",
                  strict.f_c, strict.p_c, strict.fc_minus_pc, strict.single_store.ln_probability,
                  strict.single_store.probability(), strict.disk.p_shard, std::exp(strict.disk.ln_cdf),
                  strict.disk.annual.complement(), strict.disk.annual.nines(), strict.r_z);
    std::cout << buf;
  }
  print_rule(c, "beyond_parity", "exceed parity count", strict);
  print_rule(c, "at_parity", "reach parity count", loose);
  if (c.records) {
    std::snprintf(buf, sizeof buf,
                  "record=availability complement=%.17g nines=%d correlated_floor=%.6f\n",
                  strict.avail.complement(), strict.avail.nines(), m.monthly_availability);
    std::cout << buf;
  } else {
    std::snprintf(buf, sizeof buf,
                  "availability                 a_z   : complement = %.9e  nines = %d\n"
                  "availability_correlated_floor      = %.6f\n",
                  strict.avail.complement(), strict.avail.nines(), m.monthly_availability);
    std::cout << buf;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zl — append-only ledger with erasure-coded replication"};
  app.require_subcommand(1);
  std::string config_path;
  std::string format = "text";
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--format", format, "output style: text or records")
      ->check(CLI::IsMember({"text", "records"}));

  auto* init = app.add_subcommand("init", "create a chain and print its genesis link");
  auto* write = app.add_subcommand("write", "queue one transaction per input line");
  std::vector<std::string> write_files;
  write->add_option("files", write_files, "input files ('-' for stdin)")->required();
  auto* run = app.add_subcommand("run", "drive the write pipeline");
  uint64_t steps = 0;
  run->add_option("--steps", steps, "steps to run (0 = drain the queue)");
  auto* verify = app.add_subcommand("verify", "independently verify one transaction");
  std::string genesis_email, tx_hex;
  verify->add_option("--genesis", genesis_email, "genesis link in mailbox form")->required();
  verify->add_option("--tx", tx_hex, "transaction handle (hex)")->required();
  auto* bench = app.add_subcommand("bench", "measure write finality");
  uint64_t users = 0, txs_per_user = 0;
  bench->add_option("--users", users, "concurrent writers");
  bench->add_option("--txs-per-user", txs_per_user, "transactions per writer");
  auto* durability = app.add_subcommand("durability", "durability and availability calculator");
  std::string model_path;
  durability->add_option("--model", model_path, "model parameter file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  Ctx c;
  c.records = format == "records";
  if (!config_path.empty()) {
    try {
      c.cfg = KvConfig::parse_file(config_path);
    } catch (const std::exception& e) {
      std::cerr << "error: config: " << e.what() << "\n";
      return kUsage;
    }
  }

  try {
    if (init->parsed()) return cmd_init(c);
    if (write->parsed()) return cmd_write(c, write_files);
    if (run->parsed()) return cmd_run(c, steps);
    if (verify->parsed()) return cmd_verify(c, genesis_email, tx_hex);
    if (bench->parsed()) return cmd_bench(c, users, txs_per_user);
    if (durability->parsed()) return cmd_durability(c, model_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kService;
  }
  return kUsage;
}
