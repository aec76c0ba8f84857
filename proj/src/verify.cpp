#include "zl/verify.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

#include "zl/codec.hpp"
#include "zl/errors.hpp"
#include "zl/sequence_service.hpp"
#include "zl/timestamp_service.hpp"

namespace zl {

bool truetriad(const Triad& tri, const PublicKey& time_pub, const PublicKey& seq_pub) {
  if (tri.time.bytes != encode(link_of(tri.block))) return false;
  if (!validate(time_pub, tri.time)) return false;
  if (tri.seq.bytes != encode(link_of(tri.time))) return false;
  if (!check(seq_pub, tri.seq)) return false;
  return true;
}

uint64_t height(const Triad& tri, const Snapshot& snap) {
  uint64_t h = 0;
  std::optional<Link> prev = block_prev_time_link(tri.block);
  while (prev) {
    if (h > snap.blocks.size() + 1) throw Error("unresolvable path: cycle or overlong chain");
    const TimestampAttestation* pt = nullptr;
    for (const auto& t : snap.times)
      if (link_of(t) == *prev) {
        pt = &t;
        break;
      }
    if (!pt) throw Error("unresolvable path: missing timestamp attestation");
    const AnyBlock* pb = nullptr;
    for (const auto& b : snap.blocks)
      if (encode(link_of(b)) == pt->bytes) {
        pb = &b;
        break;
      }
    if (!pb) throw Error("unresolvable path: missing block");
    ++h;
    prev = block_prev_time_link(*pb);
  }
  return h;
}

bool triad_less(const Triad& a, const Triad& b, const Snapshot& snap) {
  uint64_t ha = height(a, snap), hb = height(b, snap);
  return ha < hb || (ha == hb && a.seq.ctr < b.seq.ctr);
}

namespace {

// one verified-and-joined candidate triad
struct TrueIdx {
  size_t b, t, q;
  uint64_t ctr;
};

}  // namespace

std::vector<Triad> omc(const Block& genesis, const EnclaveAttestation& encl, const PublicKey& enclave_root,
                       const Snapshot& snap) {
  std::vector<Triad> z;

  // the chain's service keys live in the genesis payload
  auto control = snap.control_by_link(genesis.payload_link);
  if (!control) return z;
  const PublicKey time_pub = control->time_pubkey;
  const PublicKey seq_pub = control->seq_pubkey;

  auto app = verify_enclave(enclave_root, encl);
  if (!app || app->v != seq_pub.v) return z;  // unattested sequencer key

  // Verify every attestation once, then join structurally: a stamp belongs
  // to the block whose encoded link it carries, a counter to the stamp
  // whose encoded link it carries.
  std::map<Bytes, std::vector<size_t>> times_by_bytes;
  for (size_t i = 0; i < snap.times.size(); ++i)
    if (validate(time_pub, snap.times[i])) times_by_bytes[snap.times[i].bytes].push_back(i);
  std::map<Bytes, std::vector<size_t>> seqs_by_bytes;
  for (size_t i = 0; i < snap.seqs.size(); ++i)
    if (check(seq_pub, snap.seqs[i])) seqs_by_bytes[snap.seqs[i].bytes].push_back(i);

  std::vector<TrueIdx> truev;
  std::set<std::tuple<Bytes, Bytes, Bytes>> seen;  // collapse duplicate objects
  std::map<Link, std::vector<size_t>> succ_by_prev;
  std::vector<TrueIdx> genesis_candidates;
  const Link genesis_link = link_of(genesis);
  for (size_t bi = 0; bi < snap.blocks.size(); ++bi) {
    const AnyBlock& b = snap.blocks[bi];
    const Link bl = link_of(b);
    auto ti = times_by_bytes.find(encode(bl));
    if (ti == times_by_bytes.end()) continue;
    for (size_t t : ti->second) {
      auto qi = seqs_by_bytes.find(encode(link_of(snap.times[t])));
      if (qi == seqs_by_bytes.end()) continue;
      for (size_t q : qi->second) {
        if (!seen.emplace(encode(b), encode(snap.times[t]), encode(snap.seqs[q])).second) continue;
        TrueIdx tt{bi, t, q, snap.seqs[q].ctr};
        assert(truetriad(Triad{b, snap.times[t], snap.seqs[q]}, time_pub, seq_pub));
        truev.push_back(tt);
        if (auto prev = block_prev_time_link(b)) succ_by_prev[*prev].push_back(truev.size() - 1);
        if (bl == genesis_link && tt.ctr == 0) genesis_candidates.push_back(tt);
      }
    }
  }

  // distinct counter values among all true triads, for gap accounting
  std::vector<uint64_t> ctrs;
  ctrs.reserve(truev.size());
  for (const auto& tt : truev) ctrs.push_back(tt.ctr);
  std::sort(ctrs.begin(), ctrs.end());
  ctrs.erase(std::unique(ctrs.begin(), ctrs.end()), ctrs.end());
  auto ctrs_in_open_interval = [&](uint64_t lo, uint64_t hi) -> uint64_t {
    // counter values strictly between lo and hi
    auto first = std::upper_bound(ctrs.begin(), ctrs.end(), lo);
    auto last = std::lower_bound(ctrs.begin(), ctrs.end(), hi);
    return uint64_t(last - first);
  };

  if (genesis_candidates.empty()) return z;  // genesis unprovable
  const TrueIdx& g = genesis_candidates.front();
  z.push_back(Triad{snap.blocks[g.b], snap.times[g.t], snap.seqs[g.q]});
  int64_t boundary = 0;  // highest counter value accounted for so far

  // root is provable and carries counter zero
  assert(link_of(z[0].block) == genesis_link && z[0].seq.ctr == 0);

  while (true) {
    if (z.size() > truev.size()) throw std::logic_error("main chain longer than candidate set");

    auto si = succ_by_prev.find(link_of(z.back().time));
    if (si == succ_by_prev.end() || si->second.empty()) return z;

    // minimal-counter successor; a tie would mean one counter value was
    // issued over two different stamps, which verified attestations from
    // one key cannot produce
    const std::vector<size_t>& succs = si->second;
    size_t best = succs[0];
    bool tie = false;
    for (size_t k = 1; k < succs.size(); ++k) {
      if (truev[succs[k]].ctr < truev[best].ctr) {
        best = succs[k];
        tie = false;
      } else if (truev[succs[k]].ctr == truev[best].ctr) {
        tie = true;
      }
    }
    if (tie) throw std::logic_error("two true successors share a counter value");
    const TrueIdx& m = truev[best];

    if (boundary <= int64_t(m.ctr)) {
      // every counter between the boundary and the candidate must be
      // accounted for by some true triad, or a lower successor could be
      // hiding in withheld data
      int64_t present = boundary < int64_t(m.ctr) ? int64_t(ctrs_in_open_interval(uint64_t(boundary), m.ctr)) : 0;
      int64_t needed = int64_t(m.ctr) - boundary - 1;  // -1 when the counter was already seen
      if (present != needed) return z;                 // missing a triad
      boundary = int64_t(m.ctr);

      // the accounted-for range [0, boundary] is gapless
      assert(uint64_t(std::lower_bound(ctrs.begin(), ctrs.end(), uint64_t(boundary) + 1) - ctrs.begin()) ==
             uint64_t(boundary) + 1);
    }

    // appended triad hangs off the previous stamp and is the minimal choice
    assert(block_prev_time_link(snap.blocks[m.b]) == link_of(z.back().time));
    z.push_back(Triad{snap.blocks[m.b], snap.times[m.t], snap.seqs[m.q]});
  }
}

std::optional<Certificate> makecert(const TxLink& tx, const std::vector<MerkleTree>& merkles,
                                    const std::vector<Triad>& z) {
  // hash each candidate tree once up front; the inner loop runs per height
  std::vector<Link> mlinks;
  mlinks.reserve(merkles.size());
  for (const auto& m : merkles) mlinks.push_back(link_of(m));
  for (size_t h = 0; h < z.size(); ++h) {
    const Link want = block_payload_link(z[h].block);
    for (size_t mi = 0; mi < merkles.size(); ++mi) {
      if (mlinks[mi] != want) continue;
      const MerkleTree& m = merkles[mi];
      for (size_t r = 0; r < m.leaves.size(); ++r) {
        if (m.leaves[r] == tx)
          return Certificate{tx, link_of(z[0].block), z[h].time.ts, uint64_t(h), uint64_t(r)};
      }
    }
  }
  return std::nullopt;
}

bool cert_precedes(const Certificate& a, const Certificate& b) {
  if (a.genesis_link != b.genesis_link) throw Error("certificates from different chains");
  return a.height < b.height || (a.height == b.height && a.rank < b.rank);
}

std::optional<Certificate> verify_tx(const Link& genesis_link, const TxLink& tx, const EnclaveAttestation& encl,
                                     const PublicKey& enclave_root, ReplicationService& rep) {
  Snapshot snap = download_snapshot(rep);

  auto found = snap.block_by_link(genesis_link);
  const Block* g = found ? std::get_if<Block>(&*found) : nullptr;
  if (!g) {
    if (!snap.complete) throw SnapshotIncomplete("genesis block not reconstructable");
    return std::nullopt;
  }

  std::vector<Triad> z = omc(*g, encl, enclave_root, snap);
  auto cert = makecert(tx, snap.merkles, z);
  if (!cert && !snap.complete)
    throw SnapshotIncomplete("transaction not found, but the snapshot is missing objects");
  return cert;
}

}  // namespace zl
