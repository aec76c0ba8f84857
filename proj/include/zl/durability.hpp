#pragma once

#include <cstdint>

namespace zl {

inline constexpr double kSecondsPerYear = 31'536'000.0;
inline constexpr double kSecondsPerMonth = kSecondsPerYear / 12.0;

// A probability that may sit arbitrarily close to 0 or 1, carried in log
// space from both ends so neither tail rounds away. `nines` is the usual
// count of leading 9s: floor(-log10(1 - p)).
struct NinesReport {
  double ln_probability = 0.0;  // ln(p)
  double ln_complement = 0.0;   // ln(1 - p)

  static NinesReport from_ln_probability(double lp);
  static NinesReport from_ln_complement(double lc);
  static NinesReport from_probability(double p);

  double probability() const;  // rounds to 0.0 / 1.0 at the extremes
  double complement() const;
  int nines() const;  // capped at 9999 when the complement is exactly zero
};

// ln(1 - e^x) for x <= 0, accurate whether e^x is near 0 or near 1
double log1mexp(double x);

// failures per period, given failures per year
double period_failure_rate(double annual_rate, double period_seconds);

// probability of at least one event in a period with event rate f: 1 - e^-f
double poisson_loss(double f);

// f - poisson_loss(f), evaluated analytically: for tiny f the difference
// (~f^2/2) sits far below one ulp of f and cannot be formed by subtraction
double poisson_loss_deficit(double f);

// ln C(n, j): exact product below 61, log-gamma above
double log_binomial(uint32_t n, uint32_t j);

// upper binomial tail P[X >= j_min], X ~ Binomial(n, p), as ln of the sum
double log_binomial_tail(uint32_t n, uint32_t j_min, double p);
double binomial_tail(uint32_t n, uint32_t j_min, double p);

// probability that none of o objects per block, accumulated over b blocks
// each retained ever after, is lost: (1-p)^(o * b * (b+1) / 2)
NinesReport cumulative_chain_durability(double p, double objects_per_block, double blocks);

// When is an object with k parity shards out of n lost within one recovery
// period? The strict reading: more shards gone than parity covers. The
// conservative variant starts counting one shard earlier.
enum class LossRule { MoreThanParity, AtLeastParity };

// the steps from an annual shard-loss rate to annual object durability
struct ObjectDurability {
  double p_shard = 0;     // per-recovery-period shard loss probability
  double ln_cdf = 0;      // ln P[losing shards beyond recovery in one period]
  NinesReport period;     // durability across one recovery period
  NinesReport annual;     // compounded over a year of recovery periods
};
ObjectDurability object_durability(double annual_rate, double r_seconds, uint32_t n, uint32_t k,
                                   LossRule rule = LossRule::MoreThanParity);

// seconds to refill one store from the others over one connection
double recovery_time(double bytes_per_block, double objects_per_block, double blocks, uint32_t n,
                     uint32_t k, double transfer_mbps);

// chance that enough stores answer this month to decode everything:
// 1 - P[more than k of n unavailable]
NinesReport availability(double monthly_availability, uint32_t n, uint32_t k);

// Model of a chain's storage stack. Defaults describe the working
// configuration the calculator is tuned against: 0.1 s block interval for
// 100 years, 4 objects per block, 20/3 disk-level coding inside a provider,
// 6/3 ledger-level coding across providers.
struct DurabilityModel {
  double store_annual_rate = 1e-11;      // yearly object-loss odds inside one store
  double block_interval_s = 0.1;         // seconds between blocks
  double blocks = 3.1536e10;             // lifetime block count
  double objects_per_block = 4;          // stored objects created per block
  double disk_annual_rate = 0.00405;     // yearly failure rate of one disk
  double disk_recovery_s = 6.5 * 86400;  // disk rebuild period, seconds
  uint32_t disk_shards = 20;             // provider-internal shards per object
  uint32_t disk_parity = 3;
  uint32_t store_shards = 6;  // cross-provider shards per object
  uint32_t store_parity = 3;
  double bytes_per_block = 1328;        // bytes across one block's objects
  double transfer_mbps = 160;           // store-to-store refill bandwidth
  double monthly_availability = 0.999;  // one store's availability SLA
};

// throws std::invalid_argument on nonpositive fields or parity >= shards
void validate(const DurabilityModel& m);

// every figure of the walkthrough, in derivation order
struct ChainDurabilityReport {
  LossRule rule = LossRule::MoreThanParity;
  double f_c = 0;           // one store's object failure rate per block interval
  double p_c = 0;           // Poisson probability of such a failure
  double fc_minus_pc = 0;   // analytic gap between the two
  double exponent = 0;      // o * b * (b+1) / 2
  NinesReport single_store; // odds a chain on one uncoded store survives
  ObjectDurability disk;    // provider-internal durability (p_s, CDF_s, d_c)
  double r_z = 0;           // cross-store recovery period, seconds
  ObjectDurability store;   // cross-provider durability (p_z, CDF_z, d_z)
  NinesReport cumulative;   // whole-chain durability over the lifetime
  NinesReport avail;        // monthly availability across stores
};

ChainDurabilityReport chain_durability_full(const DurabilityModel& m,
                                            LossRule rule = LossRule::MoreThanParity);

}  // namespace zl
