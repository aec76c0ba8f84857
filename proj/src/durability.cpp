#include "zl/durability.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace zl {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log1mexp(double x) {
  if (x > 0) throw std::invalid_argument("log1mexp needs x <= 0");
  if (x == 0.0) return kNegInf;
  // switch at e^x = 1/2: below it exp keeps full precision, above it only
  // expm1 still sees the gap to 1
  constexpr double kLn2 = 0.6931471805599453;
  return x < -kLn2 ? std::log1p(-std::exp(x)) : std::log(-std::expm1(x));
}

NinesReport NinesReport::from_ln_probability(double lp) {
  NinesReport r;
  r.ln_probability = lp;
  r.ln_complement = log1mexp(lp);
  return r;
}

NinesReport NinesReport::from_ln_complement(double lc) {
  NinesReport r;
  r.ln_complement = lc;
  r.ln_probability = log1mexp(lc);
  return r;
}

NinesReport NinesReport::from_probability(double p) {
  if (p < 0 || p > 1) throw std::invalid_argument("probability out of range");
  if (p == 0) return from_ln_complement(0.0);
  if (p == 1) return from_ln_probability(0.0);
  NinesReport r;
  r.ln_probability = std::log(p);
  r.ln_complement = std::log1p(-p);
  return r;
}

double NinesReport::probability() const { return std::exp(ln_probability); }
double NinesReport::complement() const { return std::exp(ln_complement); }

int NinesReport::nines() const {
  if (ln_complement == kNegInf) return 9999;
  double n = std::floor(-ln_complement / std::log(10.0));
  if (n < 0) return 0;
  if (n > 9999) return 9999;
  return static_cast<int>(n);
}

double period_failure_rate(double annual_rate, double period_seconds) {
  if (annual_rate < 0 || period_seconds <= 0) throw std::invalid_argument("bad rate inputs");
  return annual_rate * period_seconds / kSecondsPerYear;
}

double poisson_loss(double f) {
  if (f < 0) throw std::invalid_argument("negative rate");
  return -std::expm1(-f);
}

double poisson_loss_deficit(double f) {
  if (f < 0) throw std::invalid_argument("negative rate");
  // below the cutoff the difference is invisible to subtraction: use the
  // series f^2/2 - f^3/6 + f^4/24 (next term is f^5/120, negligible here)
  if (f < 1e-4) return f * f * (0.5 - f * (1.0 / 6.0) + f * f * (1.0 / 24.0));
  return f - poisson_loss(f);
}

double log_binomial(uint32_t n, uint32_t j) {
  if (j > n) return kNegInf;
  if (j == 0 || j == n) return 0.0;
  if (n <= 60) {
    // exact in double: C(60,30) ~ 1.18e17 < 2^53
    double c = 1.0;
    uint32_t jj = j < n - j ? j : n - j;
    for (uint32_t i = 1; i <= jj; ++i) c = c * double(n - jj + i) / double(i);
    return std::log(c);
  }
  return std::lgamma(double(n) + 1) - std::lgamma(double(j) + 1) - std::lgamma(double(n - j) + 1);
}

double log_binomial_tail(uint32_t n, uint32_t j_min, double p) {
  if (p < 0 || p > 1) throw std::invalid_argument("probability out of range");
  if (j_min > n) return kNegInf;
  if (j_min == 0) return 0.0;  // the whole distribution
  if (p == 0) return kNegInf;
  if (p == 1) return 0.0;
  double lp = std::log(p), lq = std::log1p(-p);
  // log-sum-exp over the tail terms
  double mx = kNegInf;
  for (uint32_t j = j_min; j <= n; ++j) {
    double t = log_binomial(n, j) + double(j) * lp + double(n - j) * lq;
    if (t > mx) mx = t;
  }
  double s = 0;
  for (uint32_t j = j_min; j <= n; ++j) {
    double t = log_binomial(n, j) + double(j) * lp + double(n - j) * lq;
    s += std::exp(t - mx);
  }
  return mx + std::log(s);
}

double binomial_tail(uint32_t n, uint32_t j_min, double p) {
  return std::exp(log_binomial_tail(n, j_min, p));
}

NinesReport cumulative_chain_durability(double p, double objects_per_block, double blocks) {
  if (p < 0 || p >= 1) throw std::invalid_argument("per-period loss must be in [0,1)");
  if (objects_per_block <= 0 || blocks < 0) throw std::invalid_argument("bad counts");
  double exponent = objects_per_block * blocks * (blocks + 1) / 2.0;
  return NinesReport::from_ln_probability(exponent * std::log1p(-p));
}

ObjectDurability object_durability(double annual_rate, double r_seconds, uint32_t n, uint32_t k,
                                   LossRule rule) {
  if (k >= n) throw std::invalid_argument("parity must be below the shard count");
  ObjectDurability d;
  d.p_shard = poisson_loss(period_failure_rate(annual_rate, r_seconds));
  uint32_t j_min = rule == LossRule::MoreThanParity ? k + 1 : k;
  if (j_min == 0) j_min = 1;  // losing zero shards is not a loss
  d.ln_cdf = log_binomial_tail(n, j_min, d.p_shard);
  d.period = NinesReport::from_ln_complement(d.ln_cdf);
  double periods = kSecondsPerYear / r_seconds;
  // annual = (1 - CDF)^periods; complement in log space throughout
  if (d.ln_cdf == kNegInf) {
    d.annual = NinesReport::from_ln_complement(kNegInf);
  } else if (d.ln_cdf < -500.0) {
    // CDF underflows double: 1 - (1-CDF)^E == E*CDF to first order, and the
    // correction of order E*CDF is far below any representable difference
    d.annual = NinesReport::from_ln_complement(std::log(periods) + d.ln_cdf);
  } else {
    double la = periods * std::log1p(-std::exp(d.ln_cdf));
    d.annual = NinesReport::from_ln_complement(log1mexp(la));
  }
  return d;
}

double recovery_time(double bytes_per_block, double objects_per_block, double blocks, uint32_t n,
                     uint32_t k, double transfer_mbps) {
  if (bytes_per_block <= 0 || objects_per_block <= 0 || blocks < 0 || transfer_mbps <= 0)
    throw std::invalid_argument("bad recovery inputs");
  if (k >= n) throw std::invalid_argument("parity must be below the shard count");
  return bytes_per_block / objects_per_block * blocks / double(n - k) * 8.0 /
         (transfer_mbps * 1e6);
}

NinesReport availability(double monthly_availability, uint32_t n, uint32_t k) {
  if (monthly_availability < 0 || monthly_availability > 1)
    throw std::invalid_argument("availability out of range");
  if (k >= n) throw std::invalid_argument("parity must be below the shard count");
  // unavailable when too few stores answer to decode: n-k+1 or more down
  return NinesReport::from_ln_complement(
      log_binomial_tail(n, n - k + 1, 1.0 - monthly_availability));
}

void validate(const DurabilityModel& m) {
  auto pos = [](double v, const char* what) {
    if (!(v > 0)) throw std::invalid_argument(std::string(what) + " must be positive");
  };
  pos(m.store_annual_rate, "store_annual_rate");
  pos(m.block_interval_s, "block_interval_s");
  pos(m.blocks, "blocks");
  pos(m.objects_per_block, "objects_per_block");
  pos(m.disk_annual_rate, "disk_annual_rate");
  pos(m.disk_recovery_s, "disk_recovery_s");
  pos(m.bytes_per_block, "bytes_per_block");
  pos(m.transfer_mbps, "transfer_mbps");
  if (m.monthly_availability < 0 || m.monthly_availability > 1)
    throw std::invalid_argument("monthly_availability must be in [0,1]");
  if (m.disk_parity >= m.disk_shards) throw std::invalid_argument("disk parity >= shards");
  if (m.store_parity >= m.store_shards) throw std::invalid_argument("store parity >= shards");
}

ChainDurabilityReport chain_durability_full(const DurabilityModel& m, LossRule rule) {
  validate(m);
  ChainDurabilityReport r;
  r.rule = rule;

  // what one uncoded store gives the whole chain
  r.f_c = period_failure_rate(m.store_annual_rate, m.block_interval_s);
  r.p_c = poisson_loss(r.f_c);
  r.fc_minus_pc = poisson_loss_deficit(r.f_c);
  r.exponent = m.objects_per_block * m.blocks * (m.blocks + 1) / 2.0;
  r.single_store = cumulative_chain_durability(r.p_c, m.objects_per_block, m.blocks);

  // what the provider's internal disk coding gives one stored object
  r.disk = object_durability(m.disk_annual_rate, m.disk_recovery_s, m.disk_shards, m.disk_parity,
                             LossRule::MoreThanParity);

  // cross-provider coding, with the recovery period set by refill bandwidth
  r.r_z = recovery_time(m.bytes_per_block, m.objects_per_block, m.blocks, m.store_shards,
                        m.store_parity, m.transfer_mbps);
  r.store = object_durability(r.disk.annual.complement(), r.r_z, m.store_shards, m.store_parity,
                              rule);

  // compound the per-object annual loss over every object of every block
  r.cumulative =
      cumulative_chain_durability(r.store.annual.complement(), m.objects_per_block, m.blocks);

  r.avail = availability(m.monthly_availability, m.store_shards, m.store_parity);
  return r;
}

}  // namespace zl
