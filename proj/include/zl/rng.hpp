#pragma once

#include <cstdint>
#include <mutex>
#include <random>

namespace zl {

// Single source of randomness for a run. Deterministic given the seed; a
// mutex serializes draws so callers control ordering, not the scheduler.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  static uint64_t entropy_seed();

  uint64_t u64() {
    std::lock_guard lk(mu_);
    return eng_();
  }

  // uniform in [0, n)
  uint64_t below(uint64_t n) {
    std::lock_guard lk(mu_);
    return std::uniform_int_distribution<uint64_t>(0, n - 1)(eng_);
  }

  void fill(uint8_t* p, size_t n);

 private:
  std::mutex mu_;
  std::mt19937_64 eng_;
};

}  // namespace zl
