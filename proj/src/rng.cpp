#include "zl/rng.hpp"

namespace zl {

uint64_t Rng::entropy_seed() {
  std::random_device rd;
  return uint64_t(rd()) << 32 | rd();
}

void Rng::fill(uint8_t* p, size_t n) {
  std::lock_guard lk(mu_);
  size_t i = 0;
  while (i < n) {
    uint64_t w = eng_();
    for (int b = 0; b < 8 && i < n; b++, i++) p[i] = uint8_t(w >> (8 * b));
  }
}

}  // namespace zl
