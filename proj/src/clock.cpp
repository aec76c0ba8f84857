#include "zl/clock.hpp"

#include <chrono>

namespace zl {

uint64_t SystemClock::now_ms() {
  auto now = std::chrono::system_clock::now().time_since_epoch();
  int64_t ms = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  return uint64_t(ms + skew_ms_);
}

}  // namespace zl
