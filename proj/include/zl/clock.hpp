#pragma once

#include <cstdint>

namespace zl {

struct Clock {
  virtual ~Clock() = default;
  virtual uint64_t now_ms() = 0;
};

// wall clock with an optional fixed skew, for simulating imperfect clocks
class SystemClock : public Clock {
 public:
  explicit SystemClock(int64_t skew_ms = 0) : skew_ms_(skew_ms) {}
  uint64_t now_ms() override;

 private:
  int64_t skew_ms_;
};

// test clock advanced by hand
class ManualClock : public Clock {
 public:
  explicit ManualClock(uint64_t start_ms = 0) : t_(start_ms) {}
  uint64_t now_ms() override { return t_; }
  void advance(uint64_t ms) { t_ += ms; }
  void set(uint64_t ms) { t_ = ms; }

 private:
  uint64_t t_;
};

}  // namespace zl
