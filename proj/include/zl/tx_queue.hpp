#pragma once

#include <deque>
#include <mutex>
#include <vector>

#include "zl/types.hpp"

namespace zl {

// bounded FIFO of pending transactions; aborted batches go back to the front
class TxQueue {
 public:
  explicit TxQueue(size_t bound = 1 << 16) : bound_(bound) {}

  void enqueue(TxLink tx);
  std::vector<TxLink> dequeue_batch(size_t max);
  void requeue_front(std::vector<TxLink> batch);
  size_t size() const;
  std::vector<TxLink> drain();

 private:
  mutable std::mutex mu_;
  std::deque<TxLink> q_;
  size_t bound_;
};

}  // namespace zl
