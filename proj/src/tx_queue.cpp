#include "zl/tx_queue.hpp"

#include "zl/errors.hpp"

namespace zl {

void TxQueue::enqueue(TxLink tx) {
  std::lock_guard lk(mu_);
  if (q_.size() >= bound_) throw QueueFull("transaction queue at capacity");
  q_.push_back(std::move(tx));
}

std::vector<TxLink> TxQueue::dequeue_batch(size_t max) {
  std::lock_guard lk(mu_);
  std::vector<TxLink> out;
  while (!q_.empty() && out.size() < max) {
    out.push_back(std::move(q_.front()));
    q_.pop_front();
  }
  return out;
}

void TxQueue::requeue_front(std::vector<TxLink> batch) {
  std::lock_guard lk(mu_);
  for (auto it = batch.rbegin(); it != batch.rend(); ++it) q_.push_front(std::move(*it));
}

size_t TxQueue::size() const {
  std::lock_guard lk(mu_);
  return q_.size();
}

std::vector<TxLink> TxQueue::drain() {
  std::lock_guard lk(mu_);
  std::vector<TxLink> out(q_.begin(), q_.end());
  q_.clear();
  return out;
}

}  // namespace zl
