#pragma once

#include <deque>
#include <optional>

#include "sana/packet.hpp"

namespace sana {

enum class EnqueueResult { Accepted, Dropped };

/// Bounded two-lane FIFO. Immune traffic is served strictly first and may
/// evict the most recently queued Data packet when the queue is full.
class NodeQueue {
 public:
  explicit NodeQueue(std::size_t capacity = 32) : capacity_(capacity) {}

  struct Outcome {
    EnqueueResult result = EnqueueResult::Accepted;
    std::optional<Packet> evicted;
  };

  Outcome enqueue(Packet p);

  std::size_t size() const noexcept { return immune_.size() + data_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return size() == 0; }

  std::deque<Packet>& lane(TrafficClass c) { return c == TrafficClass::Immune ? immune_ : data_; }
  const std::deque<Packet>& lane(TrafficClass c) const { return c == TrafficClass::Immune ? immune_ : data_; }

 private:
  std::size_t capacity_;
  std::deque<Packet> immune_;
  std::deque<Packet> data_;
};

}  // namespace sana
