#include "sana/node_queue.hpp"

namespace sana {

NodeQueue::Outcome NodeQueue::enqueue(Packet p) {
  Outcome out;
  if (size() < capacity_) {
    lane(p.cls).push_back(std::move(p));
    return out;
  }
  if (p.cls == TrafficClass::Immune && !data_.empty()) {
    out.evicted = std::move(data_.back());
    data_.pop_back();
    immune_.push_back(std::move(p));
    return out;
  }
  out.result = EnqueueResult::Dropped;
  return out;
}

}  // namespace sana
