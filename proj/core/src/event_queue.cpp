#include "cre/event_queue.hpp"

#include <stdexcept>
#include <utility>

namespace cre {

void EventQueue::schedule_at(SimTime at, std::function<void()> fn) {
  if (at < now_) {
    throw std::invalid_argument("EventQueue: scheduling in the past");
  }
  queue_.push(Entry{at, next_seq_++, std::move(fn)});
}

void EventQueue::schedule_in(SimTime delay, std::function<void()> fn) {
  schedule_at(now_ + delay, std::move(fn));
}

bool EventQueue::step() {
  if (queue_.empty()) return false;
  // priority_queue exposes only const top(); moving the handler out is safe
  // because pop() follows immediately.
  Entry e = std::move(const_cast<Entry&>(queue_.top()));
  queue_.pop();
  now_ = e.at;
  e.fn();
  return true;
}

void EventQueue::run() {
  while (step()) {
  }
}

void EventQueue::run_until(SimTime t) {
  while (!queue_.empty() && queue_.top().at <= t) {
    step();
  }
  if (t > now_) now_ = t;
}

}  // namespace cre
