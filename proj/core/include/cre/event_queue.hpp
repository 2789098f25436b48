#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace cre {

// Simulated time in seconds.
using SimTime = double;

// Single-threaded discrete event loop. Events with equal timestamps fire
// in insertion order; time never decreases.
class EventQueue {
 public:
  SimTime now() const { return now_; }

  // Schedules fn at absolute time `at`. Throws when `at` lies in the past.
  void schedule_at(SimTime at, std::function<void()> fn);
  void schedule_in(SimTime delay, std::function<void()> fn);

  // Runs the earliest pending event. Returns false when the queue is empty.
  bool step();

  // Drains the queue.
  void run();

  // Processes every event with timestamp <= t, then advances now to t.
  void run_until(SimTime t);

  std::size_t pending() const { return queue_.size(); }

 private:
  struct Entry {
    SimTime at;
    std::uint64_t seq;
    std::function<void()> fn;
    bool operator>(const Entry& o) const {
      return at > o.at || (at == o.at && seq > o.seq);
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
  SimTime now_ = 0.0;
  std::uint64_t next_seq_ = 0;
};

}  // namespace cre
