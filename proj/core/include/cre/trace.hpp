#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cre/event_queue.hpp"
#include "cre/topology.hpp"

namespace cre {

enum class TraceKind {
  pkt_inject,
  pkt_arrive,    // packet reached an NFE port
  pkt_forward,   // rule matched, actions applied
  pkt_miss,      // table miss
  pkt_deliver,   // handed to a host
  pkt_drop,
  packet_in,
  packet_out,
  flow_mod,
  flow_mod_error,
  rule_expired,
  barrier,
  echo,
  port_stats,
  link_update,
  ctrl_drop,
};

const char* to_string(TraceKind kind);

struct TraceEvent {
  SimTime t = 0.0;
  TraceKind kind = TraceKind::pkt_inject;
  NodeId node = 0;  // 0 = controller / host side
  std::uint64_t pkt_id = 0;
  std::string detail;
};

// Append-only event log of a simulation run.
class Trace {
 public:
  void log(SimTime t, TraceKind kind, NodeId node, std::uint64_t pkt_id,
           std::string detail = {});
  const std::vector<TraceEvent>& events() const { return events_; }
  std::size_t count(TraceKind kind) const;
  std::size_t count_since(TraceKind kind, SimTime t) const;
  void clear() { events_.clear(); }

  // One CSV line per event: time_ms,kind,node,detail.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<TraceEvent> events_;
};

}  // namespace cre
