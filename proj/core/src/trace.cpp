#include "cre/trace.hpp"

#include <cstdio>
#include <ostream>

#include "cre/messages.hpp"

namespace cre {

const char* to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::pkt_inject: return "pkt_inject";
    case TraceKind::pkt_arrive: return "pkt_arrive";
    case TraceKind::pkt_forward: return "pkt_forward";
    case TraceKind::pkt_miss: return "pkt_miss";
    case TraceKind::pkt_deliver: return "pkt_deliver";
    case TraceKind::pkt_drop: return "pkt_drop";
    case TraceKind::packet_in: return "packet_in";
    case TraceKind::packet_out: return "packet_out";
    case TraceKind::flow_mod: return "flow_mod";
    case TraceKind::flow_mod_error: return "flow_mod_error";
    case TraceKind::rule_expired: return "rule_expired";
    case TraceKind::barrier: return "barrier";
    case TraceKind::echo: return "echo";
    case TraceKind::port_stats: return "port_stats";
    case TraceKind::link_update: return "link_update";
    case TraceKind::ctrl_drop: return "ctrl_drop";
  }
  return "?";
}

const char* to_string(MsgKind kind) {
  switch (kind) {
    case MsgKind::PacketIn: return "PacketIn";
    case MsgKind::PacketOut: return "PacketOut";
    case MsgKind::FlowMod: return "FlowMod";
    case MsgKind::PortStatsRequest: return "PortStatsRequest";
    case MsgKind::PortStatsReply: return "PortStatsReply";
    case MsgKind::EchoRequest: return "EchoRequest";
    case MsgKind::EchoReply: return "EchoReply";
    case MsgKind::BarrierRequest: return "BarrierRequest";
    case MsgKind::BarrierReply: return "BarrierReply";
    case MsgKind::FeaturesReply: return "FeaturesReply";
    case MsgKind::PortDescReply: return "PortDescReply";
  }
  return "?";
}

void Trace::log(SimTime t, TraceKind kind, NodeId node, std::uint64_t pkt_id,
                std::string detail) {
  events_.push_back(TraceEvent{t, kind, node, pkt_id, std::move(detail)});
}

std::size_t Trace::count(TraceKind kind) const {
  std::size_t n = 0;
  for (const auto& e : events_) {
    if (e.kind == kind) ++n;
  }
  return n;
}

std::size_t Trace::count_since(TraceKind kind, SimTime t) const {
  std::size_t n = 0;
  for (const auto& e : events_) {
    if (e.kind == kind && e.t >= t) ++n;
  }
  return n;
}

void Trace::write_csv(std::ostream& out) const {
  out << "time_ms,kind,node,detail\n";
  char buf[32];
  for (const auto& e : events_) {
    std::snprintf(buf, sizeof(buf), "%.6f", e.t * 1e3);
    out << buf << ',' << to_string(e.kind) << ',' << e.node << ',';
    if (e.pkt_id != 0) out << "pkt=" << e.pkt_id << ' ';
    out << e.detail << '\n';
  }
}

}  // namespace cre
