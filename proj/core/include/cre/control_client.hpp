#pragma once

#include <functional>
#include <map>
#include <optional>

#include "cre/messages.hpp"
#include "cre/network.hpp"

namespace cre {

// Controller-side helper that assigns transaction ids, pairs replies with
// requests and exposes the control-channel primitives the engine builds on.
class ControlClient {
 public:
  explicit ControlClient(Network& net) : net_(net) {}

  // Barrier + EchoRequest round trip; the reply is matched by xid. The
  // callback receives the measured RTT, or nullopt on timeout.
  void echo_rtt(NodeId dpid, double timeout_s,
                std::function<void(std::optional<double>)> done);

  // BarrierReply completion for all FlowMods sent to dpid so far.
  void barrier(NodeId dpid, std::function<void()> done);

  // Per-port counter snapshot; nullopt when the port does not exist.
  void port_stats(NodeId dpid, std::uint32_t port_no,
                  std::function<void(std::optional<PortCounters>)> done);

  void send_flow_mod(NodeId dpid, FlowModOp op, FlowRule rule);

  void packet_out(NodeId dpid, Packet pkt, std::uint32_t out_port);
  void packet_out_to_table(NodeId dpid, Packet pkt);

  // Returns true when the message was a reply this client was waiting for.
  bool on_message(const ControlMsg& msg);

  std::uint64_t next_xid() { return next_xid_++; }

 private:
  Network& net_;
  std::uint64_t next_xid_ = 1;
  std::map<std::uint64_t, std::function<void(const ControlMsg&)>> pending_;
};

}  // namespace cre
