#include "cre/control_client.hpp"

namespace cre {

void ControlClient::echo_rtt(NodeId dpid, double timeout_s,
                             std::function<void(std::optional<double>)> done) {
  ControlMsg barrier_req;
  barrier_req.kind = MsgKind::BarrierRequest;
  barrier_req.xid = next_xid();
  barrier_req.dpid = dpid;
  net_.controller_send(barrier_req);

  ControlMsg echo;
  echo.kind = MsgKind::EchoRequest;
  echo.xid = next_xid();
  echo.dpid = dpid;
  const std::uint64_t xid = echo.xid;
  const SimTime sent_at = net_.now();
  pending_[xid] = [done, sent_at, this](const ControlMsg&) {
    done(net_.now() - sent_at);
  };
  net_.controller_send(echo);

  net_.clock().schedule_in(timeout_s, [this, xid, done]() {
    auto it = pending_.find(xid);
    if (it == pending_.end()) return;  // reply already arrived
    pending_.erase(it);
    done(std::nullopt);
  });
}

void ControlClient::barrier(NodeId dpid, std::function<void()> done) {
  ControlMsg msg;
  msg.kind = MsgKind::BarrierRequest;
  msg.xid = next_xid();
  msg.dpid = dpid;
  pending_[msg.xid] = [done](const ControlMsg&) { done(); };
  net_.controller_send(msg);
}

void ControlClient::port_stats(
    NodeId dpid, std::uint32_t port_no,
    std::function<void(std::optional<PortCounters>)> done) {
  ControlMsg msg;
  msg.kind = MsgKind::PortStatsRequest;
  msg.xid = next_xid();
  msg.dpid = dpid;
  msg.port_no = port_no;
  pending_[msg.xid] = [done](const ControlMsg& reply) {
    if (reply.ok && reply.counters) {
      done(*reply.counters);
    } else {
      done(std::nullopt);
    }
  };
  net_.controller_send(msg);
}

void ControlClient::send_flow_mod(NodeId dpid, FlowModOp op, FlowRule rule) {
  ControlMsg msg;
  msg.kind = MsgKind::FlowMod;
  msg.xid = next_xid();
  msg.dpid = dpid;
  msg.flow_mod_op = op;
  msg.rule = std::move(rule);
  net_.controller_send(msg);
}

void ControlClient::packet_out(NodeId dpid, Packet pkt, std::uint32_t out_port) {
  ControlMsg msg;
  msg.kind = MsgKind::PacketOut;
  msg.xid = next_xid();
  msg.dpid = dpid;
  msg.packet = std::move(pkt);
  msg.out_port = out_port;
  net_.controller_send(msg);
}

void ControlClient::packet_out_to_table(NodeId dpid, Packet pkt) {
  ControlMsg msg;
  msg.kind = MsgKind::PacketOut;
  msg.xid = next_xid();
  msg.dpid = dpid;
  msg.packet = std::move(pkt);
  msg.packet_out_to_table = true;
  net_.controller_send(msg);
}

bool ControlClient::on_message(const ControlMsg& msg) {
  auto it = pending_.find(msg.xid);
  if (it == pending_.end()) return false;
  auto handler = std::move(it->second);
  pending_.erase(it);
  handler(msg);
  return true;
}

}  // namespace cre
