#include "cre/network.hpp"

#include <cmath>
#include <stdexcept>

namespace cre {

namespace {

std::string describe_actions(const std::vector<Action>& actions) {
  std::string out;
  for (const auto& a : actions) {
    if (!out.empty()) out += '|';
    switch (a.type) {
      case Action::Type::push_vlan: out += "push_vlan:" + std::to_string(a.arg); break;
      case Action::Type::pop_vlan: out += "pop_vlan"; break;
      case Action::Type::output: out += "output:" + std::to_string(a.arg); break;
    }
  }
  return out;
}

std::string describe_rule(const FlowRule& r) {
  std::string out = r.match.to_string();
  if (r.match_vlan) out += " vlan=" + std::to_string(*r.match_vlan);
  out += " -> " + describe_actions(r.actions);
  return out;
}

}  // namespace

Network::Network(const Topology& topo, NetConfig cfg)
    : topo_(topo), cfg_(cfg), loss_rng_(cfg.seed) {
  for (const auto& l : topo.links()) {
    links_.push_back(LinkState{l, 0.0});
  }
  for (const auto& [dpid, node] : topo.nodes()) {
    SwitchState sw;
    sw.dpid = dpid;
    sw.to_delay = cfg_.ctrl_delay_to_s;
    sw.from_delay = cfg_.ctrl_delay_from_s;
    if (auto it = cfg_.ctrl_delay_override.find(dpid);
        it != cfg_.ctrl_delay_override.end()) {
      sw.to_delay = it->second.first;
      sw.from_delay = it->second.second;
    }
    for (const auto& p : node.ports) {
      PortState ps;
      ps.ref = p;
      for (std::size_t i = 0; i < links_.size(); ++i) {
        if (links_[i].link.src.node == dpid &&
            links_[i].link.src.port_no == p.port_no) {
          ps.link_idx = static_cast<int>(i);
        }
      }
      sw.ports.emplace(p.port_no, std::move(ps));
    }
    switches_.emplace(dpid, std::move(sw));
  }
  for (const auto& [id, host] : topo.hosts()) {
    auto& sw = switch_at(host.attach.node);
    sw.ports.at(host.attach.port_no).host = &host;
  }
}

Network::SwitchState& Network::switch_at(NodeId dpid) {
  auto it = switches_.find(dpid);
  if (it == switches_.end()) {
    throw std::invalid_argument("unknown NFE dpid " + std::to_string(dpid));
  }
  return it->second;
}

const Network::SwitchState& Network::switch_at(NodeId dpid) const {
  return const_cast<Network*>(this)->switch_at(dpid);
}

Network::LinkState& Network::link_at(NodeId src, NodeId dst) {
  for (auto& ls : links_) {
    if (ls.link.src.node == src && ls.link.dst.node == dst) return ls;
  }
  throw std::invalid_argument("unknown link " + std::to_string(src) + "->" +
                              std::to_string(dst));
}

const Network::LinkState& Network::link_at(NodeId src, NodeId dst) const {
  return const_cast<Network*>(this)->link_at(src, dst);
}

void Network::attach_controller(std::function<void(const ControlMsg&)> sink) {
  controller_ = std::move(sink);
  // Emulated handshake: identity and port inventory of every NFE.
  for (auto& [dpid, sw] : switches_) {
    if (!sw.connected) continue;
    ControlMsg features;
    features.kind = MsgKind::FeaturesReply;
    features.dpid = dpid;
    send_to_controller(dpid, features);

    ControlMsg ports;
    ports.kind = MsgKind::PortDescReply;
    ports.dpid = dpid;
    for (const auto& [no, ps] : sw.ports) ports.ports.push_back(ps.ref);
    send_to_controller(dpid, ports);
  }
}

void Network::controller_send(ControlMsg msg) {
  ++control_messages_;
  auto& sw = switch_at(msg.dpid);
  if (!sw.connected) {
    trace_.log(now(), TraceKind::ctrl_drop, msg.dpid, 0, to_string(msg.kind));
    return;
  }
  const NodeId dpid = msg.dpid;
  clock_.schedule_in(sw.to_delay, [this, dpid, m = std::move(msg)]() mutable {
    deliver_to_switch(dpid, std::move(m));
  });
}

void Network::send_to_controller(NodeId from, ControlMsg msg) {
  auto& sw = switch_at(from);
  if (!sw.connected || !controller_) {
    trace_.log(now(), TraceKind::ctrl_drop, from, 0, to_string(msg.kind));
    return;
  }
  ++control_messages_;
  clock_.schedule_in(sw.from_delay, [this, m = std::move(msg)]() {
    controller_(m);
  });
}

void Network::deliver_to_switch(NodeId dpid, ControlMsg msg) {
  auto& sw = switch_at(dpid);
  switch (msg.kind) {
    case MsgKind::FlowMod: {
      try {
        apply_flow_mod(dpid, *msg.flow_mod_op, *msg.rule);
      } catch (const std::exception& e) {
        trace_.log(now(), TraceKind::flow_mod_error, dpid, 0, e.what());
      }
      break;
    }
    case MsgKind::BarrierRequest: {
      trace_.log(now(), TraceKind::barrier, dpid, 0,
                 "xid=" + std::to_string(msg.xid));
      ControlMsg reply;
      reply.kind = MsgKind::BarrierReply;
      reply.xid = msg.xid;
      reply.dpid = dpid;
      send_to_controller(dpid, reply);
      break;
    }
    case MsgKind::EchoRequest: {
      ControlMsg reply;
      reply.kind = MsgKind::EchoReply;
      reply.xid = msg.xid;
      reply.dpid = dpid;
      send_to_controller(dpid, reply);
      break;
    }
    case MsgKind::PortStatsRequest: {
      ControlMsg reply;
      reply.kind = MsgKind::PortStatsReply;
      reply.xid = msg.xid;
      reply.dpid = dpid;
      reply.port_no = msg.port_no;
      auto it = sw.ports.find(msg.port_no);
      if (it == sw.ports.end()) {
        reply.ok = false;
      } else {
        reply.counters = it->second.counters;
      }
      trace_.log(now(), TraceKind::port_stats, dpid, 0,
                 "port=" + std::to_string(msg.port_no));
      send_to_controller(dpid, reply);
      break;
    }
    case MsgKind::PacketOut: {
      trace_.log(now(), TraceKind::packet_out, dpid, msg.packet->id);
      if (msg.packet_out_to_table) {
        process_packet(sw, *msg.packet, 0);
      } else {
        transmit(sw, msg.out_port, *msg.packet);
      }
      break;
    }
    default:
      break;  // replies never travel controller -> NFE
  }
}

std::uint64_t Network::inject_packet(const std::string& host,
                                     const FlowKey& flow,
                                     std::uint32_t size_bytes) {
  const HostAttachment* h = topo_.find_host(host);
  if (!h) {
    throw std::invalid_argument("unknown host " + host);
  }
  Packet pkt;
  pkt.id = next_pkt_id_++;
  pkt.flow = flow;
  pkt.size_bytes = size_bytes;
  pkt.injected_at = now();
  trace_.log(now(), TraceKind::pkt_inject, h->attach.node, pkt.id,
             "host=" + host);

  const double tx = size_bytes * 8.0 / h->attach.speed_bps;
  const NodeId dpid = h->attach.node;
  const std::uint32_t port_no = h->attach.port_no;
  clock_.schedule_in(tx + h->link_delay_s, [this, dpid, port_no, pkt]() {
    auto& sw = switch_at(dpid);
    auto& ps = sw.ports.at(port_no);
    ps.counters.rx_bytes += pkt.size_bytes;
    ps.counters.rx_pkts += 1;
    trace_.log(now(), TraceKind::pkt_arrive, dpid, pkt.id,
               "in_port=" + std::to_string(port_no));
    process_packet(sw, pkt, port_no);
  });
  return pkt.id;
}

void Network::set_host_sink(
    std::function<void(const std::string&, const Packet&)> sink) {
  host_sink_ = std::move(sink);
}

FlowRule* Network::match(SwitchState& sw, const Packet& pkt) {
  if (!pkt.flow) return nullptr;  // probes never match flow rules
  FlowRule* best = nullptr;
  for (auto& r : sw.table) {
    if (r.match != *pkt.flow) continue;
    if (r.match_vlan && (!pkt.vlan || *pkt.vlan != *r.match_vlan)) continue;
    if (!best || r.priority > best->priority ||
        (r.priority == best->priority && r.id < best->id)) {
      best = &r;
    }
  }
  return best;
}

void Network::process_packet(SwitchState& sw, Packet pkt,
                             std::uint32_t in_port) {
  FlowRule* rule = match(sw, pkt);
  if (!rule) {
    trace_.log(now(), TraceKind::pkt_miss, sw.dpid, pkt.id);
    // Table-miss default action: punt to the controller.
    if (sw.connected && controller_) {
      trace_.log(now(), TraceKind::packet_in, sw.dpid, pkt.id);
      ControlMsg msg;
      msg.kind = MsgKind::PacketIn;
      msg.dpid = sw.dpid;
      msg.in_port = in_port;
      msg.packet = pkt;
      send_to_controller(sw.dpid, msg);
    } else {
      trace_.log(now(), TraceKind::pkt_drop, sw.dpid, pkt.id, "no controller");
    }
    return;
  }

  rule->last_hit_s = now();
  trace_.log(now(), TraceKind::pkt_forward, sw.dpid, pkt.id,
             describe_actions(rule->actions));
  for (const auto& a : rule->actions) {
    switch (a.type) {
      case Action::Type::push_vlan:
        if (pkt.vlan) {
          throw std::logic_error("push_vlan on an already tagged packet");
        }
        pkt.vlan = static_cast<std::uint16_t>(a.arg);
        break;
      case Action::Type::pop_vlan:
        if (!pkt.vlan) {
          throw std::logic_error("pop_vlan on an untagged packet");
        }
        pkt.vlan.reset();
        break;
      case Action::Type::output:
        transmit(sw, a.arg, pkt);
        return;  // at most one output action, always last
    }
  }
  trace_.log(now(), TraceKind::pkt_drop, sw.dpid, pkt.id, "no output action");
}

void Network::transmit(SwitchState& sw, std::uint32_t port_no, Packet pkt) {
  auto it = sw.ports.find(port_no);
  if (it == sw.ports.end()) {
    trace_.log(now(), TraceKind::pkt_drop, sw.dpid, pkt.id, "bad port");
    return;
  }
  PortState& ps = it->second;

  if (ps.host) {
    ps.counters.tx_bytes += pkt.size_bytes;
    ps.counters.tx_pkts += 1;
    const double tx = pkt.size_bytes * 8.0 / ps.ref.speed_bps;
    const std::string host_id = ps.host->id;
    clock_.schedule_in(tx + ps.host->link_delay_s, [this, host_id, pkt]() {
      trace_.log(now(), TraceKind::pkt_deliver, 0, pkt.id, "host=" + host_id);
      if (host_sink_) host_sink_(host_id, pkt);
    });
    return;
  }
  if (ps.link_idx < 0) {
    trace_.log(now(), TraceKind::pkt_drop, sw.dpid, pkt.id, "unwired port");
    return;
  }

  LinkState& ls = links_[static_cast<std::size_t>(ps.link_idx)];
  if (ls.link.status == LinkStatus::down) {
    ps.counters.tx_dropped += 1;
    trace_.log(now(), TraceKind::pkt_drop, sw.dpid, pkt.id, "link down");
    return;
  }
  ps.counters.tx_bytes += pkt.size_bytes;
  ps.counters.tx_pkts += 1;
  if (ls.loss_rate > 0.0 &&
      std::uniform_real_distribution<double>(0.0, 1.0)(loss_rng_) < ls.loss_rate) {
    trace_.log(now(), TraceKind::pkt_drop, sw.dpid, pkt.id, "loss");
    return;
  }

  const double tx = pkt.size_bytes * 8.0 / ls.link.capacity_bps;
  const NodeId dst = ls.link.dst.node;
  const std::uint32_t dst_port = ls.link.dst.port_no;
  clock_.schedule_in(tx + ls.link.prop_delay_s, [this, dst, dst_port, pkt]() {
    auto& dsw = switch_at(dst);
    auto& dps = dsw.ports.at(dst_port);
    dps.counters.rx_bytes += pkt.size_bytes;
    dps.counters.rx_pkts += 1;
    trace_.log(now(), TraceKind::pkt_arrive, dst, pkt.id,
               "in_port=" + std::to_string(dst_port));
    process_packet(dsw, pkt, dst_port);
  });
}

void Network::set_link_delay(NodeId src, NodeId dst, double delay_s) {
  link_at(src, dst).link.prop_delay_s = delay_s;
  trace_.log(now(), TraceKind::link_update, src,
             0, "dst=" + std::to_string(dst) + " delay_ms=" +
             std::to_string(delay_s * 1e3));
}

void Network::scale_link_delay(NodeId src, NodeId dst, double factor) {
  set_link_delay(src, dst, link_at(src, dst).link.prop_delay_s * factor);
}

void Network::set_link_status(NodeId src, NodeId dst, LinkStatus status) {
  link_at(src, dst).link.status = status;
  trace_.log(now(), TraceKind::link_update, src, 0,
             "dst=" + std::to_string(dst) +
             (status == LinkStatus::up ? " up" : " down"));
}

void Network::set_link_loss_rate(NodeId src, NodeId dst, double rate) {
  link_at(src, dst).loss_rate = rate;
}

void Network::set_control_connected(NodeId dpid, bool connected) {
  switch_at(dpid).connected = connected;
}

std::vector<Link> Network::discover_links() const {
  std::vector<Link> out;
  for (const auto& ls : links_) {
    if (ls.link.status != LinkStatus::up) continue;
    Link l = ls.link;
    l.prop_delay_s = 0.0;  // discovery learns wiring, not delay
    out.push_back(l);
  }
  return out;
}

double Network::link_delay(NodeId src, NodeId dst) const {
  return link_at(src, dst).link.prop_delay_s;
}

double Network::link_tx_time(NodeId src, NodeId dst,
                             std::uint32_t bytes) const {
  return bytes * 8.0 / link_at(src, dst).link.capacity_bps;
}

PortCounters Network::port_counters(NodeId dpid, std::uint32_t port_no) const {
  const auto& sw = switch_at(dpid);
  auto it = sw.ports.find(port_no);
  if (it == sw.ports.end()) {
    throw std::invalid_argument("unknown port " + std::to_string(port_no) +
                                " on NFE " + std::to_string(dpid));
  }
  return it->second.counters;
}

const std::vector<FlowRule>& Network::flow_table(NodeId dpid) const {
  return switch_at(dpid).table;
}

std::vector<NodeId> Network::switch_dpids() const {
  std::vector<NodeId> out;
  for (const auto& [dpid, sw] : switches_) out.push_back(dpid);
  return out;
}

void Network::apply_flow_mod(NodeId dpid, FlowModOp op, FlowRule rule) {
  auto& sw = switch_at(dpid);
  auto same_key = [&rule](const FlowRule& r) {
    return r.match == rule.match && r.match_vlan == rule.match_vlan &&
           r.priority == rule.priority;
  };
  auto it = std::find_if(sw.table.begin(), sw.table.end(), same_key);

  switch (op) {
    case FlowModOp::add: {
      rule.last_hit_s = now();
      if (it != sw.table.end()) {
        rule.id = it->id;  // add with an existing key replaces the entry
        *it = rule;
      } else {
        rule.id = sw.next_rule_id++;
        sw.table.push_back(rule);
      }
      trace_.log(now(), TraceKind::flow_mod, dpid, 0, "add " + describe_rule(rule));
      if (rule.idle_timeout_s > 0.0) {
        arm_idle_check(dpid, rule.id, now() + rule.idle_timeout_s);
      }
      break;
    }
    case FlowModOp::modify: {
      if (it == sw.table.end()) {
        throw std::runtime_error("modify: no rule matches " + describe_rule(rule));
      }
      it->actions = rule.actions;
      trace_.log(now(), TraceKind::flow_mod, dpid, 0,
                 "modify " + describe_rule(*it));
      break;
    }
    case FlowModOp::remove: {
      if (it == sw.table.end()) {
        throw std::runtime_error("remove: no rule matches " + describe_rule(rule));
      }
      trace_.log(now(), TraceKind::flow_mod, dpid, 0,
                 "remove " + describe_rule(*it));
      sw.table.erase(it);
      break;
    }
  }
}

void Network::arm_idle_check(NodeId dpid, std::uint64_t rule_id, SimTime at) {
  clock_.schedule_at(at, [this, dpid, rule_id]() {
    auto& sw = switch_at(dpid);
    auto it = std::find_if(sw.table.begin(), sw.table.end(),
                           [rule_id](const FlowRule& r) { return r.id == rule_id; });
    if (it == sw.table.end()) return;  // removed or replaced meanwhile
    const double idle_for = now() - it->last_hit_s;
    if (idle_for + 1e-12 >= it->idle_timeout_s) {
      trace_.log(now(), TraceKind::rule_expired, dpid, 0, describe_rule(*it));
      sw.table.erase(it);
    } else {
      arm_idle_check(dpid, rule_id, it->last_hit_s + it->idle_timeout_s);
    }
  });
}

}  // namespace cre
