#pragma once

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cre/event_queue.hpp"
#include "cre/messages.hpp"
#include "cre/topology.hpp"
#include "cre/trace.hpp"

namespace cre {

struct NetConfig {
  double ctrl_delay_to_s = 0.002;    // controller -> NFE one-way delay
  double ctrl_delay_from_s = 0.002;  // NFE -> controller one-way delay
  // Per-NFE overrides as (to, from) pairs.
  std::map<NodeId, std::pair<double, double>> ctrl_delay_override;
  std::uint32_t probe_size_bytes = 0;
  std::uint64_t seed = 0;  // drives per-link loss draws only
};

// Event-driven emulation of the SDN data plane plus the OpenFlow-style
// control channel. One instance per simulation; single-threaded.
class Network {
 public:
  explicit Network(const Topology& topo, NetConfig cfg = {});

  EventQueue& clock() { return clock_; }
  SimTime now() const { return clock_.now(); }
  const Topology& topo() const { return topo_; }
  const NetConfig& config() const { return cfg_; }

  // Controller side. Attaching triggers the emulated handshake: every
  // connected NFE sends FeaturesReply and PortDescReply.
  void attach_controller(std::function<void(const ControlMsg&)> sink);
  void controller_send(ControlMsg msg);
  std::uint64_t control_messages() const { return control_messages_; }

  // Data plane.
  std::uint64_t inject_packet(const std::string& host, const FlowKey& flow,
                              std::uint32_t size_bytes);
  void set_host_sink(
      std::function<void(const std::string&, const Packet&)> sink);

  // Environment manipulation.
  void set_link_delay(NodeId src, NodeId dst, double delay_s);
  void scale_link_delay(NodeId src, NodeId dst, double factor);
  void set_link_status(NodeId src, NodeId dst, LinkStatus status);
  void set_link_loss_rate(NodeId src, NodeId dst, double rate);
  void set_control_connected(NodeId dpid, bool connected);

  // Emulated link discovery (LLDP stand-in): up inter-NFE links with fixed
  // attributes only; dynamic delay is not exposed here.
  std::vector<Link> discover_links() const;

  // Ground truth and direct switch access for tests and the baseline.
  double link_delay(NodeId src, NodeId dst) const;
  double link_tx_time(NodeId src, NodeId dst, std::uint32_t bytes) const;
  PortCounters port_counters(NodeId dpid, std::uint32_t port_no) const;
  const std::vector<FlowRule>& flow_table(NodeId dpid) const;
  std::vector<NodeId> switch_dpids() const;

  // Flow-table update. Throws when a modify/remove references no rule;
  // an add with an existing (match, vlan, priority) key replaces it.
  void apply_flow_mod(NodeId dpid, FlowModOp op, FlowRule rule);

  Trace& trace() { return trace_; }
  const Trace& trace() const { return trace_; }

 private:
  struct LinkState {
    Link link;
    double loss_rate = 0.0;
  };
  struct PortState {
    PortRef ref;
    PortCounters counters;
    int link_idx = -1;  // outgoing link wired to this port
    const HostAttachment* host = nullptr;
  };
  struct SwitchState {
    NodeId dpid = 0;
    std::map<std::uint32_t, PortState> ports;
    std::vector<FlowRule> table;
    bool connected = true;
    double to_delay = 0.0;
    double from_delay = 0.0;
    std::uint64_t next_rule_id = 1;
  };

  SwitchState& switch_at(NodeId dpid);
  const SwitchState& switch_at(NodeId dpid) const;
  LinkState& link_at(NodeId src, NodeId dst);
  const LinkState& link_at(NodeId src, NodeId dst) const;

  void deliver_to_switch(NodeId dpid, ControlMsg msg);
  void send_to_controller(NodeId from, ControlMsg msg);
  void process_packet(SwitchState& sw, Packet pkt, std::uint32_t in_port);
  void transmit(SwitchState& sw, std::uint32_t port_no, Packet pkt);
  FlowRule* match(SwitchState& sw, const Packet& pkt);
  void arm_idle_check(NodeId dpid, std::uint64_t rule_id, SimTime at);

  const Topology& topo_;
  NetConfig cfg_;
  EventQueue clock_;
  std::vector<LinkState> links_;
  std::map<NodeId, SwitchState> switches_;
  std::function<void(const ControlMsg&)> controller_;
  std::function<void(const std::string&, const Packet&)> host_sink_;
  Trace trace_;
  std::uint64_t next_pkt_id_ = 1;
  std::uint64_t control_messages_ = 0;
  std::mt19937_64 loss_rng_;
};

}  // namespace cre
