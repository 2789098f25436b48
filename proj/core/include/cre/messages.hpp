#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cre/topology.hpp"

namespace cre {

// Stand-in for the matched layer-2..4 field subset that identifies a flow.
struct FlowKey {
  std::string src_host;
  std::string dst_host;
  std::uint64_t flow_id = 0;

  auto operator<=>(const FlowKey&) const = default;
  std::string to_string() const {
    return src_host + ">" + dst_host + "#" + std::to_string(flow_id);
  }
};

struct Action {
  enum class Type { push_vlan, pop_vlan, output };
  Type type = Type::output;
  std::uint32_t arg = 0;  // vlan id or port number

  static Action push(std::uint16_t vlan) { return {Type::push_vlan, vlan}; }
  static Action pop() { return {Type::pop_vlan, 0}; }
  static Action out(std::uint32_t port) { return {Type::output, port}; }
  bool operator==(const Action&) const = default;
};

struct FlowRule {
  FlowKey match;
  std::optional<std::uint16_t> match_vlan;
  std::vector<Action> actions;
  int priority = 0;
  double idle_timeout_s = 0.0;  // 0 = never expires
  double hard_timeout_s = 0.0;  // always 0 for CRE rules
  double last_hit_s = 0.0;
  std::uint64_t id = 0;  // assigned by the switch
};

struct PortCounters {
  std::uint64_t tx_bytes = 0;
  std::uint64_t tx_pkts = 0;
  std::uint64_t tx_dropped = 0;
  std::uint64_t tx_errors = 0;
  std::uint64_t rx_bytes = 0;
  std::uint64_t rx_pkts = 0;
  std::uint64_t rx_dropped = 0;
  std::uint64_t rx_errors = 0;

  bool operator==(const PortCounters&) const = default;
};

inline constexpr std::uint16_t kEtherTypeIp = 0x0800;
inline constexpr std::uint16_t kEtherTypeProbe = 0x07C3;

struct Packet {
  std::uint64_t id = 0;
  std::uint16_t ethertype = kEtherTypeIp;
  std::optional<FlowKey> flow;  // absent for probe packets
  std::optional<std::uint16_t> vlan;
  std::uint32_t size_bytes = 0;
  std::uint64_t src_mac = 0;
  std::uint64_t dst_mac = 0;
  SimTime injected_at = 0.0;
};

enum class FlowModOp { add, modify, remove };

enum class MsgKind {
  PacketIn,
  PacketOut,
  FlowMod,
  PortStatsRequest,
  PortStatsReply,
  EchoRequest,
  EchoReply,
  BarrierRequest,
  BarrierReply,
  FeaturesReply,
  PortDescReply,
};

// Emulated OpenFlow-style control message. Carries parsed payloads
// directly; there is no wire encoding in this substrate.
struct ControlMsg {
  MsgKind kind = MsgKind::EchoRequest;
  std::uint64_t xid = 0;
  NodeId dpid = 0;
  bool ok = true;  // replies: request referenced a valid object

  std::optional<Packet> packet;            // PacketIn / PacketOut payload
  std::uint32_t in_port = 0;               // PacketIn
  bool packet_out_to_table = false;        // PacketOut: re-run the flow table
  std::uint32_t out_port = 0;              // PacketOut: emit on this port
  std::optional<FlowModOp> flow_mod_op;    // FlowMod
  std::optional<FlowRule> rule;            // FlowMod
  std::uint32_t port_no = 0;               // PortStats request/reply
  std::optional<PortCounters> counters;    // PortStatsReply
  std::vector<PortRef> ports;              // PortDescReply
};

const char* to_string(MsgKind kind);

}  // namespace cre
