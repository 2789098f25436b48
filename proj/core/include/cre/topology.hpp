#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cre/geo.hpp"

namespace cre {

// Datapath identifier of a network forwarding element (NFE).
using NodeId = std::uint64_t;

struct PortRef {
  NodeId node = 0;
  std::uint32_t port_no = 0;
  std::uint64_t mac = 0;  // 48-bit, host byte order
  double speed_bps = 0.0;
};

enum class LinkStatus { up, down };

// Unidirectional link between two NFE ports.
struct Link {
  PortRef src;
  PortRef dst;
  double capacity_bps = 0.0;
  double prop_delay_s = 0.0;
  LinkStatus status = LinkStatus::up;
};

struct HostAttachment {
  std::string id;
  PortRef attach;
  double link_delay_s = 0.0;
};

struct NodeInfo {
  NodeId dpid = 0;
  std::vector<PortRef> ports;  // sorted by port_no
  std::optional<GeoCoord> coord;
};

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Static network description. Immutable once loaded; safe to share
// read-only across threads.
class Topology {
 public:
  void add_node(NodeId dpid, std::optional<GeoCoord> coord = std::nullopt);
  void add_port(NodeId dpid, std::uint32_t port_no, std::uint64_t mac,
                double speed_bps);
  void add_link(NodeId src, std::uint32_t src_port, NodeId dst,
                std::uint32_t dst_port, double capacity_bps,
                double prop_delay_s);
  void add_host(const std::string& id, NodeId dpid, std::uint32_t port_no,
                double link_delay_s);

  const std::map<NodeId, NodeInfo>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const std::map<std::string, HostAttachment>& hosts() const { return hosts_; }

  const NodeInfo* find_node(NodeId dpid) const;
  const PortRef* find_port(NodeId dpid, std::uint32_t port_no) const;
  const Link* find_link(NodeId src, NodeId dst) const;
  const HostAttachment* find_host(const std::string& id) const;

  // Hosts attached to a given NFE, sorted by host id.
  std::vector<const HostAttachment*> hosts_at(NodeId dpid) const;

 private:
  std::map<NodeId, NodeInfo> nodes_;
  std::vector<Link> links_;
  std::map<std::string, HostAttachment> hosts_;
};

// Parses and validates a topology file (JSON). When a link carries no
// prop_delay_ms and both endpoints have coordinates, the delay is derived
// from the line-of-sight distance at v_prop_mps.
Topology load_topology(const std::string& path,
                       double v_prop_mps = kDefaultPropSpeedMps);

std::string format_mac(std::uint64_t mac);
std::uint64_t parse_mac(const std::string& text);

// Minimum-hop path between two NFEs over the given up links. Ties are
// broken toward the lexicographically smallest node sequence, i.e. the
// lowest next-hop dpid at each step. Returns std::nullopt when s and d
// are disconnected.
std::optional<std::vector<NodeId>> hop_count_shortest_path(
    const std::vector<Link>& links, NodeId s, NodeId d);

std::optional<std::vector<NodeId>> hop_count_shortest_path(const Topology& topo,
                                                           NodeId s, NodeId d);

}  // namespace cre
