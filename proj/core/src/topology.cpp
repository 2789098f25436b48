#include "cre/topology.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>
#include <set>

#include <nlohmann/json.hpp>

namespace cre {

using nlohmann::json;

void Topology::add_node(NodeId dpid, std::optional<GeoCoord> coord) {
  if (nodes_.count(dpid)) {
    throw TopologyError("duplicate node dpid " + std::to_string(dpid));
  }
  if (coord && !is_valid(*coord)) {
    throw TopologyError("node " + std::to_string(dpid) +
                        ": coordinate out of range");
  }
  NodeInfo info;
  info.dpid = dpid;
  info.coord = coord;
  nodes_.emplace(dpid, std::move(info));
}

void Topology::add_port(NodeId dpid, std::uint32_t port_no, std::uint64_t mac,
                        double speed_bps) {
  auto it = nodes_.find(dpid);
  if (it == nodes_.end()) {
    throw TopologyError("port references unknown node " + std::to_string(dpid));
  }
  if (port_no == 0) {
    throw TopologyError("node " + std::to_string(dpid) +
                        ": port_no must be positive");
  }
  if (speed_bps <= 0.0) {
    throw TopologyError("node " + std::to_string(dpid) + " port " +
                        std::to_string(port_no) + ": speed_bps must be positive");
  }
  auto& ports = it->second.ports;
  for (const auto& p : ports) {
    if (p.port_no == port_no) {
      throw TopologyError("node " + std::to_string(dpid) + ": duplicate port " +
                          std::to_string(port_no));
    }
  }
  ports.push_back(PortRef{dpid, port_no, mac, speed_bps});
  std::sort(ports.begin(), ports.end(),
            [](const PortRef& a, const PortRef& b) { return a.port_no < b.port_no; });
}

void Topology::add_link(NodeId src, std::uint32_t src_port, NodeId dst,
                        std::uint32_t dst_port, double capacity_bps,
                        double prop_delay_s) {
  const PortRef* sp = find_port(src, src_port);
  const PortRef* dp = find_port(dst, dst_port);
  if (!sp || !dp) {
    throw TopologyError("link references undeclared port");
  }
  if (src == dst) {
    throw TopologyError("self link at node " + std::to_string(src));
  }
  if (capacity_bps <= 0.0) {
    throw TopologyError("link capacity must be positive");
  }
  if (prop_delay_s < 0.0) {
    throw TopologyError("link delay must be non-negative");
  }
  for (const auto& l : links_) {
    if (l.src.node == src && l.dst.node == dst) {
      throw TopologyError("duplicate link " + std::to_string(src) + "->" +
                          std::to_string(dst));
    }
    if (l.src.node == src && l.src.port_no == src_port) {
      throw TopologyError("source port already used by another link");
    }
  }
  links_.push_back(Link{*sp, *dp, capacity_bps, prop_delay_s, LinkStatus::up});
}

void Topology::add_host(const std::string& id, NodeId dpid,
                        std::uint32_t port_no, double link_delay_s) {
  const PortRef* p = find_port(dpid, port_no);
  if (!p) {
    throw TopologyError("host " + id + " references undeclared port");
  }
  if (hosts_.count(id)) {
    throw TopologyError("duplicate host id " + id);
  }
  if (link_delay_s < 0.0) {
    throw TopologyError("host link delay must be non-negative");
  }
  for (const auto& l : links_) {
    if (l.src.node == dpid && l.src.port_no == port_no) {
      throw TopologyError("host " + id + " attached to a port used by a link");
    }
  }
  for (const auto& [hid, h] : hosts_) {
    if (h.attach.node == dpid && h.attach.port_no == port_no) {
      throw TopologyError("host " + id + " attached to a port used by host " + hid);
    }
  }
  hosts_.emplace(id, HostAttachment{id, *p, link_delay_s});
}

const NodeInfo* Topology::find_node(NodeId dpid) const {
  auto it = nodes_.find(dpid);
  return it == nodes_.end() ? nullptr : &it->second;
}

const PortRef* Topology::find_port(NodeId dpid, std::uint32_t port_no) const {
  const NodeInfo* n = find_node(dpid);
  if (!n) return nullptr;
  for (const auto& p : n->ports) {
    if (p.port_no == port_no) return &p;
  }
  return nullptr;
}

const Link* Topology::find_link(NodeId src, NodeId dst) const {
  for (const auto& l : links_) {
    if (l.src.node == src && l.dst.node == dst) return &l;
  }
  return nullptr;
}

const HostAttachment* Topology::find_host(const std::string& id) const {
  auto it = hosts_.find(id);
  return it == hosts_.end() ? nullptr : &it->second;
}

std::vector<const HostAttachment*> Topology::hosts_at(NodeId dpid) const {
  std::vector<const HostAttachment*> out;
  for (const auto& [id, h] : hosts_) {
    if (h.attach.node == dpid) out.push_back(&h);
  }
  return out;
}

std::string format_mac(std::uint64_t mac) {
  char buf[18];
  std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x",
                unsigned((mac >> 40) & 0xff), unsigned((mac >> 32) & 0xff),
                unsigned((mac >> 24) & 0xff), unsigned((mac >> 16) & 0xff),
                unsigned((mac >> 8) & 0xff), unsigned(mac & 0xff));
  return buf;
}

std::uint64_t parse_mac(const std::string& text) {
  unsigned b[6];
  if (std::sscanf(text.c_str(), "%x:%x:%x:%x:%x:%x", &b[0], &b[1], &b[2], &b[3],
                  &b[4], &b[5]) != 6) {
    throw TopologyError("bad MAC address: " + text);
  }
  std::uint64_t mac = 0;
  for (int i = 0; i < 6; ++i) {
    if (b[i] > 0xff) throw TopologyError("bad MAC address: " + text);
    mac = (mac << 8) | b[i];
  }
  return mac;
}

Topology load_topology(const std::string& path, double v_prop_mps) {
  std::ifstream in(path);
  if (!in) {
    throw TopologyError("cannot open topology file: " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw TopologyError("topology parse error: " + std::string(e.what()));
  }

  Topology topo;
  try {
    const auto& nodes = doc.at("nodes");
    if (nodes.empty()) {
      throw TopologyError("topology has no nodes");
    }
    for (const auto& n : nodes) {
      std::optional<GeoCoord> coord;
      if (n.contains("coord")) {
        coord = GeoCoord{n["coord"].at("lat").get<double>(),
                         n["coord"].at("lon").get<double>()};
      }
      const NodeId dpid = n.at("dpid").get<NodeId>();
      topo.add_node(dpid, coord);
      for (const auto& p : n.at("ports")) {
        std::uint64_t mac = 0;
        if (p.contains("mac")) {
          mac = p["mac"].is_string() ? parse_mac(p["mac"].get<std::string>())
                                     : p["mac"].get<std::uint64_t>();
        }
        topo.add_port(dpid, p.at("port_no").get<std::uint32_t>(), mac,
                      p.at("speed_bps").get<double>());
      }
    }
    for (const auto& l : doc.value("links", json::array())) {
      const NodeId src = l.at("src").at("dpid").get<NodeId>();
      const NodeId dst = l.at("dst").at("dpid").get<NodeId>();
      double delay_s = 0.0;
      if (l.contains("prop_delay_ms")) {
        delay_s = l["prop_delay_ms"].get<double>() / 1e3;
      } else {
        const NodeInfo* sn = topo.find_node(src);
        const NodeInfo* dn = topo.find_node(dst);
        if (!sn || !dn || !sn->coord || !dn->coord) {
          throw TopologyError("link " + std::to_string(src) + "->" +
                              std::to_string(dst) +
                              " has neither prop_delay_ms nor endpoint coords");
        }
        delay_s = los_delay_s(*sn->coord, *dn->coord, v_prop_mps);
      }
      topo.add_link(src, l.at("src").at("port_no").get<std::uint32_t>(), dst,
                    l.at("dst").at("port_no").get<std::uint32_t>(),
                    l.at("capacity_bps").get<double>(), delay_s);
    }
    for (const auto& h : doc.value("hosts", json::array())) {
      topo.add_host(h.at("id").get<std::string>(),
                    h.at("attach").at("dpid").get<NodeId>(),
                    h.at("attach").at("port_no").get<std::uint32_t>(),
                    h.at("link_delay_ms").get<double>() / 1e3);
    }
  } catch (const json::exception& e) {
    throw TopologyError("topology schema error: " + std::string(e.what()));
  }
  return topo;
}

std::optional<std::vector<NodeId>> hop_count_shortest_path(
    const std::vector<Link>& links, NodeId s, NodeId d) {
  std::map<NodeId, std::set<NodeId>> adj;
  for (const auto& l : links) {
    if (l.status == LinkStatus::up) {
      adj[l.src.node].insert(l.dst.node);
    }
    adj[l.dst.node];  // make sure both endpoints exist as vertices
  }
  if (s == d) return std::vector<NodeId>{s};

  auto bfs = [&](NodeId from, bool reverse) {
    std::map<NodeId, int> dist;
    std::queue<NodeId> q;
    dist[from] = 0;
    q.push(from);
    while (!q.empty()) {
      NodeId u = q.front();
      q.pop();
      if (reverse) {
        for (const auto& [v, nbrs] : adj) {
          if (nbrs.count(u) && !dist.count(v)) {
            dist[v] = dist[u] + 1;
            q.push(v);
          }
        }
      } else {
        for (NodeId v : adj[u]) {
          if (!dist.count(v)) {
            dist[v] = dist[u] + 1;
            q.push(v);
          }
        }
      }
    }
    return dist;
  };

  auto rdist = bfs(d, /*reverse=*/true);  // hops from each node to d
  if (!rdist.count(s)) return std::nullopt;

  // Greedy walk: at each step take the lowest-dpid neighbor that stays on
  // a shortest path, which yields the lexicographically smallest sequence.
  std::vector<NodeId> path{s};
  NodeId cur = s;
  while (cur != d) {
    const int need = rdist[cur] - 1;
    bool advanced = false;
    for (NodeId v : adj[cur]) {
      auto it = rdist.find(v);
      if (it != rdist.end() && it->second == need) {
        path.push_back(v);
        cur = v;
        advanced = true;
        break;
      }
    }
    if (!advanced) return std::nullopt;  // unreachable given rdist
  }
  return path;
}

std::optional<std::vector<NodeId>> hop_count_shortest_path(const Topology& topo,
                                                           NodeId s, NodeId d) {
  if (!topo.find_node(s) || !topo.find_node(d)) {
    throw TopologyError("hop_count_shortest_path: unknown node");
  }
  return hop_count_shortest_path(topo.links(), s, d);
}

}  // namespace cre
