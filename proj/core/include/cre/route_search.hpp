#pragma once

#include <deque>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "cre/rnn.hpp"
#include "cre/topology.hpp"

namespace cre {

struct CramConfig {
  double explore_prob = 0.05;  // probability of an exploratory hop
  int z_best = 5;              // size of the recent-paths record
  double min_hold_s = 5.0;     // minimum time a path stays installed
  double alpha = 0.5;          // objective exponential-average parameter
  double beta = 0.8;           // threshold exponential-average parameter
  RnnConfig rnn;
};

// Exponentially averaged objective and reward threshold of one flow.
class RewardState {
 public:
  RewardState(double alpha = 0.5, double beta = 0.8);

  // Folds a raw objective sample into the running average and returns the
  // reward 1/O. The objective is minimized and must be positive.
  double observe(double raw_objective);

  // Folds a reward into the threshold and returns the new threshold.
  double update_threshold(double reward);

  std::optional<double> smoothed() const { return smoothed_; }
  std::optional<double> threshold() const { return threshold_; }
  double last_raw() const { return last_raw_; }
  double last_reward() const { return last_reward_; }

 private:
  double alpha_;
  double beta_;
  std::optional<double> smoothed_;
  std::optional<double> threshold_;
  double last_raw_ = 0.0;
  double last_reward_ = 0.0;
};

struct PathRecord {
  std::vector<NodeId> path;
  double objective = 0.0;  // last seen value
  SimTime recorded_at = 0.0;
};

// The Z most recently seen distinct paths of one flow, each carrying its
// last-seen objective. Re-recording a known path refreshes it in place.
class PathRing {
 public:
  explicit PathRing(std::size_t capacity);

  void record(const std::vector<NodeId>& path, double objective, SimTime now);
  const std::deque<PathRecord>& records() const { return ring_; }

  // Lowest-objective record; ties go to the most recently recorded.
  std::optional<PathRecord> best() const;

 private:
  std::size_t capacity_;
  std::deque<PathRecord> ring_;  // front = most recent
};

// Replacement decision: the best recorded path is returned only when it
// differs from the incumbent, improves on it strictly, and the incumbent
// has been installed for at least min_hold.
std::optional<PathRecord> best_of_z(const PathRing& ring,
                                    const std::vector<NodeId>& incumbent,
                                    double incumbent_objective,
                                    SimTime installed_at, double min_hold_s,
                                    SimTime now);

struct WalkStep {
  NodeId node = 0;
  std::size_t neuron = 0;       // chosen neuron index in that node's RNN
  std::uint32_t egress = 0;     // chosen output port
  SelectMode mode = SelectMode::exploit;
};

struct WalkResult {
  std::vector<NodeId> path;      // simple path src..dst
  std::vector<WalkStep> steps;   // one per hop decision
};

// Per-node output ports and their next-hop NFEs, i.e. the up links the
// walk may use. Ports are kept sorted by port number.
using PortAdjacency = std::map<NodeId, std::vector<std::pair<std::uint32_t, NodeId>>>;

// Per-flow collection of RNNs, one per visited NFE, plus the stochastic
// walk that proposes candidate paths.
class RnnRouter {
 public:
  explicit RnnRouter(const CramConfig& cfg);

  // Walks from src to dst creating RNNs on demand. At each hop the mode is
  // drawn (explore with probability explore_prob), ports leading to
  // already-visited NFEs are forbidden and dead ends backtrack. Returns
  // nullopt when no simple path exists.
  std::optional<WalkResult> build_path(const PortAdjacency& adj, NodeId src,
                                       NodeId dst, std::mt19937_64& rng);

  // Applies one reward to every RNN along a walk.
  void reinforce(const std::vector<WalkStep>& steps, double reward,
                 double threshold);

  Rnn& get_or_create(NodeId node, const std::vector<std::uint32_t>& ports);
  Rnn* find(NodeId node);
  const std::map<NodeId, Rnn>& rnns() const { return rnns_; }

 private:
  CramConfig cfg_;
  std::map<NodeId, Rnn> rnns_;
};

}  // namespace cre
