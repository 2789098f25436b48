#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

namespace cre {

struct RnnConfig {
  double w_init = 1.0;             // initial off-diagonal weight
  double lambda_plus_init = 1.0;   // external positive spike rate
  double lambda_minus_init = 0.0;  // external negative spike rate
  double fp_tol = 1e-9;
  int fp_max_iter = 10000;
  double q_cap = 0.999999;         // potentials are probabilities
  double denom_floor = 1e-12;
};

class RnnSolveError : public std::runtime_error {
 public:
  RnnSolveError(const std::string& what, double residual)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

enum class SelectMode { exploit, explore };

// Random neural network over the active output ports of one NFE, one
// neuron per port. The neuron potentials are the fixed point of
//   q_i = lambda_plus_i / (r_i + lambda_minus_i)
// with the incoming rates accumulated from the other neurons' potentials
// through the positive/negative weight matrices, and r_i the row sum of
// both weight matrices.
class Rnn {
 public:
  Rnn(std::vector<std::uint32_t> ports, const RnnConfig& cfg);

  std::size_t size() const { return ports_.size(); }
  const std::vector<std::uint32_t>& ports() const { return ports_; }
  std::size_t index_of(std::uint32_t port_no) const;

  const std::vector<double>& potentials() const { return q_; }
  double potential(std::size_t i) const { return q_[i]; }
  double firing_rate(std::size_t i) const { return r_[i]; }

  double w_plus(std::size_t from, std::size_t to) const { return w_plus_[from][to]; }
  double w_minus(std::size_t from, std::size_t to) const { return w_minus_[from][to]; }
  double& w_plus(std::size_t from, std::size_t to) { return w_plus_[from][to]; }
  double& w_minus(std::size_t from, std::size_t to) { return w_minus_[from][to]; }
  double lambda_ext_plus(std::size_t i) const { return lambda_plus_[i]; }
  double lambda_ext_minus(std::size_t i) const { return lambda_minus_[i]; }
  void set_lambda_ext(std::size_t i, double plus, double minus);
  void scale_all(double factor);  // scales W, external rates and r together

  // Row sum of both weight matrices for neuron i (the normalization factor).
  double weight_row_sum(std::size_t i) const;

  // Iterates the potential equations to their fixed point. Throws
  // RnnSolveError with the last residual when fp_max_iter is exhausted.
  void solve();
  double residual() const;

  // Neuron index chosen in exploit mode: argmax of q, ties broken toward
  // the lowest port number.
  std::size_t exploit_index(const std::set<std::uint32_t>& forbidden = {}) const;

  // Output port for the given mode; explore draws uniformly from the
  // allowed ports using the supplied generator.
  std::uint32_t select_output(SelectMode mode,
                              const std::set<std::uint32_t>& forbidden,
                              std::mt19937_64& rng) const;

  // Raw weight increments of the two reinforcement branches.
  void apply_success(std::size_t chosen, double reward);
  void apply_failure(std::size_t chosen, double reward);

  // Rescales every weight row so its sum returns to the value it had
  // before the last apply_*; rows whose updated sum is zero are left alone.
  void renormalize();

  // Full reinforcement step: branch selection (reward >= threshold is the
  // success branch), weight update, renormalization, and re-solve.
  void reinforce(std::size_t chosen, double reward, double threshold);

  nlohmann::json dump() const;

 private:
  void recompute_rates();

  RnnConfig cfg_;
  std::vector<std::uint32_t> ports_;        // sorted ascending
  std::vector<std::vector<double>> w_plus_;
  std::vector<std::vector<double>> w_minus_;
  std::vector<double> lambda_plus_;
  std::vector<double> lambda_minus_;
  std::vector<double> q_;
  std::vector<double> r_;
};

}  // namespace cre
