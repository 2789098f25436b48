#include "cre/rnn.hpp"

#include <algorithm>
#include <cmath>

namespace cre {

Rnn::Rnn(std::vector<std::uint32_t> ports, const RnnConfig& cfg)
    : cfg_(cfg), ports_(std::move(ports)) {
  if (ports_.empty()) {
    throw std::invalid_argument("Rnn: at least one active port required");
  }
  std::sort(ports_.begin(), ports_.end());
  if (std::adjacent_find(ports_.begin(), ports_.end()) != ports_.end()) {
    throw std::invalid_argument("Rnn: duplicate port");
  }
  const std::size_t n = ports_.size();
  w_plus_.assign(n, std::vector<double>(n, cfg.w_init));
  w_minus_.assign(n, std::vector<double>(n, cfg.w_init));
  for (std::size_t i = 0; i < n; ++i) {
    w_plus_[i][i] = 0.0;
    w_minus_[i][i] = 0.0;
  }
  lambda_plus_.assign(n, cfg.lambda_plus_init);
  lambda_minus_.assign(n, cfg.lambda_minus_init);
  q_.assign(n, 0.0);
  recompute_rates();
  solve();
}

std::size_t Rnn::index_of(std::uint32_t port_no) const {
  auto it = std::lower_bound(ports_.begin(), ports_.end(), port_no);
  if (it == ports_.end() || *it != port_no) {
    throw std::invalid_argument("Rnn: port " + std::to_string(port_no) +
                                " has no neuron");
  }
  return static_cast<std::size_t>(it - ports_.begin());
}

void Rnn::set_lambda_ext(std::size_t i, double plus, double minus) {
  lambda_plus_[i] = plus;
  lambda_minus_[i] = minus;
}

void Rnn::scale_all(double factor) {
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      w_plus_[i][j] *= factor;
      w_minus_[i][j] *= factor;
    }
    lambda_plus_[i] *= factor;
    lambda_minus_[i] *= factor;
  }
  recompute_rates();
}

double Rnn::weight_row_sum(std::size_t i) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < size(); ++j) {
    if (j == i) continue;
    sum += w_plus_[i][j] + w_minus_[i][j];
  }
  return sum;
}

void Rnn::recompute_rates() {
  r_.resize(size());
  for (std::size_t i = 0; i < size(); ++i) {
    r_[i] = weight_row_sum(i);
  }
}

void Rnn::solve() {
  const std::size_t n = size();
  std::vector<double> next(n, 0.0);
  std::fill(q_.begin(), q_.end(), 0.0);
  for (int iter = 0; iter < cfg_.fp_max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double lp = lambda_plus_[i];
      double lm = lambda_minus_[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        lp += q_[j] * w_plus_[j][i];
        lm += q_[j] * w_minus_[j][i];
      }
      const double denom = std::max(r_[i] + lm, cfg_.denom_floor);
      next[i] = std::clamp(lp / denom, 0.0, cfg_.q_cap);
    }
    q_ = next;
    if (residual() < cfg_.fp_tol) {
      return;
    }
  }
  throw RnnSolveError("Rnn: potentials did not converge", residual());
}

double Rnn::residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    double lp = lambda_plus_[i];
    double lm = lambda_minus_[i];
    for (std::size_t j = 0; j < size(); ++j) {
      if (j == i) continue;
      lp += q_[j] * w_plus_[j][i];
      lm += q_[j] * w_minus_[j][i];
    }
    const double denom = std::max(r_[i] + lm, cfg_.denom_floor);
    const double value = std::clamp(lp / denom, 0.0, cfg_.q_cap);
    worst = std::max(worst, std::abs(q_[i] - value));
  }
  return worst;
}

std::size_t Rnn::exploit_index(const std::set<std::uint32_t>& forbidden) const {
  std::size_t best = size();
  for (std::size_t i = 0; i < size(); ++i) {
    if (forbidden.count(ports_[i])) continue;
    if (best == size() || q_[i] > q_[best]) {
      best = i;  // ties keep the earlier (lower) port
    }
  }
  if (best == size()) {
    throw std::invalid_argument("Rnn: every port is forbidden");
  }
  return best;
}

std::uint32_t Rnn::select_output(SelectMode mode,
                                 const std::set<std::uint32_t>& forbidden,
                                 std::mt19937_64& rng) const {
  if (mode == SelectMode::exploit) {
    return ports_[exploit_index(forbidden)];
  }
  std::vector<std::uint32_t> allowed;
  for (std::uint32_t p : ports_) {
    if (!forbidden.count(p)) allowed.push_back(p);
  }
  if (allowed.empty()) {
    throw std::invalid_argument("Rnn: every port is forbidden");
  }
  std::uniform_int_distribution<std::size_t> pick(0, allowed.size() - 1);
  return allowed[pick(rng)];
}

void Rnn::apply_success(std::size_t chosen, double reward) {
  const std::size_t n = size();
  for (std::size_t j = 0; j < n; ++j) {
    if (j == chosen) continue;
    w_plus_[j][chosen] += reward;
  }
  if (n > 2) {
    const double split = reward / static_cast<double>(n - 2);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k == chosen || k == j) continue;
        w_minus_[j][k] += split;
      }
    }
  }
}

void Rnn::apply_failure(std::size_t chosen, double reward) {
  const std::size_t n = size();
  for (std::size_t j = 0; j < n; ++j) {
    if (j == chosen) continue;
    w_minus_[j][chosen] += reward;
  }
  if (n > 2) {
    const double split = reward / static_cast<double>(n - 2);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k == chosen || k == j) continue;
        w_plus_[j][k] += split;
      }
    }
  }
}

void Rnn::renormalize() {
  for (std::size_t i = 0; i < size(); ++i) {
    const double updated = weight_row_sum(i);
    if (updated == 0.0) continue;
    const double factor = r_[i] / updated;
    for (std::size_t j = 0; j < size(); ++j) {
      if (j == i) continue;
      w_plus_[i][j] *= factor;
      w_minus_[i][j] *= factor;
    }
  }
  recompute_rates();
}

void Rnn::reinforce(std::size_t chosen, double reward, double threshold) {
  if (chosen >= size()) {
    throw std::invalid_argument("Rnn: chosen neuron out of range");
  }
  if (reward >= threshold) {
    apply_success(chosen, reward);
  } else {
    apply_failure(chosen, reward);
  }
  renormalize();
  solve();
}

nlohmann::json Rnn::dump() const {
  nlohmann::ordered_json j;
  j["ports"] = ports_;
  j["w_plus"] = w_plus_;
  j["w_minus"] = w_minus_;
  j["lambda_ext_plus"] = lambda_plus_;
  j["lambda_ext_minus"] = lambda_minus_;
  j["q"] = q_;
  j["r"] = r_;
  return j;
}

}  // namespace cre
