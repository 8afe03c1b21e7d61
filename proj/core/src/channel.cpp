#include "entisac/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "entisac/errors.hpp"
#include "entisac/kinematics.hpp"
#include "entisac/topology.hpp"

namespace entisac {

const Eigen::VectorXcd& ChannelBook::estimate(int a, int k, int i) const {
  const int idx = index(a, k, i);
  if (!has_estimate[idx]) {
    throw std::logic_error("channel estimate requested for an unestimated (a,k,i) triple");
  }
  return h_hat[idx];
}

double ChannelBook::error_variance(int a, int k, int i) const {
  const int idx = index(a, k, i);
  if (!has_estimate[idx]) {
    throw std::logic_error("error variance requested for an unestimated (a,k,i) triple");
  }
  return delta[idx];
}

void ChannelBook::clear_estimates() {
  std::fill(has_estimate.begin(), has_estimate.end(), 0);
  std::fill(delta.begin(), delta.end(), 0.0);
}

double path_loss_db(double distance_m, double f_c_hz) {
  return 32.4 + 45.0 * std::log10(distance_m) + 20.0 * std::log10(f_c_hz / 1e9);
}

double large_scale_gain(const Eigen::Vector2d& user, const Eigen::Vector2d& ap,
                        double f_c_hz) {
  const double d = (user - ap).norm();
  if (d <= 0.0) throw GeometryError("large_scale_gain: coincident user and AP");
  return std::pow(10.0, -path_loss_db(d, f_c_hz) / 10.0);
}

Eigen::VectorXcd init_channel(double lambda, double kappa_bar, double theta,
                              int n_tx, RandomStream& rng) {
  const std::complex<double> los = rng.cnormal(1.0);
  Eigen::VectorXcd nlos = rng.cnormal_vector(n_tx, 1.0);
  const double scale = std::sqrt(lambda / (kappa_bar + 1.0));
  return scale * (std::sqrt(kappa_bar * n_tx) * los * steering(theta, n_tx) + nlos);
}

Eigen::VectorXcd evolve_channel(const Eigen::VectorXcd& h_prev, double rho,
                                double lambda, RandomStream& rng) {
  Eigen::VectorXcd eps = rng.cnormal_vector(static_cast<int>(h_prev.size()), lambda);
  return rho * h_prev + std::sqrt(1.0 - rho * rho) * eps;
}

int pilot_count(int user, int subband, const ServicePartition& partition,
                const Grouping& grouping, const ScenarioConfig& cfg,
                const std::vector<int>& b_fed) {
  const int user_cell = user / cfg.k;
  if (subband == user_cell) {
    return cfg.b * cfg.d_ce;
  }
  // Cross-cell estimation exists only for federated users on the shared
  // subbands of their own cluster.
  if (!partition.user_federated(user_cell, user)) {
    throw std::logic_error("pilot_count: (k,i) pair requires no estimation (user not federated)");
  }
  const int cluster = grouping.cluster_of(user_cell);
  const auto& cells = grouping.clusters[cluster];
  if (std::find(cells.begin(), cells.end(), subband) == cells.end()) {
    throw std::logic_error("pilot_count: (k,i) pair requires no estimation (subband outside cluster)");
  }
  return b_fed[subband] * cfg.d_ce;
}

double estimation_error_variance(double lambda, double rho, double p_ce,
                                 double pilots, double sigma) {
  const double lb = (1.0 - rho * rho) * lambda;
  const double pd = p_ce * pilots * lb;
  if (pd <= 0.0) return lb;
  return lb * (1.0 - pd / (pd + sigma));
}

Eigen::VectorXcd estimate_channel(const Eigen::VectorXcd& h_true, double delta,
                                  RandomStream& rng) {
  if (delta <= 0.0) return h_true;
  return h_true + rng.cnormal_vector(static_cast<int>(h_true.size()), delta);
}

}  // namespace entisac
