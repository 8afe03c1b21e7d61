#pragma once

#include <vector>

#include <Eigen/Dense>

#include "entisac/rng.hpp"
#include "entisac/scenario.hpp"

namespace entisac {

struct ServicePartition;
struct Grouping;

/// True channels, current-frame estimates, and estimation-error variances
/// indexed by (AP, user, subband). Owned by one environment instance;
/// single-writer per frame.
struct ChannelBook {
  int num_aps = 0;
  int num_users = 0;
  int num_subbands = 0;
  int n_tx = 0;
  int frame = 0;

  std::vector<Eigen::VectorXcd> h;      ///< true channel per (a,k,i)
  std::vector<Eigen::VectorXcd> h_hat;  ///< estimate per (a,k,i), where present
  std::vector<char> has_estimate;      ///< estimate validity per (a,k,i)
  std::vector<double> delta;           ///< estimation-error variance per (a,k,i)
  Eigen::MatrixXd lambda;              ///< large-scale gain per (a,k), linear

  int index(int a, int k, int i) const {
    return (a * num_users + k) * num_subbands + i;
  }
  const Eigen::VectorXcd& truth(int a, int k, int i) const { return h[index(a, k, i)]; }
  const Eigen::VectorXcd& estimate(int a, int k, int i) const;
  bool estimated(int a, int k, int i) const { return has_estimate[index(a, k, i)] != 0; }
  double error_variance(int a, int k, int i) const;
  void clear_estimates();
};

/// Path loss 32.4 + 45 log10(d/1m) + 20 log10(f_c/1GHz) dB.
double path_loss_db(double distance_m, double f_c_hz);

/// Linear large-scale attenuation between a user and an AP.
double large_scale_gain(const Eigen::Vector2d& user, const Eigen::Vector2d& ap,
                        double f_c_hz);

/// Rician initial draw: sqrt(lambda/(kappa+1)) (sqrt(kappa N) g v(theta) + g_nlos).
Eigen::VectorXcd init_channel(double lambda, double kappa_bar, double theta,
                              int n_tx, RandomStream& rng);

/// First-order Gauss-Markov step h' = rho h + sqrt(1-rho^2) e, e ~ CN(0, lambda I).
Eigen::VectorXcd evolve_channel(const Eigen::VectorXcd& h_prev, double rho,
                                double lambda, RandomStream& rng);

/// Pilot symbols available for estimating user k's channel on a subband:
/// B*d_ce on the user's own subband, b_fed[i]*d_ce for a cross-cell federated
/// pair. Throws std::logic_error for pairs no protocol step estimates.
int pilot_count(int user, int subband, const ServicePartition& partition,
                const Grouping& grouping, const ScenarioConfig& cfg,
                const std::vector<int>& b_fed);

/// MMSE error variance: delta = lb [1 - p D lb / (p D lb + sigma)] with
/// lb = (1 - rho^2) lambda. rho = 0 reproduces the no-prior (first frame) case.
double estimation_error_variance(double lambda, double rho, double p_ce,
                                 double pilots, double sigma);

/// Estimate = truth + independent CN(0, delta I) error.
Eigen::VectorXcd estimate_channel(const Eigen::VectorXcd& h_true, double delta,
                                  RandomStream& rng);

}  // namespace entisac
