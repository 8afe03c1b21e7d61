#pragma once

#include <vector>

#include "entisac/channel.hpp"
#include "entisac/regime.hpp"
#include "entisac/topology.hpp"

namespace entisac {

/// Transmission slots left in a frame after own-cell estimation.
int effective_slots_local(int slots_per_frame, int users_per_cell, int d_ce);

/// Transmission slots left for a cluster: the slowest subband's unestimated
/// user count gates everyone. Throws InfeasibleFrameError if negative.
int effective_slots_federated(int slots_per_frame, int users_per_cell, int d_ce,
                              int max_unestimated);

/// Downlink SINR of user k on one subband under a beam/power plan. Uses the
/// estimated channels throughout; the estimation-error variances enter the
/// effective noise term together with every power radiated by the serving APs.
double comm_sinr(int user, int subband, const RegimeContext& ctx,
                 const BeamPowerPlan& plan, const ChannelBook& book,
                 double sigma_user);

/// Effective rate (nats/s/Hz): sum over subbands of the time-frequency
/// occupancy fraction times ln(1 + SINR).
double effective_rate(const std::vector<double>& sinr_per_subband,
                      const std::vector<int>& b_per_subband,
                      const std::vector<int>& l_per_subband, int m, int b, int l);

}  // namespace entisac
