#pragma once

#include <vector>

namespace entisac {

enum class Regime { Local, Federated };

/// Unified view of one operating domain in Phase II: a cell (localized) or a
/// cluster (federated) with its serving APs, served services, and subbands.
struct RegimeContext {
  Regime regime = Regime::Local;
  int d = 0;                    ///< cell index (L) or cluster index (F)
  std::vector<int> aps;         ///< serving APs (global indices)
  std::vector<int> comm_users;  ///< served communication users
  std::vector<int> targets;     ///< served radar targets
  std::vector<int> subbands;    ///< operating subbands
};

}  // namespace entisac
