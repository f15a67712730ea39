#pragma once

#include <span>

#include "cycbp/beliefs.hpp"
#include "cycbp/graph.hpp"

namespace cycbp {

// Exact marginals from exhaustive enumeration (layout as in BeliefSet).
struct MarginalSet {
  std::vector<std::array<double, 2>> singles;
  std::vector<std::array<double, 4>> pairs;
};

// Enumeration guard: 2^N terms, test-fixture scale only.
inline constexpr int kOracleMaxVars = 25;

/// Σ_n E_n·a_n + Σ_(n,m) E_nm·a_n·a_m for one spin assignment.
double log_joint_unnormalized(const PairwiseFactorGraph& g, const Assignment& a);

/// log Σ_a exp(log_joint_unnormalized(a)), max-shifted for stability.
/// Throws std::invalid_argument when N > kOracleMaxVars.
double partition_function_log(const PairwiseFactorGraph& g);

/// Normalized singleton and per-edge pairwise marginals by exhaustive summation.
MarginalSet exact_marginals(const PairwiseFactorGraph& g);

/// KL divergence Σ b log(b/p) in nats. Terms with b = 0 contribute zero;
/// p = 0 where b > 0 yields +infinity.
double kl_divergence(std::span<const double> b, std::span<const double> p);

/// Mean over variables of KL(b_n ‖ p_n) against the exact marginals.
double mean_kl_to_exact(const PairwiseFactorGraph& g, const BeliefSet& beliefs);
double mean_kl_to_exact(const MarginalSet& exact, const BeliefSet& beliefs);

}  // namespace cycbp
