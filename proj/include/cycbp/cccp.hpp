#pragma once

#include <iosfwd>

#include "cycbp/beliefs.hpp"
#include "cycbp/graph.hpp"

namespace cycbp {

struct CccpConfig {
  int outer_iters = 25;
  int inner_iters = 25;
  double floor = 1e-12;
};

struct CccpResult {
  BeliefSet beliefs;
  std::vector<double> fbethe_trace;       // per outer iteration (index 0: start point)
  std::vector<double> consistency_trace;  // matching consistency distances
};

/// Double-loop concave-convex minimization of the Bethe free energy over the
/// local polytope. The convex part Σ_e Σ b_nm ln(b_nm/φ_nm) + Σ_n Σ b_n
/// ln(b_n/ψ_n) is minimized in the outer loop against the linearized concave
/// part −Σ_n d_n Σ b_n ln(b_n/ψ_n); the inner loop enforces the pairwise
/// consistency constraints by coordinate-wise iterative scaling of the edge
/// multipliers. Starts from uniform beliefs (or `init`) and zero multipliers.
CccpResult cccp_minimize(const PairwiseFactorGraph& g, const CccpConfig& cfg = {},
                         const BeliefSet* init = nullptr);

/// Trace rows: outer_iter, F_Bethe, consistency_distance.
void write_cccp_trace_csv(std::ostream& os, const CccpResult& result);

}  // namespace cycbp
