#pragma once

#include "cycbp/beliefs.hpp"
#include "cycbp/graph.hpp"

namespace cycbp {

// Probabilities are floored at this value before any logarithm.
inline constexpr double kBeliefFloor = 1e-12;

/// Bethe free energy of a belief set on graph g (nats):
///   Σ_edges Σ b_nm ln(b_nm/φ_nm) − Σ_n (d_n − 1) Σ b_n ln(b_n/ψ_n)
/// with φ_nm = ψ_n ψ_nm ψ_m evaluated from the graph parameters and the
/// variable degree d_n as counting number.
double bethe_free_energy(const PairwiseFactorGraph& g, const BeliefSet& beliefs);

/// Bethe consistency distance (nats): per edge, KL(row marginal ‖ b_n) +
/// KL(column marginal ‖ b_m), summed over edges. Zero exactly on the local
/// polytope.
double consistency_distance(const BeliefSet& beliefs);

}  // namespace cycbp
