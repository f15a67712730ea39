#pragma once

#include <array>
#include <vector>

namespace cycbp {

// Index convention used for all single and pairwise tables:
//   index 0 ↔ x = +1, index 1 ↔ x = -1;
//   pair entry [2*i + j] ↔ (x_n = spin(i), x_m = spin(j)).
inline constexpr int spin_of_index(int i) { return i == 0 ? +1 : -1; }

// Singleton and pairwise beliefs produced by an inference run. Pair tables
// follow the graph's edge order; pair_vars records which variables each
// table couples, so the set is self-contained.
struct BeliefSet {
  std::vector<std::array<double, 2>> singles;   // per variable
  std::vector<std::array<double, 4>> pairs;     // per edge
  std::vector<std::array<int, 2>> pair_vars;    // per edge: (n, m)
};

}  // namespace cycbp
