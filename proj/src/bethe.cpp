#include "cycbp/bethe.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

#include "cycbp/oracle.hpp"

namespace cycbp {

namespace {

double floored(double p) { return p < kBeliefFloor ? kBeliefFloor : p; }

}  // namespace

double bethe_free_energy(const PairwiseFactorGraph& g, const BeliefSet& beliefs) {
  if (static_cast<int>(beliefs.singles.size()) != g.num_vars() ||
      beliefs.pairs.size() != g.edges().size())
    throw std::invalid_argument("belief set does not match graph");

  double f = 0.0;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const Edge& ed = g.edges()[e];
    const double en = g.unary()[ed.n], em = g.unary()[ed.m], j = ed.coupling;
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) {
        const int xn = spin_of_index(i), xm = spin_of_index(k);
        const double log_phi = en * xn + j * xn * xm + em * xm;
        const double b = floored(beliefs.pairs[e][2 * i + k]);
        f += b * (std::log(b) - log_phi);
      }
    }
  }
  for (int n = 0; n < g.num_vars(); ++n) {
    double s = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double b = floored(beliefs.singles[n][i]);
      s += b * (std::log(b) - g.unary()[n] * spin_of_index(i));
    }
    f -= (g.degree(n) - 1) * s;
  }
  return f;
}

double consistency_distance(const BeliefSet& beliefs) {
  if (beliefs.pair_vars.size() != beliefs.pairs.size())
    throw std::invalid_argument("belief set lacks pair-variable association");
  double d = 0.0;
  for (std::size_t e = 0; e < beliefs.pairs.size(); ++e) {
    const auto& p = beliefs.pairs[e];
    const std::array<double, 2> row = {p[0] + p[1], p[2] + p[3]};  // marginal onto n
    const std::array<double, 2> col = {p[0] + p[2], p[1] + p[3]};  // marginal onto m
    d += kl_divergence(row, beliefs.singles[beliefs.pair_vars[e][0]]);
    d += kl_divergence(col, beliefs.singles[beliefs.pair_vars[e][1]]);
  }
  return d;
}

}  // namespace cycbp
