#include "cycbp/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace cycbp {

double log_joint_unnormalized(const PairwiseFactorGraph& g, const Assignment& a) {
  if (static_cast<int>(a.size()) != g.num_vars())
    throw std::invalid_argument("assignment length mismatch");
  double s = 0.0;
  for (int n = 0; n < g.num_vars(); ++n) s += g.unary()[n] * a[n];
  for (const Edge& e : g.edges()) s += e.coupling * a[e.n] * a[e.m];
  return s;
}

namespace {

void check_capacity(const PairwiseFactorGraph& g) {
  if (g.num_vars() > kOracleMaxVars)
    throw std::invalid_argument("oracle enumeration capped at N=25 variables");
}

double log_joint_mask(const PairwiseFactorGraph& g, uint32_t mask) {
  double s = 0.0;
  for (int n = 0; n < g.num_vars(); ++n) {
    const int x = (mask >> n) & 1u ? -1 : +1;
    s += g.unary()[n] * x;
  }
  for (const Edge& e : g.edges()) {
    const int xn = (mask >> e.n) & 1u ? -1 : +1;
    const int xm = (mask >> e.m) & 1u ? -1 : +1;
    s += e.coupling * xn * xm;
  }
  return s;
}

}  // namespace

double partition_function_log(const PairwiseFactorGraph& g) {
  check_capacity(g);
  const uint64_t count = uint64_t{1} << g.num_vars();
  double max_lw = -std::numeric_limits<double>::infinity();
  for (uint64_t mask = 0; mask < count; ++mask)
    max_lw = std::max(max_lw, log_joint_mask(g, static_cast<uint32_t>(mask)));
  double sum = 0.0;
  for (uint64_t mask = 0; mask < count; ++mask)
    sum += std::exp(log_joint_mask(g, static_cast<uint32_t>(mask)) - max_lw);
  return max_lw + std::log(sum);
}

MarginalSet exact_marginals(const PairwiseFactorGraph& g) {
  check_capacity(g);
  const int n_vars = g.num_vars();
  const uint64_t count = uint64_t{1} << n_vars;

  double max_lw = -std::numeric_limits<double>::infinity();
  for (uint64_t mask = 0; mask < count; ++mask)
    max_lw = std::max(max_lw, log_joint_mask(g, static_cast<uint32_t>(mask)));

  MarginalSet out;
  out.singles.assign(n_vars, {0.0, 0.0});
  out.pairs.assign(g.edges().size(), {0.0, 0.0, 0.0, 0.0});
  double z = 0.0;
  for (uint64_t mask = 0; mask < count; ++mask) {
    const double w = std::exp(log_joint_mask(g, static_cast<uint32_t>(mask)) - max_lw);
    z += w;
    for (int n = 0; n < n_vars; ++n) out.singles[n][(mask >> n) & 1u] += w;
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
      const int i = (mask >> g.edges()[e].n) & 1u;
      const int j = (mask >> g.edges()[e].m) & 1u;
      out.pairs[e][2 * i + j] += w;
    }
  }
  for (auto& s : out.singles) {
    s[0] /= z;
    s[1] /= z;
  }
  for (auto& p : out.pairs)
    for (double& v : p) v /= z;
  return out;
}

double kl_divergence(std::span<const double> b, std::span<const double> p) {
  if (b.size() != p.size()) throw std::invalid_argument("support size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] <= 0.0) continue;
    if (p[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += b[i] * std::log(b[i] / p[i]);
  }
  return d;
}

double mean_kl_to_exact(const MarginalSet& exact, const BeliefSet& beliefs) {
  if (beliefs.singles.size() != exact.singles.size())
    throw std::invalid_argument("belief/marginal size mismatch");
  double total = 0.0;
  for (std::size_t n = 0; n < exact.singles.size(); ++n)
    total += kl_divergence(beliefs.singles[n], exact.singles[n]);
  return total / static_cast<double>(exact.singles.size());
}

double mean_kl_to_exact(const PairwiseFactorGraph& g, const BeliefSet& beliefs) {
  return mean_kl_to_exact(exact_marginals(g), beliefs);
}

}  // namespace cycbp
