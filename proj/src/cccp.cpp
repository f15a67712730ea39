#include "cycbp/cccp.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "cycbp/bethe.hpp"
#include "cycbp/tape.hpp"

namespace cycbp {

namespace {

// All belief arithmetic is done on log-probabilities; entries are normalized
// with a max-shifted log-sum-exp.

void normalize2(std::array<double, 2>& lp) {
  const double z = logaddexp(lp[0], lp[1]);
  lp[0] -= z;
  lp[1] -= z;
}

struct Workspace {
  const PairwiseFactorGraph* g = nullptr;
  std::vector<std::array<double, 2>> log_bt;            // outer singles iterate
  std::vector<std::array<std::array<double, 2>, 2>> lambda;  // [edge][dir][spin idx]

  std::array<double, 2> node_belief(int v) const {
    const double ev = g->unary()[v];
    const int dv = g->degree(v);
    std::array<double, 2> lp;
    for (int i = 0; i < 2; ++i) {
      const int x = spin_of_index(i);
      double s = (1.0 - dv) * ev * x + dv * log_bt[v][i];
      for (int e : g->incident_edges(v)) {
        const int dir = g->edges()[e].n == v ? 0 : 1;
        s -= lambda[e][dir][i];
      }
      lp[i] = s;
    }
    normalize2(lp);
    return lp;
  }

  std::array<double, 4> pair_belief(int e) const {
    const Edge& ed = g->edges()[e];
    const double en = g->unary()[ed.n], em = g->unary()[ed.m], j = ed.coupling;
    std::array<double, 4> lp;
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        const int xn = spin_of_index(i), xm = spin_of_index(k);
        lp[2 * i + k] = en * xn + j * xn * xm + em * xm + lambda[e][0][i] + lambda[e][1][k];
      }
    const double z = logaddexp(logaddexp(lp[0], lp[1]), logaddexp(lp[2], lp[3]));
    for (double& v : lp) v -= z;
    return lp;
  }
};

}  // namespace

CccpResult cccp_minimize(const PairwiseFactorGraph& g, const CccpConfig& cfg,
                         const BeliefSet* init) {
  if (cfg.outer_iters < 1 || cfg.inner_iters < 1)
    throw std::invalid_argument("CCCP iteration counts must be >= 1");

  const int nv = g.num_vars();
  const int ne = g.num_edges();
  Workspace w;
  w.g = &g;
  w.log_bt.assign(nv, {-std::log(2.0), -std::log(2.0)});
  if (init) {
    if (static_cast<int>(init->singles.size()) != nv)
      throw std::invalid_argument("initial beliefs do not match graph");
    for (int v = 0; v < nv; ++v) {
      for (int i = 0; i < 2; ++i)
        w.log_bt[v][i] = std::log(std::max(init->singles[v][i], cfg.floor));
      normalize2(w.log_bt[v]);
    }
  }
  w.lambda.assign(ne, {{{0.0, 0.0}, {0.0, 0.0}}});

  auto current_beliefs = [&](const std::vector<std::array<double, 2>>& singles_log) {
    BeliefSet b;
    b.singles.resize(nv);
    for (int v = 0; v < nv; ++v)
      b.singles[v] = {std::exp(singles_log[v][0]), std::exp(singles_log[v][1])};
    b.pairs.resize(ne);
    b.pair_vars.resize(ne);
    for (int e = 0; e < ne; ++e) {
      const auto lp = w.pair_belief(e);
      b.pairs[e] = {std::exp(lp[0]), std::exp(lp[1]), std::exp(lp[2]), std::exp(lp[3])};
      b.pair_vars[e] = {g.edges()[e].n, g.edges()[e].m};
    }
    return b;
  };

  CccpResult res;
  {
    const BeliefSet start = current_beliefs(w.log_bt);
    res.fbethe_trace.push_back(bethe_free_energy(g, start));
    res.consistency_trace.push_back(consistency_distance(start));
  }

  for (int outer = 0; outer < cfg.outer_iters; ++outer) {
    for (int inner = 0; inner < cfg.inner_iters; ++inner) {
      for (int e = 0; e < ne; ++e) {
        for (int dir = 0; dir < 2; ++dir) {
          const int v = dir == 0 ? g.edges()[e].n : g.edges()[e].m;
          const auto bn = w.node_belief(v);
          const auto bp = w.pair_belief(e);
          std::array<double, 2> marg;
          if (dir == 0) {
            marg = {logaddexp(bp[0], bp[1]), logaddexp(bp[2], bp[3])};
          } else {
            marg = {logaddexp(bp[0], bp[2]), logaddexp(bp[1], bp[3])};
          }
          auto& lam = w.lambda[e][dir];
          lam[0] += 0.5 * (bn[0] - marg[0]);
          lam[1] += 0.5 * (bn[1] - marg[1]);
          // recenter; constant shifts cancel in the normalizations
          const double mean = 0.5 * (lam[0] + lam[1]);
          lam[0] -= mean;
          lam[1] -= mean;
        }
      }
    }
    // Outer step: the inner solution becomes the next linearization point.
    std::vector<std::array<double, 2>> next(nv);
    for (int v = 0; v < nv; ++v) next[v] = w.node_belief(v);
    w.log_bt.swap(next);

    const BeliefSet b = current_beliefs(w.log_bt);
    res.fbethe_trace.push_back(bethe_free_energy(g, b));
    res.consistency_trace.push_back(consistency_distance(b));
  }

  res.beliefs = current_beliefs(w.log_bt);
  return res;
}

void write_cccp_trace_csv(std::ostream& os, const CccpResult& result) {
  os << "outer_iter,fbethe,consistency\n";
  char buf[96];
  for (std::size_t i = 0; i < result.fbethe_trace.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i, result.fbethe_trace[i],
                  result.consistency_trace[i]);
    os << buf;
  }
}

}  // namespace cycbp
