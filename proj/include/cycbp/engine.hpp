#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "cycbp/beliefs.hpp"
#include "cycbp/graph.hpp"
#include "cycbp/mlp.hpp"
#include "cycbp/tape.hpp"

namespace cycbp {

// Every message and belief LLR is kept inside ±kLlrClamp; the clamp has zero
// gradient outside the interval.
inline constexpr double kLlrClamp = 30.0;

enum class UpdateRule { kSpa, kNeuralExtrinsic, kNeural };

struct RunConfig {
  int iterations = 10;
  double momentum = 0.0;  // fn→vn damping weight μ; 0 disables
  UpdateRule rule = UpdateRule::kSpa;
  double convergence_tol = 1e-8;
  bool record_history = false;
};

// One LLR per directed edge and direction; dir 0 flows toward edge.n,
// dir 1 toward edge.m (and the reverse for vn_to_fn).
struct MessageState {
  std::vector<std::array<double, 2>> fn_to_vn;
  std::vector<std::array<double, 2>> vn_to_fn;
  int iteration = 0;
};

struct RunResult {
  MessageState messages;
  BeliefSet beliefs;
  bool converged = false;
  std::vector<BeliefSet> history;               // per-iteration, when recorded
  std::vector<MessageState> message_history;    // per-iteration, when recorded
};

/// clamp(Σ incident LLRs); the extrinsic variable-node rule.
double vn_update(std::span<const double> incident_llrs);

/// Closed-form degree-2 sum-product factor update in LLR form:
/// 2·atanh(tanh(E)·tanh(L/2)), clamped.
double spa_fn_update(double coupling, double llr_in);

/// Constant message from a degree-1 factor exp(E_n·x): LLR 2·E_n.
double unary_llr(const PairwiseFactorGraph& g, int n);

/// (p(+1), p(-1)) from an LLR.
std::array<double, 2> llr_to_distribution(double llr);

// ---------------------------------------------------------------------------
// Unified engine view of plain and clustered graphs.

struct EngineGraph {
  int num_vars = 0;
  std::vector<ClusteredEdge> edges;  // plain mode: shares are zero
  // Per variable: incident (edge index, direction-toward-this-variable).
  std::vector<std::vector<std::array<int, 2>>> incident;
  std::vector<double> vn_unary;      // LLR term added in variable-node updates
  std::vector<double> belief_unary;  // LLR term added in the belief readout
  bool clustered = false;
};

EngineGraph make_engine_graph(const PairwiseFactorGraph& g);
EngineGraph make_engine_graph(const ClusteredGraph& g);

// ---------------------------------------------------------------------------
// Update rules. A rule maps (edge, direction, extrinsic LLR, intrinsic LLR)
// to the outgoing factor-node message, already clamped.

struct SpaRule {
  const EngineGraph* g = nullptr;
  double operator()(int e, int, double l_ext, double) const {
    return spa_fn_update(g->edges[e].coupling, l_ext);
  }
};

template <class S>
struct NeuralRule {
  const MlpT<S>* mlp = nullptr;
  bool extrinsic = true;
  std::vector<std::array<S, 3>> edge_consts;  // (share_n, coupling, share_m)
  std::vector<S> side;
  mutable std::vector<S> buf;

  S operator()(int e, int dir, const S& l_ext, const S& l_intr) const {
    const auto& ec = edge_consts[e];
    buf.clear();
    buf.push_back(l_ext);
    if (!extrinsic) {
      buf.push_back(l_intr);
      buf.push_back(dir == 1 ? ec[0] : ec[2]);  // source-endpoint share
    }
    buf.push_back(ec[1]);
    if (!extrinsic) buf.push_back(dir == 1 ? ec[2] : ec[0]);
    for (const S& s : side) buf.push_back(s);
    return clamp_sym(mlp_forward(*mlp, std::span<const S>(buf.data(), buf.size())), kLlrClamp);
  }
};

template <class S, class Lift>
NeuralRule<S> make_neural_rule(const EngineGraph& g, const MlpT<S>& mlp, bool extrinsic,
                               std::span<const double> side_features, Lift&& lift) {
  const int expected = (extrinsic ? 2 : 5) + static_cast<int>(side_features.size());
  if (mlp.n_in != expected)
    throw std::invalid_argument("update network arity mismatch: model n_in=" +
                                std::to_string(mlp.n_in) + ", rule needs " +
                                std::to_string(expected));
  NeuralRule<S> rule;
  rule.mlp = &mlp;
  rule.extrinsic = extrinsic;
  rule.edge_consts.reserve(g.edges.size());
  for (const ClusteredEdge& e : g.edges)
    rule.edge_consts.push_back({lift(e.share_n), lift(e.coupling), lift(e.share_m)});
  rule.side.reserve(side_features.size());
  for (double s : side_features) rule.side.push_back(lift(s));
  rule.buf.reserve(mlp.n_in);
  return rule;
}

/// Direct evaluation of the extrinsic learned rule FN_e: inputs [L_ext, E_nm] ++ side.
double neural_fn_update_extrinsic(const MLPParams& params, double l_ext, double coupling,
                                  std::span<const double> side = {});

/// Direct evaluation of the non-extrinsic learned rule FN:
/// inputs [L_ext, L_intr, E_src, E_nm, E_dst] ++ side.
double neural_fn_update(const MLPParams& params, double l_ext, double l_intr, double e_src,
                        double coupling, double e_dst, std::span<const double> side = {});

// ---------------------------------------------------------------------------
// Templated unrolled schedule, shared by the evaluation and autodiff paths.
// One iteration = parallel factor-node updates (with optional momentum on the
// fn→vn messages) followed by parallel variable-node updates.

template <class S>
struct Readout {
  std::vector<S> single_llr;               // clamped belief LLRs
  std::vector<std::array<S, 4>> pair_logb;  // normalized log pair beliefs
};

template <class S>
struct Unrolled {
  std::vector<std::array<S, 2>> fn_to_vn, vn_to_fn;
  std::vector<Readout<S>> tail;  // readouts of the last record_tail iterations
  bool converged = false;
  const Readout<S>& final_readout() const { return tail.back(); }
};

template <class S, class Lift>
Readout<S> compute_readout(const EngineGraph& g, const std::vector<std::array<S, 2>>& fn_to_vn,
                           const std::vector<std::array<S, 2>>& vn_to_fn, Lift&& lift) {
  Readout<S> r;
  r.single_llr.reserve(g.num_vars);
  for (int v = 0; v < g.num_vars; ++v) {
    S acc = lift(g.belief_unary[v]);
    for (const auto& [e, d] : g.incident[v]) acc = acc + fn_to_vn[e][d];
    r.single_llr.push_back(clamp_sym(acc, kLlrClamp));
  }
  r.pair_logb.reserve(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const ClusteredEdge& ed = g.edges[e];
    const S h0 = 0.5 * vn_to_fn[e][0];
    const S h1 = 0.5 * vn_to_fn[e][1];
    std::array<S, 4> s = {
        lift(ed.share_n + ed.coupling + ed.share_m) + h0 + h1,
        lift(ed.share_n - ed.coupling - ed.share_m) + h0 - h1,
        lift(-ed.share_n - ed.coupling + ed.share_m) - h0 + h1,
        lift(-ed.share_n + ed.coupling - ed.share_m) - h0 - h1,
    };
    const S logz = logaddexp(logaddexp(s[0], s[1]), logaddexp(s[2], s[3]));
    r.pair_logb.push_back({s[0] - logz, s[1] - logz, s[2] - logz, s[3] - logz});
  }
  return r;
}

template <class S, class Rule, class Lift>
Unrolled<S> run_unrolled(const EngineGraph& g, const RunConfig& cfg, Rule&& rule, Lift&& lift,
                         int record_tail = 1) {
  if (cfg.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (cfg.momentum < 0.0 || cfg.momentum >= 1.0)
    throw std::invalid_argument("momentum must lie in [0, 1)");
  record_tail = std::max(record_tail, 1);

  const int ne = static_cast<int>(g.edges.size());
  Unrolled<S> out;
  const S zero = lift(0.0);
  out.fn_to_vn.assign(ne, {zero, zero});
  out.vn_to_fn.assign(ne, {zero, zero});
  std::vector<std::array<S, 2>> fn_new(ne, {zero, zero});

  double last_delta = 0.0;
  for (int t = 0; t < cfg.iterations; ++t) {
    last_delta = 0.0;
    for (int e = 0; e < ne; ++e) {
      for (int d = 0; d < 2; ++d) {
        S msg = rule(e, d, out.vn_to_fn[e][1 - d], out.vn_to_fn[e][d]);
        if (cfg.momentum > 0.0)
          msg = (1.0 - cfg.momentum) * msg + cfg.momentum * out.fn_to_vn[e][d];
        last_delta = std::max(last_delta,
                              std::abs(scalar_value(msg) - scalar_value(out.fn_to_vn[e][d])));
        fn_new[e][d] = msg;
      }
    }
    out.fn_to_vn.swap(fn_new);
    for (int e = 0; e < ne; ++e) {
      for (int d = 0; d < 2; ++d) {
        const int v = d == 0 ? g.edges[e].n : g.edges[e].m;  // sender of vn→fn on (e, d)
        S acc = zero;
        bool any = false;
        if (g.vn_unary[v] != 0.0) {
          acc = lift(g.vn_unary[v]);
          any = true;
        }
        for (const auto& [e2, d2] : g.incident[v]) {
          if (e2 == e) continue;
          acc = any ? acc + out.fn_to_vn[e2][d2] : out.fn_to_vn[e2][d2];
          any = true;
        }
        S msg = clamp_sym(acc, kLlrClamp);
        last_delta =
            std::max(last_delta, std::abs(scalar_value(msg) - scalar_value(out.vn_to_fn[e][d])));
        out.vn_to_fn[e][d] = msg;
      }
    }
    if (t >= cfg.iterations - record_tail)
      out.tail.push_back(compute_readout(g, out.fn_to_vn, out.vn_to_fn, lift));
  }
  out.converged = last_delta < cfg.convergence_tol;
  return out;
}

inline double lift_identity(double x) { return x; }

// ---------------------------------------------------------------------------
// Double-precision front ends.

/// Sum-product (or learned extrinsic) message passing on a plain graph.
/// Neural rules need params; the non-extrinsic rule needs a clustered graph.
RunResult run_message_passing(const PairwiseFactorGraph& g, const RunConfig& cfg,
                              const MLPParams* params = nullptr,
                              std::span<const double> side_features = {});

/// Non-extrinsic learned message passing on the clustered graph.
RunResult run_message_passing(const ClusteredGraph& g, const RunConfig& cfg,
                              const MLPParams& params, std::span<const double> side_features = {});

BeliefSet beliefs_from_messages(const PairwiseFactorGraph& g, const MessageState& msgs);
BeliefSet beliefs_from_messages(const ClusteredGraph& g, const MessageState& msgs);

BeliefSet readout_to_beliefs(const EngineGraph& g, const Readout<double>& r);

/// Message trace rows: iteration, message id ("f2v:<edge>:<dir>" / "v2f:..."), LLR.
void write_message_history_csv(std::ostream& os, const std::vector<MessageState>& history);

}  // namespace cycbp
