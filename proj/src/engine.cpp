#include "cycbp/engine.hpp"

#include <ostream>

namespace cycbp {

double vn_update(std::span<const double> incident_llrs) {
  double s = 0.0;
  for (double l : incident_llrs) s += l;
  return clamp_sym(s, kLlrClamp);
}

double spa_fn_update(double coupling, double llr_in) {
  const double t = std::tanh(coupling) * std::tanh(0.5 * llr_in);
  const double tc = clamp_sym(t, 1.0 - 1e-12);
  return clamp_sym(2.0 * std::atanh(tc), kLlrClamp);
}

double unary_llr(const PairwiseFactorGraph& g, int n) { return 2.0 * g.unary()[n]; }

std::array<double, 2> llr_to_distribution(double llr) {
  return {sigmoid(llr), sigmoid(-llr)};
}

namespace {

void build_incidence(EngineGraph& g) {
  g.incident.assign(g.num_vars, {});
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    g.incident[g.edges[e].n].push_back({static_cast<int>(e), 0});
    g.incident[g.edges[e].m].push_back({static_cast<int>(e), 1});
  }
}

}  // namespace

EngineGraph make_engine_graph(const PairwiseFactorGraph& g) {
  EngineGraph eg;
  eg.num_vars = g.num_vars();
  eg.clustered = false;
  eg.edges.reserve(g.edges().size());
  for (const Edge& e : g.edges()) eg.edges.push_back({e.n, e.m, 0.0, e.coupling, 0.0});
  eg.vn_unary.resize(eg.num_vars);
  for (int n = 0; n < eg.num_vars; ++n) eg.vn_unary[n] = 2.0 * g.unary()[n];
  eg.belief_unary = eg.vn_unary;
  build_incidence(eg);
  return eg;
}

EngineGraph make_engine_graph(const ClusteredGraph& g) {
  EngineGraph eg;
  eg.num_vars = g.num_vars;
  eg.clustered = true;
  eg.edges = g.edges;
  eg.vn_unary.assign(eg.num_vars, 0.0);
  eg.belief_unary.resize(eg.num_vars);
  for (int n = 0; n < eg.num_vars; ++n) eg.belief_unary[n] = 2.0 * g.residual_unary[n];
  build_incidence(eg);
  return eg;
}

double neural_fn_update_extrinsic(const MLPParams& params, double l_ext, double coupling,
                                  std::span<const double> side) {
  if (params.n_in != 2 + static_cast<int>(side.size()))
    throw std::invalid_argument("extrinsic rule arity mismatch");
  std::vector<double> x = {l_ext, coupling};
  x.insert(x.end(), side.begin(), side.end());
  return clamp_sym(mlp_forward(params, std::span<const double>(x)), kLlrClamp);
}

double neural_fn_update(const MLPParams& params, double l_ext, double l_intr, double e_src,
                        double coupling, double e_dst, std::span<const double> side) {
  if (params.n_in != 5 + static_cast<int>(side.size()))
    throw std::invalid_argument("non-extrinsic rule arity mismatch");
  std::vector<double> x = {l_ext, l_intr, e_src, coupling, e_dst};
  x.insert(x.end(), side.begin(), side.end());
  return clamp_sym(mlp_forward(params, std::span<const double>(x)), kLlrClamp);
}

BeliefSet readout_to_beliefs(const EngineGraph& g, const Readout<double>& r) {
  BeliefSet b;
  b.singles.reserve(r.single_llr.size());
  for (double l : r.single_llr) b.singles.push_back(llr_to_distribution(l));
  b.pairs.reserve(r.pair_logb.size());
  for (const auto& lp : r.pair_logb)
    b.pairs.push_back({std::exp(lp[0]), std::exp(lp[1]), std::exp(lp[2]), std::exp(lp[3])});
  b.pair_vars.reserve(g.edges.size());
  for (const ClusteredEdge& e : g.edges) b.pair_vars.push_back({e.n, e.m});
  return b;
}

namespace {

RunResult run_on_engine_graph(const EngineGraph& eg, const RunConfig& cfg, const MLPParams* params,
                              std::span<const double> side) {
  RunResult res;
  const bool neural = cfg.rule != UpdateRule::kSpa;
  if (neural && params == nullptr)
    throw std::invalid_argument("neural update rule requires model parameters");

  const int record_tail = cfg.record_history ? cfg.iterations : 1;
  Unrolled<double> u;
  if (neural) {
    auto rule = make_neural_rule<double>(eg, *params, cfg.rule == UpdateRule::kNeuralExtrinsic,
                                         side, lift_identity);
    u = run_unrolled<double>(eg, cfg, rule, lift_identity, record_tail);
  } else {
    u = run_unrolled<double>(eg, cfg, SpaRule{&eg}, lift_identity, record_tail);
  }

  res.messages.fn_to_vn = u.fn_to_vn;
  res.messages.vn_to_fn = u.vn_to_fn;
  res.messages.iteration = cfg.iterations;
  res.converged = u.converged;
  res.beliefs = readout_to_beliefs(eg, u.final_readout());
  if (cfg.record_history) {
    res.history.reserve(u.tail.size());
    for (const auto& r : u.tail) res.history.push_back(readout_to_beliefs(eg, r));
  }
  return res;
}

// Re-runs recording per-iteration messages; used only for CSV traces.
template <class Rule>
std::vector<MessageState> trace_messages(const EngineGraph& eg, const RunConfig& cfg,
                                         Rule&& rule) {
  std::vector<MessageState> states;
  const int ne = static_cast<int>(eg.edges.size());
  MessageState st;
  st.fn_to_vn.assign(ne, {0.0, 0.0});
  st.vn_to_fn.assign(ne, {0.0, 0.0});
  for (int t = 0; t < cfg.iterations; ++t) {
    std::vector<std::array<double, 2>> fn_new(ne);
    for (int e = 0; e < ne; ++e)
      for (int d = 0; d < 2; ++d) {
        double msg = rule(e, d, st.vn_to_fn[e][1 - d], st.vn_to_fn[e][d]);
        if (cfg.momentum > 0.0)
          msg = (1.0 - cfg.momentum) * msg + cfg.momentum * st.fn_to_vn[e][d];
        fn_new[e][d] = msg;
      }
    st.fn_to_vn = fn_new;
    for (int e = 0; e < ne; ++e)
      for (int d = 0; d < 2; ++d) {
        const int v = d == 0 ? eg.edges[e].n : eg.edges[e].m;
        double acc = eg.vn_unary[v];
        for (const auto& [e2, d2] : eg.incident[v])
          if (e2 != e) acc += st.fn_to_vn[e2][d2];
        st.vn_to_fn[e][d] = clamp_sym(acc, kLlrClamp);
      }
    st.iteration = t + 1;
    states.push_back(st);
  }
  return states;
}

}  // namespace

RunResult run_message_passing(const PairwiseFactorGraph& g, const RunConfig& cfg,
                              const MLPParams* params, std::span<const double> side_features) {
  if (cfg.rule == UpdateRule::kNeural)
    throw std::invalid_argument("non-extrinsic rule requires a clustered graph");
  const EngineGraph eg = make_engine_graph(g);
  RunResult res = run_on_engine_graph(eg, cfg, params, side_features);
  if (cfg.record_history) {
    if (cfg.rule == UpdateRule::kSpa) {
      res.message_history = trace_messages(eg, cfg, SpaRule{&eg});
    } else {
      auto rule = make_neural_rule<double>(eg, *params, true, side_features, lift_identity);
      res.message_history = trace_messages(eg, cfg, rule);
    }
  }
  return res;
}

RunResult run_message_passing(const ClusteredGraph& g, const RunConfig& cfg,
                              const MLPParams& params, std::span<const double> side_features) {
  if (cfg.rule != UpdateRule::kNeural)
    throw std::invalid_argument("clustered graphs are used with the non-extrinsic rule");
  const EngineGraph eg = make_engine_graph(g);
  RunResult res = run_on_engine_graph(eg, cfg, &params, side_features);
  if (cfg.record_history) {
    auto rule = make_neural_rule<double>(eg, params, false, side_features, lift_identity);
    res.message_history = trace_messages(eg, cfg, rule);
  }
  return res;
}

namespace {

BeliefSet beliefs_from_engine(const EngineGraph& eg, const MessageState& msgs) {
  if (msgs.fn_to_vn.size() != eg.edges.size() || msgs.vn_to_fn.size() != eg.edges.size())
    throw std::invalid_argument("message state does not match graph");
  return readout_to_beliefs(eg, compute_readout(eg, msgs.fn_to_vn, msgs.vn_to_fn, lift_identity));
}

}  // namespace

BeliefSet beliefs_from_messages(const PairwiseFactorGraph& g, const MessageState& msgs) {
  return beliefs_from_engine(make_engine_graph(g), msgs);
}

BeliefSet beliefs_from_messages(const ClusteredGraph& g, const MessageState& msgs) {
  return beliefs_from_engine(make_engine_graph(g), msgs);
}

void write_message_history_csv(std::ostream& os, const std::vector<MessageState>& history) {
  os << "iteration,message_id,llr\n";
  char buf[40];
  for (std::size_t t = 0; t < history.size(); ++t) {
    const MessageState& st = history[t];
    for (std::size_t e = 0; e < st.fn_to_vn.size(); ++e)
      for (int d = 0; d < 2; ++d) {
        std::snprintf(buf, sizeof(buf), "%.17g", st.fn_to_vn[e][d]);
        os << (t + 1) << ",f2v:" << e << ":" << d << "," << buf << "\n";
      }
    for (std::size_t e = 0; e < st.vn_to_fn.size(); ++e)
      for (int d = 0; d < 2; ++d) {
        std::snprintf(buf, sizeof(buf), "%.17g", st.vn_to_fn[e][d]);
        os << (t + 1) << ",v2f:" << e << ":" << d << "," << buf << "\n";
      }
  }
}

}  // namespace cycbp
