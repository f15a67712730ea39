#include "cycbp/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace cycbp {

std::vector<double> sample_random_channel(int memory, Rng& rng) {
  if (memory < 0) throw std::invalid_argument("channel memory must be >= 0");
  std::vector<double> taps(memory + 1);
  double energy = 0.0;
  do {
    energy = 0.0;
    for (double& t : taps) {
      t = rng.normal();
      energy += t * t;
    }
  } while (energy == 0.0);
  const double scale = 1.0 / std::sqrt(energy);
  for (double& t : taps) t *= scale;
  return taps;
}

RealMatrix build_channel_matrix(const std::vector<double>& taps, int block_len) {
  if (taps.empty() || block_len < 1) throw std::invalid_argument("bad channel dimensions");
  const int memory = static_cast<int>(taps.size()) - 1;
  RealMatrix h;
  h.rows = block_len + memory;
  h.cols = block_len;
  h.a.assign(static_cast<std::size_t>(h.rows) * h.cols, 0.0);
  for (int j = 0; j < block_len; ++j)
    for (int l = 0; l <= memory; ++l) h.at(j + l, j) = taps[l];
  return h;
}

TransmissionSample simulate_transmission(const ChannelInstance& ch,
                                         const std::vector<int>& symbols, Rng& rng) {
  if (static_cast<int>(symbols.size()) != ch.block_len)
    throw std::invalid_argument("symbol count does not match block length");
  if (!(ch.sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  const RealMatrix h = build_channel_matrix(ch.taps, ch.block_len);
  TransmissionSample s;
  s.symbols = symbols;
  s.observation.resize(h.rows);
  const double comp_std = std::sqrt(ch.sigma2 / 2.0);
  for (int r = 0; r < h.rows; ++r) {
    double clean = 0.0;
    for (int c = 0; c < h.cols; ++c) clean += h.at(r, c) * symbols[c];
    const double wr = comp_std * rng.normal();
    const double wi = comp_std * rng.normal();
    s.observation[r] = {clean + wr, wi};
  }
  return s;
}

MatchedStats matched_filter(const RealMatrix& h, const std::vector<std::complex<double>>& y) {
  if (static_cast<int>(y.size()) != h.rows) throw std::invalid_argument("observation length mismatch");
  MatchedStats st;
  st.x.assign(h.cols, {0.0, 0.0});
  for (int c = 0; c < h.cols; ++c)
    for (int r = 0; r < h.rows; ++r) st.x[c] += h.at(r, c) * y[r];
  st.gram.rows = st.gram.cols = h.cols;
  st.gram.a.assign(static_cast<std::size_t>(h.cols) * h.cols, 0.0);
  for (int i = 0; i < h.cols; ++i)
    for (int j = 0; j < h.cols; ++j) {
      double g = 0.0;
      for (int r = 0; r < h.rows; ++r) g += h.at(r, i) * h.at(r, j);
      st.gram.at(i, j) = g;
    }
  return st;
}

PairwiseFactorGraph build_detection_graph(const MatchedStats& stats, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  const int n = static_cast<int>(stats.x.size());
  std::vector<double> unary(n);
  for (int i = 0; i < n; ++i) unary[i] = 2.0 * stats.x[i].real() / sigma2;
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double g = stats.gram.at(i, j);
      if (g != 0.0) edges.push_back({i, j, -2.0 * g / sigma2});
    }
  return build_graph(std::move(unary), std::move(edges));
}

double ebno_db_to_sigma2(double ebno_db) { return std::pow(10.0, -ebno_db / 10.0); }

int hard_decision(double llr) { return llr >= 0.0 ? +1 : -1; }

}  // namespace cycbp
