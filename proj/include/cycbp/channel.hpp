#pragma once

#include <complex>
#include <vector>

#include "cycbp/graph.hpp"
#include "cycbp/rng.hpp"

namespace cycbp {

// Linear ISI channel: unit-energy impulse response h (L+1 real taps) and
// complex circular AWGN with variance sigma2 per sample.
struct ChannelInstance {
  std::vector<double> taps;
  double sigma2 = 1.0;
  int block_len = 4;
};

struct TransmissionSample {
  std::vector<int> symbols;                        // N entries, ±1
  std::vector<std::complex<double>> observation;   // N+L entries
};

struct RealMatrix {
  int rows = 0, cols = 0;
  std::vector<double> a;  // row-major
  double& at(int r, int c) { return a[r * cols + c]; }
  double at(int r, int c) const { return a[r * cols + c]; }
};

// Matched-filter statistics x = Hᴴy and G = HᴴH (real for real taps).
struct MatchedStats {
  std::vector<std::complex<double>> x;
  RealMatrix gram;
};

/// memory+1 i.i.d. standard-normal taps, normalized to unit energy.
std::vector<double> sample_random_channel(int memory, Rng& rng);

/// Banded (N+L)×N convolution matrix; column j carries the taps shifted down by j.
RealMatrix build_channel_matrix(const std::vector<double>& taps, int block_len);

/// y = H·c + w with w_k ~ CN(0, sigma2).
TransmissionSample simulate_transmission(const ChannelInstance& ch, const std::vector<int>& symbols,
                                         Rng& rng);

MatchedStats matched_filter(const RealMatrix& h, const std::vector<std::complex<double>>& y);

/// Detection factor graph of the matched-filter observation model:
/// unary E_n = 2·Re(x_n)/σ², coupling E_nm = −2·G_nm/σ² for 0 < |n−m| ≤ L.
/// Exactly-zero couplings are omitted.
PairwiseFactorGraph build_detection_graph(const MatchedStats& stats, double sigma2);

/// σ² = 10^(−ebno_db/10); the paper's convention E_b/N_0 = 1/σ².
double ebno_db_to_sigma2(double ebno_db);

/// Sign decision on an LLR; ties resolve to +1.
int hard_decision(double llr);

}  // namespace cycbp
