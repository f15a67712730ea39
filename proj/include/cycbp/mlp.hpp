#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cycbp/tape.hpp"

namespace cycbp {

inline constexpr int kMlpHidden = 7;

// Compact update network: linear(n_in→7) + ReLU, linear(7→7) + tanh,
// linear(7→1). One shared instance serves every factor node and iteration.
template <class S>
struct MlpT {
  int n_in = 0;
  std::vector<S> w1;  // n_in x 7, row-major
  std::vector<S> b1;  // 7
  std::vector<S> w2;  // 7 x 7, row-major
  std::vector<S> b2;  // 7
  std::vector<S> w3;  // 7
  S b3{};
};

using MLPParams = MlpT<double>;

inline int param_count(int n_in) {
  return n_in * kMlpHidden + kMlpHidden + kMlpHidden * kMlpHidden + kMlpHidden + kMlpHidden + 1;
}

/// Glorot-uniform weights, zero biases; deterministic per seed.
MLPParams init_params(int n_in, uint64_t seed);

template <class S>
S mlp_forward(const MlpT<S>& p, std::span<const S> x) {
  if (static_cast<int>(x.size()) != p.n_in)
    throw std::invalid_argument("mlp_forward: input arity mismatch");
  S h1[kMlpHidden];
  for (int j = 0; j < kMlpHidden; ++j) {
    S acc = p.b1[j];
    for (int i = 0; i < p.n_in; ++i) acc = acc + x[i] * p.w1[i * kMlpHidden + j];
    h1[j] = relu(acc);
  }
  S h2[kMlpHidden];
  for (int j = 0; j < kMlpHidden; ++j) {
    S acc = p.b2[j];
    for (int i = 0; i < kMlpHidden; ++i) acc = acc + h1[i] * p.w2[i * kMlpHidden + j];
    h2[j] = tanh(acc);
  }
  S out = p.b3;
  for (int i = 0; i < kMlpHidden; ++i) out = out + h2[i] * p.w3[i];
  return out;
}

// Canonical flattening order: w1, b1, w2, b2, w3, b3. Used by the optimizer,
// gradient extraction and finite-difference checks.
std::vector<double> flatten_params(const MLPParams& p);
MLPParams unflatten_params(int n_in, std::span<const double> flat);

// Lift parameters onto a tape as input nodes, in flattening order.
MlpT<Var> lift_params(GradTape& tape, const MLPParams& p, std::vector<Var>* leaves = nullptr);

/// Text model file:
///   MLP n_in=<k> h=7
///   W1 <row-major floats>
///   b1 ... W2 ... b2 ... w3 ... b3 ...
/// written with 17 significant digits; load/save round-trips bit-exactly.
void save_params(const MLPParams& p, std::ostream& os);
void save_params(const MLPParams& p, const std::string& path);
MLPParams load_params(std::istream& is);
MLPParams load_params(const std::string& path);

}  // namespace cycbp
