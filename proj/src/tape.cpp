#include "cycbp/tape.hpp"

namespace cycbp {

void GradTape::backward(Var seed) {
  if (op_.empty()) throw std::invalid_argument("backward on empty tape");
  if (seed.idx < 0 || seed.idx >= static_cast<int32_t>(op_.size()))
    throw std::invalid_argument("backward seed out of range");
  adj_.assign(op_.size(), 0.0);
  adj_[seed.idx] = 1.0;
  for (int32_t i = static_cast<int32_t>(op_.size()) - 1; i >= 0; --i) {
    const double g = adj_[i];
    if (g == 0.0) continue;
    const int32_t a = a_[i], b = b_[i];
    switch (op_[i]) {
      case Op::kConst:
      case Op::kInput:
        break;
      case Op::kAdd:
        adj_[a] += g;
        adj_[b] += g;
        break;
      case Op::kSub:
        adj_[a] += g;
        adj_[b] -= g;
        break;
      case Op::kMul:
        adj_[a] += g * val_[b];
        adj_[b] += g * val_[a];
        break;
      case Op::kDiv:
        adj_[a] += g / val_[b];
        adj_[b] -= g * val_[i] / val_[b];
        break;
      case Op::kNeg:
        adj_[a] -= g;
        break;
      case Op::kTanh:
        adj_[a] += g * (1.0 - val_[i] * val_[i]);
        break;
      case Op::kRelu:
        if (val_[a] > 0.0) adj_[a] += g;
        break;
      case Op::kExp:
        adj_[a] += g * val_[i];
        break;
      case Op::kLog:
        adj_[a] += g / val_[a];
        break;
      case Op::kSigmoid:
        adj_[a] += g * val_[i] * (1.0 - val_[i]);
        break;
      case Op::kSoftplus:
        adj_[a] += g / (1.0 + std::exp(-val_[a]));
        break;
      case Op::kLogAddExp:
        adj_[a] += g * std::exp(val_[a] - val_[i]);
        adj_[b] += g * std::exp(val_[b] - val_[i]);
        break;
      case Op::kClamp:
        if (val_[a] > -aux_[i] && val_[a] < aux_[i]) adj_[a] += g;
        break;
    }
  }
}

void GradTape::replay() {
  for (std::size_t i = 0; i < op_.size(); ++i) {
    const int32_t a = a_[i], b = b_[i];
    switch (op_[i]) {
      case Op::kConst:
      case Op::kInput:
        break;
      case Op::kAdd:
        val_[i] = val_[a] + val_[b];
        break;
      case Op::kSub:
        val_[i] = val_[a] - val_[b];
        break;
      case Op::kMul:
        val_[i] = val_[a] * val_[b];
        break;
      case Op::kDiv:
        val_[i] = val_[a] / val_[b];
        break;
      case Op::kNeg:
        val_[i] = -val_[a];
        break;
      case Op::kTanh:
        val_[i] = std::tanh(val_[a]);
        break;
      case Op::kRelu:
        val_[i] = val_[a] > 0.0 ? val_[a] : 0.0;
        break;
      case Op::kExp:
        val_[i] = std::exp(val_[a]);
        break;
      case Op::kLog:
        val_[i] = std::log(val_[a]);
        break;
      case Op::kSigmoid:
        val_[i] = 1.0 / (1.0 + std::exp(-val_[a]));
        break;
      case Op::kSoftplus:
        val_[i] = softplus(val_[a]);
        break;
      case Op::kLogAddExp:
        val_[i] = logaddexp(val_[a], val_[b]);
        break;
      case Op::kClamp:
        val_[i] = clamp_sym(val_[a], aux_[i]);
        break;
    }
  }
}

}  // namespace cycbp
