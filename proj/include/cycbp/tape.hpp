#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cycbp {

class GradTape;

// Handle to one scalar node on a GradTape.
struct Var {
  GradTape* tape = nullptr;
  int32_t idx = -1;
  double value() const;
};

/// Scalar reverse-mode tape. Records primitive operations with value slots;
/// backward() fills adjoints in one reverse sweep (order-deterministic).
class GradTape {
 public:
  enum class Op : uint8_t {
    kConst,
    kInput,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kNeg,
    kTanh,
    kRelu,
    kExp,
    kLog,
    kSigmoid,
    kSoftplus,
    kLogAddExp,
    kClamp,  // symmetric clamp to [-aux, aux]; zero gradient outside
  };

  Var input(double v) { return push(Op::kInput, -1, -1, v); }
  Var constant(double v) { return push(Op::kConst, -1, -1, v); }

  Var add(Var a, Var b) { return push(Op::kAdd, a.idx, b.idx, val_[a.idx] + val_[b.idx]); }
  Var sub(Var a, Var b) { return push(Op::kSub, a.idx, b.idx, val_[a.idx] - val_[b.idx]); }
  Var mul(Var a, Var b) { return push(Op::kMul, a.idx, b.idx, val_[a.idx] * val_[b.idx]); }
  Var div(Var a, Var b) { return push(Op::kDiv, a.idx, b.idx, val_[a.idx] / val_[b.idx]); }
  Var neg(Var a) { return push(Op::kNeg, a.idx, -1, -val_[a.idx]); }
  Var tanh(Var a) { return push(Op::kTanh, a.idx, -1, std::tanh(val_[a.idx])); }
  Var relu(Var a) { return push(Op::kRelu, a.idx, -1, val_[a.idx] > 0.0 ? val_[a.idx] : 0.0); }
  Var exp(Var a) { return push(Op::kExp, a.idx, -1, std::exp(val_[a.idx])); }
  Var log(Var a) { return push(Op::kLog, a.idx, -1, std::log(val_[a.idx])); }
  Var sigmoid(Var a) {
    return push(Op::kSigmoid, a.idx, -1, 1.0 / (1.0 + std::exp(-val_[a.idx])));
  }
  // log(1 + e^x), overflow-safe.
  Var softplus(Var a) {
    const double x = val_[a.idx];
    const double v = x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    return push(Op::kSoftplus, a.idx, -1, v);
  }
  // log(e^a + e^b), max-shifted.
  Var logaddexp(Var a, Var b) {
    const double x = val_[a.idx], y = val_[b.idx];
    const double hi = x > y ? x : y;
    const double lo = x > y ? y : x;
    return push(Op::kLogAddExp, a.idx, b.idx, hi + std::log1p(std::exp(lo - hi)));
  }
  Var clamp_sym(Var a, double bound) {
    const double x = val_[a.idx];
    const double v = x < -bound ? -bound : (x > bound ? bound : x);
    Var r = push(Op::kClamp, a.idx, -1, v);
    aux_[r.idx] = bound;
    return r;
  }

  double value(Var v) const { return val_[v.idx]; }
  double adjoint(Var v) const { return adj_[v.idx]; }
  std::size_t size() const { return op_.size(); }

  /// Reverse sweep seeding d(seed)/d(seed) = 1. Adjoints of all nodes,
  /// including inputs, are available afterwards via adjoint().
  void backward(Var seed);

  /// Recompute all node values from the recorded operations in place.
  void replay();

  // Reset for reuse; capacity is retained.
  void clear() {
    op_.clear();
    a_.clear();
    b_.clear();
    val_.clear();
    adj_.clear();
    aux_.clear();
  }

  void reserve(std::size_t n) {
    op_.reserve(n);
    a_.reserve(n);
    b_.reserve(n);
    val_.reserve(n);
    adj_.reserve(n);
    aux_.reserve(n);
  }

  // Overwrite the recorded value of an input node (used with replay()).
  void set_input(Var v, double x) {
    if (op_[v.idx] != Op::kInput) throw std::invalid_argument("set_input on non-input node");
    val_[v.idx] = x;
  }

 private:
  Var push(Op op, int32_t a, int32_t b, double v) {
    op_.push_back(op);
    a_.push_back(a);
    b_.push_back(b);
    val_.push_back(v);
    adj_.push_back(0.0);
    aux_.push_back(0.0);
    return Var{this, static_cast<int32_t>(op_.size() - 1)};
  }

  std::vector<Op> op_;
  std::vector<int32_t> a_, b_;
  std::vector<double> val_, adj_, aux_;
};

inline double Var::value() const { return tape->value(*this); }

// Operator sugar; double operands are lifted as constants.
inline Var operator+(Var a, Var b) { return a.tape->add(a, b); }
inline Var operator-(Var a, Var b) { return a.tape->sub(a, b); }
inline Var operator*(Var a, Var b) { return a.tape->mul(a, b); }
inline Var operator/(Var a, Var b) { return a.tape->div(a, b); }
inline Var operator-(Var a) { return a.tape->neg(a); }
inline Var operator+(Var a, double b) { return a + a.tape->constant(b); }
inline Var operator+(double a, Var b) { return b.tape->constant(a) + b; }
inline Var operator-(Var a, double b) { return a - a.tape->constant(b); }
inline Var operator-(double a, Var b) { return b.tape->constant(a) - b; }
inline Var operator*(Var a, double b) { return a * a.tape->constant(b); }
inline Var operator*(double a, Var b) { return b.tape->constant(a) * b; }
inline Var operator/(Var a, double b) { return a / a.tape->constant(b); }

inline Var tanh(Var a) { return a.tape->tanh(a); }
inline Var relu(Var a) { return a.tape->relu(a); }
inline Var exp(Var a) { return a.tape->exp(a); }
inline Var log(Var a) { return a.tape->log(a); }
inline Var sigmoid(Var a) { return a.tape->sigmoid(a); }
inline Var softplus(Var a) { return a.tape->softplus(a); }
inline Var logaddexp(Var a, Var b) { return a.tape->logaddexp(a, b); }
inline Var clamp_sym(Var a, double bound) { return a.tape->clamp_sym(a, bound); }

// double counterparts so numeric code can be written once and instantiated
// for both the plain and the recorded path.
inline double relu(double x) { return x > 0.0 ? x : 0.0; }
inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
inline double logaddexp(double a, double b) {
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}
inline double clamp_sym(double x, double bound) {
  return x < -bound ? -bound : (x > bound ? bound : x);
}

inline double scalar_value(double x) { return x; }
inline double scalar_value(Var v) { return v.value(); }

}  // namespace cycbp
