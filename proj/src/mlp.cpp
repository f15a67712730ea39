#include "cycbp/mlp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cycbp/rng.hpp"

namespace cycbp {

MLPParams init_params(int n_in, uint64_t seed) {
  if (n_in < 1) throw std::invalid_argument("init_params: n_in must be >= 1");
  MLPParams p;
  p.n_in = n_in;
  Rng rng(mix64(seed, 0x6d6c70u));
  auto glorot = [&](int fan_in, int fan_out) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    return rng.uniform(-limit, limit);
  };
  p.w1.resize(n_in * kMlpHidden);
  for (double& w : p.w1) w = glorot(n_in, kMlpHidden);
  p.b1.assign(kMlpHidden, 0.0);
  p.w2.resize(kMlpHidden * kMlpHidden);
  for (double& w : p.w2) w = glorot(kMlpHidden, kMlpHidden);
  p.b2.assign(kMlpHidden, 0.0);
  p.w3.resize(kMlpHidden);
  for (double& w : p.w3) w = glorot(kMlpHidden, 1);
  p.b3 = 0.0;
  return p;
}

std::vector<double> flatten_params(const MLPParams& p) {
  std::vector<double> flat;
  flat.reserve(param_count(p.n_in));
  flat.insert(flat.end(), p.w1.begin(), p.w1.end());
  flat.insert(flat.end(), p.b1.begin(), p.b1.end());
  flat.insert(flat.end(), p.w2.begin(), p.w2.end());
  flat.insert(flat.end(), p.b2.begin(), p.b2.end());
  flat.insert(flat.end(), p.w3.begin(), p.w3.end());
  flat.push_back(p.b3);
  return flat;
}

MLPParams unflatten_params(int n_in, std::span<const double> flat) {
  if (static_cast<int>(flat.size()) != param_count(n_in))
    throw std::invalid_argument("unflatten_params: size mismatch");
  MLPParams p;
  p.n_in = n_in;
  auto it = flat.begin();
  auto take = [&](std::vector<double>& dst, int count) {
    dst.assign(it, it + count);
    it += count;
  };
  take(p.w1, n_in * kMlpHidden);
  take(p.b1, kMlpHidden);
  take(p.w2, kMlpHidden * kMlpHidden);
  take(p.b2, kMlpHidden);
  take(p.w3, kMlpHidden);
  p.b3 = *it;
  return p;
}

MlpT<Var> lift_params(GradTape& tape, const MLPParams& p, std::vector<Var>* leaves) {
  MlpT<Var> v;
  v.n_in = p.n_in;
  auto lift = [&](double x) {
    Var var = tape.input(x);
    if (leaves) leaves->push_back(var);
    return var;
  };
  v.w1.reserve(p.w1.size());
  for (double x : p.w1) v.w1.push_back(lift(x));
  v.b1.reserve(p.b1.size());
  for (double x : p.b1) v.b1.push_back(lift(x));
  v.w2.reserve(p.w2.size());
  for (double x : p.w2) v.w2.push_back(lift(x));
  v.b2.reserve(p.b2.size());
  for (double x : p.b2) v.b2.push_back(lift(x));
  v.w3.reserve(p.w3.size());
  for (double x : p.w3) v.w3.push_back(lift(x));
  v.b3 = lift(p.b3);
  return v;
}

namespace {

void write_tensor(std::ostream& os, const char* name, std::span<const double> t) {
  os << name;
  char buf[40];
  for (double v : t) {
    std::snprintf(buf, sizeof(buf), " %.17g", v);
    os << buf;
  }
  os << "\n";
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw std::runtime_error("model parse error at line " + std::to_string(line) + ": " + what);
}

std::vector<double> read_tensor(const std::string& line, int lineno, const std::string& name,
                                int expected) {
  std::istringstream ss(line);
  std::string tag;
  ss >> tag;
  if (tag != name) parse_fail(lineno, "expected tensor '" + name + "', got '" + tag + "'");
  std::vector<double> out;
  double v = 0.0;
  while (ss >> v) out.push_back(v);
  if (static_cast<int>(out.size()) != expected)
    parse_fail(lineno, "tensor '" + name + "' has " + std::to_string(out.size()) +
                           " entries, expected " + std::to_string(expected));
  return out;
}

}  // namespace

void save_params(const MLPParams& p, std::ostream& os) {
  os << "MLP n_in=" << p.n_in << " h=" << kMlpHidden << "\n";
  write_tensor(os, "W1", p.w1);
  write_tensor(os, "b1", p.b1);
  write_tensor(os, "W2", p.w2);
  write_tensor(os, "b2", p.b2);
  write_tensor(os, "w3", p.w3);
  write_tensor(os, "b3", std::span<const double>(&p.b3, 1));
}

void save_params(const MLPParams& p, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  save_params(p, os);
}

MLPParams load_params(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) parse_fail(1, "empty file");
  int n_in = 0, hidden = 0;
  if (std::sscanf(line.c_str(), "MLP n_in=%d h=%d", &n_in, &hidden) != 2)
    parse_fail(1, "bad header");
  if (n_in < 1) parse_fail(1, "bad n_in");
  if (hidden != kMlpHidden) parse_fail(1, "unsupported hidden width");

  MLPParams p;
  p.n_in = n_in;
  auto next_line = [&](int lineno) {
    if (!std::getline(is, line)) parse_fail(lineno, "unexpected end of file");
    return line;
  };
  p.w1 = read_tensor(next_line(2), 2, "W1", n_in * kMlpHidden);
  p.b1 = read_tensor(next_line(3), 3, "b1", kMlpHidden);
  p.w2 = read_tensor(next_line(4), 4, "W2", kMlpHidden * kMlpHidden);
  p.b2 = read_tensor(next_line(5), 5, "b2", kMlpHidden);
  p.w3 = read_tensor(next_line(6), 6, "w3", kMlpHidden);
  p.b3 = read_tensor(next_line(7), 7, "b3", 1)[0];
  return p;
}

MLPParams load_params(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return load_params(is);
}

}  // namespace cycbp
