#include "cycbp/graph.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace cycbp {

PairwiseFactorGraph::PairwiseFactorGraph(std::vector<double> unary, std::vector<Edge> edges)
    : unary_(std::move(unary)), edges_(std::move(edges)) {
  const int n = num_vars();
  if (n <= 0) throw std::invalid_argument("graph needs at least one variable");
  for (double u : unary_) {
    if (!std::isfinite(u)) throw std::invalid_argument("non-finite unary field");
  }
  std::set<std::pair<int, int>> seen;
  adjacency_.assign(n, {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    Edge& e = edges_[i];
    if (e.n < 0 || e.n >= n || e.m < 0 || e.m >= n)
      throw std::invalid_argument("edge index out of range");
    if (e.n == e.m) throw std::invalid_argument("self-loop edge");
    if (e.n > e.m) std::swap(e.n, e.m);
    if (!seen.insert({e.n, e.m}).second)
      throw std::invalid_argument("duplicate edge");
    if (!std::isfinite(e.coupling)) throw std::invalid_argument("non-finite coupling");
    adjacency_[e.n].push_back(static_cast<int>(i));
    adjacency_[e.m].push_back(static_cast<int>(i));
  }
}

PairwiseFactorGraph build_graph(std::vector<double> unary, std::vector<Edge> edges) {
  return PairwiseFactorGraph(std::move(unary), std::move(edges));
}

int variable_degree(const PairwiseFactorGraph& g, int n) {
  if (n < 0 || n >= g.num_vars()) throw std::out_of_range("variable index");
  return g.degree(n);
}

ClusteredGraph cluster_unaries(const PairwiseFactorGraph& g) {
  ClusteredGraph c;
  c.num_vars = g.num_vars();
  c.residual_unary.assign(c.num_vars, 0.0);
  c.edges.reserve(g.edges().size());
  for (const Edge& e : g.edges()) {
    c.edges.push_back({e.n, e.m, g.unary()[e.n] / g.degree(e.n), e.coupling,
                       g.unary()[e.m] / g.degree(e.m)});
  }
  for (int n = 0; n < c.num_vars; ++n) {
    if (g.degree(n) == 0) c.residual_unary[n] = g.unary()[n];
  }
  return c;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw std::runtime_error("graph parse error at line " + std::to_string(line) + ": " + what);
}

}  // namespace

void save_graph(const PairwiseFactorGraph& g, std::ostream& os) {
  os << "N " << g.num_vars() << "\n";
  for (int n = 0; n < g.num_vars(); ++n) os << "U " << n << " " << fmt(g.unary()[n]) << "\n";
  for (const Edge& e : g.edges())
    os << "E " << e.n << " " << e.m << " " << fmt(e.coupling) << "\n";
}

void save_graph(const PairwiseFactorGraph& g, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  save_graph(g, os);
}

PairwiseFactorGraph load_graph(std::istream& is) {
  std::string line;
  int lineno = 0;
  int num_vars = -1;
  std::vector<double> unary;
  std::vector<Edge> edges;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "N") {
      if (!(ss >> num_vars) || num_vars <= 0) parse_fail(lineno, "bad variable count");
      unary.assign(num_vars, 0.0);
    } else if (tag == "U") {
      int n = 0;
      double v = 0.0;
      if (num_vars < 0) parse_fail(lineno, "U before N");
      if (!(ss >> n >> v) || n < 0 || n >= num_vars) parse_fail(lineno, "bad unary line");
      unary[n] = v;
    } else if (tag == "E") {
      Edge e;
      if (num_vars < 0) parse_fail(lineno, "E before N");
      if (!(ss >> e.n >> e.m >> e.coupling)) parse_fail(lineno, "bad edge line");
      edges.push_back(e);
    } else {
      parse_fail(lineno, "unknown record '" + tag + "'");
    }
  }
  if (num_vars < 0) throw std::runtime_error("graph parse error: missing N header");
  return build_graph(std::move(unary), std::move(edges));
}

PairwiseFactorGraph load_graph(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return load_graph(is);
}

}  // namespace cycbp
