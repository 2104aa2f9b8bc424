#pragma once

// Node-wise evaluation of engine expressions under either evaluation mode.

#include <vector>

#include "polyharm/assemble.hpp"
#include "polyharm/parallel.hpp"

namespace polyharm {

// Node-major values of fixed width.
struct NodeArray {
  std::size_t nodes = 0;
  int width = 0;
  std::vector<double> values;

  const double* row(std::size_t k) const { return values.data() + k * width; }
  double at(std::size_t k, int c) const { return values[k * width + c]; }
};

// Calls fn(engine, node) -> std::vector<F> and collects the values at every grid
// node: one finite-difference engine on the grid (grid_fd), or one jet engine
// per node (analytic_jet).  `node` is kAllNodes for the grid engine.
inline constexpr std::size_t kAllNodes = static_cast<std::size_t>(-1);

template <class Fn>
NodeArray evaluate_nodes(const GridMap& phi, const Needs& nd, Fn&& fn, int workers = 0) {
  NodeArray out;
  out.nodes = phi.grid->size();
  if (phi.mode == EvalMode::grid_fd) {
    auto e = grid_engine(phi, nd, workers);
    std::vector<GridField> r = fn(e, kAllNodes);
    out.width = static_cast<int>(r.size());
    out.values.resize(out.nodes * out.width);
    for (int c = 0; c < out.width; ++c)
      for (std::size_t k = 0; k < out.nodes; ++k) out.values[k * out.width + c] = r[c][k];
    return out;
  }
  if (!phi.expr) throw CapabilityError("analytic_jet evaluation needs a closed-form map");
  const int m = phi.m();
  auto at_node = [&](std::size_t k) {
    std::vector<double> x(m);
    phi.grid->coords(k, x.data());
    auto e = point_engine(phi.dom, phi.tgt, *phi.expr, x.data(), nd);
    std::vector<Jet> r = fn(e, k);
    std::vector<double> v;
    v.reserve(r.size());
    for (const auto& j : r) v.push_back(j.value());
    return v;
  };
  std::vector<double> first = at_node(0);
  out.width = static_cast<int>(first.size());
  out.values.resize(out.nodes * out.width);
  std::copy(first.begin(), first.end(), out.values.begin());
  parallel_for(out.nodes - 1, workers, [&](std::size_t i) {
    const std::size_t k = i + 1;
    auto v = at_node(k);
    std::copy(v.begin(), v.end(), out.values.begin() + k * out.width);
  });
  return out;
}

// Fields of a section for an engine: grid values, or the jets of its closed
// form about the node.
inline std::vector<GridField> section_fields(const Engine<GridField>&, const BundleSection& s, std::size_t) {
  std::vector<GridField> r;
  for (int a = 0; a < s.n; ++a) r.push_back(s.component(a));
  return r;
}

inline std::vector<Jet> section_fields(const Engine<Jet>& e, const BundleSection& s, std::size_t node) {
  if (!s.expr) throw CapabilityError("analytic_jet evaluation of a section needs its closed form");
  const int m = s.grid->dim();
  std::vector<double> x(m);
  s.grid->coords(node, x.data());
  return s.expr->eval(coordinate_jets(m, e.data().phi[0].degree(), x.data()));
}

// Concatenate vectors of fields.
template <class F>
void append(std::vector<F>& dst, const std::vector<F>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace polyharm
