#include "qprep/tree_ops.hpp"

namespace qprep {

TreeWires allocate_tree(QubitRegistry& registry, const std::string& prefix, int height,
                        int root_init) {
  if (height < 0) throw SpecError("tree height must be >= 0");
  TreeWires t;
  t.levels.resize(height + 1);
  for (int m = 0; m <= height; ++m) {
    t.levels[m].reserve(std::size_t(1) << m);
    for (std::size_t j = 0; j < (std::size_t(1) << m); ++j)
      t.levels[m].push_back(registry.allocate(
          prefix + "[" + std::to_string(m) + "][" + std::to_string(j) + "]",
          (m == 0 && j == 0) ? root_init : 0));
  }
  return t;
}

TreeWires allocate_tree_under(QubitRegistry& registry, const std::string& prefix, int height,
                              QubitId root) {
  if (height < 0) throw SpecError("tree height must be >= 0");
  TreeWires t;
  t.levels.resize(height + 1);
  t.levels[0].push_back(root);
  for (int m = 1; m <= height; ++m) {
    t.levels[m].reserve(std::size_t(1) << m);
    for (std::size_t j = 0; j < (std::size_t(1) << m); ++j)
      t.levels[m].push_back(registry.allocate(
          prefix + "[" + std::to_string(m) + "][" + std::to_string(j) + "]"));
  }
  return t;
}

namespace {

// One half-layer of the upward sweep: CNOT(T[l][j] -> T[l-1][j/2]) for all j
// of the given parity.
Layer up_half(const TreeWires& t, int l, int parity) {
  Layer out;
  const auto& src = t.levels[l];
  const auto& dst = t.levels[l - 1];
  for (std::size_t j = static_cast<std::size_t>(parity); j < src.size(); j += 2)
    out.gates.push_back(Gate::cnot(src[j], dst[j / 2]));
  return out;
}

// One half-layer of the downward sweep: CNOT(T[l][j] -> T[l+1][2j+side]).
Layer down_half(const TreeWires& t, int l, int side) {
  Layer out;
  const auto& src = t.levels[l];
  const auto& dst = t.levels[l + 1];
  for (std::size_t j = 0; j < src.size(); ++j)
    out.gates.push_back(Gate::cnot(src[j], dst[2 * j + static_cast<std::size_t>(side)]));
  return out;
}

}  // namespace

LayerList collect_parity_to_root(const TreeWires& t) {
  LayerList ll;
  const int h = t.height();
  for (int l = h; l >= 1; --l) {
    ll.push_layer(up_half(t, l, 0));
    ll.push_layer(up_half(t, l, 1));
  }
  for (int l = 2; l <= h; ++l) {
    ll.push_layer(up_half(t, l, 0));
    ll.push_layer(up_half(t, l, 1));
  }
  return ll;
}

LayerList broadcast_root_to_leaves(const TreeWires& t) {
  LayerList ll;
  const int h = t.height();
  for (int l = 0; l < h; ++l) {
    ll.push_layer(down_half(t, l, 0));
    ll.push_layer(down_half(t, l, 1));
  }
  for (int l = h - 2; l >= 0; --l) {
    ll.push_layer(down_half(t, l, 0));
    ll.push_layer(down_half(t, l, 1));
  }
  return ll;
}

void add_tree_edges(CouplingGraph& g, const TreeWires& t) {
  for (int m = 0; m < t.height(); ++m)
    for (std::size_t j = 0; j < t.levels[m].size(); ++j) {
      g.add_edge(t.levels[m][j], t.levels[m + 1][2 * j]);
      g.add_edge(t.levels[m][j], t.levels[m + 1][2 * j + 1]);
    }
}

}  // namespace qprep
