#include "qprep/dense_prep.hpp"

#include <algorithm>
#include <cmath>

namespace qprep {

namespace {

int log2_exact(std::size_t size) {
  if (size < 2 || (size & (size - 1)) != 0)
    throw SpecError("amplitude count must be a power of two, at least 2");
  int n = 0;
  while ((std::size_t(1) << n) < size) ++n;
  return n;
}

}  // namespace

AngleTree compute_angle_tree(const std::vector<cplx>& amplitudes) {
  AngleTree at;
  at.n = log2_exact(amplitudes.size());

  double norm = 0;
  for (const cplx& a : amplitudes) norm += std::norm(a);
  if (std::abs(norm - 1.0) > 1e-9)
    throw SpecError("amplitude vector is not normalized");

  // Magnitude tree, built leaves-up.
  std::vector<std::vector<double>> b(at.n + 1);
  b[at.n].resize(amplitudes.size());
  at.phase.resize(amplitudes.size());
  for (std::size_t k = 0; k < amplitudes.size(); ++k) {
    b[at.n][k] = std::abs(amplitudes[k]);
    at.phase[k] = std::arg(amplitudes[k]);
  }
  for (int l = at.n - 1; l >= 0; --l) {
    b[l].resize(std::size_t(1) << l);
    for (std::size_t j = 0; j < b[l].size(); ++j)
      b[l][j] = std::hypot(b[l + 1][2 * j], b[l + 1][2 * j + 1]);
  }

  at.theta.resize(at.n + 1);
  for (int l = 1; l <= at.n; ++l) {
    at.theta[l].resize(std::size_t(1) << (l - 1));
    for (std::size_t j = 0; j < at.theta[l].size(); ++j) {
      double parent = b[l - 1][j];
      if (parent == 0.0) {
        at.theta[l][j] = 0.0;  // no mass to split; any angle acts on nothing
        continue;
      }
      double ratio = std::clamp(b[l][2 * j] / parent, 0.0, 1.0);
      at.theta[l][j] = std::acos(ratio);
    }
  }
  return at;
}

DenseBlock build_dense_block(QubitRegistry& registry, const std::string& prefix,
                             const std::vector<cplx>& amplitudes,
                             const DensePrepOptions& options) {
  AngleTree at = compute_angle_tree(amplitudes);
  const int n = at.n;

  DenseBlock blk;
  // Amplitude tree: level l mirrors the first l index bits; the root starts
  // |1> and carries the whole unit of amplitude before any splitting.
  TreeWires H = allocate_tree(registry, prefix + "H", n, /*root_init=*/1);
  std::vector<TreeWires> V(n + 1);  // V[l]: parity tree for index bit n-l
  for (int l = 1; l <= n; ++l)
    V[l] = allocate_tree(registry, prefix + "V[" + std::to_string(l) + "]", l);

  LayerList& ll = blk.layers;
  auto mark_stage = [&](const char* name, int first) {
    blk.stages.push_back({name, first, static_cast<int>(ll.size()) - 1});
  };

  // Split amplitude mass level by level. Each level moves the hot node's
  // weight into its two children: copy to the left child, rotate the right
  // child's share out with a partial swap, then swap the kept share back
  // down to the left child. Ancestors of the hot node all stay |1>.
  for (int l = 1; l <= n; ++l) {
    const auto& parent = H.levels[l - 1];
    const auto& child = H.levels[l];
    Layer copy_left, rotate_right, settle;
    for (std::size_t j = 0; j < parent.size(); ++j) {
      copy_left.gates.push_back(Gate::cnot(parent[j], child[2 * j]));
      rotate_right.gates.push_back(
          Gate::partial_swap(at.theta[l][j], parent[j], child[2 * j + 1]));
      settle.gates.push_back(Gate::swap(child[2 * j], parent[j]));
    }
    ll.push_layer(std::move(copy_left));
    ll.push_layer(std::move(rotate_right));
    ll.push_layer(std::move(settle));
  }
  mark_stage("stage1-rotations", 0);

  {
    Layer phases;
    for (std::size_t k = 0; k < amplitudes.size(); ++k)
      phases.gates.push_back(Gate::ph(at.phase[k], H.levels[n][k]));
    ll.push_layer(std::move(phases));
  }
  mark_stage("stage1-phases", static_cast<int>(ll.size()) - 1);

  // Bit l of the index is 1 exactly when the hot node at level l has odd
  // position. Copy the odd-position nodes onto the V[l] leaves, fold the
  // (at most one) set leaf into the V[l] root, then uncopy.
  const int stage2_first = static_cast<int>(ll.size());
  auto leaf_copy_layer = [&] {
    Layer copies;
    for (int l = 1; l <= n; ++l)
      for (std::size_t j = 1; j < H.levels[l].size(); j += 2)
        copies.gates.push_back(Gate::cnot(H.levels[l][j], V[l].leaves()[j]));
    return copies;
  };
  ll.push_layer(leaf_copy_layer());
  {
    LayerList folds;
    for (int l = 1; l <= n; ++l) folds.par(collect_parity_to_root(V[l]));
    ll.seq(folds);
  }
  ll.push_layer(leaf_copy_layer());
  mark_stage("stage2-binary", stage2_first);

  // Broadcast every captured bit back over its tree's leaves so that each
  // amplitude-tree node has a private copy adjacent to it.
  const int stage3_first = static_cast<int>(ll.size());
  {
    LayerList casts;
    for (int l = 1; l <= n; ++l) casts.par(broadcast_root_to_leaves(V[l]));
    ll.seq(casts);
  }
  mark_stage("stage3-fanout", stage3_first);

  // Clear the amplitude-tree path, children before parents so each parent is
  // still |1> while its children are being uncomputed. The hot child at
  // level l is the left one when bit l is 0, the right one when it is 1.
  const int stage4_first = static_cast<int>(ll.size());
  for (int l = n; l >= 1; --l) {
    const auto& parent = H.levels[l - 1];
    const auto& child = H.levels[l];
    const auto& leaf = V[l].leaves();
    Layer flip_even, clear_left, flip_back, clear_right;
    for (std::size_t j = 0; j < parent.size(); ++j) {
      flip_even.gates.push_back(Gate::x(leaf[2 * j]));
      clear_left.gates.push_back(Gate::ccnot(leaf[2 * j], parent[j], child[2 * j]));
      flip_back.gates.push_back(Gate::x(leaf[2 * j]));
      clear_right.gates.push_back(Gate::ccnot(leaf[2 * j + 1], parent[j], child[2 * j + 1]));
    }
    ll.push_layer(std::move(flip_even));
    ll.push_layer(std::move(clear_left));
    ll.push_layer(std::move(flip_back));
    ll.push_layer(std::move(clear_right));
  }
  mark_stage("stage4-uncompute", stage4_first);

  // Same broadcast again removes the leaf copies (self-inverse).
  const int stage5_first = static_cast<int>(ll.size());
  {
    LayerList casts;
    for (int l = 1; l <= n; ++l) casts.par(broadcast_root_to_leaves(V[l]));
    ll.seq(casts);
  }
  mark_stage("stage5-restore", stage5_first);

  if (options.reset_root) {
    ll.add_layer({Gate::x(H.root())});
    mark_stage("reset-root", static_cast<int>(ll.size()) - 1);
  }

  // V[l] root holds bit l counted from the top, i.e. logical bit n - l.
  blk.logical.resize(n);
  for (int l = 1; l <= n; ++l) blk.logical[n - l] = V[l].root();
  blk.amplitude_root = H.root();

  add_tree_edges(blk.coupling, H);
  for (int l = 1; l <= n; ++l) {
    add_tree_edges(blk.coupling, V[l]);
    for (std::size_t j = 0; j < H.levels[l].size(); ++j)
      blk.coupling.add_edge(H.levels[l][j], V[l].leaves()[j]);
    for (std::size_t j = 0; j < H.levels[l - 1].size(); ++j) {
      blk.coupling.add_triple(V[l].leaves()[2 * j], H.levels[l - 1][j], H.levels[l][2 * j]);
      blk.coupling.add_triple(V[l].leaves()[2 * j + 1], H.levels[l - 1][j],
                              H.levels[l][2 * j + 1]);
    }
  }
  return blk;
}

CompiledDense compile_dense(const std::vector<cplx>& amplitudes,
                            const DensePrepOptions& options) {
  QubitRegistry registry;
  DenseBlock blk = build_dense_block(registry, "", amplitudes, options);

  CompiledDense out;
  out.logical = blk.logical;
  out.ancilla_expectation = BasisKey(registry.size());
  if (!options.reset_root) out.ancilla_expectation.set(blk.amplitude_root, true);
  out.circuit = finish_circuit(std::move(registry), std::move(blk.layers),
                               std::move(blk.stages), std::move(blk.coupling));
  return out;
}

}  // namespace qprep
