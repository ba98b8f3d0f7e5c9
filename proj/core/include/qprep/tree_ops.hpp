#pragma once

#include <string>
#include <vector>

#include "qprep/circuit.hpp"

namespace qprep {

/// Complete binary tree of qubits: levels[m] has 2^m wires, levels[0] is the
/// root, levels.back() are the leaves. Node (m, j) has children (m+1, 2j) and
/// (m+1, 2j+1).
struct TreeWires {
  std::vector<std::vector<QubitId>> levels;

  int height() const { return static_cast<int>(levels.size()) - 1; }
  QubitId root() const { return levels[0][0]; }
  const std::vector<QubitId>& leaves() const { return levels.back(); }
};

/// Allocates a height-`height` tree with roles `<prefix>[m][j]`.
TreeWires allocate_tree(QubitRegistry& registry, const std::string& prefix, int height,
                        int root_init = 0);

/// Same shape, but the root is an existing qubit; only levels 1..height are
/// allocated (roles `<prefix>[m][j]`). Used to hang fan-out or index trees
/// off a register bit.
TreeWires allocate_tree_under(QubitRegistry& registry, const std::string& prefix, int height,
                              QubitId root);

/// XORs the leaf values into the root while restoring every interior node.
/// On a promise that at most one leaf is set (others 0, interiors 0), the
/// root flips exactly when some leaf is set. Depth 4*height - 2.
///
/// Two CNOT sweeps, each split into even/odd half-layers so supports stay
/// disjoint: first bottom-up accumulation (levels height..1), then interior
/// cleanup which must run top-down (levels 2..height ascending) so each
/// level is cleared against its still-intact children.
LayerList collect_parity_to_root(const TreeWires& t);

/// Copies the root value onto every leaf, leaving interiors zero:
/// (z, vac) -> root z, leaves all z. Self-inverse on that image, so applying
/// it again uncomputes the copies. Depth 4*height - 2.
///
/// First sweep copies downward (levels 0..height-1); the cleanup sweep must
/// run bottom-up (levels height-2..0 descending) so each interior level is
/// cleared while its parent still holds z.
LayerList broadcast_root_to_leaves(const TreeWires& t);

/// Registers every parent-child pair as an allowed edge.
void add_tree_edges(CouplingGraph& g, const TreeWires& t);

}  // namespace qprep
