#pragma once

#include <string>
#include <vector>

#include "qprep/circuit.hpp"
#include "qprep/state.hpp"
#include "qprep/tree_ops.hpp"

namespace qprep {

/// Branching angles and leaf phases of an amplitude vector of length 2^n.
///
/// b[n][k] = |a_k| and b[l][j] = hypot(b[l+1][2j], b[l+1][2j+1]) define the
/// magnitude tree; theta[l][j] = arccos(b[l][2j] / b[l-1][j]) in [0, pi/2]
/// splits the mass of node j at level l-1 between its children (cos -> left,
/// sin -> right). A zero parent leaves the angle at 0.
struct AngleTree {
  int n = 0;
  std::vector<std::vector<double>> theta;  // theta[l] for l in [1, n], size 2^(l-1)
  std::vector<double> phase;               // arg(a_k), size 2^n
};

AngleTree compute_angle_tree(const std::vector<cplx>& amplitudes);

struct DensePrepOptions {
  /// Return the amplitude-tree root to |0> with a final X so every ancilla
  /// ends clean. Off, the root ends in |1> (it started there).
  bool reset_root = true;
};

/// A dense-preparation block wired into a caller-owned registry, ready to be
/// composed with other blocks before the enclosing circuit is finished.
struct DenseBlock {
  LayerList layers;
  std::vector<StageSpan> stages;   // layer indices relative to this block
  std::vector<QubitId> logical;    // logical[i] carries bit i of the index
  QubitId amplitude_root;          // tree root; |1> at the start of the block
  CouplingGraph coupling;          // edges and cells this block relies on
};

/// Emits the preparation of sum_k a_k |k> onto `logical`, using an amplitude
/// tree plus one parity tree per index bit, all allocated under
/// `prefix + "H"` / `prefix + "V[l]"`. Requires |amplitudes| = 2^n, n >= 1,
/// unit norm (1e-9). Every ancilla returns to its initial value; the tree
/// root ends |0> or |1> per options.reset_root.
DenseBlock build_dense_block(QubitRegistry& registry, const std::string& prefix,
                             const std::vector<cplx>& amplitudes,
                             const DensePrepOptions& options = {});

struct CompiledDense {
  Circuit circuit;
  std::vector<QubitId> logical;
  /// Expected final value of every non-logical qubit (logical bits are 0
  /// here); feed to extract_logical.
  BasisKey ancilla_expectation;
};

/// Standalone wrapper around build_dense_block with a fresh registry.
CompiledDense compile_dense(const std::vector<cplx>& amplitudes,
                            const DensePrepOptions& options = {});

}  // namespace qprep
