#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qprep/circuit.hpp"
#include "qprep/memory_oracles.hpp"
#include "qprep/state.hpp"

namespace qprep {

/// Target of sparse preparation: sum_k amp_k |q_k> on n qubits.
struct SparseStateSpec {
  int n = 0;
  std::vector<std::pair<std::uint64_t, cplx>> entries;  // (basis index, amplitude)
};

/// n in [1, 60], indices below 2^n and distinct (DuplicateIndicesError),
/// squared amplitudes summing to 1 within 1e-12.
void validate_sparse_spec(const SparseStateSpec& spec);

struct CompiledSparse {
  Circuit circuit;
  /// The n-qubit output register (roles `logical[i]`, bit i of the index).
  std::vector<QubitId> logical;
  /// The erased label register; empty when the basis-state shortcut fired.
  std::vector<QubitId> label_register;
  /// Expected final value of every non-logical qubit (logical bits are 0
  /// here); feed to extract_logical.
  BasisKey ancilla_expectation;
};

/// Prepares a d-sparse state in three stages: load the amplitudes onto a
/// ceil(log2 d)-qubit label register ("label-amplitudes"), copy the stored
/// index of each label into the output register through a product-unitary
/// select of X/identity columns ("write-words"), then erase the label
/// register by XORing each index's label back into it through a sparse
/// boolean select ("erase-label") — label k cancels against itself, leaving
/// the labels |0> on every branch.
///
/// Entries with amplitude exactly zero are stripped first. A single
/// surviving entry shortcuts to one layer of X gates (its phase is global
/// and is dropped); zero survivors raise ZeroAmplitudeOnlyEntriesError.
/// Label values past the last entry pad the amplitude vector with zeros and
/// generate no select gates. Simulated states never hold more than 2d terms.
CompiledSparse compile_sparse(const SparseStateSpec& spec,
                              RouteSchedule schedule = RouteSchedule::Pipelined);

/// Keeps the d largest-magnitude amplitudes of a dense vector (ties broken
/// toward the lower index), zeroes the rest, renormalizes, and returns the
/// spec plus the dropped weight eps. The prepared sparse state then matches
/// the original dense state with fidelity exactly 1 - eps, and no other
/// d-subset does better. Requires |amplitudes| = 2^n (n >= 1, unit norm
/// within 1e-9) and 1 <= d <= 2^n; a single kept entry is padded with one
/// zero-amplitude entry so the spec stays two entries wide.
std::pair<SparseStateSpec, double> truncate_to_sparse(const std::vector<cplx>& amplitudes,
                                                      int d);

}  // namespace qprep
