#pragma once

#include <string>
#include <vector>

#include "qprep/circuit.hpp"
#include "qprep/dense_prep.hpp"
#include "qprep/mat2.hpp"
#include "qprep/state.hpp"

namespace qprep {

/// A single-qubit gate word over the Hadamard / T alphabet.
///
/// `symbols` are applied left to right: 'H', 'T', and 't' (the T inverse,
/// emitted only by inverse_word). `unitary` caches the exact matrix product
/// of the symbols; `error` is the phase-invariant distance to whatever
/// target the word was synthesized for (0 for inverse words).
struct CliffordTWord {
  std::string symbols;
  Mat2 unitary;
  double error = 0.0;
};

/// Exact matrix product of a symbol string ('H' | 'T' | 't', left to right).
Mat2 word_unitary(const std::string& symbols);

/// Smallest {H,T} word within `eps_prime` of `target` (phase-invariant
/// operator distance), ties broken lexicographically. The search walks a
/// fixed-depth table, so budgets below its resolution floor (about 0.06 for
/// a worst-case target) throw BudgetUnreachableError rather than degrade.
/// `target` must be unitary (defect <= 1e-9). Thread-safe and memoized.
CliffordTWord approx_single_qubit(const Mat2& target, double eps_prime);

/// Word whose product with `w` is the exact identity: symbols reversed with
/// H kept self-inverse and T replaced by the primitive 't'. No approximation
/// is involved, so `error` is 0.
CliffordTWord inverse_word(const CliffordTWord& w);

/// Accuracy split used by compile_dense_clifford_t for an n-qubit target:
/// each lowered partial swap gets eps_prime = eps / (2n) so the rotation
/// stage stays within n * eps_prime = eps / 2, and the phase stage gets the
/// other half outright (each basis branch drives exactly one phase pair).
struct ErrorBudget {
  double eps = 0.0;
  double eps_prime = 0.0;
  double eps_phase = 0.0;
};

ErrorBudget split_error_budget(double eps, int n);

/// Replaces PartialSwap(theta, a, b) with [word on b; CNOT(a;b); exact
/// inverse word on b; CNOT(a;b); CNOT(b;a)]. The inverse word is exact, so
/// |00> is fixed and |01> maps to |11> exactly for any word; the word is
/// chosen so the |10> image stays within eps_prime of
/// sin(theta)|01> + cos(theta)|10> in the two-norm. Qualification is by
/// that delivered error, not by plain operator distance, and falls back to
/// a two-factor pair search; budgets below about 0.02 can still exhaust it
/// and throw BudgetUnreachableError.
LayerList lower_partial_swap(double theta, QubitId a, QubitId b, double eps_prime);

/// Replaces Ph(phi, leaf) with [word on ancilla; CNOT(leaf; ancilla); exact
/// inverse word; CNOT(leaf; ancilla)] against an ancilla prepared in |1>.
/// The leaf-0 branch is exactly identity; the leaf-1 branch multiplies the
/// ancilla by a phase within eps_half of e^{i phi} in the two-norm. phi = 0
/// lowers to the empty word and is exact.
LayerList lower_phase_pair(double phi, QubitId leaf, QubitId ancilla, double eps_half);

/// CCNOT(a, b; t) as the standard 7-T network, one gate per layer. Exact,
/// including phases.
LayerList lower_toffoli(QubitId a, QubitId b, QubitId t);

struct CompiledCliffordT {
  Circuit circuit;
  std::vector<QubitId> logical;
  /// Expected final value of every non-logical qubit (phase-pair ancillas
  /// end in |1>, everything else in |0>). This is the dominant return
  /// pattern, not an exact guarantee: approximate words leave residual
  /// off-pattern mass of order eps^2, counted inside the accuracy budget,
  /// so extract_logical reports clean only for exactly-compiled targets.
  BasisKey ancilla_expectation;
  ErrorBudget budget;
};

/// compile_dense, then every gate outside {X, CNOT, SWAP} rewritten over the
/// discrete alphabet {H, T, T-inverse, X, CNOT, SWAP, ancilla prep}: partial
/// swaps via lower_partial_swap at eps/(2n), leaf phases via
/// lower_phase_pair at eps/2 against per-leaf ancillas, CCNOTs via
/// lower_toffoli. Stage names carry over with remapped spans. The output
/// state is within `eps` of the exact preparation in the two-norm.
CompiledCliffordT compile_dense_clifford_t(const std::vector<cplx>& amplitudes,
                                           double eps);

}  // namespace qprep
