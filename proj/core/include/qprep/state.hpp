#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qprep/circuit.hpp"

namespace qprep {

/// Fixed-width bit vector keyed by qubit id; bit i belongs to qubit id i.
/// Ordering is big-integer numeric (dump lines therefore sort like the
/// printed bitstrings, which show the highest qubit id leftmost).
class BasisKey {
 public:
  BasisKey() = default;
  explicit BasisKey(std::size_t nbits)
      : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

  std::size_t bit_count() const { return nbits_; }

  bool get(QubitId q) const { return (w_[q.v >> 6] >> (q.v & 63)) & 1u; }
  void set(QubitId q, bool v) {
    std::uint64_t mask = std::uint64_t(1) << (q.v & 63);
    if (v)
      w_[q.v >> 6] |= mask;
    else
      w_[q.v >> 6] &= ~mask;
  }
  void flip(QubitId q) { w_[q.v >> 6] ^= std::uint64_t(1) << (q.v & 63); }

  /// Highest qubit id leftmost, so the string reads as a binary numeral.
  std::string to_string() const {
    std::string s(nbits_, '0');
    for (std::size_t i = 0; i < nbits_; ++i)
      if (get(QubitId(static_cast<std::uint32_t>(i)))) s[nbits_ - 1 - i] = '1';
    return s;
  }

  auto operator<=>(const BasisKey& o) const {
    for (std::size_t i = w_.size(); i-- > 0;)
      if (auto c = w_[i] <=> o.w_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }
  bool operator==(const BasisKey& o) const { return nbits_ == o.nbits_ && w_ == o.w_; }

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> w_;
};

/// Sparse wavefunction over computational basis keys. Gates never
/// renormalize; terms below the prune threshold are dropped on the fly.
class SparseState {
 public:
  static constexpr double kPruneThreshold = 1e-14;

  SparseState() = default;
  explicit SparseState(std::size_t qubit_count) : qubits_(qubit_count) {}

  /// State |pattern> given by the registry's initial bits.
  static SparseState initial(const QubitRegistry& registry);

  /// Uniform helper for tests: single term with amplitude 1.
  static SparseState basis(std::size_t qubit_count, const BasisKey& key);

  std::size_t qubit_count() const { return qubits_; }
  std::size_t term_count() const { return amp_.size(); }
  const std::map<BasisKey, cplx>& terms() const { return amp_; }

  void accumulate(const BasisKey& key, cplx amplitude);
  double norm_squared() const;

  /// Applies one gate (measurement kinds are rejected; see
  /// run_with_measurements). Exposed mostly for unit tests; whole circuits
  /// go through apply_circuit which works layer by layer.
  void apply_gate(const Gate& g);

  void apply_layer(const Layer& layer);

  bool operator==(const SparseState&) const = default;

 private:
  std::size_t qubits_ = 0;
  std::map<BasisKey, cplx> amp_;
};

/// Called after each layer; layer_index is 0-based.
using LayerObserver = std::function<void(int layer_index, const SparseState&)>;

/// Runs every layer of a measurement-free circuit on the registry's initial
/// state (or on `start` when given).
SparseState apply_circuit(const Circuit& c, const LayerObserver& observe = {},
                          std::optional<SparseState> start = std::nullopt);

/// |<a|b>|^2. Requires matching qubit counts.
double fidelity(const SparseState& a, const SparseState& b);

struct LogicalExtract {
  SparseState state;   // reduced onto the logical qubits, in list order
  bool clean = false;  // true iff every stored term matches expect_ancilla
};

/// Projects onto the logical qubits (bit i of the reduced key = logical[i]).
/// clean is true iff every non-logical bit of every stored term equals the
/// corresponding bit of expect_ancilla.
LogicalExtract extract_logical(const SparseState& s, const std::vector<QubitId>& logical,
                               const BasisKey& expect_ancilla);

/// Expected ancilla pattern = the registry's initial bits.
BasisKey initial_pattern(const QubitRegistry& registry);

struct MeasurementBranch {
  std::map<int, int> records;  // record id -> outcome bit
  double probability = 0.0;
  SparseState state;  // post-measurement; measured qubits reset to |0>
};

struct OutcomePolicy {
  /// Empty map = enumerate every nonzero-probability outcome; otherwise
  /// every measurement's record id must be present and is forced.
  std::map<int, int> fixed;
};

/// Simulates a circuit that may contain MeasureZ/MeasureX and classically
/// controlled gates. Measured qubits collapse and are reset to |0> so that
/// branch states stay comparable. Branches are ordered by their outcome
/// bits in record order; probabilities sum to 1 for enumerate-all.
std::vector<MeasurementBranch> run_with_measurements(const Circuit& c,
                                                     const OutcomePolicy& policy = {});

struct CnotSite {
  int layer = 0;
  int gate_index = 0;
};

/// Rewrites the chosen CNOT gates through the measurement-based gadget:
/// a Bell pair (|01>+|10>)/sqrt(2) is prepared on two fresh ancillas, the
/// control interacts with one half and the target with the other, both
/// halves are measured (Z on the control side, X on the target side), and
/// the residue is repaired classically. For this Bell convention the
/// correction table, fixed by requiring every branch to equal CNOT, is
///   X on target iff the Z outcome is 0   (emitted as X then record-X)
///   Z on control iff the X outcome is 1.
Circuit expand_teleported_cnot(const Circuit& c, const std::vector<CnotSite>& sites);

}  // namespace qprep
