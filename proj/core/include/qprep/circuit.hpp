#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qprep/gate.hpp"
#include "qprep/registry.hpp"

namespace qprep {

/// One depth step: gates with pairwise disjoint qubit support.
struct Layer {
  std::vector<Gate> gates;
  bool operator==(const Layer&) const = default;
};

/// Named half-open ... closed span of layers [first, last], used by compilers
/// to expose where each pseudo-code stage landed. Survives text round-trips.
struct StageSpan {
  std::string name;
  int first = 0;
  int last = -1;  // inclusive; first > last marks an empty span
  bool operator==(const StageSpan&) const = default;
};

/// Hardware adjacency: allowed 2-qubit edges plus registered 3-qubit cells
/// (router and uncompute triples, whose internal pairs are implicitly
/// allowed for the 3-qubit gates acting on exactly that cell).
class CouplingGraph {
 public:
  void add_edge(QubitId a, QubitId b) {
    if (a == b) throw SpecError("self edge in coupling graph");
    edges_.insert(norm_pair(a, b));
  }
  void add_triple(QubitId a, QubitId b, QubitId c) {
    std::array<QubitId, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    if (t[0] == t[1] || t[1] == t[2]) throw SpecError("repeated qubit in coupling cell");
    triples_.insert(t);
  }
  bool has_edge(QubitId a, QubitId b) const { return edges_.count(norm_pair(a, b)) != 0; }
  bool has_triple(QubitId a, QubitId b, QubitId c) const {
    std::array<QubitId, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    return triples_.count(t) != 0;
  }
  std::size_t edge_count() const { return edges_.size(); }

  /// Max number of distinct edge neighbours over all qubits (cells excluded).
  int max_degree() const;

 private:
  static std::pair<QubitId, QubitId> norm_pair(QubitId a, QubitId b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
  std::set<std::pair<QubitId, QubitId>> edges_;
  std::set<std::array<QubitId, 3>> triples_;
};

enum class AppendPolicy {
  NewLayer,    // always open a fresh layer
  GreedyPack,  // earliest layer whose occupied supports stay disjoint
};

struct Circuit {
  QubitRegistry registry;
  std::vector<Layer> layers;
  std::vector<StageSpan> stages;
  std::optional<CouplingGraph> coupling;  // not serialized

  int depth() const { return static_cast<int>(layers.size()); }
  std::size_t qubit_count() const { return registry.size(); }
  std::size_t gate_count() const {
    std::size_t n = 0;
    for (const Layer& l : layers) n += l.gates.size();
    return n;
  }

  /// Equality over the serializable parts (registry, layers, stages).
  bool operator==(const Circuit& o) const {
    return registry == o.registry && layers == o.layers && stages == o.stages;
  }
};

/// Ordered layers under construction; the shared currency of all compilers.
/// seq() concatenates in time; par() zip-merges two blocks so they start on
/// the same layer (their gate supports must be disjoint layer by layer).
class LayerList {
 public:
  LayerList() = default;

  void new_layer() { layers_.emplace_back(); }
  void push_layer(Layer l) { layers_.push_back(std::move(l)); }

  /// Adds to the last layer (opening one if empty).
  void add(Gate g) {
    if (layers_.empty()) layers_.emplace_back();
    layers_.back().gates.push_back(std::move(g));
  }
  /// Opens a fresh layer holding exactly these gates.
  void add_layer(std::vector<Gate> gates) {
    Layer l;
    l.gates = std::move(gates);
    layers_.push_back(std::move(l));
  }

  void seq(const LayerList& other) {
    layers_.insert(layers_.end(), other.layers_.begin(), other.layers_.end());
  }

  void par(const LayerList& other) {
    if (other.layers_.size() > layers_.size()) layers_.resize(other.layers_.size());
    for (std::size_t i = 0; i < other.layers_.size(); ++i) {
      Layer& dst = layers_[i];
      dst.gates.insert(dst.gates.end(), other.layers_[i].gates.begin(),
                       other.layers_[i].gates.end());
    }
  }

  std::size_t size() const { return layers_.size(); }
  bool empty() const { return layers_.empty(); }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>&& take() { return std::move(layers_); }

 private:
  std::vector<Layer> layers_;
};

/// Validates qubit ranges and per-layer support disjointness; throws
/// UnknownQubitError / OverlappingSupportError. Called by finish_circuit.
void check_well_formed(const QubitRegistry& registry, const std::vector<Layer>& layers);

/// Builds a checked circuit from a finished LayerList.
Circuit finish_circuit(QubitRegistry registry, LayerList layers,
                       std::vector<StageSpan> stages = {},
                       std::optional<CouplingGraph> coupling = std::nullopt);

/// Pure append returning a new circuit; `gates` form one parallel group.
Circuit append(const Circuit& c, const std::vector<Gate>& gates, AppendPolicy policy);

struct ConnectivityViolation {
  int layer = 0;
  int gate_index = 0;
  std::string reason;
};

/// Every 2-qubit gate must sit on an allowed edge; every 3-qubit gate on a
/// registered cell or on three pairwise-allowed edges. Throws SpecError if
/// the circuit carries no coupling graph.
std::vector<ConnectivityViolation> validate_connectivity(const Circuit& c);

/// Standard 7-T realization of CCNOT(a,b;t) as a flat gate sequence, exact
/// including phases.
std::vector<Gate> ccnot_sequence(QubitId a, QubitId b, QubitId t);

/// Rewrites CCNOT via the standard 7-T-gate identity and CSWAP via
/// CNOT + CCNOT + CNOT (the CCNOT again lowered), preserving the unitary.
/// Expansions of gates from one layer run zip-parallel.
Circuit decompose_three_qubit(const Circuit& c);

/// Layer-reversed, gate-inverted circuit. PartialSwap(t) inverts into the
/// exact 5-gate identity sequence [CNOT(b;a), CNOT(a;b), Ry(t,b), CNOT(a;b),
/// Ry(-t,b)]; measurements and classical controls are not invertible.
Circuit inverse_circuit(const Circuit& c);

}  // namespace qprep
