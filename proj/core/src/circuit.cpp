#include "qprep/circuit.hpp"

#include <algorithm>
#include <map>

namespace qprep {

const char* gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::X: return "X";
    case GateKind::H: return "H";
    case GateKind::T: return "T";
    case GateKind::Tdg: return "TDG";
    case GateKind::Ry: return "RY";
    case GateKind::Ph: return "PH";
    case GateKind::PartialSwap: return "PSWAP";
    case GateKind::Cnot: return "CNOT";
    case GateKind::Swap: return "SWAP";
    case GateKind::Ccnot: return "CCNOT";
    case GateKind::Cswap: return "CSWAP";
    case GateKind::Cu: return "CU";
    case GateKind::MeasureZ: return "MEASZ";
    case GateKind::MeasureX: return "MEASX";
    case GateKind::ClassicalX: return "CLX";
    case GateKind::ClassicalZ: return "CLZ";
  }
  return "?";
}

int CouplingGraph::max_degree() const {
  std::map<QubitId, int> deg;
  for (const auto& [a, b] : edges_) {
    ++deg[a];
    ++deg[b];
  }
  int worst = 0;
  for (const auto& [q, d] : deg) worst = std::max(worst, d);
  return worst;
}

static void check_gate(const QubitRegistry& registry, const Gate& g) {
  if (static_cast<int>(g.qubits.size()) != arity(g.kind))
    throw SpecError(std::string("wrong operand count for ") + gate_kind_name(g.kind));
  for (QubitId q : g.qubits)
    if (q.v >= registry.size())
      throw UnknownQubitError(std::string(gate_kind_name(g.kind)) +
                              " references qubit id " + std::to_string(q.v) +
                              " outside registry of size " + std::to_string(registry.size()));
  if (g.kind == GateKind::Cu) {
    if (!g.unitary) throw SpecError("CU gate without unitary payload");
    if (g.unitary->unitarity_defect() > 1e-9) throw SpecError("CU payload is not unitary");
  }
  if ((is_measurement(g.kind) || is_classically_controlled(g.kind)) && g.record < 0)
    throw SpecError(std::string(gate_kind_name(g.kind)) + " requires a record id");
}

void check_well_formed(const QubitRegistry& registry, const std::vector<Layer>& layers) {
  std::vector<int> seen(registry.size(), -1);
  for (std::size_t li = 0; li < layers.size(); ++li) {
    for (const Gate& g : layers[li].gates) {
      check_gate(registry, g);
      for (QubitId q : g.qubits) {
        if (seen[q.v] == static_cast<int>(li))
          throw OverlappingSupportError("layer " + std::to_string(li) +
                                        " touches qubit " + std::to_string(q.v) + " twice");
        seen[q.v] = static_cast<int>(li);
      }
    }
  }
}

Circuit finish_circuit(QubitRegistry registry, LayerList layers,
                       std::vector<StageSpan> stages,
                       std::optional<CouplingGraph> coupling) {
  Circuit c;
  c.registry = std::move(registry);
  c.layers = layers.take();
  c.stages = std::move(stages);
  c.coupling = std::move(coupling);
  check_well_formed(c.registry, c.layers);
  return c;
}

Circuit append(const Circuit& c, const std::vector<Gate>& gates, AppendPolicy policy) {
  Circuit out = c;
  for (const Gate& g : gates) check_gate(out.registry, g);

  if (policy == AppendPolicy::NewLayer) {
    Layer l;
    l.gates = gates;
    out.layers.push_back(std::move(l));
    check_well_formed(out.registry, out.layers);
    return out;
  }

  // GreedyPack: per gate, the earliest layer after the last layer that
  // touches any of its qubits (gates of this batch are placed in order).
  std::vector<int> last_busy(out.registry.size(), -1);
  for (std::size_t li = 0; li < out.layers.size(); ++li)
    for (const Gate& g : out.layers[li].gates)
      for (QubitId q : g.qubits) last_busy[q.v] = static_cast<int>(li);

  for (const Gate& g : gates) {
    int slot = 0;
    for (QubitId q : g.qubits) slot = std::max(slot, last_busy[q.v] + 1);
    if (slot >= static_cast<int>(out.layers.size())) out.layers.resize(slot + 1);
    out.layers[slot].gates.push_back(g);
    for (QubitId q : g.qubits) last_busy[q.v] = slot;
  }
  check_well_formed(out.registry, out.layers);
  return out;
}

std::vector<ConnectivityViolation> validate_connectivity(const Circuit& c) {
  if (!c.coupling) throw SpecError("circuit carries no coupling graph");
  const CouplingGraph& g = *c.coupling;
  std::vector<ConnectivityViolation> out;
  for (std::size_t li = 0; li < c.layers.size(); ++li) {
    const auto& gates = c.layers[li].gates;
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
      const Gate& gate = gates[gi];
      if (gate.qubits.size() == 2) {
        if (!g.has_edge(gate.qubits[0], gate.qubits[1]))
          out.push_back({static_cast<int>(li), static_cast<int>(gi),
                         std::string(gate_kind_name(gate.kind)) + " support is not an edge"});
      } else if (gate.qubits.size() == 3) {
        QubitId a = gate.qubits[0], b = gate.qubits[1], q = gate.qubits[2];
        bool ok = g.has_triple(a, b, q) ||
                  (g.has_edge(a, b) && g.has_edge(b, q) && g.has_edge(a, q));
        if (!ok)
          out.push_back({static_cast<int>(li), static_cast<int>(gi),
                         std::string(gate_kind_name(gate.kind)) +
                             " support is neither a registered cell nor a clique"});
      }
    }
  }
  return out;
}

std::vector<Gate> ccnot_sequence(QubitId a, QubitId b, QubitId t) {
  return {
      Gate::h(t),        Gate::cnot(b, t), Gate::tdg(t),     Gate::cnot(a, t),
      Gate::t(t),        Gate::cnot(b, t), Gate::tdg(t),     Gate::cnot(a, t),
      Gate::t(b),        Gate::t(t),       Gate::h(t),       Gate::cnot(a, b),
      Gate::t(a),        Gate::tdg(b),     Gate::cnot(a, b),
  };
}

Circuit decompose_three_qubit(const Circuit& c) {
  Circuit out;
  out.registry = c.registry;
  out.coupling = c.coupling;
  for (const Layer& layer : c.layers) {
    std::vector<Gate> passthrough;
    std::vector<std::vector<Gate>> expansions;
    for (const Gate& g : layer.gates) {
      if (g.kind == GateKind::Ccnot) {
        expansions.push_back(ccnot_sequence(g.qubits[0], g.qubits[1], g.qubits[2]));
      } else if (g.kind == GateKind::Cswap) {
        // CSWAP(c;a,b) = CNOT(b;a) CCNOT(c,a;b) CNOT(b;a)
        QubitId ctl = g.qubits[0], a = g.qubits[1], b = g.qubits[2];
        std::vector<Gate> seq;
        seq.push_back(Gate::cnot(b, a));
        for (Gate& inner : ccnot_sequence(ctl, a, b)) seq.push_back(std::move(inner));
        seq.push_back(Gate::cnot(b, a));
        expansions.push_back(std::move(seq));
      } else {
        passthrough.push_back(g);
      }
    }
    if (expansions.empty()) {
      out.layers.push_back(layer);
      continue;
    }
    if (!passthrough.empty()) {
      Layer l;
      l.gates = std::move(passthrough);
      out.layers.push_back(std::move(l));
    }
    std::size_t longest = 0;
    for (const auto& e : expansions) longest = std::max(longest, e.size());
    for (std::size_t step = 0; step < longest; ++step) {
      Layer l;
      for (const auto& e : expansions)
        if (step < e.size()) l.gates.push_back(e[step]);
      out.layers.push_back(std::move(l));
    }
  }
  // Stage spans do not survive re-layering.
  check_well_formed(out.registry, out.layers);
  return out;
}

static void invert_gate_into(const Gate& g, std::vector<std::vector<Gate>>& steps) {
  switch (g.kind) {
    case GateKind::X:
    case GateKind::H:
    case GateKind::Cnot:
    case GateKind::Swap:
    case GateKind::Ccnot:
    case GateKind::Cswap:
      steps.push_back({g});
      return;
    case GateKind::T:
      steps.push_back({Gate::tdg(g.qubits[0])});
      return;
    case GateKind::Tdg:
      steps.push_back({Gate::t(g.qubits[0])});
      return;
    case GateKind::Ry:
      steps.push_back({Gate::ry(-g.theta, g.qubits[0])});
      return;
    case GateKind::Ph:
      steps.push_back({Gate::ph(-g.theta, g.qubits[0])});
      return;
    case GateKind::Cu:
      steps.push_back({Gate::cu(g.qubits[0], g.qubits[1], g.unitary->adjoint())});
      return;
    case GateKind::PartialSwap: {
      QubitId a = g.qubits[0], b = g.qubits[1];
      steps.push_back({Gate::cnot(b, a)});
      steps.push_back({Gate::cnot(a, b)});
      steps.push_back({Gate::ry(g.theta, b)});
      steps.push_back({Gate::cnot(a, b)});
      steps.push_back({Gate::ry(-g.theta, b)});
      return;
    }
    case GateKind::MeasureZ:
    case GateKind::MeasureX:
    case GateKind::ClassicalX:
    case GateKind::ClassicalZ:
      throw UnsupportedGateError(std::string("cannot invert ") + gate_kind_name(g.kind));
  }
}

Circuit inverse_circuit(const Circuit& c) {
  Circuit out;
  out.registry = c.registry;
  out.coupling = c.coupling;
  for (auto layer = c.layers.rbegin(); layer != c.layers.rend(); ++layer) {
    // Per-gate inverse expansions within one layer run zip-parallel.
    std::vector<std::vector<Gate>> per_gate;
    std::size_t longest = 0;
    for (const Gate& g : layer->gates) {
      std::vector<std::vector<Gate>> steps;
      invert_gate_into(g, steps);
      std::vector<Gate> flat;
      for (auto& s : steps)
        for (Gate& x : s) flat.push_back(std::move(x));
      longest = std::max(longest, flat.size());
      per_gate.push_back(std::move(flat));
    }
    for (std::size_t step = 0; step < longest; ++step) {
      Layer l;
      for (const auto& seq : per_gate)
        if (step < seq.size()) l.gates.push_back(seq[step]);
      out.layers.push_back(std::move(l));
    }
  }
  check_well_formed(out.registry, out.layers);
  return out;
}

}  // namespace qprep
