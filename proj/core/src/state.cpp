#include "qprep/state.hpp"

#include <algorithm>
#include <cmath>

namespace qprep {

SparseState SparseState::initial(const QubitRegistry& registry) {
  SparseState s(registry.size());
  s.amp_.emplace(initial_pattern(registry), cplx(1.0));
  return s;
}

SparseState SparseState::basis(std::size_t qubit_count, const BasisKey& key) {
  SparseState s(qubit_count);
  s.amp_.emplace(key, cplx(1.0));
  return s;
}

void SparseState::accumulate(const BasisKey& key, cplx amplitude) {
  auto [it, fresh] = amp_.try_emplace(key, amplitude);
  if (!fresh) {
    it->second += amplitude;
    if (std::abs(it->second) < kPruneThreshold) amp_.erase(it);
    return;
  }
  if (std::abs(it->second) < kPruneThreshold) amp_.erase(it);
}

double SparseState::norm_squared() const {
  double n = 0;
  for (const auto& [k, a] : amp_) n += std::norm(a);
  return n;
}

namespace {

// Work item while streaming one input term through a layer's gates.
struct Branch {
  BasisKey key;
  cplx amp;
};

void apply_gate_to_branches(const Gate& g, std::vector<Branch>& branches) {
  const auto& q = g.qubits;
  switch (g.kind) {
    case GateKind::X:
      for (Branch& b : branches) b.key.flip(q[0]);
      return;
    case GateKind::T:
      for (Branch& b : branches)
        if (b.key.get(q[0])) b.amp *= std::polar(1.0, M_PI / 4);
      return;
    case GateKind::Tdg:
      for (Branch& b : branches)
        if (b.key.get(q[0])) b.amp *= std::polar(1.0, -M_PI / 4);
      return;
    case GateKind::Ph:
      for (Branch& b : branches)
        if (b.key.get(q[0])) b.amp *= std::polar(1.0, g.theta);
      return;
    case GateKind::Cnot:
      for (Branch& b : branches)
        if (b.key.get(q[0])) b.key.flip(q[1]);
      return;
    case GateKind::Swap:
      for (Branch& b : branches) {
        bool x = b.key.get(q[0]), y = b.key.get(q[1]);
        if (x != y) {
          b.key.set(q[0], y);
          b.key.set(q[1], x);
        }
      }
      return;
    case GateKind::Ccnot:
      for (Branch& b : branches)
        if (b.key.get(q[0]) && b.key.get(q[1])) b.key.flip(q[2]);
      return;
    case GateKind::Cswap:
      for (Branch& b : branches)
        if (b.key.get(q[0])) {
          bool x = b.key.get(q[1]), y = b.key.get(q[2]);
          if (x != y) {
            b.key.set(q[1], y);
            b.key.set(q[2], x);
          }
        }
      return;
    case GateKind::H: {
      const double s = 1.0 / std::sqrt(2.0);
      std::size_t n = branches.size();
      for (std::size_t i = 0; i < n; ++i) {
        Branch& b = branches[i];
        Branch other{b.key, b.amp * s};
        other.key.flip(q[0]);
        if (b.key.get(q[0])) b.amp *= -s;  // |1> -> (|0> - |1>)/sqrt 2
        else b.amp *= s;
        branches.push_back(std::move(other));
      }
      return;
    }
    case GateKind::Ry: {
      const double c = std::cos(g.theta / 2), s = std::sin(g.theta / 2);
      std::size_t n = branches.size();
      for (std::size_t i = 0; i < n; ++i) {
        Branch& b = branches[i];
        Branch other{b.key, b.amp};
        other.key.flip(q[0]);
        if (b.key.get(q[0])) {  // |1> -> -sin|0> + cos|1>
          b.amp *= c;
          other.amp *= -s;
        } else {  // |0> -> cos|0> + sin|1>
          b.amp *= c;
          other.amp *= s;
        }
        branches.push_back(std::move(other));
      }
      return;
    }
    case GateKind::Cu: {
      const Mat2& u = *g.unitary;
      std::size_t n = branches.size();
      for (std::size_t i = 0; i < n; ++i) {
        Branch& b = branches[i];
        if (!b.key.get(q[0])) continue;
        Branch other{b.key, b.amp};
        other.key.flip(q[1]);
        if (b.key.get(q[1])) {  // column |1>
          b.amp *= u.at(1, 1);
          other.amp *= u.at(0, 1);
        } else {
          b.amp *= u.at(0, 0);
          other.amp *= u.at(1, 0);
        }
        branches.push_back(std::move(other));
      }
      return;
    }
    case GateKind::PartialSwap: {
      // |00> -> |00>; |01> -> |11>; |10> -> sin|01> + cos|10>;
      // |11> -> cos|01> - sin|10>.  Operands (a, b) label the pair |ab>.
      const double c = std::cos(g.theta), s = std::sin(g.theta);
      std::size_t n = branches.size();
      for (std::size_t i = 0; i < n; ++i) {
        Branch& b = branches[i];
        bool x = b.key.get(q[0]), y = b.key.get(q[1]);
        if (!x && !y) continue;
        if (!x && y) {  // |01> -> |11>
          b.key.set(q[0], true);
          continue;
        }
        if (x && !y) {  // |10> -> sin|01> + cos|10>
          Branch other{b.key, b.amp * s};
          other.key.set(q[0], false);
          other.key.set(q[1], true);
          b.amp *= c;
          branches.push_back(std::move(other));
          continue;
        }
        // |11> -> cos|01> - sin|10>
        Branch other{b.key, b.amp * c};
        other.key.set(q[0], false);
        b.amp *= -s;
        b.key.set(q[1], false);
        branches.push_back(std::move(other));
      }
      return;
    }
    case GateKind::MeasureZ:
    case GateKind::MeasureX:
    case GateKind::ClassicalX:
    case GateKind::ClassicalZ:
      throw UnsupportedGateError(
          std::string(gate_kind_name(g.kind)) +
          " requires run_with_measurements, not unitary application");
  }
}

}  // namespace

void SparseState::apply_layer(const Layer& layer) {
  std::map<BasisKey, cplx> next;
  std::vector<Branch> branches;
  for (const auto& [key, amp] : amp_) {
    branches.clear();
    branches.push_back(Branch{key, amp});
    for (const Gate& g : layer.gates) apply_gate_to_branches(g, branches);
    for (Branch& b : branches) {
      if (std::abs(b.amp) < kPruneThreshold) continue;
      auto [it, fresh] = next.try_emplace(std::move(b.key), b.amp);
      if (!fresh) {
        it->second += b.amp;
        if (std::abs(it->second) < kPruneThreshold) next.erase(it);
      }
    }
  }
  amp_ = std::move(next);
}

void SparseState::apply_gate(const Gate& g) {
  Layer l;
  l.gates.push_back(g);
  apply_layer(l);
}

SparseState apply_circuit(const Circuit& c, const LayerObserver& observe,
                          std::optional<SparseState> start) {
  SparseState s = start ? std::move(*start) : SparseState::initial(c.registry);
  if (s.qubit_count() != c.registry.size())
    throw SpecError("start state qubit count does not match circuit registry");
  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    s.apply_layer(c.layers[i]);
    if (observe) observe(static_cast<int>(i), s);
  }
  return s;
}

double fidelity(const SparseState& a, const SparseState& b) {
  if (a.qubit_count() != b.qubit_count())
    throw SpecError("fidelity requires matching qubit counts");
  // Walk the smaller map.
  const SparseState& small = a.term_count() <= b.term_count() ? a : b;
  const SparseState& big = a.term_count() <= b.term_count() ? b : a;
  cplx inner = 0;
  for (const auto& [k, amp] : small.terms()) {
    auto it = big.terms().find(k);
    if (it == big.terms().end()) continue;
    // <a|b>: conjugate the amplitude of a.
    if (&small == &a)
      inner += std::conj(amp) * it->second;
    else
      inner += std::conj(it->second) * amp;
  }
  return std::norm(inner);
}

BasisKey initial_pattern(const QubitRegistry& registry) {
  BasisKey k(registry.size());
  for (std::size_t i = 0; i < registry.size(); ++i) {
    QubitId q(static_cast<std::uint32_t>(i));
    if (registry.initial_bit(q)) k.set(q, true);
  }
  return k;
}

LogicalExtract extract_logical(const SparseState& s, const std::vector<QubitId>& logical,
                               const BasisKey& expect_ancilla) {
  std::vector<bool> is_logical(s.qubit_count(), false);
  for (QubitId q : logical) {
    if (q.v >= s.qubit_count()) throw UnknownQubitError("logical qubit outside state");
    if (is_logical[q.v]) throw SpecError("repeated logical qubit");
    is_logical[q.v] = true;
  }
  LogicalExtract out;
  out.clean = true;
  out.state = SparseState(logical.size());
  for (const auto& [key, amp] : s.terms()) {
    for (std::size_t i = 0; i < s.qubit_count() && out.clean; ++i) {
      QubitId q(static_cast<std::uint32_t>(i));
      if (!is_logical[i] && key.get(q) != expect_ancilla.get(q)) out.clean = false;
    }
    BasisKey reduced(logical.size());
    for (std::size_t i = 0; i < logical.size(); ++i)
      if (key.get(logical[i])) reduced.set(QubitId(static_cast<std::uint32_t>(i)), true);
    out.state.accumulate(reduced, amp);
  }
  return out;
}

namespace {

struct RunBranch {
  std::map<int, int> records;
  double probability = 1.0;
  SparseState state;
};

void measure_branch(const Gate& g, const OutcomePolicy& policy, RunBranch&& b,
                    std::vector<RunBranch>& out) {
  QubitId q = g.qubits[0];
  SparseState pre = std::move(b.state);
  if (g.kind == GateKind::MeasureX) {
    pre.apply_gate(Gate::h(q));  // X-basis outcome b corresponds to |+>/|->
  }
  double p[2] = {0, 0};
  for (const auto& [key, amp] : pre.terms()) p[key.get(q) ? 1 : 0] += std::norm(amp);

  const int* forced = nullptr;
  auto it = policy.fixed.find(g.record);
  if (!policy.fixed.empty()) {
    if (it == policy.fixed.end())
      throw SpecError("fixed outcome policy missing record " + std::to_string(g.record));
    forced = &it->second;
  }

  for (int outcome = 0; outcome < 2; ++outcome) {
    if (forced && *forced != outcome) continue;
    if (p[outcome] < 1e-12) {
      if (forced)
        throw ImpossibleOutcomeError("record " + std::to_string(g.record) + " forced to " +
                                     std::to_string(outcome) + " which has probability 0");
      continue;
    }
    RunBranch nb;
    nb.records = b.records;
    if (nb.records.count(g.record))
      throw SpecError("record id " + std::to_string(g.record) + " measured twice");
    nb.records[g.record] = outcome;
    nb.probability = b.probability * p[outcome];
    nb.state = SparseState(pre.qubit_count());
    const double scale = 1.0 / std::sqrt(p[outcome]);
    for (const auto& [key, amp] : pre.terms()) {
      if (key.get(q) != (outcome == 1)) continue;
      BasisKey k = key;
      k.set(q, false);  // measured qubit is reset so branches stay comparable
      nb.state.accumulate(k, amp * scale);
    }
    out.push_back(std::move(nb));
  }
}

}  // namespace

std::vector<MeasurementBranch> run_with_measurements(const Circuit& c,
                                                     const OutcomePolicy& policy) {
  std::vector<RunBranch> branches;
  branches.push_back(RunBranch{{}, 1.0, SparseState::initial(c.registry)});

  for (const Layer& layer : c.layers) {
    for (const Gate& g : layer.gates) {
      if (is_measurement(g.kind)) {
        std::vector<RunBranch> next;
        for (RunBranch& b : branches) measure_branch(g, policy, std::move(b), next);
        branches = std::move(next);
      } else if (is_classically_controlled(g.kind)) {
        for (RunBranch& b : branches) {
          auto it = b.records.find(g.record);
          if (it == b.records.end())
            throw SpecError("classical control on unmeasured record " +
                            std::to_string(g.record));
          if (it->second == 0) continue;
          if (g.kind == GateKind::ClassicalX)
            b.state.apply_gate(Gate::x(g.qubits[0]));
          else
            b.state.apply_gate(Gate::ph(M_PI, g.qubits[0]));  // Z
        }
      } else {
        for (RunBranch& b : branches) b.state.apply_gate(g);
      }
    }
  }

  std::sort(branches.begin(), branches.end(),
            [](const RunBranch& a, const RunBranch& b) { return a.records < b.records; });
  std::vector<MeasurementBranch> out;
  out.reserve(branches.size());
  for (RunBranch& b : branches)
    out.push_back(MeasurementBranch{std::move(b.records), b.probability, std::move(b.state)});
  return out;
}

Circuit expand_teleported_cnot(const Circuit& c, const std::vector<CnotSite>& sites) {
  std::map<int, std::vector<int>> by_layer;
  for (const CnotSite& s : sites) {
    if (s.layer < 0 || s.layer >= c.depth())
      throw SpecError("teleport site layer out of range");
    const auto& gates = c.layers[s.layer].gates;
    if (s.gate_index < 0 || s.gate_index >= static_cast<int>(gates.size()))
      throw SpecError("teleport site gate index out of range");
    if (gates[s.gate_index].kind != GateKind::Cnot)
      throw SpecError("teleport site does not name a CNOT");
    auto& v = by_layer[s.layer];
    if (std::find(v.begin(), v.end(), s.gate_index) != v.end())
      throw SpecError("duplicate teleport site");
    v.push_back(s.gate_index);
  }

  int next_record = 0;
  for (const Layer& l : c.layers)
    for (const Gate& g : l.gates) next_record = std::max(next_record, g.record + 1);

  Circuit out;
  out.registry = c.registry;
  out.coupling = std::nullopt;  // fresh ancillas are off the recorded layout

  struct SiteWires {
    QubitId control, target, e1, e2;
    int rec_z, rec_x;
  };

  int site_counter = 0;
  for (int li = 0; li < c.depth(); ++li) {
    auto hit = by_layer.find(li);
    if (hit == by_layer.end()) {
      out.layers.push_back(c.layers[li]);
      continue;
    }
    std::vector<SiteWires> wires;
    Layer rest;
    const auto& gates = c.layers[li].gates;
    for (int gi = 0; gi < static_cast<int>(gates.size()); ++gi) {
      if (std::find(hit->second.begin(), hit->second.end(), gi) == hit->second.end()) {
        rest.gates.push_back(gates[gi]);
        continue;
      }
      SiteWires w;
      w.control = gates[gi].qubits[0];
      w.target = gates[gi].qubits[1];
      std::string prefix = "tele[" + std::to_string(site_counter++) + "]";
      w.e1 = out.registry.allocate(prefix + ".bell0");
      w.e2 = out.registry.allocate(prefix + ".bell1");
      w.rec_z = next_record++;
      w.rec_x = next_record++;
      wires.push_back(w);
    }

    // Bell prep |01>+|10>, entangle, measure, repair.
    Layer l1 = rest;  // surviving gates ride along with the first prep step
    for (const auto& w : wires) l1.gates.push_back(Gate::h(w.e1));
    out.layers.push_back(std::move(l1));
    Layer l2, l3, l4, l5, l6, l7, l8;
    for (const auto& w : wires) {
      l2.gates.push_back(Gate::cnot(w.e1, w.e2));
      l3.gates.push_back(Gate::x(w.e2));
      l4.gates.push_back(Gate::cnot(w.control, w.e1));
      l4.gates.push_back(Gate::cnot(w.e2, w.target));
      l5.gates.push_back(Gate::measure_z(w.e1, w.rec_z));
      l5.gates.push_back(Gate::measure_x(w.e2, w.rec_x));
      l6.gates.push_back(Gate::x(w.target));
      l7.gates.push_back(Gate::classical_x(w.rec_z, w.target));
      l8.gates.push_back(Gate::classical_z(w.rec_x, w.control));
    }
    for (Layer* l : {&l2, &l3, &l4, &l5, &l6, &l7, &l8}) out.layers.push_back(std::move(*l));
  }
  check_well_formed(out.registry, out.layers);
  return out;
}

}  // namespace qprep
