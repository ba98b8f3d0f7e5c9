#pragma once

#include <optional>
#include <string>

#include <boost/container/small_vector.hpp>

#include "qprep/errors.hpp"
#include "qprep/mat2.hpp"
#include "qprep/types.hpp"

namespace qprep {

enum class GateKind {
  X,
  H,
  T,
  Tdg,
  Ry,           // theta
  Ph,           // theta; diag(1, e^{i theta})
  PartialSwap,  // theta; see partial_swap_action in state.cpp
  Cnot,         // (control, target)
  Swap,
  Ccnot,  // (control, control, target)
  Cswap,  // (control, a, b)
  Cu,     // (control, target), 2x2 unitary payload
  MeasureZ,
  MeasureX,
  ClassicalX,  // X on operand if classical record bit == 1
  ClassicalZ,
};

constexpr int arity(GateKind k) {
  switch (k) {
    case GateKind::X:
    case GateKind::H:
    case GateKind::T:
    case GateKind::Tdg:
    case GateKind::Ry:
    case GateKind::Ph:
    case GateKind::MeasureZ:
    case GateKind::MeasureX:
    case GateKind::ClassicalX:
    case GateKind::ClassicalZ:
      return 1;
    case GateKind::PartialSwap:
    case GateKind::Cnot:
    case GateKind::Swap:
    case GateKind::Cu:
      return 2;
    case GateKind::Ccnot:
    case GateKind::Cswap:
      return 3;
  }
  return 0;
}

constexpr bool is_measurement(GateKind k) {
  return k == GateKind::MeasureZ || k == GateKind::MeasureX;
}

constexpr bool is_classically_controlled(GateKind k) {
  return k == GateKind::ClassicalX || k == GateKind::ClassicalZ;
}

constexpr bool has_theta(GateKind k) {
  return k == GateKind::Ry || k == GateKind::Ph || k == GateKind::PartialSwap;
}

const char* gate_kind_name(GateKind k);

struct Gate {
  GateKind kind = GateKind::X;
  boost::container::small_vector<QubitId, 3> qubits;
  double theta = 0.0;
  std::optional<Mat2> unitary;  // Cu only
  int record = -1;              // measurement / classical-control record id

  bool operator==(const Gate&) const = default;

  // Factories; operand order matches the comments on GateKind.
  static Gate x(QubitId q) { return simple(GateKind::X, {q}); }
  static Gate h(QubitId q) { return simple(GateKind::H, {q}); }
  static Gate t(QubitId q) { return simple(GateKind::T, {q}); }
  static Gate tdg(QubitId q) { return simple(GateKind::Tdg, {q}); }
  static Gate ry(double theta, QubitId q) {
    Gate g = simple(GateKind::Ry, {q});
    g.theta = theta;
    return g;
  }
  static Gate ph(double theta, QubitId q) {
    Gate g = simple(GateKind::Ph, {q});
    g.theta = theta;
    return g;
  }
  static Gate partial_swap(double theta, QubitId a, QubitId b) {
    Gate g = simple(GateKind::PartialSwap, {a, b});
    g.theta = theta;
    return g;
  }
  static Gate cnot(QubitId control, QubitId target) {
    return simple(GateKind::Cnot, {control, target});
  }
  static Gate swap(QubitId a, QubitId b) { return simple(GateKind::Swap, {a, b}); }
  static Gate ccnot(QubitId c0, QubitId c1, QubitId target) {
    return simple(GateKind::Ccnot, {c0, c1, target});
  }
  static Gate cswap(QubitId control, QubitId a, QubitId b) {
    return simple(GateKind::Cswap, {control, a, b});
  }
  static Gate cu(QubitId control, QubitId target, const Mat2& u) {
    Gate g = simple(GateKind::Cu, {control, target});
    g.unitary = u;
    return g;
  }
  static Gate measure_z(QubitId q, int record) {
    Gate g = simple(GateKind::MeasureZ, {q});
    g.record = record;
    return g;
  }
  static Gate measure_x(QubitId q, int record) {
    Gate g = simple(GateKind::MeasureX, {q});
    g.record = record;
    return g;
  }
  static Gate classical_x(int record, QubitId q) {
    Gate g = simple(GateKind::ClassicalX, {q});
    g.record = record;
    return g;
  }
  static Gate classical_z(int record, QubitId q) {
    Gate g = simple(GateKind::ClassicalZ, {q});
    g.record = record;
    return g;
  }

 private:
  static Gate simple(GateKind k, std::initializer_list<QubitId> qs) {
    Gate g;
    g.kind = k;
    g.qubits.assign(qs.begin(), qs.end());
    for (auto i = qs.begin(); i != qs.end(); ++i)
      for (auto j = i + 1; j != qs.end(); ++j)
        if (*i == *j) throw OverlappingSupportError("gate repeats an operand");
    return g;
  }
};

}  // namespace qprep
