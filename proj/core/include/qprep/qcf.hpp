#pragma once

#include <string>

#include "qprep/circuit.hpp"

namespace qprep {

/// Serializes to the qcf v1 text format:
///
///   qcf 1 qubits=<Q>
///   # stage <name> <first> <last>
///   role <path> = <id> init=<0|1>
///   layer
///     <KIND> <id...> [theta=<float>] [u=<re,im;...>] [rec=<int>]
///
/// Floats carry 17 significant digits so parse(emit(c)) == c and
/// re-emission is byte-identical. Stage spans round-trip through the
/// structured header comments; other comment lines are skipped on parse.
std::string emit_text(const Circuit& c);

/// Inverse of emit_text; throws ParseError with a 1-based line number.
Circuit parse_text(const std::string& text);

}  // namespace qprep
