#include "qprep/qcf.hpp"

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <vector>

namespace qprep {

static std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string emit_text(const Circuit& c) {
  std::string out;
  out += "qcf 1 qubits=" + std::to_string(c.registry.size()) + "\n";
  for (const StageSpan& s : c.stages)
    out += "# stage " + s.name + " " + std::to_string(s.first) + " " +
           std::to_string(s.last) + "\n";
  for (std::size_t q = 0; q < c.registry.size(); ++q) {
    QubitId id(static_cast<std::uint32_t>(q));
    out += "role " + c.registry.role(id) + " = " + std::to_string(q) +
           " init=" + std::to_string(c.registry.initial_bit(id)) + "\n";
  }
  for (const Layer& layer : c.layers) {
    out += "layer\n";
    for (const Gate& g : layer.gates) {
      out += "  ";
      out += gate_kind_name(g.kind);
      for (QubitId q : g.qubits) out += " " + std::to_string(q.v);
      if (has_theta(g.kind)) out += " theta=" + fmt_double(g.theta);
      if (g.kind == GateKind::Cu) {
        out += " u=";
        for (int i = 0; i < 4; ++i) {
          if (i) out += ";";
          out += fmt_double(g.unitary->m[i].real()) + "," + fmt_double(g.unitary->m[i].imag());
        }
      }
      if (g.record >= 0) out += " rec=" + std::to_string(g.record);
      out += "\n";
    }
  }
  return out;
}

namespace {

struct LineReader {
  std::istringstream in;
  int lineno = 0;
  explicit LineReader(const std::string& text) : in(text) {}
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++lineno;
      return true;
    }
    return false;
  }
};

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

GateKind parse_kind(const std::string& name, int lineno) {
  static const std::map<std::string, GateKind> table = {
      {"X", GateKind::X},           {"H", GateKind::H},
      {"T", GateKind::T},           {"TDG", GateKind::Tdg},
      {"RY", GateKind::Ry},         {"PH", GateKind::Ph},
      {"PSWAP", GateKind::PartialSwap}, {"CNOT", GateKind::Cnot},
      {"SWAP", GateKind::Swap},     {"CCNOT", GateKind::Ccnot},
      {"CSWAP", GateKind::Cswap},   {"CU", GateKind::Cu},
      {"MEASZ", GateKind::MeasureZ}, {"MEASX", GateKind::MeasureX},
      {"CLX", GateKind::ClassicalX}, {"CLZ", GateKind::ClassicalZ},
  };
  auto it = table.find(name);
  if (it == table.end()) throw ParseError(lineno, "unknown gate kind '" + name + "'");
  return it->second;
}

double parse_double(const std::string& s, int lineno, const char* what) {
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end == s.c_str() || *end != '\0')
    throw ParseError(lineno, std::string("bad ") + what + " '" + s + "'");
  return v;
}

long parse_int(const std::string& s, int lineno, const char* what) {
  char* end = nullptr;
  errno = 0;
  long v = std::strtol(s.c_str(), &end, 10);
  if (errno != 0 || end == s.c_str() || *end != '\0' || v < 0)
    throw ParseError(lineno, std::string("bad ") + what + " '" + s + "'");
  return v;
}

Mat2 parse_unitary(const std::string& s, int lineno) {
  Mat2 u;
  std::istringstream in(s);
  std::string entry;
  int i = 0;
  while (std::getline(in, entry, ';')) {
    if (i >= 4) throw ParseError(lineno, "unitary has more than 4 entries");
    auto comma = entry.find(',');
    if (comma == std::string::npos) throw ParseError(lineno, "unitary entry missing ','");
    u.m[i] = cplx(parse_double(entry.substr(0, comma), lineno, "unitary real part"),
                  parse_double(entry.substr(comma + 1), lineno, "unitary imag part"));
    ++i;
  }
  if (i != 4) throw ParseError(lineno, "unitary has fewer than 4 entries");
  return u;
}

}  // namespace

Circuit parse_text(const std::string& text) {
  LineReader reader(text);
  std::string line;

  if (!reader.next(line)) throw ParseError(1, "empty input");
  {
    auto toks = split_ws(line);
    if (toks.size() != 3 || toks[0] != "qcf" || toks[1] != "1" ||
        toks[2].rfind("qubits=", 0) != 0)
      throw ParseError(reader.lineno, "expected header 'qcf 1 qubits=<Q>'");
  }
  std::size_t declared_qubits =
      static_cast<std::size_t>(parse_int(split_ws(line)[2].substr(7), reader.lineno, "qubit count"));

  QubitRegistry registry;
  std::vector<StageSpan> stages;
  std::vector<Layer> layers;
  bool in_layers = false;

  while (reader.next(line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto toks = split_ws(line);
      if (toks.size() == 5 && toks[1] == "stage") {
        StageSpan s;
        s.name = toks[2];
        s.first = static_cast<int>(parse_int(toks[3], reader.lineno, "stage first layer"));
        s.last = static_cast<int>(parse_int(toks[4], reader.lineno, "stage last layer"));
        stages.push_back(std::move(s));
      }
      continue;  // other comments are skipped
    }
    auto toks = split_ws(line);
    if (toks.empty()) continue;

    if (toks[0] == "role") {
      if (in_layers) throw ParseError(reader.lineno, "role line after first layer");
      if (toks.size() != 5 || toks[2] != "=" || toks[4].rfind("init=", 0) != 0)
        throw ParseError(reader.lineno, "expected 'role <path> = <id> init=<0|1>'");
      long id = parse_int(toks[3], reader.lineno, "qubit id");
      if (static_cast<std::size_t>(id) != registry.size())
        throw ParseError(reader.lineno, "role ids must be consecutive from 0");
      long init = parse_int(toks[4].substr(5), reader.lineno, "init bit");
      if (init != 0 && init != 1) throw ParseError(reader.lineno, "init bit must be 0 or 1");
      registry.allocate(toks[1], static_cast<int>(init));
      continue;
    }

    if (toks[0] == "layer") {
      if (toks.size() != 1) throw ParseError(reader.lineno, "unexpected tokens after 'layer'");
      in_layers = true;
      layers.emplace_back();
      continue;
    }

    // Gate line.
    if (!in_layers) throw ParseError(reader.lineno, "gate line before any 'layer'");
    Gate g;
    g.kind = parse_kind(toks[0], reader.lineno);
    std::size_t i = 1;
    for (; i < toks.size() && toks[i].find('=') == std::string::npos; ++i) {
      long q = parse_int(toks[i], reader.lineno, "qubit id");
      QubitId id(static_cast<std::uint32_t>(q));
      for (QubitId prev : g.qubits)
        if (prev == id) throw ParseError(reader.lineno, "gate repeats an operand");
      g.qubits.push_back(id);
    }
    for (; i < toks.size(); ++i) {
      if (toks[i].rfind("theta=", 0) == 0) {
        if (!has_theta(g.kind)) throw ParseError(reader.lineno, "theta on a fixed gate");
        g.theta = parse_double(toks[i].substr(6), reader.lineno, "theta");
      } else if (toks[i].rfind("u=", 0) == 0) {
        if (g.kind != GateKind::Cu) throw ParseError(reader.lineno, "u= on a non-CU gate");
        g.unitary = parse_unitary(toks[i].substr(2), reader.lineno);
      } else if (toks[i].rfind("rec=", 0) == 0) {
        g.record = static_cast<int>(parse_int(toks[i].substr(4), reader.lineno, "record id"));
      } else {
        throw ParseError(reader.lineno, "unknown attribute '" + toks[i] + "'");
      }
    }
    if (static_cast<int>(g.qubits.size()) != arity(g.kind))
      throw ParseError(reader.lineno,
                       std::string("wrong operand count for ") + gate_kind_name(g.kind));
    if (g.kind == GateKind::Cu && !g.unitary)
      throw ParseError(reader.lineno, "CU gate missing u=");
    if ((is_measurement(g.kind) || is_classically_controlled(g.kind)) && g.record < 0)
      throw ParseError(reader.lineno, "missing rec=");
    layers.back().gates.push_back(std::move(g));
  }

  if (registry.size() != declared_qubits)
    throw ParseError(reader.lineno, "header declares " + std::to_string(declared_qubits) +
                                        " qubits but " + std::to_string(registry.size()) +
                                        " roles were given");
  Circuit c;
  c.registry = std::move(registry);
  c.layers = std::move(layers);
  c.stages = std::move(stages);
  try {
    check_well_formed(c.registry, c.layers);
  } catch (const Error& e) {
    throw ParseError(reader.lineno, std::string("circuit not well formed: ") + e.what());
  }
  return c;
}

}  // namespace qprep
