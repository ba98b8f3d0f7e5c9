#include "specio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "qprep/errors.hpp"

namespace qprep::cli {

namespace {

[[noreturn]] void shape_error(const std::string& what) { throw SpecError(what); }

double num_field(const Json& j, const char* key, bool required, double fallback = 0.0) {
  if (!j.contains(key)) {
    if (required) shape_error(std::string("missing field \"") + key + "\"");
    return fallback;
  }
  if (!j[key].is_number()) shape_error(std::string("field \"") + key + "\" must be a number");
  return j[key].get<double>();
}

int int_field(const Json& j, const char* key, bool required, int fallback = 0) {
  double v = num_field(j, key, required, fallback);
  if (v != std::floor(v)) shape_error(std::string("field \"") + key + "\" must be an integer");
  return static_cast<int>(v);
}

const Json& array_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    shape_error(std::string("missing array field \"") + key + "\"");
  return j[key];
}

cplx complex_of(const Json& j) {
  if (!j.is_object()) shape_error("amplitude entries must be {\"re\": x, \"im\": y} objects");
  return {num_field(j, "re", false), num_field(j, "im", false)};
}

Mat2 matrix_of(const Json& j) {
  if (!j.is_array() || j.size() != 8) shape_error("a matrix is 8 reals, row-major re/im pairs");
  std::array<double, 8> v{};
  for (int i = 0; i < 8; ++i) {
    if (!j[std::size_t(i)].is_number()) shape_error("matrix entries must be numbers");
    v[std::size_t(i)] = j[std::size_t(i)].get<double>();
  }
  return Mat2{{cplx(v[0], v[1]), cplx(v[2], v[3]), cplx(v[4], v[5]), cplx(v[6], v[7])}};
}

std::uint64_t key_field(const Json& j, int index_bits) {
  if (!j.contains("k") || !j["k"].is_number_integer() || j["k"].get<std::int64_t>() < 0)
    shape_error("every entry needs a nonnegative integer key \"k\"");
  auto k = j["k"].get<std::uint64_t>();
  if (k >= (std::uint64_t(1) << index_bits)) shape_error("entry key exceeds the index range");
  return k;
}

Mat2 pauli_of(char c) {
  switch (c) {
    case 'I': return Mat2::identity();
    case 'X': return Mat2::x();
    case 'Y': return Mat2{{cplx(0), cplx(0, -1), cplx(0, 1), cplx(0)}};
    case 'Z': return Mat2{{cplx(1), cplx(0), cplx(0), cplx(-1)}};
    default: shape_error(std::string("unknown Pauli letter '") + c + "' (use I, X, Y, Z)");
  }
}

// Accepts [lo, hi], [point], or a bare integer.
std::pair<int, int> range_field(const Json& j, const char* key) {
  if (!j.contains(key)) shape_error(std::string("missing range field \"") + key + "\"");
  const Json& r = j[key];
  if (r.is_number_integer()) {
    int v = r.get<int>();
    return {v, v};
  }
  if (!r.is_array() || r.empty() || r.size() > 2) shape_error("ranges are [lo, hi] or a point");
  for (const Json& e : r)
    if (!e.is_number_integer()) shape_error("range bounds must be integers");
  int lo = r[0].get<int>();
  int hi = r[r.size() - 1].get<int>();
  return {lo, hi};
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed JSON: ") + e.what());
  }
}

SpecKind detect_kind(const Json& j) {
  if (!j.is_object()) shape_error("the top level must be a JSON object");
  if (j.contains("amplitudes")) return SpecKind::Dense;
  if (j.contains("kind")) return SpecKind::Oracle;
  if (j.contains("terms")) return SpecKind::Hamiltonian;
  if (j.contains("mode")) return SpecKind::Sweep;
  if (j.contains("entries")) return SpecKind::Sparse;
  shape_error("unrecognized spec: expected amplitudes, entries, kind, terms, or mode");
}

const char* spec_kind_name(SpecKind k) {
  switch (k) {
    case SpecKind::Dense: return "dense";
    case SpecKind::Sparse: return "sparse";
    case SpecKind::Oracle: return "oracle";
    case SpecKind::Hamiltonian: return "hamiltonian";
    case SpecKind::Sweep: return "sweep";
  }
  return "?";
}

std::vector<cplx> load_dense(const Json& j) {
  int n = int_field(j, "n", true);
  if (n < 1 || n > 30) shape_error("dense qubit count must lie in [1, 30]");
  const Json& amps = array_field(j, "amplitudes");
  if (amps.size() != std::size_t(1) << n)
    shape_error("a dense spec needs exactly 2^n amplitude entries");
  std::vector<cplx> out;
  out.reserve(amps.size());
  for (const Json& a : amps) out.push_back(complex_of(a));
  return out;
}

SparseStateSpec load_sparse(const Json& j) {
  SparseStateSpec spec;
  spec.n = int_field(j, "n", true);
  if (spec.n < 1 || spec.n > 60) shape_error("sparse qubit count must lie in [1, 60]");
  for (const Json& e : array_field(j, "entries")) {
    if (!e.is_object() || !e.contains("q") || !e["q"].is_string())
      shape_error("every sparse entry needs a bitstring field \"q\"");
    const std::string q = e["q"].get<std::string>();
    if (static_cast<int>(q.size()) != spec.n)
      shape_error("bitstring \"" + q + "\" is not n characters long");
    std::uint64_t index = 0;
    for (char c : q) {
      if (c != '0' && c != '1') shape_error("bitstring \"" + q + "\" has non-binary characters");
      index = (index << 1) | std::uint64_t(c - '0');
    }
    spec.entries.emplace_back(index, complex_of(e));
  }
  return spec;
}

OracleSpec load_oracle(const Json& j) {
  OracleSpec spec;
  if (!j["kind"].is_string()) shape_error("field \"kind\" must be a string");
  spec.kind = j["kind"].get<std::string>();
  spec.index_bits = int_field(j, "index_bits", true);
  if (spec.index_bits < 1 || spec.index_bits > 20) shape_error("index_bits must lie in [1, 20]");
  const bool continuous = spec.kind == "cqram";
  spec.word_bits = int_field(j, "word_bits", !continuous, 1);
  if (spec.word_bits < 1 || spec.word_bits > 60) shape_error("word_bits must lie in [1, 60]");
  const std::size_t cells = std::size_t(1) << spec.index_bits;

  std::set<std::uint64_t> seen;
  auto claim = [&](std::uint64_t k) {
    if (!seen.insert(k).second) shape_error("entry key " + std::to_string(k) + " repeats");
  };

  if (spec.kind == "pum") {
    spec.pum.index_bits = spec.index_bits;
    spec.pum.word_bits = spec.word_bits;
    spec.pum.table.assign(cells, std::vector<Mat2>(std::size_t(spec.word_bits), Mat2::identity()));
    for (const Json& e : array_field(j, "entries")) {
      std::uint64_t k = key_field(e, spec.index_bits);
      claim(k);
      const Json& u = e.contains("u") ? e["u"] : Json();
      if (!u.is_array()) shape_error("pum entries need a matrix list \"u\"");
      if (spec.word_bits == 1 && !u.empty() && u[0].is_number()) {
        spec.pum.table[k][0] = matrix_of(u);
      } else {
        if (u.size() != std::size_t(spec.word_bits))
          shape_error("pum entry \"u\" needs one matrix per word bit");
        for (int l = 0; l < spec.word_bits; ++l)
          spec.pum.table[k][std::size_t(l)] = matrix_of(u[std::size_t(l)]);
      }
    }
  } else if (spec.kind == "sbm" || spec.kind == "qram") {
    if (spec.kind == "qram") spec.qram_words.assign(cells, 0);
    spec.sbm.index_bits = spec.index_bits;
    spec.sbm.word_bits = spec.word_bits;
    for (const Json& e : array_field(j, "entries")) {
      std::uint64_t k = key_field(e, spec.index_bits);
      claim(k);
      if (!e.contains("word") || !e["word"].is_number_integer() ||
          e["word"].get<std::int64_t>() < 0)
        shape_error("sbm/qram entries need a nonnegative integer \"word\"");
      auto w = e["word"].get<std::uint64_t>();
      if (spec.word_bits < 64 && w >= (std::uint64_t(1) << spec.word_bits))
        shape_error("stored word exceeds the word width");
      if (spec.kind == "qram") {
        spec.qram_words[k] = w;
      } else {
        if (w == 0) shape_error("sbm stored words must be nonzero (omit the key instead)");
        spec.sbm.entries.emplace_back(k, w);
      }
    }
    std::sort(spec.sbm.entries.begin(), spec.sbm.entries.end());
  } else if (continuous) {
    if (spec.word_bits != 1) shape_error("cqram stores single-qubit states; word_bits must be 1");
    spec.stored_states.assign(cells, {cplx(1), cplx(0)});
    for (const Json& e : array_field(j, "entries")) {
      std::uint64_t k = key_field(e, spec.index_bits);
      claim(k);
      const Json& u = e.contains("u") ? e["u"] : Json();
      if (!u.is_array() || u.size() != 4) shape_error("cqram entries need \"u\" = 4 reals");
      for (const Json& x : u)
        if (!x.is_number()) shape_error("cqram state entries must be numbers");
      spec.stored_states[k] = {cplx(u[0].get<double>(), u[1].get<double>()),
                               cplx(u[2].get<double>(), u[3].get<double>())};
    }
  } else {
    shape_error("unknown oracle kind \"" + spec.kind + "\" (use pum, sbm, qram, cqram)");
  }
  return spec;
}

ProductTermHamiltonian load_hamiltonian(const Json& j) {
  ProductTermHamiltonian h;
  h.n = int_field(j, "n", true);
  if (h.n < 1 || h.n > 60) shape_error("operator qubit count must lie in [1, 60]");
  for (const Json& t : array_field(j, "terms")) {
    if (!t.is_object()) shape_error("terms must be objects");
    double alpha = num_field(t, "alpha", true);
    std::vector<Mat2> factors;
    if (t.contains("paulis")) {
      if (t.contains("factors")) shape_error("a term gives \"paulis\" or \"factors\", not both");
      if (!t["paulis"].is_string()) shape_error("field \"paulis\" must be a string");
      const std::string p = t["paulis"].get<std::string>();
      if (static_cast<int>(p.size()) != h.n)
        shape_error("Pauli string \"" + p + "\" is not n letters long");
      for (char c : p) factors.push_back(pauli_of(c));
    } else if (t.contains("factors")) {
      const Json& fs = t["factors"];
      if (!fs.is_array() || fs.size() != std::size_t(h.n))
        shape_error("field \"factors\" needs one matrix per qubit");
      for (const Json& f : fs) factors.push_back(matrix_of(f));
    } else {
      shape_error("every term needs \"paulis\" or \"factors\"");
    }
    h.terms.emplace_back(alpha, std::move(factors));
  }
  return h;
}

SweepConfig load_sweep(const Json& j) {
  SweepConfig cfg;
  if (!j["mode"].is_string()) shape_error("field \"mode\" must be a string");
  cfg.mode = j["mode"].get<std::string>();
  if (cfg.mode == "dense" || cfg.mode == "sparse") {
    std::tie(cfg.lo, cfg.hi) = range_field(j, "n");
  } else if (cfg.mode == "pum" || cfg.mode == "sbm") {
    std::tie(cfg.lo, cfg.hi) = range_field(j, "index_bits");
    cfg.word_bits = int_field(j, "word_bits", false, 1);
    cfg.entry_count = int_field(j, "s", false, 2);
    if (cfg.word_bits < 1 || cfg.entry_count < 1) shape_error("word_bits and s must be positive");
  } else {
    shape_error("unknown sweep mode \"" + cfg.mode + "\" (use dense, sparse, pum, sbm)");
  }
  if (cfg.lo > cfg.hi || cfg.lo < 1) shape_error("empty or invalid parameter range");
  if (cfg.mode == "sparse") {
    for (const Json& d : array_field(j, "d")) {
      if (!d.is_number_integer() || d.get<int>() < 1)
        shape_error("sparsity list entries must be positive integers");
      cfg.d_list.push_back(d.get<int>());
    }
    if (cfg.d_list.empty()) shape_error("empty sparsity list");
  }
  cfg.reps = int_field(j, "reps", false, 1);
  if (cfg.reps < 1) shape_error("reps must be at least 1");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0)
      shape_error("seed must be a nonnegative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  return cfg;
}

}  // namespace qprep::cli
