#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qprep/clifford_t.hpp"
#include "qprep/dense_prep.hpp"
#include "qprep/errors.hpp"
#include "qprep/qcf.hpp"
#include "qprep/state.hpp"
#include "specio.hpp"

namespace qprep::cli {

namespace {

struct Flags {
  std::string input;
  std::string out_path;
  std::string circuit_path;
  std::string schedule = "pipelined";
  bool clifford_t = false;
  double eps = 0.0;
  bool reset_root = true;
  double threshold = 1.0 - 1e-9;
  double t = 0.0;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SpecError("cannot read \"" + path + "\"");
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SpecError("cannot write \"" + path + "\"");
  f << text;
}

RouteSchedule schedule_of(const std::string& s) {
  return s == "sequential" ? RouteSchedule::Sequential : RouteSchedule::Pipelined;
}

double state_error(const SparseState& a, const SparseState& b) {
  double err2 = 0;
  for (const auto& [k, amp] : a.terms()) {
    auto it = b.terms().find(k);
    err2 += std::norm(amp - (it == b.terms().end() ? cplx(0) : it->second));
  }
  for (const auto& [k, amp] : b.terms())
    if (!a.terms().count(k)) err2 += std::norm(amp);
  return std::sqrt(err2);
}

Json stages_json(const Circuit& c) {
  Json out = Json::array();
  for (const StageSpan& s : c.stages)
    out.push_back({{"name", s.name}, {"first", s.first}, {"last", s.last}});
  return out;
}

// Everything verify needs beyond the circuit: the logical register, the
// expected ancilla pattern, and the embedded target state (when the spec
// pins one).
struct Artifact {
  Circuit circuit;
  std::vector<QubitId> logical;
  BasisKey expectation{0};
  SparseState ideal{std::size_t(0)};
  bool has_ideal = false;
  int primitive_depth = 0;
  bool lowered = false;
  Json extra = Json::object();
};

SparseState embed_target(const Circuit& c, const std::vector<QubitId>& logical,
                         const BasisKey& expectation,
                         const std::vector<std::pair<std::uint64_t, cplx>>& entries) {
  SparseState ideal(c.registry.size());
  for (const auto& [index, amp] : entries) {
    if (amp == cplx(0)) continue;
    BasisKey key = expectation;
    for (std::size_t b = 0; b < logical.size(); ++b) key.set(logical[b], (index >> b) & 1);
    ideal.accumulate(key, amp);
  }
  return ideal;
}

Artifact compile_dense_artifact(const std::vector<cplx>& amps, const Flags& f) {
  Artifact a;
  std::vector<std::pair<std::uint64_t, cplx>> entries;
  for (std::size_t k = 0; k < amps.size(); ++k) entries.emplace_back(k, amps[k]);
  if (f.clifford_t) {
    if (!f.reset_root)
      throw SpecError("the discrete lowering always resets the amplitude root");
    a.primitive_depth = compile_dense(amps).circuit.depth();
    CompiledCliffordT ct = compile_dense_clifford_t(amps, f.eps);
    a.circuit = std::move(ct.circuit);
    a.logical = std::move(ct.logical);
    a.expectation = ct.ancilla_expectation;
    a.lowered = true;
    a.extra["eps"] = ct.budget.eps;
    a.extra["eps_prime"] = ct.budget.eps_prime;
  } else {
    DensePrepOptions opts;
    opts.reset_root = f.reset_root;
    CompiledDense cd = compile_dense(amps, opts);
    a.primitive_depth = cd.circuit.depth();
    a.circuit = std::move(cd.circuit);
    a.logical = std::move(cd.logical);
    a.expectation = cd.ancilla_expectation;
  }
  a.ideal = embed_target(a.circuit, a.logical, a.expectation, entries);
  a.has_ideal = true;
  return a;
}

Artifact compile_sparse_artifact(const SparseStateSpec& spec, const Flags& f) {
  Artifact a;
  CompiledSparse cs = compile_sparse(spec, schedule_of(f.schedule));
  a.primitive_depth = cs.circuit.depth();
  a.circuit = std::move(cs.circuit);
  a.logical = std::move(cs.logical);
  a.expectation = cs.ancilla_expectation;
  a.ideal = embed_target(a.circuit, a.logical, a.expectation, spec.entries);
  a.has_ideal = true;
  return a;
}

Artifact compile_oracle_artifact(const OracleSpec& o, const Flags& f) {
  Artifact a;
  if (o.kind == "pum") {
    a.circuit = compile_pum_multi(o.pum, schedule_of(f.schedule));
  } else if (o.kind == "sbm") {
    a.circuit = compile_sbm(o.sbm);
  } else if (o.kind == "qram") {
    a.circuit = compile_qram_binary(o.index_bits, o.word_bits, o.qram_words);
  } else {
    a.circuit = compile_qram_continuous(o.stored_states, schedule_of(f.schedule));
  }
  for (int i = 0; i < o.index_bits; ++i)
    a.logical.push_back(a.circuit.registry.id("index[" + std::to_string(i) + "]"));
  if (a.circuit.registry.has_role("word")) {
    a.logical.push_back(a.circuit.registry.id("word"));
  } else {
    for (int l = 0; l < o.word_bits; ++l)
      a.logical.push_back(a.circuit.registry.id("word[" + std::to_string(l) + "]"));
  }
  a.primitive_depth = a.circuit.depth();
  a.extra["kind"] = o.kind;
  return a;
}

Artifact compile_hamiltonian_artifact(const ProductTermHamiltonian& h, const Flags& f) {
  Artifact a;
  BlockEncodingArtifact be = assemble_block_encoding(h, schedule_of(f.schedule));
  a.primitive_depth = be.circuit.depth();
  a.circuit = std::move(be.circuit);
  a.logical = std::move(be.system);
  a.expectation = be.ancilla_expectation;
  a.extra["alpha"] = be.alpha;
  a.extra["hermitian"] = be.hermitian;
  a.extra["block_deviation"] = be.max_block_deviation;
  a.extra["verified"] = true;
  return a;
}

Artifact compile_any(const Json& j, SpecKind kind, const Flags& f) {
  switch (kind) {
    case SpecKind::Dense: return compile_dense_artifact(load_dense(j), f);
    case SpecKind::Sparse: return compile_sparse_artifact(load_sparse(j), f);
    case SpecKind::Oracle: return compile_oracle_artifact(load_oracle(j), f);
    case SpecKind::Hamiltonian: return compile_hamiltonian_artifact(load_hamiltonian(j), f);
    case SpecKind::Sweep: break;
  }
  throw SpecError("a sweep config is not compilable; use the sweep command");
}

Json artifact_report(const char* command, SpecKind kind, const Artifact& a) {
  Json r;
  r["command"] = command;
  r["input"] = spec_kind_name(kind);
  r["depth"] = a.primitive_depth;
  if (a.lowered) r["depth_lowered"] = a.circuit.depth();
  r["gates"] = a.circuit.gate_count();
  const std::size_t total = a.circuit.registry.size();
  r["qubits"] = {{"total", total},
                 {"logical", a.logical.size()},
                 {"ancilla", total - a.logical.size()}};
  r["stages"] = stages_json(a.circuit);
  for (const auto& [k, v] : a.extra.items()) r[k] = v;
  return r;
}

int cmd_compile(const Flags& f, std::ostream& out) {
  Json j = parse_json(read_file(f.input));
  SpecKind kind = detect_kind(j);
  Artifact a = compile_any(j, kind, f);
  if (!f.out_path.empty()) write_file(f.out_path, emit_text(a.circuit));
  Json r = artifact_report("compile", kind, a);
  if (!f.out_path.empty()) r["out"] = f.out_path;
  out << r.dump(2) << "\n";
  return 0;
}

int cmd_verify(const Flags& f, std::ostream& out) {
  Json j = parse_json(read_file(f.input));
  SpecKind kind = detect_kind(j);
  if (kind == SpecKind::Oracle)
    throw SpecError("memory oracles are checked exhaustively; use oracle-check");
  Artifact a = compile_any(j, kind, f);
  Json r = artifact_report("verify", kind, a);

  if (kind == SpecKind::Hamiltonian) {
    // assembly verifies the encoded block internally and throws on failure
    if (!f.circuit_path.empty())
      throw SpecError("circuit replay applies to state-preparation specs");
    r["ok"] = true;
    out << r.dump(2) << "\n";
    return 0;
  }

  const Circuit* to_run = &a.circuit;
  Circuit replay;
  if (!f.circuit_path.empty()) {
    replay = parse_text(read_file(f.circuit_path));
    r["circuit"] = f.circuit_path;
    if (!(replay.registry == a.circuit.registry)) {
      r["ok"] = false;
      r["reason"] = "replayed circuit was built for a different register layout";
      out << r.dump(2) << "\n";
      return 4;
    }
    to_run = &replay;
  }

  SparseState state = apply_circuit(*to_run);
  LogicalExtract ex = extract_logical(state, a.logical, a.expectation);
  const double fid = fidelity(state, a.ideal);
  const double error = state_error(state, a.ideal);
  r["fidelity"] = fid;
  r["clean"] = ex.clean;
  r["error"] = error;
  bool ok;
  if (a.lowered) {
    r["ok"] = ok = error <= f.eps;
  } else {
    r["threshold"] = f.threshold;
    r["ok"] = ok = fid >= f.threshold && ex.clean;
  }
  out << r.dump(2) << "\n";
  return ok ? 0 : 4;
}

// Deterministic per-point generator: every (seed, a, b, rep) cell draws from
// its own stream, so rows never depend on iteration order.
std::mt19937_64 sweep_rng(std::uint64_t seed, int a, int b, int rep) {
  std::uint64_t x = seed * 0x9E3779B97F4A7C15ULL;
  x ^= (std::uint64_t(std::uint32_t(a)) << 42) ^ (std::uint64_t(std::uint32_t(b)) << 21) ^
       std::uint64_t(std::uint32_t(rep));
  return std::mt19937_64(x);
}

std::vector<cplx> random_amplitudes(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  std::vector<cplx> a(std::size_t(1) << n);
  double norm = 0;
  for (cplx& x : a) {
    x = cplx(dist(rng), dist(rng));
    norm += std::norm(x);
  }
  norm = std::sqrt(norm);
  for (cplx& x : a) x /= norm;
  return a;
}

Mat2 random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  double q0 = g(rng), q1 = g(rng), q2 = g(rng), q3 = g(rng);
  double n = std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
  q0 /= n, q1 /= n, q2 /= n, q3 /= n;
  return Mat2{{cplx(q0, q3), cplx(q2, q1), cplx(-q2, q1), cplx(q0, -q3)}};
}

SparseStateSpec random_sparse_spec(int n, int d, std::mt19937_64& rng) {
  if (std::uint64_t(d) > (std::uint64_t(1) << n))
    throw SpecError("sparsity exceeds the space size in the sweep range");
  std::set<std::uint64_t> indices;
  while (indices.size() < std::size_t(d))
    indices.insert(rng() & ((std::uint64_t(1) << n) - 1));
  std::normal_distribution<double> g;
  SparseStateSpec spec;
  spec.n = n;
  double norm = 0;
  for (std::uint64_t q : indices) {
    cplx amp(g(rng), g(rng));
    norm += std::norm(amp);
    spec.entries.emplace_back(q, amp);
  }
  norm = std::sqrt(norm);
  for (auto& [q, amp] : spec.entries) amp /= norm;
  return spec;
}

int cmd_sweep(const Flags& f, std::ostream& out) {
  Json j = parse_json(read_file(f.input));
  if (detect_kind(j) != SpecKind::Sweep)
    throw SpecError("sweep needs a config object with a \"mode\" field");
  SweepConfig cfg = load_sweep(j);
  if (f.seed_given) cfg.seed = f.seed;

  std::ostringstream csv;
  if (cfg.mode == "dense") {
    csv << "n,rep,depth,qubits\n";
    for (int n = cfg.lo; n <= cfg.hi; ++n)
      for (int rep = 0; rep < cfg.reps; ++rep) {
        std::mt19937_64 rng = sweep_rng(cfg.seed, n, 0, rep);
        CompiledDense cd = compile_dense(random_amplitudes(n, rng));
        csv << n << ',' << rep << ',' << cd.circuit.depth() << ',' << cd.circuit.qubit_count()
            << '\n';
      }
  } else if (cfg.mode == "sparse") {
    csv << "n,d,rep,depth,qubits\n";
    for (int n = cfg.lo; n <= cfg.hi; ++n)
      for (int d : cfg.d_list)
        for (int rep = 0; rep < cfg.reps; ++rep) {
          std::mt19937_64 rng = sweep_rng(cfg.seed, n, d, rep);
          CompiledSparse cs = compile_sparse(random_sparse_spec(n, d, rng));
          csv << n << ',' << d << ',' << rep << ',' << cs.circuit.depth() << ','
              << cs.circuit.qubit_count() << '\n';
        }
  } else {
    csv << "index_bits,word_bits,rep,depth,qubits\n";
    for (int bits = cfg.lo; bits <= cfg.hi; ++bits)
      for (int rep = 0; rep < cfg.reps; ++rep) {
        std::mt19937_64 rng = sweep_rng(cfg.seed, bits, cfg.word_bits, rep);
        Circuit c;
        if (cfg.mode == "pum") {
          ProductUnitaryFunction u;
          u.index_bits = bits;
          u.word_bits = cfg.word_bits;
          u.table.assign(std::size_t(1) << bits, {});
          for (auto& row : u.table)
            for (int l = 0; l < cfg.word_bits; ++l) row.push_back(random_unitary(rng));
          c = compile_pum_multi(u);
        } else {
          SparseBooleanFunction fn;
          fn.index_bits = bits;
          fn.word_bits = cfg.word_bits;
          std::set<std::uint64_t> keys;
          const int count = int(std::min<std::uint64_t>(std::uint64_t(cfg.entry_count),
                                                        std::uint64_t(1) << bits));
          while (keys.size() < std::size_t(count))
            keys.insert(rng() & ((std::uint64_t(1) << bits) - 1));
          for (std::uint64_t k : keys)
            fn.entries.emplace_back(k, 1 + rng() % ((std::uint64_t(1) << cfg.word_bits) - 1));
          c = compile_sbm(fn);
        }
        csv << bits << ',' << cfg.word_bits << ',' << rep << ',' << c.depth() << ','
            << c.qubit_count() << '\n';
      }
  }

  if (!f.out_path.empty())
    write_file(f.out_path, csv.str());
  else
    out << csv.str();
  return 0;
}

int cmd_estimate(const Flags& f, std::ostream& out) {
  Json j = parse_json(read_file(f.input));
  if (detect_kind(j) != SpecKind::Hamiltonian)
    throw SpecError("estimate needs a product-term operator spec");
  ProductTermHamiltonian h = load_hamiltonian(j);
  QubitizationEstimate est = estimate_qubitization(h, f.t, f.eps, schedule_of(f.schedule));
  Json r;
  r["command"] = "estimate";
  // every constant below is an implementation-chosen instantiation of an
  // asymptotic bound, not a verified compilation
  r["label"] = "ESTIMATE";
  r["query_count"] = est.query_count;
  r["depth"] = est.depth;
  r["qubits"] = est.qubits;
  r["alpha"] = est.alpha;
  r["t"] = est.t;
  r["eps"] = est.eps;
  r["n"] = est.n;
  r["terms"] = est.term_count;
  if (h.n <= 10) {
    BlockEncodingArtifact be = assemble_block_encoding(h, schedule_of(f.schedule));
    r["verified"] = true;
    r["block_deviation"] = be.max_block_deviation;
    r["hermitian"] = be.hermitian;
  } else {
    r["verified"] = false;
  }
  out << r.dump(2) << "\n";
  return 0;
}

int cmd_oracle_check(const Flags& f, std::ostream& out) {
  Json j = parse_json(read_file(f.input));
  if (detect_kind(j) != SpecKind::Oracle)
    throw SpecError("oracle-check needs an oracle spec with a \"kind\" field");
  OracleSpec o = load_oracle(j);
  const int word_inputs = o.kind == "cqram" ? 1 : o.word_bits;
  if (o.index_bits + word_inputs > 10)
    throw SpecError("oracle-check is exhaustive; index_bits + word_bits must stay <= 10");
  Artifact a = compile_oracle_artifact(o, f);
  const Circuit& c = a.circuit;
  const std::size_t total = c.registry.size();
  const BasisKey rest = initial_pattern(c.registry);

  std::vector<QubitId> index, word;
  for (int i = 0; i < o.index_bits; ++i)
    index.push_back(c.registry.id("index[" + std::to_string(i) + "]"));
  if (c.registry.has_role("word")) {
    word.push_back(c.registry.id("word"));
  } else {
    for (int l = 0; l < o.word_bits; ++l)
      word.push_back(c.registry.id("word[" + std::to_string(l) + "]"));
  }

  auto make_key = [&](std::uint64_t k, std::uint64_t w) {
    BasisKey key = rest;
    for (std::size_t i = 0; i < index.size(); ++i) key.set(index[i], (k >> i) & 1);
    for (std::size_t l = 0; l < word.size(); ++l) key.set(word[l], (w >> l) & 1);
    return key;
  };

  double max_dev = 0;
  int checked = 0;
  for (std::uint64_t k = 0; k < (std::uint64_t(1) << o.index_bits); ++k) {
    for (std::uint64_t z = 0; z < (std::uint64_t(1) << word_inputs); ++z) {
      SparseState got = apply_circuit(c, {}, SparseState::basis(total, make_key(k, z)));
      ++checked;
      if (o.kind == "sbm" || o.kind == "qram") {
        std::uint64_t fk = 0;
        if (o.kind == "qram") {
          fk = o.qram_words[k];
        } else {
          for (const auto& [key, value] : o.sbm.entries)
            if (key == k) fk = value;
        }
        SparseState want(total);
        want.accumulate(make_key(k, z ^ fk), cplx(1));
        max_dev = std::max(max_dev, state_error(got, want));
      } else if (o.kind == "pum") {
        SparseState want(total);
        for (std::uint64_t w = 0; w < (std::uint64_t(1) << o.word_bits); ++w) {
          cplx amp(1);
          for (int l = 0; l < o.word_bits; ++l)
            amp *= o.pum.table[k][std::size_t(l)].at(int((w >> l) & 1), int((z >> l) & 1));
          want.accumulate(make_key(k, w), amp);
        }
        max_dev = std::max(max_dev, state_error(got, want));
      } else if (z == 0) {  // cqram: |k>|0> must load the stored state exactly
        SparseState want(total);
        want.accumulate(make_key(k, 0), o.stored_states[k][0]);
        want.accumulate(make_key(k, 1), o.stored_states[k][1]);
        max_dev = std::max(max_dev, state_error(got, want));
      } else {  // |k>|1> loads the orthogonal completion, phase left free
        auto amp_at = [&](std::uint64_t w) {
          auto it = got.terms().find(make_key(k, w));
          return it == got.terms().end() ? cplx(0) : it->second;
        };
        const cplx v0 = amp_at(0), v1 = amp_at(1);
        const double off2 = std::max(0.0, 1.0 - std::norm(v0) - std::norm(v1));
        const cplx overlap =
            std::conj(o.stored_states[k][0]) * v0 + std::conj(o.stored_states[k][1]) * v1;
        max_dev = std::max(max_dev, std::sqrt(std::norm(overlap) + off2));
      }
    }
  }

  const double tolerance = 1e-10;
  Json r;
  r["command"] = "oracle-check";
  r["kind"] = o.kind;
  r["inputs"] = checked;
  r["max_deviation"] = max_dev;
  r["tolerance"] = tolerance;
  const bool ok = max_dev <= tolerance;
  r["ok"] = ok;
  out << r.dump(2) << "\n";
  return ok ? 0 : 4;
}

void add_schedule(CLI::App* cmd, Flags& f) {
  cmd->add_option("--schedule", f.schedule, "router wave schedule")
      ->check(CLI::IsMember({"sequential", "pipelined"}));
}

void add_compile_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--input", f.input, "input spec (JSON)")->required();
  auto* ct = cmd->add_flag("--clifford-t", f.clifford_t,
                           "lower dense compiles to the discrete H/T/CNOT alphabet");
  auto* eps = cmd->add_option("--eps", f.eps, "overall accuracy budget for the lowering")
                  ->check(CLI::PositiveNumber);
  ct->needs(eps);
  cmd->add_flag("--reset-root,!--no-reset-root", f.reset_root,
                "clear the amplitude root at the end (default on)");
  add_schedule(cmd, f);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"state preparation and memory-oracle compiler"};
  app.require_subcommand(1);

  CLI::App* compile = app.add_subcommand("compile", "compile a spec; print a JSON report");
  add_compile_flags(compile, f);
  compile->add_option("--out", f.out_path, "write the compiled circuit (qcf text) here");

  CLI::App* verify = app.add_subcommand("verify", "compile, simulate, and check a spec");
  add_compile_flags(verify, f);
  verify->add_option("--circuit", f.circuit_path,
                     "replay this qcf file instead of the fresh compile");
  verify->add_option("--threshold", f.threshold, "fidelity floor (default 1 - 1e-9)");

  CLI::App* sweep = app.add_subcommand("sweep", "depth/qubit scaling table (CSV)");
  sweep->add_option("--input", f.input, "sweep config (JSON)")->required();
  sweep->add_option("--out", f.out_path, "write the CSV here instead of stdout");
  auto* seed_opt = sweep->add_option("--seed", f.seed, "override the config seed");

  CLI::App* estimate = app.add_subcommand("estimate", "qubitization resource formulas");
  estimate->add_option("--input", f.input, "product-term operator (JSON)")->required();
  estimate->add_option("--t", f.t, "evolution time (default 0)");
  estimate->add_option("--eps", f.eps, "target accuracy in (0, 1]")->required();
  add_schedule(estimate, f);

  CLI::App* oracle = app.add_subcommand("oracle-check", "exhaustive oracle equivalence");
  oracle->add_option("--input", f.input, "oracle spec (JSON)")->required();
  add_schedule(oracle, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  f.seed_given = seed_opt->count() > 0;

  const char* name = app.get_subcommands().front()->get_name().c_str();
  const auto t0 = std::chrono::steady_clock::now();
  int rc;
  try {
    if (app.got_subcommand(compile)) rc = cmd_compile(f, out);
    else if (app.got_subcommand(verify)) rc = cmd_verify(f, out);
    else if (app.got_subcommand(sweep)) rc = cmd_sweep(f, out);
    else if (app.got_subcommand(estimate)) rc = cmd_estimate(f, out);
    else rc = cmd_oracle_check(f, out);
  } catch (const VerificationFailedError& e) {
    err << "verification failed: " << e.what() << "\n";
    return 4;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DuplicateEntriesError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DuplicateIndicesError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnnormalizedWordError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ZeroAmplitudeOnlyEntriesError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NonpositiveCoefficientError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "compile failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "compile failed: " << e.what() << "\n";
    return 3;
  }
  const auto ms = std::chrono::duration<double, std::milli>(
      std::chrono::steady_clock::now() - t0);
  err << name << ": exit " << rc << " (" << ms.count() << " ms)\n";
  return rc;
}

}  // namespace qprep::cli
