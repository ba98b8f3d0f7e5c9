#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "qprep/block_encoding.hpp"
#include "qprep/memory_oracles.hpp"
#include "qprep/sparse_prep.hpp"

namespace qprep::cli {

using Json = nlohmann::ordered_json;

/// Parses JSON text; malformed input raises SpecError (exit code 2).
Json parse_json(const std::string& text);

/// Input files are told apart by shape: "amplitudes" = dense vector,
/// "entries" with bitstring "q" fields = sparse state, "kind" = memory
/// oracle, "terms" = product-term operator, "mode" = sweep config.
enum class SpecKind { Dense, Sparse, Oracle, Hamiltonian, Sweep };
SpecKind detect_kind(const Json& j);
const char* spec_kind_name(SpecKind k);

/// {"n": N, "amplitudes": [{"re": x, "im": y}, ...]} with 2^N entries;
/// absent re/im default to 0. The vector must be unit norm.
std::vector<cplx> load_dense(const Json& j);

/// {"n": N, "entries": [{"q": "0101...", "re": x, "im": y}, ...]};
/// q is an N-character bitstring, leftmost character = most significant
/// bit of the basis index.
SparseStateSpec load_sparse(const Json& j);

struct OracleSpec {
  std::string kind;  // pum | sbm | qram | cqram
  int index_bits = 0;
  int word_bits = 0;
  ProductUnitaryFunction pum;                       // kind == pum
  SparseBooleanFunction sbm;                        // kind == sbm
  std::vector<std::uint64_t> qram_words;            // kind == qram, 2^index_bits words
  std::vector<std::array<cplx, 2>> stored_states;   // kind == cqram, 2^index_bits states
};

/// {"kind": "pum"|"sbm"|"qram"|"cqram", "index_bits": d, "word_bits": w,
///  "entries": [{"k": key, "u": [...]} | {"k": key, "word": value}, ...]}.
/// Matrices are rows of 8 reals [re00,im00,re01,im01,re10,im10,re11,im11];
/// a pum entry's "u" holds word_bits of them (or one flat row when w = 1),
/// a cqram entry's "u" holds the 4 reals of the stored state. Unlisted keys
/// default to identity cells / zero words / the |0> state.
OracleSpec load_oracle(const Json& j);

/// {"n": N, "terms": [{"alpha": w, "paulis": "XZI..."} |
///                    {"alpha": w, "factors": [[8 reals] x N]}, ...]}.
ProductTermHamiltonian load_hamiltonian(const Json& j);

struct SweepConfig {
  std::string mode;          // dense | sparse | pum | sbm
  int lo = 0, hi = -1;       // n (dense/sparse) or index_bits (pum/sbm), inclusive
  std::vector<int> d_list;   // sparse mode sparsities
  int word_bits = 1;         // pum/sbm
  int entry_count = 2;       // sbm stored keys per instance
  int reps = 1;
  std::uint64_t seed = 0;
};

/// {"mode": "dense", "n": [2, 8], "reps": 1, "seed": 0}
/// {"mode": "sparse", "n": [12, 12], "d": [2, 4, 8, 16], ...}
/// {"mode": "pum"|"sbm", "index_bits": [1, 4], "word_bits": 2, ...}
/// Ranges are [lo, hi] inclusive (a bare integer means a single point)
/// and must be nonempty.
SweepConfig load_sweep(const Json& j);

}  // namespace qprep::cli
