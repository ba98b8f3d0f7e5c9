#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qprep/circuit.hpp"
#include "qprep/mat2.hpp"
#include "qprep/tree_ops.hpp"

namespace qprep {

// Two data-access compilers built on the same routed-tree idea.
//
// A product-unitary memory (PUM) holds one single-qubit unitary per word bit
// per index value; select(U) applies |k>|z> -> |k> U(k)|z> with
// U(k) = U_{w-1}(k) x ... x U_0(k). A sparse Boolean memory (SBM) holds a
// sparse function f and applies |k>|z> -> |k>|z xor f(k)>. Both restore every
// ancilla they touch on every branch.

enum class RouteSchedule {
  Sequential,  // one wave per inserted qubit; depth quadratic in tree depth
  Pipelined,   // overlapped waves; depth affine in tree depth (12x + 2)
};

struct ProductUnitaryFunction {
  int index_bits = 0;  // d = 2^index_bits stored cells
  int word_bits = 0;
  /// table[k][l]: unitary applied to word bit l when the index equals k.
  /// Size 2^index_bits rows of word_bits entries each.
  std::vector<std::vector<Mat2>> table;
};

/// index_bits >= 1, word_bits >= 1, full table, every entry unitary (1e-9).
void validate_product_unitary(const ProductUnitaryFunction& u);

struct SparseBooleanFunction {
  int index_bits = 0;
  int word_bits = 0;
  /// (key, value) with value != 0; keys distinct. Absent keys map to 0.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;
};

/// index_bits/word_bits >= 1, keys in range and distinct (DuplicateEntriesError),
/// values in range and nonzero.
void validate_sparse_boolean(const SparseBooleanFunction& f);

struct RouterNode {
  QubitId incident;
  QubitId route;
};

/// Binary routing tree plus the memory cells it feeds. Level i (0-based) of
/// the tree holds router_count(i) routers; a router's left/right outputs are
/// the incident qubits of its children, or the leaf ports at the last level.
///
/// When the schedule needs the tree deeper than the index register (levels
/// padded to a multiple of 6), the extra top levels route constant-0 filler
/// bits, so content only ever moves into the leftmost subtree; those levels
/// keep a single spine router whose right output is a dead spare qubit.
struct RouterLayout {
  int levels = 0;      // tree depth after padding
  int pad_levels = 0;  // top levels fed by filler bits
  std::vector<std::vector<RouterNode>> routers;  // [level][j]
  std::vector<QubitId> pad_bits;                 // one filler bit per padded level
  std::vector<QubitId> spine_spares;             // dead right outputs, one per padded level
  std::vector<QubitId> leaf_ports;               // O[k], k < 2^(levels - pad_levels)
  std::vector<QubitId> index;                    // the register routed in (bit i = 2^i)
  QubitId word;
  QubitId pointer;                      // starts |1>, marks the addressed cell
  std::vector<QubitId> cell_pointer;    // per-cell holder the pointer lands in
  std::vector<QubitId> cell_word;       // per-cell holder the word lands in

  int router_count(int level) const {
    return level < pad_levels ? 1 : 1 << (level - pad_levels);
  }
  QubitId left_of(int level, int j) const;
  QubitId right_of(int level, int j) const;
};

/// Allocates the tree for `index` (size >= 1) and `word` under `prefix`
/// (roles `R[i][j].incident` / `.route`, `R[i][0].spare`, `pad[m]`, `O[k]`,
/// `pointer`, `cell[k].pointer` / `.word`). Pipelined pads the depth up to a
/// multiple of 6; Sequential pads nothing.
RouterLayout make_router_layout(QubitRegistry& registry, const std::string& prefix,
                                std::span<const QubitId> index, QubitId word,
                                RouteSchedule schedule);

/// One wave of the route-in schedule: an optional feed swap into the tree
/// root (an index bit, the pointer, or the word), an optional level whose
/// routers absorb their arrived bit, optional port-to-cell unload swaps, and
/// the set of levels that fire their routing step. Levels are 1-based here;
/// layout level = plan level - 1.
struct RouteLine {
  enum class Feed { None, Index, Pointer, Word };
  Feed feed = Feed::None;
  int feed_step = 0;  // 1-based insertion order when feed == Index
  int set_level = 0;  // 0 = none
  bool output_pointer = false;
  bool output_word = false;
  std::vector<int> route_levels;
};

/// The wave program for a tree of the given depth. Sequential works at any
/// depth >= 1; Pipelined requires a multiple of 6 (SpecError otherwise).
std::vector<RouteLine> route_in_plan(int levels, RouteSchedule schedule);

/// Layer count the plan compiles to: 4 per wave with routing, 1 otherwise.
int route_in_depth(int levels, RouteSchedule schedule);

/// Emits the plan on a concrete layout. After the block, route qubits along
/// the addressed path hold the index bits, the pointer sits in the addressed
/// cell's pointer holder, the word in its word holder, and the index
/// register, pads and ports are |0>.
LayerList route_in_layers(const RouterLayout& layout, RouteSchedule schedule);

/// Standalone route-in circuit on a fresh copy of `registry` (single stage
/// "route-in").
Circuit compile_route_in(const QubitRegistry& registry, const RouterLayout& layout,
                         RouteSchedule schedule);

/// Toggles the tree root iff the leaves spell `pattern` (leaf j = bit j);
/// every other tree node is restored. Interiors must start |0>.
LayerList toffoli_match_layers(const TreeWires& tree, std::uint64_t pattern);

/// Standalone matcher on its own tree (roles `node[m][j]`): leaf_count inputs
/// padded up to a power of two with constant-0 leaves, root = `node[0][0]`.
Circuit compile_toffoli_match(std::uint64_t pattern, int leaf_count);

/// A compiled fragment that composes into a larger circuit; stage spans are
/// relative to the block's first layer.
struct OracleBlock {
  LayerList layers;
  std::vector<StageSpan> stages;
};

/// select(U) for one word bit: route-in, one layer of cell-controlled
/// unitaries, route-out (the exact reverse). `unitaries[k]` is applied when
/// the index equals k; identities are skipped, X lowers to CNOT.
OracleBlock build_pum_single(QubitRegistry& registry, const std::string& prefix,
                             std::span<const QubitId> index, QubitId word,
                             std::span<const Mat2> unitaries, RouteSchedule schedule);

/// Full select(U): one single-word block per non-identity word bit, running
/// in parallel on fanned-out index copies (copies skipped when <= 1 block).
OracleBlock build_pum_multi(QubitRegistry& registry, const std::string& prefix,
                            std::span<const QubitId> index, std::span<const QubitId> word,
                            const ProductUnitaryFunction& u, RouteSchedule schedule);

/// select(f): per word bit, XOR the match indicator of the stored keys whose
/// value has that bit into the word qubit, via per-key comparator trees whose
/// roots feed a parity tree. Parallel word bits use fanned-out index copies.
OracleBlock build_sbm(QubitRegistry& registry, const std::string& prefix,
                      std::span<const QubitId> index, std::span<const QubitId> word,
                      const SparseBooleanFunction& f);

/// Standalone wrappers with fresh registries (top-level roles `index[i]`,
/// `word[l]` / `word`).
Circuit compile_pum_single(const ProductUnitaryFunction& u,
                           RouteSchedule schedule = RouteSchedule::Pipelined);
Circuit compile_pum_multi(const ProductUnitaryFunction& u,
                          RouteSchedule schedule = RouteSchedule::Pipelined);
Circuit compile_sbm(const SparseBooleanFunction& f);

/// Table lookup |k>|z> -> |k>|z xor data[k]>; data has 2^address_bits words
/// of word_bits each. Zero words cost nothing.
Circuit compile_qram_binary(int address_bits, int word_bits,
                            std::span<const std::uint64_t> data);

/// State lookup |k>|0> -> |k>|D_k> for stored single-qubit states D_k
/// (states.size() = 2^n, n >= 1, each normalized within 1e-9, else
/// UnnormalizedWordError). The cell unitary has first column D_k, so the
/// all-zero word loads the stored state; the orthogonal second column is
/// phase-fixed with its first nonzero entry real positive.
Circuit compile_qram_continuous(std::span<const std::array<cplx, 2>> states,
                                RouteSchedule schedule = RouteSchedule::Pipelined);

}  // namespace qprep
