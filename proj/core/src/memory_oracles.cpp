#include "qprep/memory_oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include "qprep/errors.hpp"

namespace qprep {

namespace {

constexpr double kLowerTol = 1e-12;

double entry_distance(const Mat2& a, const Mat2& b) {
  double worst = 0;
  for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a.m[i] - b.m[i]));
  return worst;
}

std::string bracket(const std::string& base, int i) {
  return base + "[" + std::to_string(i) + "]";
}

/// Every route-in gate is a self-inverse X / SWAP / CSWAP and gates within a
/// layer commute, so reversing the layer order inverts the whole block.
LayerList reversed_layers(const LayerList& in) {
  LayerList out;
  for (auto it = in.layers().rbegin(); it != in.layers().rend(); ++it) out.push_layer(*it);
  return out;
}

}  // namespace

void validate_product_unitary(const ProductUnitaryFunction& u) {
  if (u.index_bits < 1 || u.index_bits > 24) throw SpecError("index_bits out of range");
  if (u.word_bits < 1 || u.word_bits > 64) throw SpecError("word_bits out of range");
  if (u.table.size() != std::size_t(1) << u.index_bits)
    throw SpecError("unitary table must cover every index value");
  for (const auto& row : u.table) {
    if (row.size() != std::size_t(u.word_bits))
      throw SpecError("unitary table row width differs from word_bits");
    for (const Mat2& m : row)
      if (m.unitarity_defect() > 1e-12) throw SpecError("stored matrix is not unitary");
  }
}

void validate_sparse_boolean(const SparseBooleanFunction& f) {
  if (f.index_bits < 1 || f.index_bits > 60) throw SpecError("index_bits out of range");
  if (f.word_bits < 1 || f.word_bits > 60) throw SpecError("word_bits out of range");
  std::vector<std::uint64_t> keys;
  for (const auto& [k, v] : f.entries) {
    if (k >> f.index_bits) throw SpecError("entry key outside the index range");
    if (v == 0) throw SpecError("entry stores the all-zero word");
    if (v >> f.word_bits) throw SpecError("entry value outside the word range");
    keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
    throw DuplicateEntriesError("the same key is listed twice");
}

QubitId RouterLayout::left_of(int level, int j) const {
  if (level == levels - 1) return leaf_ports[2 * std::size_t(j)];
  return routers[level + 1][2 * j].incident;
}

QubitId RouterLayout::right_of(int level, int j) const {
  if (level == levels - 1) return leaf_ports[2 * std::size_t(j) + 1];
  if (level < pad_levels) return spine_spares[level];
  return routers[level + 1][2 * j + 1].incident;
}

RouterLayout make_router_layout(QubitRegistry& registry, const std::string& prefix,
                                std::span<const QubitId> index, QubitId word,
                                RouteSchedule schedule) {
  const int n = static_cast<int>(index.size());
  if (n < 1) throw SpecError("router tree needs at least one index bit");
  const int pad = schedule == RouteSchedule::Pipelined ? (6 - n % 6) % 6 : 0;
  RouterLayout out;
  out.levels = n + pad;
  out.pad_levels = pad;
  out.index.assign(index.begin(), index.end());
  out.word = word;
  for (int m = 0; m < pad; ++m)
    out.pad_bits.push_back(registry.allocate(bracket(prefix + "pad", m)));
  out.routers.resize(out.levels);
  for (int i = 0; i < out.levels; ++i) {
    for (int j = 0; j < out.router_count(i); ++j) {
      const std::string base = bracket(bracket(prefix + "R", i), j);
      out.routers[i].push_back(
          {registry.allocate(base + ".incident"), registry.allocate(base + ".route")});
    }
    if (i < pad)
      out.spine_spares.push_back(registry.allocate(bracket(prefix + "R", i) + "[0].spare"));
  }
  const std::size_t d = std::size_t(1) << n;
  for (std::size_t k = 0; k < d; ++k)
    out.leaf_ports.push_back(registry.allocate(bracket(prefix + "O", static_cast<int>(k))));
  out.pointer = registry.allocate(prefix + "pointer", 1);
  for (std::size_t k = 0; k < d; ++k) {
    const std::string base = bracket(prefix + "cell", static_cast<int>(k));
    out.cell_pointer.push_back(registry.allocate(base + ".pointer"));
    out.cell_word.push_back(registry.allocate(base + ".word"));
  }
  return out;
}

std::vector<RouteLine> route_in_plan(int levels, RouteSchedule schedule) {
  if (levels < 1) throw SpecError("route-in needs at least one tree level");
  std::vector<RouteLine> plan;
  auto line = [&]() -> RouteLine& { return plan.emplace_back(); };

  if (schedule == RouteSchedule::Sequential) {
    for (int m = 1; m <= levels; ++m) {
      RouteLine& f = line();
      f.feed = RouteLine::Feed::Index;
      f.feed_step = m;
      for (int l = 1; l < m; ++l) line().route_levels = {l};
      line().set_level = m;
    }
    line().feed = RouteLine::Feed::Pointer;
    for (int l = 1; l <= levels; ++l) line().route_levels = {l};
    line().output_pointer = true;
    line().feed = RouteLine::Feed::Word;
    for (int l = 1; l <= levels; ++l) line().route_levels = {l};
    line().output_word = true;
    return plan;
  }

  if (levels % 6 != 0)
    throw SpecError("pipelined route-in needs the tree depth to be a multiple of 6");
  const int nt = levels;
  // {2l : lo <= l <= hi} resp. {2l-1 : ...}, lower bound clamped to level 1.
  // Waves only ever merge levels of one parity, which keeps the routers of a
  // wave disjoint (adjacent levels share their incident qubits).
  auto evens = [](int lo, int hi) {
    std::vector<int> v;
    for (int l = std::max(1, lo); l <= hi; ++l) v.push_back(2 * l);
    return v;
  };
  auto odds = [](int lo, int hi) {
    std::vector<int> v;
    for (int l = std::max(1, lo); l <= hi; ++l) v.push_back(2 * l - 1);
    return v;
  };

  // Loading phase: three bits enter per block while the levels behind them
  // keep draining.
  for (int L = 1; L <= nt / 3; ++L) {
    {
      RouteLine& x = line();
      x.feed = RouteLine::Feed::Index;
      x.feed_step = 3 * L - 2;
      x.route_levels = evens(1, L - 1);
    }
    {
      RouteLine& x = line();
      x.route_levels = odds(1, L - 1);
      x.set_level = 2 * L - 1;
    }
    {
      RouteLine& x = line();
      x.feed = RouteLine::Feed::Index;
      x.feed_step = 3 * L - 1;
      x.route_levels = evens(1, L - 1);
    }
    line().route_levels = odds(1, L);
    {
      RouteLine& x = line();
      x.feed = RouteLine::Feed::Index;
      x.feed_step = 3 * L;
      x.route_levels = evens(1, L - 1);
      x.set_level = 2 * L;
    }
    line().route_levels = odds(1, L);
  }

  // The pointer and word enter right behind the last index bit.
  {
    RouteLine& x = line();
    x.feed = RouteLine::Feed::Pointer;
    x.route_levels = evens(1, nt / 3);
  }
  {
    RouteLine& x = line();
    x.route_levels = odds(1, nt / 3);
    x.set_level = 2 * nt / 3 + 1;
  }
  {
    RouteLine& x = line();
    x.feed = RouteLine::Feed::Word;
    x.route_levels = evens(1, nt / 3);
  }

  // Draining phase: the in-flight window walks down the tree.
  for (int L = nt / 3 + 1; L <= nt / 2 - 1; ++L) {
    line().route_levels = odds(3 * L - nt - 2, L);
    {
      RouteLine& x = line();
      x.route_levels = evens(3 * L - nt - 2, L - 1);
      x.set_level = 2 * L;
    }
    line().route_levels = odds(3 * L - nt - 1, L);
    line().route_levels = evens(3 * L - nt - 1, L);
    {
      RouteLine& x = line();
      x.route_levels = odds(3 * L - nt, L);
      x.set_level = 2 * L + 1;
    }
    line().route_levels = evens(3 * L - nt, L);
  }

  // Tail: the last level absorbs its bit, then the pointer and word are
  // pushed through the leaf level and unloaded into the cells.
  line().route_levels = odds(nt / 2 - 2, nt / 2);
  {
    RouteLine& x = line();
    x.route_levels = evens(nt / 2 - 3, nt / 2 - 1);
    x.set_level = nt;
  }
  line().route_levels = odds(nt / 2 - 1, nt / 2);
  line().route_levels = {nt - 2, nt};
  line().output_pointer = true;
  line().route_levels = {nt - 1};
  line().route_levels = {nt};
  line().output_word = true;
  return plan;
}

int route_in_depth(int levels, RouteSchedule schedule) {
  int depth = 0;
  for (const RouteLine& l : route_in_plan(levels, schedule))
    depth += l.route_levels.empty() ? 1 : 4;
  return depth;
}

LayerList route_in_layers(const RouterLayout& layout, RouteSchedule schedule) {
  const int nt = layout.levels;
  // Insertion step m feeds the filler bits first, then the real index bits
  // most-significant first: the bit absorbed at level m halves the remaining
  // address range.
  auto feed_bit = [&](int m) {
    return m <= layout.pad_levels ? layout.pad_bits[m - 1] : layout.index[std::size_t(nt - m)];
  };
  LayerList out;
  for (const RouteLine& line : route_in_plan(nt, schedule)) {
    Layer l0;
    switch (line.feed) {
      case RouteLine::Feed::Index:
        l0.gates.push_back(Gate::swap(feed_bit(line.feed_step), layout.routers[0][0].incident));
        break;
      case RouteLine::Feed::Pointer:
        l0.gates.push_back(Gate::swap(layout.pointer, layout.routers[0][0].incident));
        break;
      case RouteLine::Feed::Word:
        l0.gates.push_back(Gate::swap(layout.word, layout.routers[0][0].incident));
        break;
      case RouteLine::Feed::None:
        break;
    }
    if (line.set_level > 0)
      for (const RouterNode& r : layout.routers[line.set_level - 1])
        l0.gates.push_back(Gate::swap(r.incident, r.route));
    if (line.output_pointer)
      for (std::size_t k = 0; k < layout.leaf_ports.size(); ++k)
        l0.gates.push_back(Gate::swap(layout.leaf_ports[k], layout.cell_pointer[k]));
    if (line.output_word)
      for (std::size_t k = 0; k < layout.leaf_ports.size(); ++k)
        l0.gates.push_back(Gate::swap(layout.leaf_ports[k], layout.cell_word[k]));
    if (line.route_levels.empty()) {
      out.push_layer(std::move(l0));
      continue;
    }
    Layer l1, l2, l3;
    for (int lv : line.route_levels) {
      const int i = lv - 1;
      for (int j = 0; j < layout.router_count(i); ++j) {
        const RouterNode& r = layout.routers[i][j];
        l0.gates.push_back(Gate::x(r.route));
        l1.gates.push_back(Gate::cswap(r.route, r.incident, layout.left_of(i, j)));
        l2.gates.push_back(Gate::x(r.route));
        l3.gates.push_back(Gate::cswap(r.route, r.incident, layout.right_of(i, j)));
      }
    }
    out.push_layer(std::move(l0));
    out.push_layer(std::move(l1));
    out.push_layer(std::move(l2));
    out.push_layer(std::move(l3));
  }
  return out;
}

Circuit compile_route_in(const QubitRegistry& registry, const RouterLayout& layout,
                         RouteSchedule schedule) {
  LayerList layers = route_in_layers(layout, schedule);
  const int d = static_cast<int>(layers.size());
  return finish_circuit(registry, std::move(layers), {{"route-in", 0, d - 1}});
}

LayerList toffoli_match_layers(const TreeWires& tree, std::uint64_t pattern) {
  const int h = tree.height();
  if (h < 1) throw SpecError("matcher tree needs height >= 1");
  const auto& leaves = tree.levels[h];
  if (leaves.size() > 64) throw SpecError("matcher supports at most 64 leaves");
  if (leaves.size() < 64 && (pattern >> leaves.size()) != 0)
    throw SpecError("match pattern wider than the leaf set");

  LayerList out;
  Layer flips;
  for (std::size_t j = 0; j < leaves.size(); ++j)
    if (((pattern >> j) & 1) == 0) flips.gates.push_back(Gate::x(leaves[j]));
  const bool have_flips = !flips.gates.empty();

  // CCNOT(level src pairs -> level src-1).
  auto pair_layer = [&](int src) {
    Layer l;
    const auto& s = tree.levels[src];
    const auto& d = tree.levels[src - 1];
    for (std::size_t j = 0; j < d.size(); ++j)
      l.gates.push_back(Gate::ccnot(s[2 * j], s[2 * j + 1], d[j]));
    out.push_layer(std::move(l));
  };

  if (have_flips) out.push_layer(flips);
  for (int m = h; m >= 1; --m) pair_layer(m);
  if (h >= 2) {
    // Clearing runs upward so each level is cleared against its still-intact
    // children; the leaf-pair layer then clears the last interior level.
    for (int m = 2; m <= h - 1; ++m) pair_layer(m);
    pair_layer(h);
  }
  if (have_flips) out.push_layer(flips);
  return out;
}

Circuit compile_toffoli_match(std::uint64_t pattern, int leaf_count) {
  if (leaf_count < 1 || leaf_count > 63) throw SpecError("leaf_count out of range");
  if (pattern >> leaf_count) throw SpecError("pattern wider than leaf_count");
  const auto slots = std::bit_ceil(std::uint64_t(std::max(2, leaf_count)));
  QubitRegistry registry;
  TreeWires tree = allocate_tree(registry, "node", std::countr_zero(slots));
  LayerList layers = toffoli_match_layers(tree, pattern);
  const int d = static_cast<int>(layers.size());
  return finish_circuit(std::move(registry), std::move(layers), {{"match", 0, d - 1}});
}

OracleBlock build_pum_single(QubitRegistry& registry, const std::string& prefix,
                             std::span<const QubitId> index, QubitId word,
                             std::span<const Mat2> unitaries, RouteSchedule schedule) {
  if (index.empty()) throw SpecError("router tree needs at least one index bit");
  if (unitaries.size() != std::size_t(1) << index.size())
    throw SpecError("need one unitary per index value");
  for (const Mat2& u : unitaries)
    if (u.unitarity_defect() > 1e-12) throw SpecError("stored matrix is not unitary");

  RouterLayout layout = make_router_layout(registry, prefix, index, word, schedule);
  LayerList in = route_in_layers(layout, schedule);
  LayerList back = reversed_layers(in);

  Layer query;
  for (std::size_t k = 0; k < unitaries.size(); ++k) {
    const Mat2& u = unitaries[k];
    if (entry_distance(u, Mat2::identity()) <= kLowerTol) continue;
    if (entry_distance(u, Mat2::x()) <= kLowerTol)
      query.gates.push_back(Gate::cnot(layout.cell_pointer[k], layout.cell_word[k]));
    else
      query.gates.push_back(Gate::cu(layout.cell_pointer[k], layout.cell_word[k], u));
  }

  OracleBlock b;
  const int r = static_cast<int>(in.size());
  b.layers = std::move(in);
  b.stages.push_back({"route-in", 0, r - 1});
  if (query.gates.empty()) {
    b.stages.push_back({"query", r, r - 1});
    b.stages.push_back({"route-out", r, 2 * r - 1});
  } else {
    b.layers.push_layer(std::move(query));
    b.stages.push_back({"query", r, r});
    b.stages.push_back({"route-out", r + 1, 2 * r});
  }
  b.layers.seq(back);
  return b;
}

namespace {

struct FanoutCopies {
  std::vector<TreeWires> trees;              // one per index bit
  std::vector<std::vector<QubitId>> copies;  // copies[j][i] = leaf j of tree i
  LayerList layers;  // one broadcast wave; replaying it restores the copies
};

FanoutCopies build_fanout_copies(QubitRegistry& registry, const std::string& prefix,
                                 std::span<const QubitId> index, int count) {
  const auto slots = std::bit_ceil(std::uint64_t(std::max(2, count)));
  const int h = std::countr_zero(slots);
  FanoutCopies f;
  for (std::size_t i = 0; i < index.size(); ++i) {
    TreeWires t = allocate_tree_under(registry, bracket(prefix + "fan", static_cast<int>(i)), h,
                                      index[i]);
    f.layers.par(broadcast_root_to_leaves(t));
    f.trees.push_back(std::move(t));
  }
  f.copies.resize(slots);
  for (std::size_t j = 0; j < f.copies.size(); ++j) {
    f.copies[j].resize(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) f.copies[j][i] = f.trees[i].levels[h][j];
  }
  return f;
}

}  // namespace

OracleBlock build_pum_multi(QubitRegistry& registry, const std::string& prefix,
                            std::span<const QubitId> index, std::span<const QubitId> word,
                            const ProductUnitaryFunction& u, RouteSchedule schedule) {
  validate_product_unitary(u);
  if (index.size() != std::size_t(u.index_bits) || word.size() != std::size_t(u.word_bits))
    throw SpecError("register sizes disagree with the stored table");

  // Word bits whose whole column is the identity need no circuit at all.
  std::vector<std::vector<Mat2>> columns(word.size());
  std::vector<int> active;
  for (std::size_t l = 0; l < word.size(); ++l) {
    bool nontrivial = false;
    for (const auto& row : u.table) {
      columns[l].push_back(row[l]);
      if (entry_distance(row[l], Mat2::identity()) > kLowerTol) nontrivial = true;
    }
    if (nontrivial) active.push_back(static_cast<int>(l));
  }

  OracleBlock b;
  if (active.empty()) return b;
  if (active.size() == 1) {
    const int l = active[0];
    return build_pum_single(registry, prefix + "u" + std::to_string(l) + ".", index, word[l],
                            columns[l], schedule);
  }

  FanoutCopies fan =
      build_fanout_copies(registry, prefix, index, static_cast<int>(active.size()));
  // Every selected column holds a non-identity entry, so each block carries a
  // query layer and all blocks share the same depth; the first block's spans
  // therefore describe them all.
  LayerList instances;
  std::vector<StageSpan> inner;
  for (std::size_t s = 0; s < active.size(); ++s) {
    const int l = active[s];
    OracleBlock one = build_pum_single(registry, prefix + "u" + std::to_string(l) + ".",
                                       fan.copies[s], word[l], columns[l], schedule);
    if (s == 0) inner = one.stages;
    instances.par(one.layers);
  }

  const int fd = static_cast<int>(fan.layers.size());
  const int md = static_cast<int>(instances.size());
  b.layers = fan.layers;
  b.layers.seq(instances);
  b.layers.seq(fan.layers);
  b.stages.push_back({"fanout-copies", 0, fd - 1});
  for (const StageSpan& s : inner) b.stages.push_back({s.name, s.first + fd, s.last + fd});
  b.stages.push_back({"restore-copies", fd + md, 2 * fd + md - 1});
  return b;
}

namespace {

struct SbmInstance {
  LayerList layers;
  std::vector<StageSpan> stages;
};

/// XORs [index == some key] into `word` for one stored-key list: broadcast
/// each index bit to one leaf column per key, toggle each key's comparator
/// root on match, collect the (at most one) indicator into `word` by parity,
/// then replay the comparators and broadcasts to restore everything.
SbmInstance build_sbm_instance(QubitRegistry& registry, const std::string& prefix,
                               std::span<const QubitId> index, QubitId word,
                               std::span<const std::uint64_t> keys) {
  const int n = static_cast<int>(index.size());
  const int s = static_cast<int>(keys.size());
  const int ls = std::countr_zero(std::bit_ceil(std::uint64_t(std::max(2, s))));
  const int ln = std::countr_zero(std::bit_ceil(std::uint64_t(std::max(2, n))));
  const int n_slots = 1 << ln;

  std::vector<TreeWires> idx;
  for (int l = 0; l < n; ++l)
    idx.push_back(allocate_tree_under(registry, bracket(prefix + "idx", l), ls, index[l]));
  TreeWires wrd = allocate_tree_under(registry, prefix + "wrd", ls, word);

  // Comparator tree for key slot w: its leaves are column w across the index
  // trees (shared qubits) padded with constant 0, its root is word-tree leaf
  // w. Pads are per-slot so the parallel flip layers stay disjoint.
  std::vector<TreeWires> mem;
  for (int w = 0; w < s; ++w) {
    const std::string base = bracket(prefix + "mem", w);
    TreeWires t;
    t.levels.resize(ln + 1);
    t.levels[0].push_back(wrd.levels[ls][w]);
    for (int m = 1; m < ln; ++m)
      for (int j = 0; j < (1 << m); ++j)
        t.levels[m].push_back(registry.allocate(bracket(bracket(base, m), j)));
    for (int l = 0; l < n_slots; ++l)
      t.levels[ln].push_back(l < n ? idx[l].levels[ls][w]
                                   : registry.allocate(bracket(base + ".pad", l)));
    mem.push_back(std::move(t));
  }

  LayerList fan;
  for (const TreeWires& t : idx) fan.par(broadcast_root_to_leaves(t));
  LayerList match;
  for (int w = 0; w < s; ++w) match.par(toffoli_match_layers(mem[w], keys[w]));
  LayerList collect = collect_parity_to_root(wrd);

  SbmInstance out;
  const int fd = static_cast<int>(fan.size());
  const int md = static_cast<int>(match.size());
  const int cd = static_cast<int>(collect.size());
  out.layers = fan;
  out.layers.seq(match);
  out.layers.seq(collect);
  out.layers.seq(match);
  out.layers.seq(fan);
  out.stages = {{"fanout", 0, fd - 1},
                {"match", fd, fd + md - 1},
                {"collect", fd + md, fd + md + cd - 1},
                {"unmatch", fd + md + cd, fd + 2 * md + cd - 1},
                {"unfanout", fd + 2 * md + cd, 2 * fd + 2 * md + cd - 1}};
  return out;
}

}  // namespace

OracleBlock build_sbm(QubitRegistry& registry, const std::string& prefix,
                      std::span<const QubitId> index, std::span<const QubitId> word,
                      const SparseBooleanFunction& f) {
  validate_sparse_boolean(f);
  if (index.size() != std::size_t(f.index_bits) || word.size() != std::size_t(f.word_bits))
    throw SpecError("register sizes disagree with the stored function");

  std::vector<std::vector<std::uint64_t>> keys(word.size());
  for (const auto& [k, v] : f.entries)
    for (std::size_t l = 0; l < word.size(); ++l)
      if ((v >> l) & 1) keys[l].push_back(k);
  std::vector<int> active;
  for (std::size_t l = 0; l < word.size(); ++l)
    if (!keys[l].empty()) active.push_back(static_cast<int>(l));

  OracleBlock b;
  if (active.empty()) return b;
  if (active.size() == 1) {
    const int l = active[0];
    SbmInstance one = build_sbm_instance(registry, prefix + "b" + std::to_string(l) + ".",
                                         index, word[l], keys[l]);
    b.layers = std::move(one.layers);
    b.stages = std::move(one.stages);
    return b;
  }

  FanoutCopies fan =
      build_fanout_copies(registry, prefix, index, static_cast<int>(active.size()));
  LayerList instances;  // uneven key counts give uneven depths; par() aligns starts
  for (std::size_t s = 0; s < active.size(); ++s) {
    const int l = active[s];
    instances.par(build_sbm_instance(registry, prefix + "b" + std::to_string(l) + ".",
                                     fan.copies[s], word[l], keys[l])
                      .layers);
  }

  const int fd = static_cast<int>(fan.layers.size());
  const int md = static_cast<int>(instances.size());
  b.layers = fan.layers;
  b.layers.seq(instances);
  b.layers.seq(fan.layers);
  b.stages = {{"fanout-copies", 0, fd - 1},
              {"select-words", fd, fd + md - 1},
              {"restore-copies", fd + md, 2 * fd + md - 1}};
  return b;
}

namespace {

std::vector<QubitId> allocate_register(QubitRegistry& registry, const std::string& base,
                                       int count) {
  std::vector<QubitId> out;
  for (int i = 0; i < count; ++i) out.push_back(registry.allocate(bracket(base, i)));
  return out;
}

}  // namespace

Circuit compile_pum_single(const ProductUnitaryFunction& u, RouteSchedule schedule) {
  validate_product_unitary(u);
  if (u.word_bits != 1) throw SpecError("single-word compiler requires word_bits = 1");
  QubitRegistry registry;
  std::vector<QubitId> index = allocate_register(registry, "index", u.index_bits);
  QubitId word = registry.allocate("word");
  std::vector<Mat2> column;
  for (const auto& row : u.table) column.push_back(row[0]);
  OracleBlock b = build_pum_single(registry, "", index, word, column, schedule);
  return finish_circuit(std::move(registry), std::move(b.layers), std::move(b.stages));
}

Circuit compile_pum_multi(const ProductUnitaryFunction& u, RouteSchedule schedule) {
  validate_product_unitary(u);
  QubitRegistry registry;
  std::vector<QubitId> index = allocate_register(registry, "index", u.index_bits);
  std::vector<QubitId> word = allocate_register(registry, "word", u.word_bits);
  OracleBlock b = build_pum_multi(registry, "", index, word, u, schedule);
  return finish_circuit(std::move(registry), std::move(b.layers), std::move(b.stages));
}

Circuit compile_sbm(const SparseBooleanFunction& f) {
  validate_sparse_boolean(f);
  QubitRegistry registry;
  std::vector<QubitId> index = allocate_register(registry, "index", f.index_bits);
  std::vector<QubitId> word = allocate_register(registry, "word", f.word_bits);
  OracleBlock b = build_sbm(registry, "", index, word, f);
  return finish_circuit(std::move(registry), std::move(b.layers), std::move(b.stages));
}

Circuit compile_qram_binary(int address_bits, int word_bits,
                            std::span<const std::uint64_t> data) {
  if (address_bits < 1 || address_bits > 30) throw SpecError("address_bits out of range");
  if (word_bits < 1 || word_bits > 60) throw SpecError("word_bits out of range");
  if (data.size() != std::size_t(1) << address_bits)
    throw SpecError("need one stored word per address");
  SparseBooleanFunction f;
  f.index_bits = address_bits;
  f.word_bits = word_bits;
  for (std::size_t k = 0; k < data.size(); ++k)
    if (data[k] != 0) f.entries.emplace_back(k, data[k]);
  return compile_sbm(f);
}

Circuit compile_qram_continuous(std::span<const std::array<cplx, 2>> states,
                                RouteSchedule schedule) {
  if (states.size() < 2 || !std::has_single_bit(states.size()))
    throw SpecError("state table size must be a power of two, at least 2");
  ProductUnitaryFunction u;
  u.index_bits = std::countr_zero(states.size());
  u.word_bits = 1;
  for (const auto& st : states) {
    if (std::abs(std::norm(st[0]) + std::norm(st[1]) - 1.0) > 1e-9)
      throw UnnormalizedWordError("stored state is not normalized");
    // First column is the stored state; the second is its orthogonal
    // completion, phase-fixed so its first nonzero entry is real positive.
    cplx p0 = -std::conj(st[1]);
    cplx p1 = std::conj(st[0]);
    const cplx lead = std::abs(p0) > kLowerTol ? p0 : p1;
    p0 *= std::abs(lead) / lead;
    p1 *= std::abs(lead) / lead;
    u.table.push_back({Mat2{{st[0], p0, st[1], p1}}});
  }
  return compile_pum_single(u, schedule);
}

}  // namespace qprep
