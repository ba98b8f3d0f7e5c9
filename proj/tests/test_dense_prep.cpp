#include "doctest.h"

#include <cmath>
#include <random>

#include "qprep/dense_prep.hpp"
#include "qprep/qcf.hpp"
#include "qprep/state.hpp"
#include "qprep/tree_ops.hpp"

#include "support/dense_reference.hpp"

using namespace qprep;
using namespace qprep::testing;

namespace {

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

SparseState target_state(const std::vector<cplx>& a, int n) {
  SparseState s(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k]) > 0) s.accumulate(key_for_index(k, static_cast<std::size_t>(n)), a[k]);
  return s;
}

// Independent readback of the angle tree: the amplitude of index k is the
// product over levels of cos/sin of the angle at k's ancestor, with the leaf
// phase on top.
cplx angle_tree_amplitude(const AngleTree& at, std::size_t k) {
  double mag = 1.0;
  for (int l = 1; l <= at.n; ++l) {
    std::size_t node = k >> (at.n - l);          // hot node at level l
    double th = at.theta[l][node >> 1];          // its parent's angle
    mag *= (node & 1) ? std::sin(th) : std::cos(th);
  }
  return std::polar(mag, at.phase[k]);
}

}  // namespace

TEST_CASE("angle tree on pinned vectors") {
  const double r = 1.0 / std::sqrt(2.0);

  SUBCASE("bell-like vector") {
    AngleTree at = compute_angle_tree({cplx(r), cplx(0), cplx(0), cplx(r)});
    CHECK(at.n == 2);
    CHECK(at.theta[1][0] == doctest::Approx(M_PI / 4));
    CHECK(at.theta[2][0] == doctest::Approx(0.0));
    CHECK(at.theta[2][1] == doctest::Approx(M_PI / 2));
  }

  SUBCASE("basis vector exercises the zero-parent guard") {
    AngleTree at = compute_angle_tree({cplx(0), cplx(0), cplx(1), cplx(0)});
    CHECK(at.theta[1][0] == doctest::Approx(M_PI / 2));
    CHECK(at.theta[2][0] == 0.0);  // parent branch holds no mass
    CHECK(at.theta[2][1] == doctest::Approx(0.0));
  }

  SUBCASE("phases are the amplitude arguments") {
    AngleTree at = compute_angle_tree({cplx(0, r), cplx(-r, 0)});
    CHECK(at.phase[0] == doctest::Approx(M_PI / 2));
    CHECK(at.phase[1] == doctest::Approx(M_PI));
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(compute_angle_tree({cplx(1)}), SpecError);
    CHECK_THROWS_AS(compute_angle_tree({cplx(1), cplx(0), cplx(0)}), SpecError);
    CHECK_THROWS_AS(compute_angle_tree({cplx(1), cplx(1)}), SpecError);
  }

  SUBCASE("round trip reproduces the amplitudes") {
    std::mt19937_64 rng(11);
    for (int n : {1, 2, 4}) {
      auto a = random_amplitudes(n, rng);
      AngleTree at = compute_angle_tree(a);
      for (std::size_t k = 0; k < a.size(); ++k)
        CHECK(std::abs(angle_tree_amplitude(at, k) - a[k]) < 1e-12);
    }
  }
}

TEST_CASE("parity collection folds a one-hot leaf into the root") {
  for (int height = 1; height <= 4; ++height) {
    QubitRegistry reg;
    TreeWires t = allocate_tree(reg, "T", height);
    Circuit c = finish_circuit(reg, collect_parity_to_root(t));
    CHECK(c.depth() == 4 * height - 2);

    const std::size_t leaves = std::size_t(1) << height;
    for (int root_bit = 0; root_bit < 2; ++root_bit) {
      // hot == leaves means "no leaf set".
      for (std::size_t hot = 0; hot <= leaves; ++hot) {
        BasisKey in(reg.size());
        if (root_bit) in.set(t.root(), true);
        if (hot < leaves) in.set(t.leaves()[hot], true);
        SparseState out =
            apply_circuit(c, {}, SparseState::basis(reg.size(), in));
        REQUIRE(out.term_count() == 1);
        const BasisKey& key = out.terms().begin()->first;
        bool want_root = (root_bit != 0) ^ (hot < leaves);
        CHECK(key.get(t.root()) == want_root);
        for (std::size_t j = 0; j < leaves; ++j)
          CHECK(key.get(t.leaves()[j]) == (hot == j));
        for (int m = 1; m < height; ++m)
          for (QubitId q : t.levels[m]) CHECK(!key.get(q));
      }
    }
  }
}

TEST_CASE("broadcast copies the root onto all leaves and self-inverts") {
  for (int height = 1; height <= 4; ++height) {
    QubitRegistry reg;
    TreeWires t = allocate_tree(reg, "T", height);
    Circuit c = finish_circuit(reg, broadcast_root_to_leaves(t));
    CHECK(c.depth() == 4 * height - 2);

    for (int z = 0; z < 2; ++z) {
      BasisKey in(reg.size());
      if (z) in.set(t.root(), true);
      SparseState mid = apply_circuit(c, {}, SparseState::basis(reg.size(), in));
      REQUIRE(mid.term_count() == 1);
      const BasisKey& key = mid.terms().begin()->first;
      CHECK(key.get(t.root()) == (z == 1));
      for (QubitId leaf : t.leaves()) CHECK(key.get(leaf) == (z == 1));
      for (int m = 1; m < height; ++m)
        for (QubitId q : t.levels[m]) CHECK(!key.get(q));

      SparseState back = apply_circuit(c, {}, mid);
      REQUIRE(back.term_count() == 1);
      CHECK(back.terms().begin()->first == in);
    }
  }
}

TEST_CASE("compiled shape: qubit count, depth, connectivity") {
  for (int n = 1; n <= 10; ++n) {
    std::vector<cplx> uniform(std::size_t(1) << n,
                              cplx(1.0 / std::sqrt(double(std::size_t(1) << n))));
    CompiledDense cd = compile_dense(uniform);
    CHECK(cd.circuit.qubit_count() == 6 * (std::size_t(1) << n) - n - 5);
    CHECK(cd.circuit.depth() == 19 * n - 2);  // includes the root reset
    CHECK(validate_connectivity(cd.circuit).empty());
    // Interior amplitude-tree nodes touch parent, two children, and one
    // parity leaf; that ceiling is stable across sizes.
    CHECK(cd.circuit.coupling->max_degree() == (n == 1 ? 2 : 4));

    CompiledDense keep = compile_dense(uniform, {.reset_root = false});
    CHECK(keep.circuit.depth() == 19 * n - 3);
  }
}

TEST_CASE("stage spans tile the circuit in order") {
  std::mt19937_64 rng(5);
  auto a = random_amplitudes(3, rng);
  CompiledDense cd = compile_dense(a);
  const auto& st = cd.circuit.stages;
  REQUIRE(st.size() == 7);
  CHECK(st[0].name == "stage1-rotations");
  CHECK(st[1].name == "stage1-phases");
  CHECK(st[2].name == "stage2-binary");
  CHECK(st[3].name == "stage3-fanout");
  CHECK(st[4].name == "stage4-uncompute");
  CHECK(st[5].name == "stage5-restore");
  CHECK(st[6].name == "reset-root");
  CHECK(st[0].first == 0);
  for (std::size_t i = 1; i < st.size(); ++i) CHECK(st[i].first == st[i - 1].last + 1);
  CHECK(st.back().last == cd.circuit.depth() - 1);

  // Spans survive the text format.
  Circuit back = parse_text(emit_text(cd.circuit));
  CHECK(back.stages == cd.circuit.stages);
}

TEST_CASE("prepares random dense states with clean ancillas") {
  std::mt19937_64 rng(20260819);
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      auto a = random_amplitudes(n, rng);
      CompiledDense cd = compile_dense(a);
      SparseState s = apply_circuit(cd.circuit);
      auto ext = extract_logical(s, cd.logical, cd.ancilla_expectation);
      CHECK(ext.clean);
      CHECK(fidelity(ext.state, target_state(a, n)) >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("prepares every basis vector exactly") {
  const int n = 3;
  for (std::size_t k = 0; k < 8; ++k) {
    std::vector<cplx> a(8, cplx(0));
    a[k] = 1.0;
    CompiledDense cd = compile_dense(a);
    SparseState s = apply_circuit(cd.circuit);
    auto ext = extract_logical(s, cd.logical, cd.ancilla_expectation);
    CHECK(ext.clean);
    REQUIRE(ext.state.term_count() == 1);
    CHECK(ext.state.terms().begin()->first == key_for_index(k, n));
  }
}

TEST_CASE("zero-branch guard case prepares |10>") {
  CompiledDense cd = compile_dense({cplx(0), cplx(0), cplx(1), cplx(0)});
  SparseState s = apply_circuit(cd.circuit);
  auto ext = extract_logical(s, cd.logical, cd.ancilla_expectation);
  CHECK(ext.clean);
  CHECK(fidelity(ext.state, target_state({0, 0, 1, 0}, 2)) == doctest::Approx(1.0));
}

TEST_CASE("keeping the root skips the final X") {
  std::mt19937_64 rng(3);
  auto a = random_amplitudes(2, rng);
  CompiledDense cd = compile_dense(a, {.reset_root = false});
  SparseState s = apply_circuit(cd.circuit);
  auto ext = extract_logical(s, cd.logical, cd.ancilla_expectation);
  CHECK(ext.clean);  // expectation records the surviving |1>
  CHECK(fidelity(ext.state, target_state(a, 2)) >= 1.0 - 1e-9);
  CHECK(cd.ancilla_expectation.get(cd.circuit.registry.id("H[0][0]")));
}

TEST_CASE("intermediate stages match the path and binary encodings") {
  std::mt19937_64 rng(99);
  const int n = 3;
  auto a = random_amplitudes(n, rng);
  CompiledDense cd = compile_dense(a);
  const QubitRegistry& reg = cd.circuit.registry;

  auto path_key = [&](std::size_t k, bool with_bits) {
    BasisKey key(reg.size());
    for (int l = 0; l <= n; ++l) {
      std::size_t j = k >> (n - l);
      key.set(reg.id("H[" + std::to_string(l) + "][" + std::to_string(j) + "]"), true);
    }
    if (with_bits)
      for (int l = 1; l <= n; ++l)
        if ((k >> (n - l)) & 1)
          key.set(reg.id("V[" + std::to_string(l) + "][0][0]"), true);
    return key;
  };

  SparseState after_phases(reg.size()), after_binary(reg.size());
  apply_circuit(cd.circuit, [&](int li, const SparseState& s) {
    if (li == 3 * n) after_phases = s;
    if (li == 7 * n) after_binary = s;
  });

  SparseState want_path(reg.size()), want_binary(reg.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    want_path.accumulate(path_key(k, false), a[k]);
    want_binary.accumulate(path_key(k, true), a[k]);
  }
  CHECK(fidelity(after_phases, want_path) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fidelity(after_binary, want_binary) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("blocks compose into a shared registry under prefixes") {
  std::mt19937_64 rng(8);
  auto a = random_amplitudes(2, rng);
  auto b = random_amplitudes(1, rng);

  QubitRegistry reg;
  DenseBlock blk_a = build_dense_block(reg, "A.", a, {});
  DenseBlock blk_b = build_dense_block(reg, "B.", b, {});
  CHECK(reg.has_role("A.H[0][0]"));
  CHECK(reg.has_role("B.H[0][0]"));
  CHECK(reg.has_role("A.V[2][0][0]"));

  LayerList ll;
  ll.seq(blk_a.layers);
  ll.seq(blk_b.layers);
  Circuit c = finish_circuit(reg, std::move(ll));
  SparseState s = apply_circuit(c);

  std::vector<QubitId> logical = blk_a.logical;
  logical.insert(logical.end(), blk_b.logical.begin(), blk_b.logical.end());
  auto ext = extract_logical(s, logical, BasisKey(reg.size()));
  CHECK(ext.clean);

  // Joint state is the tensor product: amplitude of (k_a, k_b) is a[k]*b[j].
  SparseState want(3);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t j = 0; j < 2; ++j) {
      BasisKey key(3);
      if (k & 1) key.set(QubitId(0), true);
      if (k & 2) key.set(QubitId(1), true);
      if (j & 1) key.set(QubitId(2), true);
      want.accumulate(key, a[k] * b[j]);
    }
  CHECK(fidelity(ext.state, want) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("greedy repacking never beats the constructed schedule by layers it needs") {
  // The constructed schedule deliberately aligns parallel tree sweeps, so an
  // ASAP repack may finish earlier but must never be later.
  std::mt19937_64 rng(17);
  for (int n = 2; n <= 5; ++n) {
    auto a = random_amplitudes(n, rng);
    CompiledDense cd = compile_dense(a);
    Circuit repacked;
    repacked.registry = cd.circuit.registry;
    for (const Layer& l : cd.circuit.layers)
      repacked = append(repacked, l.gates, AppendPolicy::GreedyPack);
    CHECK(repacked.depth() <= cd.circuit.depth());
    // Equivalent unitary: same prepared state.
    SparseState s1 = apply_circuit(cd.circuit);
    SparseState s2 = apply_circuit(repacked);
    CHECK(fidelity(s1, s2) == doctest::Approx(1.0).epsilon(1e-10));
  }
}
