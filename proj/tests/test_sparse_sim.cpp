#include "doctest.h"

#include <cmath>
#include <random>

#include "qprep/circuit.hpp"
#include "qprep/state.hpp"

#include "support/dense_reference.hpp"

using namespace qprep;
using namespace qprep::testing;

namespace {

QubitId qid(std::uint32_t v) { return QubitId(v); }

QubitRegistry flat_registry(int n, int inits = 0) {
  QubitRegistry r;
  for (int i = 0; i < n; ++i) r.allocate("q[" + std::to_string(i) + "]", (inits >> i) & 1);
  return r;
}

SparseState random_state(std::size_t nq, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  DenseVec v(std::size_t(1) << nq);
  double norm = 0;
  for (cplx& a : v) {
    a = cplx(dist(rng), dist(rng));
    norm += std::norm(a);
  }
  norm = std::sqrt(norm);
  for (cplx& a : v) a /= norm;
  return to_sparse(v, nq);
}

Gate random_gate(std::size_t nq, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind_pick(0, 11);
  std::uniform_int_distribution<std::uint32_t> qubit_pick(0, static_cast<std::uint32_t>(nq - 1));
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  auto distinct = [&](int k) {
    boost::container::small_vector<QubitId, 3> qs;
    while (static_cast<int>(qs.size()) < k) {
      QubitId q = qid(qubit_pick(rng));
      bool dup = false;
      for (QubitId p : qs) dup |= (p == q);
      if (!dup) qs.push_back(q);
    }
    return qs;
  };
  int kind = kind_pick(rng);
  if (nq < 3 && (kind == 9 || kind == 10)) kind = 11;  // no room for 3-qubit gates
  switch (kind) {
    case 0: return Gate::x(qid(qubit_pick(rng)));
    case 1: return Gate::h(qid(qubit_pick(rng)));
    case 2: return Gate::t(qid(qubit_pick(rng)));
    case 3: return Gate::tdg(qid(qubit_pick(rng)));
    case 4: return Gate::ry(angle(rng), qid(qubit_pick(rng)));
    case 5: return Gate::ph(angle(rng), qid(qubit_pick(rng)));
    case 6: {
      auto qs = distinct(2);
      return Gate::partial_swap(angle(rng), qs[0], qs[1]);
    }
    case 7: {
      auto qs = distinct(2);
      return Gate::cnot(qs[0], qs[1]);
    }
    case 8: {
      auto qs = distinct(2);
      return Gate::swap(qs[0], qs[1]);
    }
    case 9: {
      auto qs = distinct(3);
      return Gate::ccnot(qs[0], qs[1], qs[2]);
    }
    case 10: {
      auto qs = distinct(3);
      return Gate::cswap(qs[0], qs[1], qs[2]);
    }
    default: {
      auto qs = distinct(2);
      Mat2 u = Mat2::ry(angle(rng)) * Mat2::ph(angle(rng));
      return Gate::cu(qs[0], qs[1], u);
    }
  }
}

}  // namespace

TEST_CASE("basis key bit accounting") {
  BasisKey k(70);
  CHECK(k.bit_count() == 70);
  k.set(qid(0), true);
  k.set(qid(69), true);
  CHECK(k.get(qid(0)));
  CHECK(k.get(qid(69)));
  CHECK(!k.get(qid(35)));
  k.flip(qid(35));
  CHECK(k.get(qid(35)));
  k.flip(qid(35));

  // Printed with the highest id leftmost.
  std::string s = k.to_string();
  REQUIRE(s.size() == 70);
  CHECK(s.front() == '1');  // qubit 69
  CHECK(s.back() == '1');   // qubit 0
  CHECK(s[1] == '0');

  // Ordering is big-integer numeric, across word boundaries.
  BasisKey lo(70), hi(70);
  lo.set(qid(63), true);
  hi.set(qid(64), true);
  CHECK(lo < hi);
  BasisKey lo2(70);
  lo2.set(qid(0), true);
  CHECK(lo2 < lo);
  CHECK(lo == lo);
}

TEST_CASE("initial state follows registry init bits") {
  QubitRegistry r;
  r.allocate("a", 1);
  r.allocate("b");
  r.allocate("c", 1);
  SparseState s = SparseState::initial(r);
  CHECK(s.term_count() == 1);
  const auto& [key, amp] = *s.terms().begin();
  CHECK(key.get(qid(0)));
  CHECK(!key.get(qid(1)));
  CHECK(key.get(qid(2)));
  CHECK(amp == cplx(1.0));
  CHECK(key == initial_pattern(r));
}

TEST_CASE("every gate kind matches the dense oracle on random states") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t nq = 4;
    SparseState s = random_state(nq, rng);
    DenseVec v = to_dense(s);
    Gate g = random_gate(nq, rng);
    s.apply_gate(g);
    dense_apply_gate(g, v);
    CHECK(max_abs_diff(to_dense(s), v) < 1e-12);
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("partial swap truth table") {
  const double theta = 0.83;
  const double c = std::cos(theta), si = std::sin(theta);
  auto run = [&](int a_bit, int b_bit) {
    QubitRegistry r = flat_registry(2, a_bit | (b_bit << 1));
    SparseState s = SparseState::initial(r);
    s.apply_gate(Gate::partial_swap(theta, qid(0), qid(1)));
    return to_dense(s);
  };
  // |00> fixed
  DenseVec v = run(0, 0);
  CHECK(std::abs(v[0] - cplx(1)) < 1e-15);
  // |01> (a=0, b=1) -> |11>
  v = run(0, 1);
  CHECK(std::abs(v[3] - cplx(1)) < 1e-15);
  // |10> (a=1, b=0) -> sin|01> + cos|10>
  v = run(1, 0);
  CHECK(std::abs(v[2] - cplx(si)) < 1e-15);
  CHECK(std::abs(v[1] - cplx(c)) < 1e-15);
  // |11> -> cos|01> - sin|10>
  v = run(1, 1);
  CHECK(std::abs(v[2] - cplx(c)) < 1e-15);
  CHECK(std::abs(v[1] - cplx(-si)) < 1e-15);
}

TEST_CASE("pruning keeps the map sparse through cancellation") {
  QubitRegistry r = flat_registry(1);
  SparseState s = SparseState::initial(r);
  s.apply_gate(Gate::h(qid(0)));
  CHECK(s.term_count() == 2);
  s.apply_gate(Gate::h(qid(0)));
  CHECK(s.term_count() == 1);  // the |1> branch cancelled exactly
  CHECK(fidelity(s, SparseState::initial(r)) == doctest::Approx(1.0));
}

TEST_CASE("apply_circuit visits layers in order and rejects measurements") {
  QubitRegistry r = flat_registry(2);
  LayerList ll;
  ll.add_layer({Gate::h(qid(0))});
  ll.add_layer({Gate::cnot(qid(0), qid(1))});
  Circuit c = finish_circuit(r, std::move(ll));

  std::vector<int> seen;
  std::vector<std::size_t> terms;
  apply_circuit(c, [&](int li, const SparseState& s) {
    seen.push_back(li);
    terms.push_back(s.term_count());
  });
  CHECK(seen == std::vector<int>{0, 1});
  CHECK(terms == std::vector<std::size_t>{2, 2});

  LayerList lm;
  lm.add_layer({Gate::measure_z(qid(0), 0)});
  Circuit cm = finish_circuit(r, std::move(lm));
  CHECK_THROWS_AS(apply_circuit(cm), UnsupportedGateError);

  SparseState wrong(5);
  CHECK_THROWS_AS(apply_circuit(c, {}, wrong), SpecError);
}

TEST_CASE("fidelity of known states") {
  QubitRegistry r = flat_registry(1);
  SparseState zero = SparseState::initial(r);
  SparseState plus = zero;
  plus.apply_gate(Gate::h(qid(0)));
  CHECK(fidelity(zero, plus) == doctest::Approx(0.5));
  CHECK(fidelity(plus, plus) == doctest::Approx(1.0));
  SparseState one = zero;
  one.apply_gate(Gate::x(qid(0)));
  CHECK(fidelity(zero, one) == doctest::Approx(0.0));
  SparseState bad(2);
  CHECK_THROWS_AS(fidelity(zero, bad), SpecError);
}

TEST_CASE("logical extraction and ancilla cleanliness") {
  QubitRegistry r;
  r.allocate("anc0");          // stays 0
  r.allocate("log0");          // qubit 1
  r.allocate("anc1", 1);       // stays 1
  r.allocate("log1");          // qubit 3
  SparseState s = SparseState::initial(r);
  s.apply_gate(Gate::h(qid(1)));
  s.apply_gate(Gate::cnot(qid(1), qid(3)));

  BasisKey expect = initial_pattern(r);
  auto ext = extract_logical(s, {qid(1), qid(3)}, expect);
  CHECK(ext.clean);
  CHECK(ext.state.qubit_count() == 2);
  CHECK(ext.state.term_count() == 2);
  // Bell pair on the reduced pair: |00> and |11> at 1/sqrt(2).
  for (const auto& [k, a] : ext.state.terms()) {
    CHECK(k.get(qid(0)) == k.get(qid(1)));
    CHECK(std::abs(a) == doctest::Approx(1.0 / std::sqrt(2.0)));
  }

  // Dirty an ancilla in one branch only.
  s.apply_gate(Gate::cnot(qid(1), qid(0)));
  auto dirty = extract_logical(s, {qid(1), qid(3)}, expect);
  CHECK(!dirty.clean);

  CHECK_THROWS_AS(extract_logical(s, {qid(9)}, expect), UnknownQubitError);
  CHECK_THROWS_AS(extract_logical(s, {qid(1), qid(1)}, expect), SpecError);
}

TEST_CASE("measurement branches: computational basis") {
  QubitRegistry r = flat_registry(2);
  LayerList ll;
  ll.add_layer({Gate::h(qid(0))});
  ll.add_layer({Gate::cnot(qid(0), qid(1))});
  ll.add_layer({Gate::measure_z(qid(0), 0)});
  Circuit c = finish_circuit(r, std::move(ll));

  auto branches = run_with_measurements(c);
  REQUIRE(branches.size() == 2);
  CHECK(branches[0].records.at(0) == 0);
  CHECK(branches[1].records.at(0) == 1);
  CHECK(branches[0].probability == doctest::Approx(0.5));
  CHECK(branches[1].probability == doctest::Approx(0.5));
  // Measured qubit is reset: branch 1 keeps only its partner qubit set.
  REQUIRE(branches[1].state.term_count() == 1);
  const auto& [k1, a1] = *branches[1].state.terms().begin();
  CHECK(!k1.get(qid(0)));
  CHECK(k1.get(qid(1)));
  CHECK(std::abs(a1) == doctest::Approx(1.0));  // renormalized

  SUBCASE("forced outcomes") {
    OutcomePolicy pol;
    pol.fixed[0] = 1;
    auto forced = run_with_measurements(c, pol);
    REQUIRE(forced.size() == 1);
    CHECK(forced[0].records.at(0) == 1);
    CHECK(forced[0].probability == doctest::Approx(0.5));
  }

  SUBCASE("impossible forced outcome") {
    LayerList lz;
    lz.add_layer({Gate::measure_z(qid(0), 0)});
    Circuit cz = finish_circuit(flat_registry(2), std::move(lz));
    OutcomePolicy pol;
    pol.fixed[0] = 1;  // |0> can never read 1
    CHECK_THROWS_AS(run_with_measurements(cz, pol), ImpossibleOutcomeError);
  }

  SUBCASE("policy must cover every record") {
    OutcomePolicy pol;
    pol.fixed[7] = 0;
    CHECK_THROWS_AS(run_with_measurements(c, pol), SpecError);
  }
}

TEST_CASE("measurement branches: X basis and classical controls") {
  // Measuring |0> in the X basis is a fair coin; the + and - branches
  // differ by which correction fires.
  QubitRegistry r = flat_registry(2);
  LayerList ll;
  ll.add_layer({Gate::measure_x(qid(0), 0)});
  ll.add_layer({Gate::classical_x(0, qid(1))});
  Circuit c = finish_circuit(r, std::move(ll));

  auto branches = run_with_measurements(c);
  REQUIRE(branches.size() == 2);
  CHECK(branches[0].probability == doctest::Approx(0.5));
  CHECK(branches[1].probability == doctest::Approx(0.5));
  // Outcome 0: no flip. Outcome 1: qubit 1 flipped.
  const auto& [k0, a0] = *branches[0].state.terms().begin();
  CHECK(!k0.get(qid(1)));
  const auto& [k1, a1] = *branches[1].state.terms().begin();
  CHECK(k1.get(qid(1)));

  SUBCASE("classical control needs a prior measurement") {
    LayerList bad;
    bad.add_layer({Gate::classical_x(3, qid(0))});
    Circuit cb = finish_circuit(flat_registry(2), std::move(bad));
    CHECK_THROWS_AS(run_with_measurements(cb), SpecError);
  }

  SUBCASE("classical Z applies a phase only on set bits") {
    LayerList lz;
    lz.add_layer({Gate::x(qid(0))});
    lz.add_layer({Gate::h(qid(1))});
    lz.add_layer({Gate::measure_z(qid(0), 0)});  // deterministic 1
    lz.add_layer({Gate::classical_z(0, qid(1))});
    Circuit cz = finish_circuit(flat_registry(2), std::move(lz));
    auto b = run_with_measurements(cz);
    REQUIRE(b.size() == 1);
    // (|0> + |1>)/sqrt2 with Z applied -> (|0> - |1>)/sqrt2 on qubit 1.
    for (const auto& [k, a] : b[0].state.terms()) {
      if (k.get(qid(1)))
        CHECK(a.real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
      else
        CHECK(a.real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    }
  }
}

TEST_CASE("teleported cnot gadget is exact on every branch") {
  auto expect_cnot = [](const Circuit& pre) {
    // Reference: the same preamble followed by a plain CNOT.
    Circuit ref = pre;
    ref.layers.push_back(Layer{{Gate::cnot(qid(0), qid(1))}});
    return apply_circuit(ref);
  };

  auto gadget_branches = [](const Circuit& pre) {
    Circuit with = pre;
    with.layers.push_back(Layer{{Gate::cnot(qid(0), qid(1))}});
    std::vector<CnotSite> sites{{with.depth() - 1, 0}};
    Circuit expanded = expand_teleported_cnot(with, sites);
    return run_with_measurements(expanded);
  };

  auto check_preamble = [&](const Circuit& pre) {
    SparseState want = expect_cnot(pre);
    auto branches = gadget_branches(pre);
    REQUIRE(branches.size() == 4);
    double total = 0;
    for (const auto& b : branches) {
      total += b.probability;
      // Ancillas were measured and reset; compare on the base wires.
      BasisKey anc(b.state.qubit_count());
      auto ext = extract_logical(b.state, {qid(0), qid(1)}, anc);
      CHECK(ext.clean);
      CHECK(fidelity(ext.state, want) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(total == doctest::Approx(1.0));
  };

  // All four computational basis inputs.
  for (int basis = 0; basis < 4; ++basis) {
    QubitRegistry r = flat_registry(2, basis);
    Circuit pre = finish_circuit(r, LayerList{});
    check_preamble(pre);
  }

  // Superposed control, and a fully entangling preamble.
  {
    QubitRegistry r = flat_registry(2);
    LayerList ll;
    ll.add_layer({Gate::h(qid(0))});
    check_preamble(finish_circuit(r, std::move(ll)));
  }
  {
    QubitRegistry r = flat_registry(2);
    LayerList ll;
    ll.add_layer({Gate::h(qid(0)), Gate::ry(0.7, qid(1))});
    ll.add_layer({Gate::t(qid(0))});
    check_preamble(finish_circuit(r, std::move(ll)));
  }
}

TEST_CASE("teleported cnot sites are validated") {
  QubitRegistry r = flat_registry(2);
  LayerList ll;
  ll.add_layer({Gate::h(qid(0))});
  ll.add_layer({Gate::cnot(qid(0), qid(1))});
  Circuit c = finish_circuit(r, std::move(ll));
  CHECK_THROWS_AS(expand_teleported_cnot(c, {{0, 0}}), SpecError);   // not a CNOT
  CHECK_THROWS_AS(expand_teleported_cnot(c, {{5, 0}}), SpecError);   // layer range
  CHECK_THROWS_AS(expand_teleported_cnot(c, {{1, 3}}), SpecError);   // gate range
  CHECK_THROWS_AS(expand_teleported_cnot(c, {{1, 0}, {1, 0}}), SpecError);  // dup
}

TEST_CASE("sparse and dense engines agree on random circuits") {
  std::mt19937_64 rng(20260819);
  std::uniform_int_distribution<std::size_t> nq_pick(2, 10);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t nq = nq_pick(rng);
    QubitRegistry r = flat_registry(static_cast<int>(nq));
    Circuit c = finish_circuit(r, LayerList{});
    std::uniform_int_distribution<int> count_pick(10, 40);
    int gates = count_pick(rng);
    for (int i = 0; i < gates; ++i)
      c = append(c, {random_gate(nq, rng)}, AppendPolicy::GreedyPack);

    SparseState s = apply_circuit(c);
    DenseVec v = dense_apply_circuit(c);
    CHECK(max_abs_diff(to_dense(s), v) < 1e-12);
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  }
}
