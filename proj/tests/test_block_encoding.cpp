#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include "qprep/block_encoding.hpp"
#include "qprep/circuit.hpp"
#include "qprep/dense_prep.hpp"
#include "qprep/errors.hpp"
#include "qprep/state.hpp"

using namespace qprep;

namespace {

Mat2 mk(cplx a, cplx b, cplx c, cplx d) {
  Mat2 m;
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = c;
  m.at(1, 1) = d;
  return m;
}

const Mat2 kI = Mat2::identity();
const Mat2 kX = Mat2::x();
const Mat2 kZ = mk(1.0, 0.0, 0.0, -1.0);

// Hermitian *and* unitary: a random point on the Bloch sphere dotted into
// the Pauli vector.
Mat2 axis_op(std::mt19937& rng) {
  std::normal_distribution<double> g;
  double x = g(rng), y = g(rng), z = g(rng);
  double r = std::sqrt(x * x + y * y + z * z);
  if (r < 1e-6) return Mat2::x();
  x /= r;
  y /= r;
  z /= r;
  return mk(z, {x, -y}, {x, y}, -z);
}

void check_spans_tile(const Circuit& c) {
  int cursor = 0;
  for (const StageSpan& s : c.stages) {
    CHECK(s.first == cursor);
    if (s.first <= s.last) cursor = s.last + 1;
  }
  CHECK(cursor == c.depth());
}

// Applies the artifact circuit to `v` on the system register (everything
// else at its initial pattern) and projects the output back onto the clean
// ancilla pattern, mirroring what a block-encoded matrix-vector product is.
std::vector<cplx> probe_block(const BlockEncodingArtifact& art, const std::vector<cplx>& v) {
  const std::size_t dim = std::size_t(1) << art.system.size();
  REQUIRE(v.size() == dim);
  SparseState in(art.circuit.qubit_count());
  for (std::size_t c = 0; c < dim; ++c) {
    BasisKey key = initial_pattern(art.circuit.registry);
    for (std::size_t i = 0; i < art.system.size(); ++i)
      key.set(art.system[i], (c >> i) & 1);
    in.accumulate(key, v[c]);
  }
  SparseState end = apply_circuit(art.circuit, {}, std::move(in));
  BasisKey expect = art.ancilla_expectation;
  for (QubitId q : art.system) expect.set(q, false);
  std::vector<cplx> out(dim, cplx(0.0));
  for (const auto& [key, amp] : end.terms()) {
    BasisKey rest = key;
    std::size_t r = 0;
    for (std::size_t i = 0; i < art.system.size(); ++i) {
      if (rest.get(art.system[i])) r |= std::size_t(1) << i;
      rest.set(art.system[i], false);
    }
    if (rest == expect) out[r] += amp;
  }
  return out;
}

}  // namespace

TEST_CASE("weight preparation handles one, two equal, and two unequal terms") {
  ProductTermHamiltonian one{1, {{1.0, {kZ}}}};
  Circuit g1 = compile_prepare_G(one);
  CHECK(g1.depth() == 0);
  CHECK(g1.qubit_count() == 0);

  ProductTermHamiltonian equal{1, {{1.0, {kI}}, {1.0, {kI}}}};
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(compile_prepare_G(equal) == compile_dense({r, r}).circuit);

  ProductTermHamiltonian skew{1, {{3.0, {kI}}, {1.0, {kI}}}};
  Circuit g = compile_prepare_G(skew);
  CHECK(g == compile_dense({std::sqrt(0.75), 0.5}).circuit);

  CompiledDense ref = compile_dense({std::sqrt(0.75), 0.5});
  SparseState end = apply_circuit(ref.circuit);
  LogicalExtract got = extract_logical(end, ref.logical, ref.ancilla_expectation);
  REQUIRE(got.clean);
  BasisKey k0(1), k1(1);
  k1.set(QubitId{0}, true);
  CHECK(std::abs(got.state.terms().at(k0) - cplx(std::sqrt(0.75))) < 1e-12);
  CHECK(std::abs(got.state.terms().at(k1) - cplx(0.5)) < 1e-12);
}

TEST_CASE("a single product term encodes itself with no weight register") {
  ProductTermHamiltonian h{2, {{1.0, {kZ, kZ}}}};
  BlockEncodingArtifact art = assemble_block_encoding(h);
  CHECK(art.ancilla.empty());
  CHECK(art.system.size() == 2);
  CHECK(art.alpha == 1.0);
  CHECK(art.hermitian);
  CHECK(art.max_block_deviation <= 1e-12);
  CHECK(art.circuit.depth() == 1);

  std::vector<cplx> block = extract_block(art);
  const double want[4] = {1.0, -1.0, -1.0, 1.0};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      CHECK(std::abs(block[r * 4 + c] - (r == c ? cplx(want[r]) : cplx(0.0))) < 1e-12);

  // Identity factors produce no gates at all.
  ProductTermHamiltonian lone{2, {{1.0, {kI, kZ}}}};
  BlockEncodingArtifact thin = assemble_block_encoding(lone);
  REQUIRE(thin.circuit.depth() == 1);
  CHECK(thin.circuit.layers[0].gates.size() == 1);
}

TEST_CASE("an equal mixture of Z and X encodes their average") {
  ProductTermHamiltonian h{2, {{0.5, {kZ, kI}}, {0.5, {kX, kI}}}};
  BlockEncodingArtifact art = assemble_block_encoding(h);
  CHECK(art.alpha == 1.0);
  CHECK(art.ancilla.size() == 1);
  CHECK(art.hermitian);

  // (Z+X)/2 on qubit 0, identity on qubit 1.
  std::vector<cplx> block = extract_block(art);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      cplx want = 0.0;
      if ((r >> 1) == (c >> 1)) {
        const double half = ((r & 1) && (c & 1)) ? -0.5 : 0.5;
        want = half;
      }
      CHECK(std::abs(block[r * 4 + c] - want) < 1e-9);
    }
}

TEST_CASE("random Hermitian product mixtures verify on both route schedules") {
  std::mt19937 rng(20260819);
  std::uniform_real_distribution<double> w(0.1, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    ProductTermHamiltonian h;
    h.n = 2;
    for (int p = 0; p < 3; ++p)
      h.terms.push_back({w(rng), {axis_op(rng), axis_op(rng)}});
    RouteSchedule s = trial == 4 ? RouteSchedule::Sequential : RouteSchedule::Pipelined;
    BlockEncodingArtifact art = assemble_block_encoding(h, s);
    CHECK(art.hermitian);
    CHECK(art.max_block_deviation <= 1e-9);
    CHECK(art.alpha == doctest::Approx(h.terms[0].first + h.terms[1].first +
                                       h.terms[2].first));
  }
}

TEST_CASE("non-Hermitian inputs still encode but are flagged") {
  ProductTermHamiltonian h{1, {{1.0, {Mat2::t()}}}};
  BlockEncodingArtifact art = assemble_block_encoding(h);
  CHECK_FALSE(art.hermitian);
  CHECK(art.max_block_deviation <= 1e-12);
  std::vector<cplx> block = extract_block(art);
  CHECK(std::abs(block[0] - cplx(1.0)) < 1e-12);
  CHECK(std::abs(block[3] - std::exp(cplx(0.0, M_PI / 4.0))) < 1e-12);
}

TEST_CASE("weight preparation followed by its inverse is the identity") {
  ProductTermHamiltonian h{1, {{2.0, {kZ}}, {1.0, {kX}}, {1.0, {kI}}}};
  Circuit g = compile_prepare_G(h);
  Circuit ginv = inverse_circuit(g);
  LayerList round;
  for (const Layer& l : g.layers) round.push_layer(l);
  for (const Layer& l : ginv.layers) round.push_layer(l);
  Circuit both = finish_circuit(g.registry, std::move(round));

  const std::size_t q = both.qubit_count();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t bits = rng() & ((std::uint64_t(1) << q) - 1);
    BasisKey key(q);
    for (std::size_t i = 0; i < q; ++i) key.set(QubitId{std::uint32_t(i)}, (bits >> i) & 1);
    SparseState end = apply_circuit(both, {}, SparseState::basis(q, key));
    REQUIRE(end.terms().size() == 1);
    const auto& [out, amp] = *end.terms().begin();
    CHECK(out == key);
    CHECK(std::abs(amp - cplx(1.0)) < 1e-12);
  }
}

TEST_CASE("block extraction agrees with a random superposition probe") {
  ProductTermHamiltonian h{2, {{0.75, {kZ, kX}}, {0.25, {kX, kZ}}}};
  BlockEncodingArtifact art = assemble_block_encoding(h);
  std::vector<cplx> block = extract_block(art);

  std::mt19937 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<cplx> v(4);
    double norm = 0.0;
    for (cplx& e : v) {
      e = cplx(g(rng), g(rng));
      norm += std::norm(e);
    }
    for (cplx& e : v) e /= std::sqrt(norm);

    std::vector<cplx> probed = probe_block(art, v);
    for (std::size_t r = 0; r < 4; ++r) {
      cplx want = 0.0;
      for (std::size_t c = 0; c < 4; ++c) want += block[r * 4 + c] * v[c];
      CHECK(std::abs(probed[r] - want) < 1e-10);
    }
  }
}

TEST_CASE("stage names tile the circuit in both shapes") {
  ProductTermHamiltonian single{2, {{1.0, {kZ, kZ}}}};
  BlockEncodingArtifact one = assemble_block_encoding(single);
  REQUIRE(one.circuit.stages.size() == 1);
  CHECK(one.circuit.stages[0].name == "select-terms");
  check_spans_tile(one.circuit);

  ProductTermHamiltonian pair{1, {{3.0, {kZ}}, {1.0, {kX}}}};
  BlockEncodingArtifact two = assemble_block_encoding(pair);
  REQUIRE(two.circuit.stages.size() == 3);
  CHECK(two.circuit.stages[0].name == "prepare-weights");
  CHECK(two.circuit.stages[1].name == "select-terms");
  CHECK(two.circuit.stages[2].name == "unprepare-weights");
  check_spans_tile(two.circuit);

  // The weighted two-term block itself: (3Z + X)/4.
  std::vector<cplx> block = extract_block(two);
  CHECK(std::abs(block[0] - cplx(0.75)) < 1e-9);
  CHECK(std::abs(block[1] - cplx(0.25)) < 1e-9);
  CHECK(std::abs(block[2] - cplx(0.25)) < 1e-9);
  CHECK(std::abs(block[3] - cplx(-0.75)) < 1e-9);
  CHECK(two.alpha == 4.0);
}

TEST_CASE("query estimates: zero time, doubling, and recomputed depth") {
  ProductTermHamiltonian h{2, {{0.5, {kZ, kI}}, {0.5, {kX, kI}}}};
  BlockEncodingArtifact art = assemble_block_encoding(h);

  QubitizationEstimate e0 = estimate_qubitization(h, 0.0, 0.25);
  CHECK(e0.query_count == 2);  // ceil(log2(4))
  CHECK(e0.depth == e0.query_count * (art.circuit.depth() + 1));
  CHECK(e0.qubits == std::int64_t(art.circuit.qubit_count()));
  CHECK(e0.alpha == doctest::Approx(1.0));
  CHECK(estimate_qubitization(h, 0.0, 0.5).query_count == 1);
  CHECK(estimate_qubitization(h, 0.0, 0.9).query_count == 1);

  // Doubling t adds the alpha*t component back, to within a rounding unit.
  ProductTermHamiltonian heavy{1, {{2.0, {kZ}}, {2.0, {kX}}}};
  QubitizationEstimate q1 = estimate_qubitization(heavy, 1.3, 0.1);
  QubitizationEstimate q2 = estimate_qubitization(heavy, 2.6, 0.1);
  const double at = 4.0 * 1.3;
  CHECK(std::abs(double(q2.query_count - q1.query_count) - std::ceil(at)) <= 1.0);

  // Monotone in t and in 1/eps.
  std::int64_t last = 0;
  for (double t : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    std::int64_t q = estimate_qubitization(heavy, t, 0.25).query_count;
    CHECK(q >= last);
    last = q;
  }
  last = 0;
  for (double eps : {0.5, 0.25, 0.1, 0.01}) {
    std::int64_t q = estimate_qubitization(heavy, 1.0, eps).query_count;
    CHECK(q >= last);
    last = q;
  }

  // Single-term encodings have no weight register to reflect over.
  ProductTermHamiltonian single{2, {{1.0, {kZ, kZ}}}};
  BlockEncodingArtifact sart = assemble_block_encoding(single);
  QubitizationEstimate se = estimate_qubitization(single, 3.0, 0.5);
  CHECK(se.depth == se.query_count * sart.circuit.depth());

  // The estimator does not cap the system size the way verification does.
  ProductTermHamiltonian wide{12, {{1.0, std::vector<Mat2>(12, kZ)}}};
  QubitizationEstimate we = estimate_qubitization(wide, 1.0, 0.5);
  CHECK(we.qubits >= 12);
  CHECK(we.n == 12);
}

TEST_CASE("invalid mixtures and parameters are rejected") {
  ProductTermHamiltonian zero{1, {{0.0, {kZ}}}};
  CHECK_THROWS_AS(assemble_block_encoding(zero), NonpositiveCoefficientError);
  ProductTermHamiltonian neg{1, {{-1.0, {kZ}}}};
  CHECK_THROWS_AS(compile_prepare_G(neg), NonpositiveCoefficientError);
  ProductTermHamiltonian nan{1, {{std::nan(""), {kZ}}}};
  CHECK_THROWS_AS(compile_prepare_G(nan), NonpositiveCoefficientError);

  ProductTermHamiltonian shape{2, {{1.0, {kZ}}}};
  CHECK_THROWS_AS(assemble_block_encoding(shape), SpecError);
  ProductTermHamiltonian skewed{1, {{1.0, {mk(1.0, 0.0, 0.0, 2.0)}}}};
  CHECK_THROWS_AS(assemble_block_encoding(skewed), SpecError);
  ProductTermHamiltonian empty{1, {}};
  CHECK_THROWS_AS(assemble_block_encoding(empty), SpecError);

  ProductTermHamiltonian ok{1, {{1.0, {kZ}}}};
  CHECK_THROWS_AS(estimate_qubitization(ok, -1.0, 0.5), SpecError);
  CHECK_THROWS_AS(estimate_qubitization(ok, 1.0, 0.0), SpecError);
  CHECK_THROWS_AS(estimate_qubitization(ok, 1.0, 1.5), SpecError);
  // eps = 1 is the degenerate-but-legal edge: the log term vanishes
  CHECK(estimate_qubitization(ok, 2.0, 1.0).query_count == 2);

  ProductTermHamiltonian wide{11, {{1.0, std::vector<Mat2>(11, kI)}}};
  CHECK_THROWS_AS(assemble_block_encoding(wide), SpecError);
}
