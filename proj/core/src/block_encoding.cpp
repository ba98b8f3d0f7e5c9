#include "qprep/block_encoding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qprep/dense_prep.hpp"
#include "qprep/errors.hpp"

namespace qprep {
namespace {

constexpr double kIdentityTol = 1e-12;

bool near_identity(const Mat2& m) {
  double worst = 0.0;
  Mat2 d = m;
  d.at(0, 0) -= 1.0;
  d.at(1, 1) -= 1.0;
  for (const cplx& e : d.m) worst = std::max(worst, std::abs(e));
  return worst <= kIdentityTol;
}

struct Assembly {
  Circuit circuit;
  std::vector<QubitId> ancilla;
  std::vector<QubitId> system;
  BasisKey expectation;
};

Assembly assemble_parts(const ProductTermHamiltonian& h, RouteSchedule schedule) {
  validate_product_terms(h);
  const std::size_t P = h.terms.size();
  QubitRegistry reg;
  Assembly out;
  for (int l = 0; l < h.n; ++l)
    out.system.push_back(reg.allocate("system[" + std::to_string(l) + "]"));

  if (P == 1) {
    // One term: the block is the product itself, applied outright through
    // always-on controls (keeps factor phases exact without a 1q-unitary
    // gate kind).
    LayerList layers;
    std::vector<Gate> ops;
    for (int l = 0; l < h.n; ++l) {
      const Mat2& f = h.terms[0].second[std::size_t(l)];
      if (near_identity(f)) continue;
      QubitId on = reg.allocate("on[" + std::to_string(l) + "]", true);
      ops.push_back(Gate::cu(on, out.system[std::size_t(l)], f));
    }
    if (!ops.empty()) layers.add_layer(std::move(ops));
    std::vector<StageSpan> stages{{"select-terms", 0, static_cast<int>(layers.size()) - 1}};
    out.expectation = initial_pattern(reg);
    out.circuit = finish_circuit(std::move(reg), std::move(layers), std::move(stages));
    return out;
  }

  const int ng = std::countr_zero(std::bit_ceil(P));
  const double alpha = term_weight(h);
  std::vector<cplx> amps(std::size_t(1) << ng, cplx(0.0));
  for (std::size_t p = 0; p < P; ++p) amps[p] = std::sqrt(h.terms[p].first / alpha);
  DenseBlock g = build_dense_block(reg, "g.", amps, {.reset_root = true});
  out.ancilla = g.logical;

  ProductUnitaryFunction u;
  u.index_bits = ng;
  u.word_bits = h.n;
  u.table.assign(std::size_t(1) << ng,
                 std::vector<Mat2>(std::size_t(h.n), Mat2::identity()));
  for (std::size_t p = 0; p < P; ++p) u.table[p] = h.terms[p].second;
  OracleBlock sel = build_pum_multi(reg, "v.", g.logical, out.system, u, schedule);

  LayerList g_copy = g.layers;
  Circuit g_inv = inverse_circuit(finish_circuit(reg, std::move(g_copy)));

  LayerList all = std::move(g.layers);
  const int sel_first = static_cast<int>(all.size());
  all.seq(std::move(sel.layers));
  const int inv_first = static_cast<int>(all.size());
  for (Layer& l : g_inv.layers) all.push_layer(std::move(l));
  std::vector<StageSpan> stages{{"prepare-weights", 0, sel_first - 1},
                                {"select-terms", sel_first, inv_first - 1},
                                {"unprepare-weights", inv_first,
                                 static_cast<int>(all.size()) - 1}};
  out.expectation = initial_pattern(reg);  // prep and its inverse cancel exactly
  out.circuit = finish_circuit(std::move(reg), std::move(all), std::move(stages));
  return out;
}

}  // namespace

void validate_product_terms(const ProductTermHamiltonian& h) {
  if (h.n < 1 || h.n > 60) throw SpecError("term products need 1..60 system qubits");
  if (h.terms.empty()) throw SpecError("no terms");
  if (h.terms.size() > (std::size_t(1) << 24)) throw SpecError("too many terms");
  for (const auto& [alpha_p, factors] : h.terms) {
    if (!(alpha_p > 0.0) || !std::isfinite(alpha_p))
      throw NonpositiveCoefficientError("term weights must be positive");
    if (factors.size() != std::size_t(h.n))
      throw SpecError("every term needs one factor per system qubit");
    for (const Mat2& f : factors)
      if (f.unitarity_defect() > kIdentityTol) throw SpecError("term factor is not unitary");
  }
}

double term_weight(const ProductTermHamiltonian& h) {
  double alpha = 0.0;
  for (const auto& t : h.terms) alpha += t.first;
  return alpha;
}

Circuit compile_prepare_G(const ProductTermHamiltonian& h) {
  validate_product_terms(h);
  if (h.terms.size() == 1) return finish_circuit(QubitRegistry{}, LayerList{});
  const int ng = std::countr_zero(std::bit_ceil(h.terms.size()));
  const double alpha = term_weight(h);
  std::vector<cplx> amps(std::size_t(1) << ng, cplx(0.0));
  for (std::size_t p = 0; p < h.terms.size(); ++p)
    amps[p] = std::sqrt(h.terms[p].first / alpha);
  return compile_dense(amps).circuit;
}

std::vector<cplx> block_target(const ProductTermHamiltonian& h) {
  validate_product_terms(h);
  const std::size_t dim = std::size_t(1) << h.n;
  const double alpha = term_weight(h);
  std::vector<cplx> out(dim * dim, cplx(0.0));
  for (const auto& [alpha_p, factors] : h.terms) {
    const double w = alpha_p / alpha;
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) {
        cplx prod = w;
        for (int l = 0; l < h.n; ++l)
          prod *= factors[std::size_t(l)].at((r >> l) & 1, (c >> l) & 1);
        out[r * dim + c] += prod;
      }
  }
  return out;
}

std::vector<cplx> extract_block(const BlockEncodingArtifact& art) {
  const std::size_t dim = std::size_t(1) << art.system.size();
  BasisKey expect = art.ancilla_expectation;
  for (QubitId q : art.system) expect.set(q, false);
  std::vector<cplx> out(dim * dim, cplx(0.0));
  for (std::size_t c = 0; c < dim; ++c) {
    BasisKey start = initial_pattern(art.circuit.registry);
    for (std::size_t i = 0; i < art.system.size(); ++i)
      start.set(art.system[i], (c >> i) & 1);
    SparseState end = apply_circuit(
        art.circuit, {}, SparseState::basis(art.circuit.registry.size(), start));
    for (const auto& [key, amp] : end.terms()) {
      BasisKey probe = key;
      std::size_t r = 0;
      for (std::size_t i = 0; i < art.system.size(); ++i) {
        if (probe.get(art.system[i])) r |= std::size_t(1) << i;
        probe.set(art.system[i], false);
      }
      if (probe == expect) out[r * dim + c] += amp;
    }
  }
  return out;
}

BlockEncodingArtifact assemble_block_encoding(const ProductTermHamiltonian& h,
                                              RouteSchedule schedule) {
  if (h.n > 10) throw SpecError("exhaustive block verification caps the system at 10 qubits");
  Assembly parts = assemble_parts(h, schedule);
  BlockEncodingArtifact art;
  art.circuit = std::move(parts.circuit);
  art.ancilla = std::move(parts.ancilla);
  art.system = std::move(parts.system);
  art.alpha = term_weight(h);
  art.ancilla_expectation = std::move(parts.expectation);

  const std::vector<cplx> target = block_target(h);
  const std::vector<cplx> got = extract_block(art);
  double dev = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i)
    dev = std::max(dev, std::abs(got[i] - target[i]));
  art.max_block_deviation = dev;
  if (dev > 1e-9)
    throw VerificationFailedError(
        "assembled block deviates from the target by " + std::to_string(dev), dev);

  const std::size_t dim = std::size_t(1) << h.n;
  double herm = 0.0;
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      herm = std::max(herm, std::abs(target[r * dim + c] - std::conj(target[c * dim + r])));
  art.hermitian = herm <= 1e-9;
  return art;
}

QubitizationEstimate estimate_qubitization(const ProductTermHamiltonian& h, double t,
                                           double eps, RouteSchedule schedule) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw SpecError("evolution time must be >= 0");
  if (!(eps > 0.0) || !(eps <= 1.0)) throw SpecError("accuracy must lie in (0, 1]");
  Assembly parts = assemble_parts(h, schedule);
  QubitizationEstimate est;
  est.alpha = term_weight(h);
  est.t = t;
  est.eps = eps;
  est.n = h.n;
  est.term_count = static_cast<int>(h.terms.size());
  est.query_count = static_cast<std::int64_t>(std::ceil(est.alpha * t + std::log2(1.0 / eps)));
  const int reflection =
      h.terms.size() == 1 ? 0 : std::countr_zero(std::bit_ceil(h.terms.size()));
  est.depth = est.query_count * (parts.circuit.depth() + reflection);
  est.qubits = parts.circuit.qubit_count();
  return est;
}

}  // namespace qprep
