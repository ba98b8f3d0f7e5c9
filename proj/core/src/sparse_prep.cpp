#include "qprep/sparse_prep.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "qprep/dense_prep.hpp"
#include "qprep/errors.hpp"

namespace qprep {

void validate_sparse_spec(const SparseStateSpec& spec) {
  if (spec.n < 1 || spec.n > 60) throw SpecError("sparse spec needs 1..60 qubits");
  if (spec.entries.empty()) throw SpecError("sparse spec has no entries");
  double weight = 0.0;
  std::vector<std::uint64_t> keys;
  keys.reserve(spec.entries.size());
  for (const auto& [q, amp] : spec.entries) {
    if (q >> spec.n) throw SpecError("entry index outside the register range");
    keys.push_back(q);
    weight += std::norm(amp);
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
    throw DuplicateIndicesError("sparse spec repeats a basis index");
  if (std::abs(weight - 1.0) > 1e-12)
    throw SpecError("sparse spec amplitudes are not normalized");
}

CompiledSparse compile_sparse(const SparseStateSpec& spec, RouteSchedule schedule) {
  validate_sparse_spec(spec);
  std::vector<std::pair<std::uint64_t, cplx>> live;
  for (const auto& e : spec.entries)
    if (e.second != cplx(0.0)) live.push_back(e);
  if (live.empty())
    throw ZeroAmplitudeOnlyEntriesError("every entry has amplitude exactly zero");

  QubitRegistry reg;
  CompiledSparse out;
  for (int i = 0; i < spec.n; ++i)
    out.logical.push_back(reg.allocate("logical[" + std::to_string(i) + "]"));

  if (live.size() == 1) {  // a 1-sparse state is a basis state
    LayerList layers;
    std::vector<Gate> flips;
    for (int i = 0; i < spec.n; ++i)
      if ((live[0].first >> i) & 1) flips.push_back(Gate::x(out.logical[std::size_t(i)]));
    if (!flips.empty()) layers.add_layer(flips);
    std::vector<StageSpan> stages{{"write-words", 0, static_cast<int>(layers.size()) - 1}};
    out.ancilla_expectation = initial_pattern(reg);
    out.circuit = finish_circuit(std::move(reg), std::move(layers), std::move(stages));
    return out;
  }

  const int nt =
      std::countr_zero(std::bit_ceil(std::uint64_t(live.size())));  // label register width
  std::vector<cplx> amps(std::size_t(1) << nt, cplx(0.0));
  for (std::size_t k = 0; k < live.size(); ++k) amps[k] = live[k].second;
  DenseBlock label = build_dense_block(reg, "label.", amps, {.reset_root = true});
  out.label_register = label.logical;

  ProductUnitaryFunction u;
  u.index_bits = nt;
  u.word_bits = spec.n;
  u.table.assign(std::size_t(1) << nt,
                 std::vector<Mat2>(std::size_t(spec.n), Mat2::identity()));
  for (std::size_t k = 0; k < live.size(); ++k)
    for (int l = 0; l < spec.n; ++l)
      if ((live[k].first >> l) & 1) u.table[k][std::size_t(l)] = Mat2::x();
  OracleBlock write = build_pum_multi(reg, "write.", label.logical, out.logical, u, schedule);

  // Label 0 is left out: its branch already holds |0> in the label register.
  SparseBooleanFunction f;
  f.index_bits = spec.n;
  f.word_bits = nt;
  for (std::size_t k = 1; k < live.size(); ++k) f.entries.emplace_back(live[k].first, k);
  OracleBlock erase = build_sbm(reg, "erase.", out.logical, label.logical, f);

  LayerList all = std::move(label.layers);
  const int write_first = static_cast<int>(all.size());
  all.seq(std::move(write.layers));
  const int erase_first = static_cast<int>(all.size());
  all.seq(std::move(erase.layers));
  std::vector<StageSpan> stages{
      {"label-amplitudes", 0, write_first - 1},
      {"write-words", write_first, erase_first - 1},
      {"erase-label", erase_first, static_cast<int>(all.size()) - 1}};

  out.ancilla_expectation = initial_pattern(reg);
  out.ancilla_expectation.set(label.amplitude_root, false);  // reset drops it to |0>
  out.circuit = finish_circuit(std::move(reg), std::move(all), std::move(stages));
  return out;
}

std::pair<SparseStateSpec, double> truncate_to_sparse(const std::vector<cplx>& amplitudes,
                                                      int d) {
  const std::size_t dim = amplitudes.size();
  if (dim < 2 || !std::has_single_bit(dim))
    throw SpecError("amplitude count must be a power of two >= 2");
  const int n = std::countr_zero(dim);
  if (d < 1 || std::uint64_t(d) > dim) throw SpecError("sparsity target out of range");
  double weight = 0.0;
  for (const cplx& a : amplitudes) weight += std::norm(a);
  if (std::abs(weight - 1.0) > 1e-9)
    throw SpecError("amplitudes are not normalized");

  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(amplitudes[a]), mb = std::abs(amplitudes[b]);
    return ma != mb ? ma > mb : a < b;
  });

  double kept = 0.0;
  std::vector<std::size_t> take;
  for (int j = 0; j < d; ++j) {
    if (amplitudes[order[std::size_t(j)]] == cplx(0.0)) break;  // rest are zeros too
    take.push_back(order[std::size_t(j)]);
    kept += std::norm(amplitudes[order[std::size_t(j)]]);
  }
  if (take.empty()) throw SpecError("amplitudes are all zero");
  const double eps = std::max(0.0, 1.0 - kept);
  const double scale = 1.0 / std::sqrt(kept);

  std::sort(take.begin(), take.end());
  SparseStateSpec spec;
  spec.n = n;
  for (std::size_t k : take) spec.entries.emplace_back(k, amplitudes[k] * scale);
  if (spec.entries.size() == 1) {
    std::uint64_t pad = spec.entries[0].first == 0 ? 1 : 0;  // smallest unused index
    spec.entries.emplace_back(pad, cplx(0.0));
  }
  return {std::move(spec), eps};
}

}  // namespace qprep
