#pragma once

// Brute-force references for the memory compilers. The select matrices are
// built straight from their defining formulas (no routing, no trees), and
// probe_oracle_matrix recovers the matrix a compiled circuit actually
// implements by simulating one basis column at a time. The two sides share
// no code with the compilers they check.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "qprep/circuit.hpp"
#include "qprep/mat2.hpp"
#include "qprep/state.hpp"

namespace qprep::testing {

struct SelectMatrix {
  std::size_t dim = 0;
  std::vector<cplx> a;  // row-major
  explicit SelectMatrix(std::size_t d) : dim(d), a(d * d, cplx(0)) {}
  cplx& at(std::size_t r, std::size_t c) { return a[r * dim + c]; }
  const cplx& at(std::size_t r, std::size_t c) const { return a[r * dim + c]; }
};

// Basis convention used throughout: composite index = k + 2^index_bits * z,
// where k is the value of the index register (bit i = qubit index[i]) and z
// the value of the word register.

/// sum_k |k><k| (x) U_{w-1}(k) (x) ... (x) U_0(k), entrywise; table[k][l]
/// acts on word bit l.
inline SelectMatrix pum_select_matrix(int index_bits,
                                      const std::vector<std::vector<Mat2>>& table) {
  const std::size_t d = std::size_t(1) << index_bits;
  const int w = static_cast<int>(table.at(0).size());
  SelectMatrix m(d << w);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t zr = 0; zr < (std::size_t(1) << w); ++zr)
      for (std::size_t zc = 0; zc < (std::size_t(1) << w); ++zc) {
        cplx e = 1.0;
        for (int l = 0; l < w; ++l) e *= table[k][l].at((zr >> l) & 1, (zc >> l) & 1);
        m.at(k + d * zr, k + d * zc) = e;
      }
  return m;
}

/// Permutation |k>|z> -> |k>|z xor f(k)>; keys absent from `entries` map to 0.
inline SelectMatrix sbm_select_matrix(
    int index_bits, int word_bits,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& entries) {
  const std::size_t d = std::size_t(1) << index_bits;
  SelectMatrix m(d << word_bits);
  for (std::size_t k = 0; k < d; ++k) {
    std::uint64_t f = 0;
    for (const auto& [key, word] : entries)
      if (key == k) f = word;
    for (std::size_t z = 0; z < (std::size_t(1) << word_bits); ++z)
      m.at(k + d * (z ^ f), k + d * z) = 1.0;
  }
  return m;
}

struct ProbeResult {
  SelectMatrix matrix;
  bool clean = true;  // every ancilla back at its initial value on every column
};

/// Runs the circuit once per computational-basis setting of (index, word);
/// all other qubits start at their registry-declared initial values. Row and
/// column order follow the composite-index convention above.
inline ProbeResult probe_oracle_matrix(const Circuit& c, const std::vector<QubitId>& index,
                                       const std::vector<QubitId>& word) {
  const std::size_t nb = index.size() + word.size();
  ProbeResult out{SelectMatrix(std::size_t(1) << nb), true};
  std::vector<QubitId> logical = index;
  logical.insert(logical.end(), word.begin(), word.end());
  const BasisKey expect = initial_pattern(c.registry);
  for (std::size_t col = 0; col < out.matrix.dim; ++col) {
    BasisKey start = expect;
    for (std::size_t b = 0; b < nb; ++b) start.set(logical[b], (col >> b) & 1);
    SparseState end = apply_circuit(c, {}, SparseState::basis(c.registry.size(), start));
    LogicalExtract ex = extract_logical(end, logical, expect);
    if (!ex.clean) out.clean = false;
    for (const auto& [key, amp] : ex.state.terms()) {
      std::size_t row = 0;
      for (std::size_t b = 0; b < nb; ++b)
        if (key.get(QubitId(static_cast<std::uint32_t>(b)))) row |= std::size_t(1) << b;
      out.matrix.at(row, col) += amp;
    }
  }
  return out;
}

inline double max_abs_diff(const SelectMatrix& x, const SelectMatrix& y) {
  double worst = 0;
  for (std::size_t i = 0; i < x.a.size(); ++i) worst = std::max(worst, std::abs(x.a[i] - y.a[i]));
  return worst;
}

}  // namespace qprep::testing
