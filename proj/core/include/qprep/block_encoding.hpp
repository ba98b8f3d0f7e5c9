#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qprep/circuit.hpp"
#include "qprep/mat2.hpp"
#include "qprep/memory_oracles.hpp"
#include "qprep/state.hpp"

namespace qprep {

/// H = sum_p alpha_p * (V_0(p) x ... x V_{n-1}(p)): positive weights times
/// products of single-qubit unitaries, factor l acting on system qubit l.
/// alpha = sum_p alpha_p sets the encoding scale.
struct ProductTermHamiltonian {
  int n = 0;
  std::vector<std::pair<double, std::vector<Mat2>>> terms;  // (alpha_p, n factors)
};

/// n in [1, 60], at least one term, every weight positive and finite
/// (NonpositiveCoefficientError), exactly n factors per term, every factor
/// unitary within 1e-12.
void validate_product_terms(const ProductTermHamiltonian& h);

/// alpha, the sum of the term weights.
double term_weight(const ProductTermHamiltonian& h);

/// Prepares the weight state sum_p sqrt(alpha_p/alpha)|p> on ceil(log2 P)
/// qubits (zero-padded). A single term needs no weight register at all and
/// compiles to an empty circuit.
Circuit compile_prepare_G(const ProductTermHamiltonian& h);

struct BlockEncodingArtifact {
  Circuit circuit;
  std::vector<QubitId> ancilla;  // weight register; empty when P = 1
  std::vector<QubitId> system;
  double alpha = 0.0;
  /// Whether H/alpha is Hermitian (1e-9 entrywise). Informational: the block
  /// identity holds either way, but spectral applications assume Hermitian.
  bool hermitian = true;
  /// Max entrywise deviation of the simulated block from H/alpha.
  double max_block_deviation = 0.0;
  /// Required final value of every non-system qubit; the encoded block lives
  /// on the subspace where they all read back exactly these values.
  BasisKey ancilla_expectation;
};

/// Weight-state prep, a product-unitary select of the term factors indexed
/// by the weight register, then the exact inverse of the prep. The assembly
/// is verified by simulating every system basis column and projecting the
/// non-system qubits back onto their expected values: the resulting matrix
/// must equal H/alpha entrywise within 1e-9 (VerificationFailedError). The
/// exhaustive check caps n at 10; estimate_qubitization skips it and takes
/// any compilable size.
BlockEncodingArtifact assemble_block_encoding(
    const ProductTermHamiltonian& h, RouteSchedule schedule = RouteSchedule::Pipelined);

/// The simulated block: row-major 2^n x 2^n with entry (r, c) equal to the
/// amplitude of |r, expected ancillas> in U|c, initial ancillas>.
std::vector<cplx> extract_block(const BlockEncodingArtifact& art);

/// H/alpha as a dense row-major matrix; the verification target.
std::vector<cplx> block_target(const ProductTermHamiltonian& h);

/// Resource estimate for simulating e^{-iHt} to accuracy eps by repeated
/// queries of the assembled block. Every explicit constant here is an
/// implementation choice layered on asymptotic bounds — treat the numbers
/// as ESTIMATE, not as a verified compilation.
struct QubitizationEstimate {
  std::int64_t query_count = 0;  // ceil(alpha*t + log2(1/eps))
  std::int64_t depth = 0;        // query_count * (block depth + weight-register reflection)
  std::int64_t qubits = 0;       // the assembled registry, measured
  double alpha = 0.0;
  double t = 0.0;
  double eps = 0.0;
  int n = 0;
  int term_count = 0;
};

/// Assembles the block unverified (so large n is fine) and fills the
/// formulas above. Requires t >= 0 and eps in (0, 1]. Monotone nondecreasing
/// in alpha*t and in log(1/eps).
QubitizationEstimate estimate_qubitization(const ProductTermHamiltonian& h, double t,
                                           double eps,
                                           RouteSchedule schedule = RouteSchedule::Pipelined);

}  // namespace qprep
