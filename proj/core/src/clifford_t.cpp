#include "qprep/clifford_t.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace qprep {
namespace {

Mat2 symbol_unitary(char c) {
  switch (c) {
    case 'H':
      return Mat2::h();
    case 'T':
      return Mat2::t();
    case 't':
      return Mat2::tdg();
    default:
      throw SpecError(std::string("unknown gate-word symbol '") + c + "'");
  }
}

Gate symbol_gate(char c, QubitId q) {
  switch (c) {
    case 'H':
      return Gate::h(q);
    case 'T':
      return Gate::t(q);
    case 't':
      return Gate::tdg(q);
    default:
      throw SpecError(std::string("unknown gate-word symbol '") + c + "'");
  }
}

void append_word(LayerList& out, const std::string& symbols, QubitId q) {
  for (char c : symbols) out.add_layer({symbol_gate(c, q)});
}

// ---------------------------------------------------------------------------
// Unit-quaternion view of PSU(2). V(q) = q0 I + i (q1 X + q2 Y + q3 Z), i.e.
// V00 = q0 + i q3, V01 = q2 + i q1, V10 = -q2 + i q1, V11 = q0 - i q3.
// Matrix products compose as V(q) V(p) = V(q * p) with the reversed-cross
// product used below; global phase drops out, global sign survives.

using Quat = std::array<double, 4>;
using QuatF = std::array<float, 4>;

Quat su2_quat(const Mat2& u) {
  cplx det = u.at(0, 0) * u.at(1, 1) - u.at(0, 1) * u.at(1, 0);
  cplx s = std::polar(1.0, -0.5 * std::arg(det));
  cplx v00 = s * u.at(0, 0), v01 = s * u.at(0, 1);
  cplx v10 = s * u.at(1, 0), v11 = s * u.at(1, 1);
  return {0.5 * (v00.real() + v11.real()), 0.5 * (v01.imag() + v10.imag()),
          0.5 * (v01.real() - v10.real()), 0.5 * (v00.imag() - v11.imag())};
}

Quat quat_mul(const Quat& q, const Quat& p) {
  return {q[0] * p[0] - q[1] * p[1] - q[2] * p[2] - q[3] * p[3],
          q[0] * p[1] + p[0] * q[1] - (q[2] * p[3] - q[3] * p[2]),
          q[0] * p[2] + p[0] * q[2] - (q[3] * p[1] - q[1] * p[3]),
          q[0] * p[3] + p[0] * q[3] - (q[1] * p[2] - q[2] * p[1])};
}

Quat quat_conj(const Quat& q) { return {q[0], -q[1], -q[2], -q[3]}; }

QuatF quat_mul(const QuatF& q, const QuatF& p) {
  return {q[0] * p[0] - q[1] * p[1] - q[2] * p[2] - q[3] * p[3],
          q[0] * p[1] + p[0] * q[1] - (q[2] * p[3] - q[3] * p[2]),
          q[0] * p[2] + p[0] * q[2] - (q[3] * p[1] - q[1] * p[3]),
          q[0] * p[3] + p[0] * q[3] - (q[1] * p[2] - q[2] * p[1])};
}

float quat_abs_dot(const QuatF& a, const QuatF& b) {
  return std::fabs(a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]);
}

// Fixes the sign ambiguity: the largest-magnitude component is made positive.
Quat canonical(Quat q) {
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (std::fabs(q[i]) > std::fabs(q[best])) best = i;
  if (q[best] < 0)
    for (double& v : q) v = -v;
  return q;
}

QuatF to_float(const Quat& q) {
  return {float(q[0]), float(q[1]), float(q[2]), float(q[3])};
}

// ---------------------------------------------------------------------------
// Word table: breadth-first closure of {H, T} strings up to kTableCap
// symbols, one entry per distinct operator modulo global phase. Discovery
// order is (length, lexicographic), and because every prefix of a stored
// word is itself stored first, the entry kept for each operator is its
// (length, lex)-minimal word. A coarse spatial grid over entries up to
// kMitmInnerCap serves as the long factor of the two-factor fallback
// search; the short factor walks entries up to kMitmOuterCap.

constexpr int kTableCap = 31;      // longest stored {H,T} word
constexpr int kMitmOuterCap = 18;  // short-factor cap in the pair search
constexpr int kMitmInnerCap = 26;  // grid-indexed long-factor cap
constexpr float kGridCell = 0.125f;
constexpr float kFilterSlack = 1e-3f;  // float prefilter margin; exact math decides

struct WordEntry {
  QuatF q;               // canonical quaternion
  std::uint64_t packed;  // symbol bits (0 = H, 1 = T) in [0, len); len in bits 58+
};

int packed_len(std::uint64_t w) { return int(w >> 58); }

std::string unpack_word(std::uint64_t w) {
  int len = packed_len(w);
  std::string s(std::size_t(len), 'H');
  for (int i = 0; i < len; ++i)
    if ((w >> i) & 1) s[std::size_t(i)] = 'T';
  return s;
}

struct QuantKey {
  std::array<std::int32_t, 4> v;
  bool operator==(const QuantKey&) const = default;
};

struct QuantKeyHash {
  std::size_t operator()(const QuantKey& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::int32_t x : k.v) {
      h ^= std::uint64_t(std::uint32_t(x)) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    return std::size_t(h);
  }
};

QuantKey quant_key(const Quat& q) {
  QuantKey k;
  for (int i = 0; i < 4; ++i) k.v[std::size_t(i)] = std::int32_t(std::llround(q[std::size_t(i)] * (1 << 26)));
  return k;
}

std::uint32_t cell_key(int c0, int c1, int c2, int c3) {
  auto u = [](int c) { return std::uint32_t(c + 16) & 0xffu; };
  return (u(c0) << 24) | (u(c1) << 16) | (u(c2) << 8) | u(c3);
}

int cell_of(float v) { return int(std::floor(v / kGridCell)); }

struct WordTable {
  std::vector<WordEntry> entries;  // (length, lex) discovery order
  std::unordered_map<std::uint32_t, std::vector<std::int32_t>> grid;
};

WordTable build_word_table() {
  WordTable tab;
  std::unordered_set<QuantKey, QuantKeyHash> seen;
  struct Node {
    Mat2 u;
    std::uint64_t packed;
  };
  std::vector<Node> frontier{{Mat2::identity(), 0}};
  seen.insert(quant_key(canonical(su2_quat(Mat2::identity()))));
  tab.entries.push_back({to_float(canonical(su2_quat(Mat2::identity()))), 0});
  const Mat2 gh = Mat2::h(), gt = Mat2::t();
  for (int len = 1; len <= kTableCap; ++len) {
    std::vector<Node> next;
    for (const Node& parent : frontier) {
      for (int bit = 0; bit < 2; ++bit) {  // H before T keeps children lex-ordered
        Mat2 u = (bit ? gt : gh) * parent.u;
        Quat q = canonical(su2_quat(u));
        if (!seen.insert(quant_key(q)).second) continue;
        std::uint64_t packed = (parent.packed & ((1ull << 58) - 1)) |
                               (std::uint64_t(bit) << (len - 1)) |
                               (std::uint64_t(len) << 58);
        tab.entries.push_back({to_float(q), packed});
        next.push_back({u, packed});
      }
    }
    frontier = std::move(next);
  }
  for (std::int32_t i = 0;
       i < std::int32_t(tab.entries.size()) &&
       packed_len(tab.entries[std::size_t(i)].packed) <= kMitmInnerCap;
       ++i) {
    const QuatF& q = tab.entries[std::size_t(i)].q;
    tab.grid[cell_key(cell_of(q[0]), cell_of(q[1]), cell_of(q[2]), cell_of(q[3]))].push_back(i);
  }
  return tab;
}

const WordTable& word_table() {
  static const WordTable tab = build_word_table();
  return tab;
}

// All entries within phase-invariant distance ~radius of target (either
// quaternion sign), ascending by index. Only grid-indexed (short) entries.
void collect_near(const WordTable& tab, const Quat& target, double radius,
                  std::vector<std::int32_t>& out) {
  out.clear();
  QuatF ft = to_float(target);
  const float want = float(1.0 - 0.5 * radius * radius) - kFilterSlack;
  for (int sgn : {1, -1}) {
    int lo[4], hi[4];
    for (int d = 0; d < 4; ++d) {
      double v = sgn * target[std::size_t(d)];
      lo[d] = std::max(-9, cell_of(float(v - radius)));
      hi[d] = std::min(8, cell_of(float(v + radius)));
    }
    for (int c0 = lo[0]; c0 <= hi[0]; ++c0)
      for (int c1 = lo[1]; c1 <= hi[1]; ++c1)
        for (int c2 = lo[2]; c2 <= hi[2]; ++c2)
          for (int c3 = lo[3]; c3 <= hi[3]; ++c3) {
            auto it = tab.grid.find(cell_key(c0, c1, c2, c3));
            if (it == tab.grid.end()) continue;
            for (std::int32_t idx : it->second)
              if (quat_abs_dot(tab.entries[std::size_t(idx)].q, ft) >= want) out.push_back(idx);
          }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

// ---------------------------------------------------------------------------
// Delivered-coefficient metrics. For the swap pattern [W_b; CNOT(a;b);
// W^-1_b; CNOT(a;b); CNOT(b;a)] the |10> input leaves with amplitudes
//   A10 = w00 conj(w11) + w10 conj(w01)   (want cos theta on |10>)
//   A01 = 2 Re(w00 conj(w10))             (want sin theta on |01>),
// and |00>, |01> are handled exactly for any W. For the phase pattern
// [W_A; CNOT(leaf; A); W^-1_A; CNOT(leaf; A)] on an ancilla in |1>, the
// leaf-1 branch multiplies the ancilla by
//   B11 = conj(w10) w01 + conj(w00) w11   (want e^{i phi})
// and leaks B01 = 2 Re(conj(w11) w01) onto |0>; leaf-0 is exact. Both
// metrics are the two-norm of the deviation pair and are global-phase
// invariant, so they are also computable from the quaternion view.

enum class Family { Swap, Phase };

double delivered_exact(Family f, const Mat2& w, double ang) {
  if (f == Family::Swap) {
    cplx a10 = w.at(0, 0) * std::conj(w.at(1, 1)) + w.at(1, 0) * std::conj(w.at(0, 1));
    double a01 = 2.0 * std::real(w.at(0, 0) * std::conj(w.at(1, 0)));
    double ds = a01 - std::sin(ang);
    return std::sqrt(std::norm(a10 - std::cos(ang)) + ds * ds);
  }
  cplx b11 = std::conj(w.at(1, 0)) * w.at(0, 1) + std::conj(w.at(0, 0)) * w.at(1, 1);
  double b01 = 2.0 * std::real(std::conj(w.at(1, 1)) * w.at(0, 1));
  return std::sqrt(std::norm(b11 - std::polar(1.0, ang)) + b01 * b01);
}

// Same metrics from a quaternion (a = q0 + i q3, b = -q2 + i q1):
// A10 = a^2 - b^2, A01 = 2(q1 q3 - q0 q2), B11 = conj(A10), B01 = -A01.
float delivered_flt(Family f, const QuatF& q, float c, float s) {
  float re = (q[0] * q[0] - q[3] * q[3]) - (q[2] * q[2] - q[1] * q[1]);
  float im = 2 * q[0] * q[3] + 2 * q[2] * q[1];
  float a01 = 2 * (q[1] * q[3] - q[0] * q[2]);
  float dr, di, dp;
  if (f == Family::Swap) {
    dr = re - c;
    di = im;
    dp = a01 - s;
  } else {
    dr = re - c;
    di = -im - s;
    dp = a01;
  }
  return std::sqrt(dr * dr + di * di + dp * dp);
}

std::optional<std::string> scan_direct(Family f, double ang, double eps) {
  const WordTable& tab = word_table();
  const float c = float(std::cos(ang)), s = float(std::sin(ang));
  const float cut = float(eps) + kFilterSlack;
  for (const WordEntry& e : tab.entries) {
    if (delivered_flt(f, e.q, c, s) > cut) continue;
    std::string w = unpack_word(e.packed);
    if (delivered_exact(f, word_unitary(w), ang) <= eps) return w;
  }
  return std::nullopt;
}

// Exact deliverers of each family, used as query centers by the pair
// search. The swap metric vanishes at ry(theta) and at the reflection
// i [[sin t/2, cos t/2], [cos t/2, -sin t/2]]; the phase metric vanishes
// along a whole circle, sampled here at a handful of points.
std::vector<Mat2> exact_centers(Family f, double ang) {
  if (f == Family::Swap) {
    double c = std::cos(ang / 2), s = std::sin(ang / 2);
    Mat2 refl{{cplx(0, s), cplx(0, c), cplx(0, c), cplx(0, -s)}};
    return {Mat2::ry(ang), refl};
  }
  std::vector<Mat2> out;
  cplx em = std::polar(1.0, -ang / 2), ep = std::polar(1.0, ang / 2);
  const cplx i1(0, 1);
  for (double psi : {0.0, M_PI / 6, M_PI / 3, M_PI / 2, -M_PI / 6, -M_PI / 3}) {
    double c = std::cos(psi), s = std::sin(psi);
    out.push_back(Mat2{{em * c, i1 * ep * s, i1 * em * s, ep * c}});
  }
  return out;
}

std::optional<std::string> scan_pairs(Family f, double ang, double eps) {
  const WordTable& tab = word_table();
  const float c = float(std::cos(ang)), s = float(std::sin(ang));
  const float cut = float(eps) + kFilterSlack;
  std::vector<Quat> centers;
  for (const Mat2& m : exact_centers(f, ang)) centers.push_back(su2_quat(m));
  const double radius = std::min(0.2, std::max(1.5 * eps, 0.05));
  std::optional<std::string> best;
  std::vector<std::int32_t> cand, merged;
  for (const WordEntry& e2 : tab.entries) {
    int len2 = packed_len(e2.packed);
    if (len2 > kMitmOuterCap) break;
    if (best && len2 > int(best->size())) break;
    Quat q2c = quat_conj({e2.q[0], e2.q[1], e2.q[2], e2.q[3]});
    merged.clear();
    for (const Quat& qc : centers) {
      collect_near(tab, quat_mul(q2c, qc), radius, cand);
      merged.insert(merged.end(), cand.begin(), cand.end());
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    for (std::int32_t i1 : merged) {
      const WordEntry& e1 = tab.entries[std::size_t(i1)];
      std::size_t total = std::size_t(packed_len(e1.packed) + len2);
      if (best && (total > best->size())) continue;
      if (delivered_flt(f, quat_mul(e2.q, e1.q), c, s) > cut) continue;
      std::string w = unpack_word(e1.packed) + unpack_word(e2.packed);
      if (best && total == best->size() && !(w < *best)) continue;
      if (delivered_exact(f, word_unitary(w), ang) <= eps) best = std::move(w);
    }
  }
  return best;
}

std::string family_word(Family f, double ang, double eps) {
  if (!std::isfinite(ang)) throw SpecError("rotation angle must be finite");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw SpecError("word accuracy must be positive");
  using Key = std::tuple<int, long long, long long>;
  static std::mutex mu;
  static std::map<Key, std::string> memo;
  Key key{int(f), std::llround(ang * 1e12), std::llround(eps * 1e12)};
  std::lock_guard<std::mutex> lock(mu);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  std::optional<std::string> w = scan_direct(f, ang, eps);
  if (!w) w = scan_pairs(f, ang, eps);
  if (!w)
    throw BudgetUnreachableError("gate-word search cannot reach accuracy " +
                                 std::to_string(eps) + " for this rotation");
  memo.emplace(key, *w);
  return *w;
}

std::string inverse_symbols(const std::string& symbols) {
  std::string r(symbols.rbegin(), symbols.rend());
  for (char& c : r) {
    switch (c) {
      case 'H':
        break;
      case 'T':
        c = 't';
        break;
      case 't':
        c = 'T';
        break;
      default:
        throw SpecError(std::string("unknown gate-word symbol '") + c + "'");
    }
  }
  return r;
}

}  // namespace

Mat2 word_unitary(const std::string& symbols) {
  Mat2 u = Mat2::identity();
  for (char c : symbols) u = symbol_unitary(c) * u;
  return u;
}

CliffordTWord approx_single_qubit(const Mat2& target, double eps_prime) {
  if (!(eps_prime > 0.0) || !std::isfinite(eps_prime))
    throw SpecError("word accuracy must be positive");
  if (target.unitarity_defect() > 1e-9)
    throw SpecError("approximation target must be unitary");

  using Key = std::array<long long, 9>;
  static std::mutex mu;
  static std::map<Key, CliffordTWord> memo;
  Key key;
  for (int i = 0; i < 4; ++i) {
    key[std::size_t(2 * i)] = std::llround(target.m[std::size_t(i)].real() * 1e12);
    key[std::size_t(2 * i + 1)] = std::llround(target.m[std::size_t(i)].imag() * 1e12);
  }
  key[8] = std::llround(eps_prime * 1e12);
  std::lock_guard<std::mutex> lock(mu);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;

  const WordTable& tab = word_table();
  QuatF ft = to_float(canonical(su2_quat(target)));
  // |q . t| >= 1 - (eps + slack)^2 / 2 is the float form of dist <= eps.
  const float cut = float(eps_prime) + kFilterSlack;
  const float want = 1.0f - 0.5f * cut * cut;
  for (const WordEntry& e : tab.entries) {
    if (quat_abs_dot(e.q, ft) < want) continue;
    std::string symbols = unpack_word(e.packed);
    Mat2 u = word_unitary(symbols);
    double d = phase_invariant_distance(u, target);
    if (d <= eps_prime) {
      CliffordTWord w{std::move(symbols), u, d};
      memo.emplace(key, w);
      return w;
    }
  }
  throw BudgetUnreachableError(
      "no table word within " + std::to_string(eps_prime) +
      " of the target; the bounded search bottoms out near 0.06");
}

CliffordTWord inverse_word(const CliffordTWord& w) {
  std::string r = inverse_symbols(w.symbols);
  return {r, word_unitary(r), 0.0};
}

ErrorBudget split_error_budget(double eps, int n) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw SpecError("accuracy budget must be positive");
  if (n < 1) throw SpecError("qubit count must be at least 1");
  return {eps, eps / (2.0 * n), eps / 2.0};
}

LayerList lower_partial_swap(double theta, QubitId a, QubitId b, double eps_prime) {
  std::string w = family_word(Family::Swap, theta, eps_prime);
  LayerList out;
  append_word(out, w, b);
  out.add_layer({Gate::cnot(a, b)});
  append_word(out, inverse_symbols(w), b);
  out.add_layer({Gate::cnot(a, b)});
  out.add_layer({Gate::cnot(b, a)});
  return out;
}

LayerList lower_phase_pair(double phi, QubitId leaf, QubitId ancilla, double eps_half) {
  std::string w = family_word(Family::Phase, phi, eps_half);
  LayerList out;
  append_word(out, w, ancilla);
  out.add_layer({Gate::cnot(leaf, ancilla)});
  append_word(out, inverse_symbols(w), ancilla);
  out.add_layer({Gate::cnot(leaf, ancilla)});
  return out;
}

LayerList lower_toffoli(QubitId a, QubitId b, QubitId t) {
  LayerList out;
  for (const Gate& g : ccnot_sequence(a, b, t)) out.add_layer({g});
  return out;
}

CompiledCliffordT compile_dense_clifford_t(const std::vector<cplx>& amplitudes, double eps) {
  QubitRegistry reg;
  DenseBlock blk = build_dense_block(reg, "", amplitudes, {});
  const int n = int(blk.logical.size());
  ErrorBudget budget = split_error_budget(eps, n);

  LayerList out;
  std::vector<int> offsets;
  std::vector<QubitId> phase_ancillas;
  for (const Layer& layer : blk.layers.layers()) {
    offsets.push_back(int(out.size()));
    LayerList merged;
    for (const Gate& g : layer.gates) {
      LayerList frag;
      switch (g.kind) {
        case GateKind::PartialSwap:
          frag = lower_partial_swap(g.theta, g.qubits[0], g.qubits[1], budget.eps_prime);
          break;
        case GateKind::Ph: {
          if (g.theta == 0.0) break;  // exact identity, nothing to emit
          QubitId anc = reg.allocate("A[" + std::to_string(phase_ancillas.size()) + "]", 1);
          phase_ancillas.push_back(anc);
          frag = lower_phase_pair(g.theta, g.qubits[0], anc, budget.eps_phase);
          break;
        }
        case GateKind::Ccnot:
          frag = lower_toffoli(g.qubits[0], g.qubits[1], g.qubits[2]);
          break;
        case GateKind::X:
        case GateKind::Cnot:
        case GateKind::Swap:
          frag.add_layer({g});
          break;
        default:
          throw SpecError(std::string("cannot lower ") + gate_kind_name(g.kind) +
                          " to the discrete alphabet");
      }
      merged.par(frag);
    }
    out.seq(merged);
  }
  offsets.push_back(int(out.size()));

  std::vector<StageSpan> stages;
  stages.reserve(blk.stages.size());
  for (const StageSpan& s : blk.stages)
    stages.push_back({s.name, offsets[std::size_t(s.first)],
                      offsets[std::size_t(s.last) + 1] - 1});

  CompiledCliffordT res;
  res.logical = blk.logical;
  res.budget = budget;
  res.ancilla_expectation = BasisKey(reg.size());
  for (QubitId anc : phase_ancillas) res.ancilla_expectation.set(anc, true);
  res.circuit = finish_circuit(std::move(reg), std::move(out), std::move(stages));
  return res;
}

}  // namespace qprep
