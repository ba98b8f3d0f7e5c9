#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <functional>

namespace qprep {

using cplx = std::complex<double>;

/// Index of a physical qubit within a registry. Bit i of a basis key is
/// owned by the qubit with id i (little-endian, shared by every module).
struct QubitId {
  std::uint32_t v = 0;

  QubitId() = default;
  explicit constexpr QubitId(std::uint32_t value) : v(value) {}
  auto operator<=>(const QubitId&) const = default;
};

}  // namespace qprep

template <>
struct std::hash<qprep::QubitId> {
  size_t operator()(const qprep::QubitId& q) const noexcept {
    return std::hash<std::uint32_t>{}(q.v);
  }
};
