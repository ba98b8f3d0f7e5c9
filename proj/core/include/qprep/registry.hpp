#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qprep/errors.hpp"
#include "qprep/types.hpp"

namespace qprep {

/// Maps human-readable role paths (e.g. "H[2][1]", "R[0][0].route") to qubit
/// ids and records each qubit's initial basis value. Role paths are unique
/// and every qubit has exactly one role. Immutable once a circuit is built;
/// grown only through allocate() while a layout is under construction.
class QubitRegistry {
 public:
  QubitId allocate(const std::string& role, int init = 0) {
    if (init != 0 && init != 1) throw SpecError("init bit must be 0 or 1: " + role);
    auto [it, fresh] = role_to_id_.emplace(role, QubitId(static_cast<std::uint32_t>(roles_.size())));
    if (!fresh) throw SpecError("duplicate role path: " + role);
    roles_.push_back(role);
    init_.push_back(static_cast<std::uint8_t>(init));
    return it->second;
  }

  std::size_t size() const { return roles_.size(); }

  const std::string& role(QubitId q) const {
    if (q.v >= roles_.size()) throw UnknownQubitError("qubit id out of range");
    return roles_[q.v];
  }

  int initial_bit(QubitId q) const {
    if (q.v >= init_.size()) throw UnknownQubitError("qubit id out of range");
    return init_[q.v];
  }

  QubitId id(const std::string& role) const {
    auto it = role_to_id_.find(role);
    if (it == role_to_id_.end()) throw UnknownQubitError("no such role: " + role);
    return it->second;
  }

  bool has_role(const std::string& role) const { return role_to_id_.count(role) != 0; }

  bool operator==(const QubitRegistry& o) const {
    return roles_ == o.roles_ && init_ == o.init_;
  }

 private:
  std::vector<std::string> roles_;
  std::vector<std::uint8_t> init_;
  std::map<std::string, QubitId> role_to_id_;
};

}  // namespace qprep
