#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pco/engine.hpp"

namespace pco {

/// Bitmask of fired nodes, bit k set for node k (zero-based). Rings with more
/// than 64 nodes cannot be encoded and raise DomainError.
std::uint64_t fired_mask(const std::vector<NodeIndex>& fired, std::size_t n);

/// Header `t,j,x_1,...,x_N,fired_mask`, one row per sample, floats at 17
/// significant digits.
void write_trajectory_csv(std::ostream& out, const HybridTrajectory& trajectory);

/// Provenance attached to an exported outcome record.
struct OutcomeContext {
  std::string name;
  std::string init;
  std::string spec_text;
};

/// Single JSON object with the verdict, t_sync, final phases and an echo of the configuration.
std::string outcome_json(const RunOutcome& outcome, const OutcomeContext& context);

}  // namespace pco
