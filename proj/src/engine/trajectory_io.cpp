#include "pco/trajectory_io.hpp"

#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "pco/errors.hpp"

namespace pco {

std::uint64_t fired_mask(const std::vector<NodeIndex>& fired, std::size_t n) {
  if (n > 64) throw DomainError("fired_mask encodes at most 64 nodes");
  std::uint64_t mask = 0;
  for (NodeIndex k : fired) mask |= std::uint64_t{1} << k;
  return mask;
}

void write_trajectory_csv(std::ostream& out, const HybridTrajectory& trajectory) {
  const std::size_t n = trajectory.config ? trajectory.config->topology.n()
                        : trajectory.samples.empty() ? 0
                                                     : trajectory.samples.front().phases.size();
  std::string line = "t,j";
  for (std::size_t i = 1; i <= n; ++i) line += fmt::format(",x_{}", i);
  line += ",fired_mask\n";
  out << line;
  for (const auto& s : trajectory.samples) {
    line = fmt::format("{:.17g},{}", s.t, s.j);
    for (double x : s.phases) line += fmt::format(",{:.17g}", x);
    line += fmt::format(",{}\n", fired_mask(s.fired, n));
    out << line;
  }
}

std::string outcome_json(const RunOutcome& outcome, const OutcomeContext& context) {
  using nlohmann::json;
  json j;
  j["name"] = context.name;
  j["verdict"] = std::string(to_string(outcome.verdict));
  j["t_sync"] = outcome.t_sync ? json(*outcome.t_sync) : json(nullptr);
  j["final_t"] = outcome.final_state.t;
  j["final_j"] = outcome.final_state.j;
  j["final_phases"] = outcome.final_state.phases;
  j["final_max_gap"] = outcome.final_max_gap;
  j["rounds"] = outcome.rounds;
  j["period_jumps"] = outcome.period_jumps ? json(*outcome.period_jumps) : json(nullptr);
  j["stats"] = {{"cascades", outcome.stats.cascades},
                {"max_jumps_per_instant", outcome.stats.max_jumps_per_instant},
                {"max_interfiring_time", outcome.stats.max_interfiring_time}};

  if (const auto& c = outcome.trajectory.config) {
    j["config"] = {
        {"n", c->topology.n()},
        {"direction", std::string(to_string(c->topology.direction()))},
        {"l", c->topology.coupling()},
        {"w", c->w.value()},
        {"tie", std::string(to_string(c->prc.tie()))},
        {"refractory", c->prc.refractory_lengths()},
        {"eps", c->sync_tolerance},
        {"horizon_rounds", c->horizon.rounds},
        {"order", std::string(to_string(c->order))},
        {"seed", c->seed},
        {"init", context.init},
        {"initial_phases", c->initial.phases},
    };
  }
  j["spec_text"] = context.spec_text;
  return j.dump(2) + "\n";
}

}  // namespace pco
