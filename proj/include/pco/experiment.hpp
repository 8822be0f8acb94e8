#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pco/engine.hpp"
#include "pco/random.hpp"

namespace pco {

/// Malformed command line or experiment file.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform over [0, 2pi)^n.
PhaseState random_state(std::size_t n, SplitMix64& rng);

/// Random phases whose largest pairwise difference is below pi: a spread
/// s = pi * u and an offset uniform over [0, 2pi - s).
PhaseState semicircle_state(std::size_t n, SplitMix64& rng);

/// Parses an angle: a plain number or an expression in pi such as
/// "pi", "pi/2", "3*pi/2", "1.5pi".
double parse_angle(std::string_view text);

/// Builds an initial state from its textual description:
///   worst-bi, worst-bi-u2   worst-case bidirectional equilibrium (U1 / U2 ordering)
///   worst-uni-u1            worst-case unidirectional U1 equilibrium
///   uniform-u2              equally spaced ascending phases
///   random, semicircle      seeded random draws
///   phases:a,b,...          explicit phases (angles as accepted by parse_angle)
/// The worst-case families are built for coupling `construction_l`.
PhaseState make_initial(std::string_view init, std::size_t n, double construction_l,
                        std::uint64_t seed);

/// One experiment described by a flat `key = value` file.
struct ExperimentSpec {
  std::string name = "run";
  std::string mode = "simulate";  ///< simulate | critical-sweep
  std::size_t n = 8;
  Direction direction = Direction::Bidirectional;
  double l = 1.0;
  double w = kTwoPi;
  std::vector<std::pair<NodeIndex, double>> refractory;  ///< zero-based node, length
  TiePolicy tie = TiePolicy::Advance;
  double eps = 1e-6;
  std::int64_t horizon_rounds = 500;
  std::string init = "random";
  std::optional<double> init_l;  ///< coupling used to build worst-case states
  std::uint64_t seed = 0;
  CascadeOrder order = CascadeOrder::Ascending;
  double record_every = 0.0;
  std::optional<Verdict> expected_verdict;
  std::string out_dir = ".";
  std::size_t sweep_from = 4;
  std::size_t sweep_to = 250;
  std::string text;  ///< verbatim source, echoed into outputs
};

ExperimentSpec parse_spec(std::string_view text);
ExperimentSpec load_spec(const std::filesystem::path& path);

/// Parses "node:length" with a one-based node index.
std::pair<NodeIndex, double> parse_refractory(std::string_view text);
Direction parse_direction(std::string_view text);
TiePolicy parse_tie(std::string_view text);
CascadeOrder parse_order(std::string_view text);
Verdict parse_verdict(std::string_view text);

SimulationConfig to_config(const ExperimentSpec& spec);

struct ExperimentResult {
  RunOutcome outcome;
  std::filesystem::path csv_path;
  std::filesystem::path outcome_path;
};

/// Runs the simulation and writes <out_dir>/<name>.csv and <name>.outcome.json.
ExperimentResult run_experiment(const ExperimentSpec& spec, bool write_files = true);

}  // namespace pco
