#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "pco/errors.hpp"
#include "pco/experiment.hpp"
#include "pco/trajectory_io.hpp"

namespace pco {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename Int>
Int parse_int(std::string_view s, std::string_view key) {
  s = trim(s);
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw UsageError("'" + std::string(key) + "' expects an integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::pair<std::size_t, std::size_t> parse_range(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) throw UsageError("range must look like from:to");
  const auto from = parse_int<std::size_t>(s.substr(0, colon), "sweep");
  const auto to = parse_int<std::size_t>(s.substr(colon + 1), "sweep");
  if (from > to) throw UsageError("empty sweep range");
  return {from, to};
}

}  // namespace

std::pair<NodeIndex, double> parse_refractory(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw UsageError("refractory must look like node:length");
  const auto node = parse_int<std::size_t>(text.substr(0, colon), "refractory");
  if (node == 0) throw UsageError("refractory node indices are one-based");
  return {node - 1, parse_angle(text.substr(colon + 1))};
}

Direction parse_direction(std::string_view text) {
  text = trim(text);
  if (text == "uni" || text == "unidirectional") return Direction::Unidirectional;
  if (text == "bi" || text == "bidirectional") return Direction::Bidirectional;
  throw UsageError("direction must be uni or bi, got '" + std::string(text) + "'");
}

TiePolicy parse_tie(std::string_view text) {
  text = trim(text);
  if (text == "advance") return TiePolicy::Advance;
  if (text == "delay") return TiePolicy::Delay;
  throw UsageError("tie must be advance or delay, got '" + std::string(text) + "'");
}

CascadeOrder parse_order(std::string_view text) {
  text = trim(text);
  if (text == "ascending") return CascadeOrder::Ascending;
  if (text == "descending") return CascadeOrder::Descending;
  throw UsageError("order must be ascending or descending, got '" + std::string(text) + "'");
}

Verdict parse_verdict(std::string_view text) {
  text = trim(text);
  for (Verdict v : {Verdict::Synchronized, Verdict::ClusteredEquilibrium,
                    Verdict::HorizonExhausted}) {
    if (text == to_string(v)) return v;
  }
  throw UsageError("unknown verdict '" + std::string(text) + "'");
}

ExperimentSpec parse_spec(std::string_view text) {
  ExperimentSpec spec;
  spec.text = std::string(text);
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw UsageError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }

    if (key == "name") {
      spec.name = std::string(value);
    } else if (key == "mode") {
      if (value != "simulate" && value != "critical-sweep") {
        throw UsageError("mode must be simulate or critical-sweep");
      }
      spec.mode = std::string(value);
    } else if (key == "n") {
      spec.n = parse_int<std::size_t>(value, key);
    } else if (key == "direction") {
      spec.direction = parse_direction(value);
    } else if (key == "l") {
      spec.l = parse_angle(value);
    } else if (key == "w") {
      spec.w = parse_angle(value);
    } else if (key == "refractory") {
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        spec.refractory.push_back(parse_refractory(trim(rest.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
    } else if (key == "tie") {
      spec.tie = parse_tie(value);
    } else if (key == "eps") {
      spec.eps = parse_angle(value);
    } else if (key == "horizon_rounds") {
      spec.horizon_rounds = parse_int<std::int64_t>(value, key);
    } else if (key == "init") {
      spec.init = std::string(value);
    } else if (key == "init_l") {
      spec.init_l = parse_angle(value);
    } else if (key == "seed") {
      spec.seed = parse_int<std::uint64_t>(value, key);
    } else if (key == "order") {
      spec.order = parse_order(value);
    } else if (key == "record_every") {
      spec.record_every = parse_angle(value);
    } else if (key == "expected_verdict") {
      spec.expected_verdict = parse_verdict(value);
    } else if (key == "out_dir") {
      spec.out_dir = std::string(value);
    } else if (key == "sweep") {
      std::tie(spec.sweep_from, spec.sweep_to) = parse_range(value);
    } else {
      throw UsageError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read spec file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto spec = parse_spec(buf.str());
  if (spec.name == "run") spec.name = path.stem().string();
  return spec;
}

SimulationConfig to_config(const ExperimentSpec& spec) {
  CycleTopology topology(spec.n, spec.direction, spec.l);
  PrcSpec prc(spec.tie);
  for (const auto& [node, length] : spec.refractory) {
    prc = prc.with_refractory(spec.n, node, length);
  }
  return SimulationConfig{
      .topology = topology,
      .prc = prc,
      .w = NaturalFrequency(spec.w),
      .initial = make_initial(spec.init, spec.n, spec.init_l.value_or(spec.l), spec.seed),
      .horizon = Horizon{.rounds = spec.horizon_rounds},
      .sync_tolerance = spec.eps,
      .record_every = spec.record_every,
      .record = true,
      .order = spec.order,
      .seed = spec.seed,
  };
}

ExperimentResult run_experiment(const ExperimentSpec& spec, bool write_files) {
  ExperimentResult result{run(to_config(spec)), {}, {}};
  if (!write_files) return result;

  const std::filesystem::path dir(spec.out_dir);
  std::filesystem::create_directories(dir);
  result.csv_path = dir / (spec.name + ".csv");
  result.outcome_path = dir / (spec.name + ".outcome.json");

  std::ofstream csv(result.csv_path, std::ios::binary);
  write_trajectory_csv(csv, result.outcome.trajectory);
  std::ofstream json(result.outcome_path, std::ios::binary);
  json << outcome_json(result.outcome, {spec.name, spec.init, spec.text});
  if (!csv || !json) throw UsageError("failed writing outputs to " + dir.string());
  return result;
}

}  // namespace pco
