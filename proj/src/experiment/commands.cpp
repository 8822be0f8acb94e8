#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pco/analysis.hpp"
#include "pco/cli.hpp"
#include "pco/coupling.hpp"
#include "pco/errors.hpp"
#include "pco/experiment.hpp"
#include "pco/verify.hpp"

namespace pco {
namespace {

struct SimFlags {
  std::vector<std::string> spec_files;
  std::string name = "run";
  std::size_t n = 8;
  std::string direction = "bi";
  double l = 1.0;
  std::string w = "2*pi";
  std::vector<std::string> refractory;
  std::string tie = "advance";
  double eps = 1e-6;
  std::int64_t horizon_rounds = 500;
  std::string init = "random";
  std::optional<double> init_l;
  std::uint64_t seed = 0;
  std::string order = "ascending";
  double record_every = 0.0;
  std::string out = ".";
  unsigned jobs = 1;
};

ExperimentSpec spec_from_flags(const SimFlags& f) {
  ExperimentSpec s;
  s.name = f.name;
  s.n = f.n;
  s.direction = parse_direction(f.direction);
  s.l = f.l;
  s.w = parse_angle(f.w);
  for (const auto& r : f.refractory) s.refractory.push_back(parse_refractory(r));
  s.tie = parse_tie(f.tie);
  s.eps = f.eps;
  s.horizon_rounds = f.horizon_rounds;
  s.init = f.init;
  s.init_l = f.init_l;
  s.seed = f.seed;
  s.order = parse_order(f.order);
  s.record_every = f.record_every;
  s.out_dir = f.out;
  s.text = fmt::format(
      "# from command line\nname = {}\nn = {}\ndirection = {}\nl = {:.17g}\nw = {}\n"
      "tie = {}\neps = {:.17g}\nhorizon_rounds = {}\ninit = {}\nseed = {}\norder = {}\n",
      f.name, f.n, f.direction, f.l, f.w, f.tie, f.eps, f.horizon_rounds, f.init, f.seed,
      f.order);
  for (const auto& r : f.refractory) s.text += "refractory = " + r + "\n";
  if (f.init_l) s.text += fmt::format("init_l = {:.17g}\n", *f.init_l);
  return s;
}

std::string summary_line(const ExperimentSpec& spec, const RunOutcome& o) {
  std::string expected = "-";
  std::string match = "-";
  if (spec.expected_verdict) {
    expected = std::string(to_string(*spec.expected_verdict));
    match = *spec.expected_verdict == o.verdict ? "yes" : "no";
  }
  return fmt::format("{},{},{},{},{},{},{}\n", spec.name, to_string(o.verdict),
                     o.t_sync ? fmt::format("{:.17g}", *o.t_sync) : std::string("nan"),
                     o.final_state.j, o.rounds, expected, match);
}

int cmd_simulate(const SimFlags& flags, std::ostream& out) {
  std::vector<ExperimentSpec> specs;
  if (flags.spec_files.empty()) {
    specs.push_back(spec_from_flags(flags));
  } else {
    for (const auto& file : flags.spec_files) {
      auto s = load_spec(file);
      if (s.mode != "simulate") throw UsageError(file + " is not a simulation spec");
      if (flags.out != ".") s.out_dir = flags.out;
      specs.push_back(std::move(s));
    }
  }
  std::vector<std::string> lines(specs.size());
  parallel_for(specs.size(), flags.jobs, [&](std::size_t k) {
    const auto result = run_experiment(specs[k]);
    lines[k] = summary_line(specs[k], result.outcome);
  });
  out << "name,verdict,t_sync,jumps,rounds,expected,matches\n";
  for (const auto& line : lines) out << line;
  return kExitOk;
}

void write_critical_sweep(std::ostream& out, std::size_t from, std::size_t to) {
  out << "n,direction,l_star\n";
  for (std::size_t n = from; n <= to; ++n) {
    for (Direction d : {Direction::Unidirectional, Direction::Bidirectional}) {
      out << fmt::format("{},{},{:.17g}\n", n, to_string(d), critical_coupling(n, d));
    }
  }
}

struct CriticalFlags {
  std::optional<std::size_t> n;
  std::optional<std::string> direction;
  std::string sweep;
  std::string spec_file;
  std::string out;
};

int cmd_critical(const CriticalFlags& f, std::ostream& out) {
  std::optional<std::pair<std::size_t, std::size_t>> range;
  std::string out_path = f.out;
  if (!f.spec_file.empty()) {
    const auto spec = load_spec(f.spec_file);
    if (spec.mode != "critical-sweep") throw UsageError(f.spec_file + " is not a critical-sweep spec");
    range = {spec.sweep_from, spec.sweep_to};
    if (out_path.empty()) out_path = (std::filesystem::path(spec.out_dir) / (spec.name + ".csv")).string();
  } else if (!f.sweep.empty()) {
    const auto colon = f.sweep.find(':');
    if (colon == std::string::npos) throw UsageError("--sweep expects from:to");
    range = {std::stoul(f.sweep.substr(0, colon)), std::stoul(f.sweep.substr(colon + 1))};
  }

  if (range) {
    if (range->first < kMinNodes || range->first > range->second) {
      throw UsageError("sweep range must satisfy 4 <= from <= to");
    }
    if (out_path.empty()) {
      write_critical_sweep(out, range->first, range->second);
    } else {
      if (const auto parent = std::filesystem::path(out_path).parent_path(); !parent.empty()) {
        std::filesystem::create_directories(parent);
      }
      std::ofstream file(out_path, std::ios::binary);
      write_critical_sweep(file, range->first, range->second);
      if (!file) throw UsageError("cannot write " + out_path);
      out << "wrote " << out_path << "\n";
    }
    return kExitOk;
  }

  if (!f.n) throw UsageError("critical needs N or --sweep");
  if (*f.n < kMinNodes) throw UsageError("critical coupling is defined for N >= 4");
  if (f.direction) {
    out << fmt::format("{:.6f}\n", critical_coupling(*f.n, parse_direction(*f.direction)));
  } else {
    for (Direction d : {Direction::Unidirectional, Direction::Bidirectional}) {
      out << fmt::format("{} {:.6f}\n", to_string(d), critical_coupling(*f.n, d));
    }
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite, const VerifyOptions& options, std::ostream& out) {
  const auto results = run_verify_suite(suite, options);
  out << format_results(results);
  const bool ok = std::all_of(results.begin(), results.end(),
                              [](const PropertyResult& r) { return r.passed; });
  return ok ? kExitOk : kExitVerifyFailed;
}

WorstCase parse_which(const std::string& which, GapOrdering& ordering) {
  ordering = GapOrdering::Descending;
  if (which == "bi-ubar") return WorstCase::BiUbar;
  if (which == "bi-ubar-u2") {
    ordering = GapOrdering::Ascending;
    return WorstCase::BiUbar;
  }
  if (which == "uni-u1star") return WorstCase::UniU1star;
  if (which == "uni-u2-uniform") {
    ordering = GapOrdering::Ascending;
    return WorstCase::UniU2uniform;
  }
  throw UsageError("unknown worst-case family '" + which + "'");
}

int cmd_worst_case(std::size_t n, double l, const std::string& which, std::ostream& out) {
  GapOrdering ordering{};
  const WorstCase family = parse_which(which, ordering);
  const PhaseState x = worst_case_state(n, l, family, ordering);
  const StateClass c = classify(x);
  const auto v = distance_vector(x);
  out << fmt::format("# n={} l={:.17g} which={} class={} length={:.17g}\n", n, l, which,
                     to_string(c.tag), c.length);
  out << "node,phase,distance\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << fmt::format("{},{:.17g},{:.17g}\n", i + 1, x.phases[i], v.components[i]);
  }
  return kExitOk;
}

struct SweepFlags {
  std::size_t n = 8;
  std::string direction = "bi";
  std::string l_range = "0.80:0.90:11";
  std::optional<std::string> init;
  std::optional<double> init_l;
  std::vector<std::string> refractory;
  std::int64_t horizon_rounds = 500;
  double eps = 1e-6;
  std::uint64_t seed = 0;
  std::string out;
  unsigned jobs = 1;
};

int cmd_sweep(const SweepFlags& f, std::ostream& out) {
  std::vector<std::string> parts;
  std::stringstream ss(f.l_range);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw UsageError("--l-range expects from:to:count");
  const double from = parse_angle(parts[0]);
  const double to = parse_angle(parts[1]);
  const std::size_t count = std::stoul(parts[2]);
  if (count == 0) throw UsageError("--l-range needs at least one point");

  const Direction dir = parse_direction(f.direction);
  const std::string init = f.init.value_or(dir == Direction::Bidirectional ? "worst-bi" : "worst-uni-u1");
  std::vector<double> ls(count);
  for (std::size_t k = 0; k < count; ++k) {
    ls[k] = count == 1 ? from : from + (to - from) * static_cast<double>(k) / static_cast<double>(count - 1);
  }

  std::vector<std::string> rows(count);
  parallel_for(count, f.jobs, [&](std::size_t k) {
    ExperimentSpec s;
    s.n = f.n;
    s.direction = dir;
    s.l = ls[k];
    for (const auto& r : f.refractory) s.refractory.push_back(parse_refractory(r));
    s.init = init;
    s.init_l = f.init_l;
    s.horizon_rounds = f.horizon_rounds;
    s.eps = f.eps;
    s.seed = f.seed;
    auto config = to_config(s);
    config.record = false;
    const RunOutcome o = run(config);
    rows[k] = fmt::format("{:.17g},{},{},{},{}\n", ls[k], to_string(o.verdict),
                          o.t_sync ? fmt::format("{:.17g}", *o.t_sync) : std::string("nan"),
                          o.final_state.j, o.rounds);
  });

  std::ofstream file;
  std::ostream* sink = &out;
  if (!f.out.empty()) {
    file.open(f.out, std::ios::binary);
    if (!file) throw UsageError("cannot write " + f.out);
    sink = &file;
  }
  *sink << "l,verdict,t_sync,jumps,rounds\n";
  for (const auto& row : rows) *sink << row;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Event-driven simulator and analysis toolkit for pulse-coupled oscillators on rings", "pco"};
  app.require_subcommand(1);
  int code = kExitOk;

  SimFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Run one or more simulations");
  simulate->add_option("specs", sim.spec_files, "Experiment spec files");
  simulate->add_option("--name", sim.name, "Output file stem");
  simulate->add_option("--n", sim.n, "Number of oscillators");
  simulate->add_option("--direction", sim.direction, "uni or bi");
  simulate->add_option("--l", sim.l, "Coupling strength in (0, 1]");
  simulate->add_option("--w", sim.w, "Natural frequency");
  simulate->add_option("--refractory", sim.refractory, "node:length (one-based node), repeatable")
      ->allow_extra_args(false);
  simulate->add_option("--tie", sim.tie, "PRC value at pi: advance or delay");
  simulate->add_option("--eps", sim.eps, "Synchronization tolerance");
  simulate->add_option("--horizon-rounds", sim.horizon_rounds, "Maximum firing rounds");
  simulate->add_option("--init", sim.init, "Initial condition");
  simulate->add_option("--init-l", sim.init_l, "Coupling used to build worst-case initial states");
  simulate->add_option("--seed", sim.seed, "Seed for random initial conditions");
  simulate->add_option("--order", sim.order, "Cascade order: ascending or descending");
  simulate->add_option("--record-every", sim.record_every, "Flow sample stride in time units");
  simulate->add_option("--out", sim.out, "Output directory");
  simulate->add_option("--jobs", sim.jobs, "Concurrent runs");
  simulate->callback([&] { code = cmd_simulate(sim, out); });

  CriticalFlags crit;
  auto* critical = app.add_subcommand("critical", "Critical coupling strength");
  critical->add_option("n", crit.n, "Number of oscillators");
  critical->add_option("direction", crit.direction, "uni or bi");
  critical->add_option("--sweep", crit.sweep, "from:to range of N");
  critical->add_option("--spec", crit.spec_file, "critical-sweep spec file");
  critical->add_option("--out", crit.out, "CSV output file");
  critical->callback([&] { code = cmd_critical(crit, out); });

  std::string suite;
  VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify", "Run a randomized property suite");
  verify->add_option("suite", suite, "proposition1, lemma1, lemma2, matrices or thresholds")
      ->required();
  verify->add_option("--seed", vopt.seed, "Master seed");
  verify->add_option("--trials", vopt.trials, "Number of randomized trials");
  verify->add_option("--n", vopt.n, "Ring size for the thresholds suite");
  verify->add_option("--jobs", vopt.jobs, "Worker threads");
  verify->callback([&] { code = cmd_verify(suite, vopt, out); });

  std::size_t wc_n = 8;
  double wc_l = 0.8377;
  std::string wc_which = "bi-ubar";
  auto* worst = app.add_subcommand("worst-case", "Dump a worst-case initial state");
  worst->add_option("--n", wc_n, "Number of oscillators");
  worst->add_option("--l", wc_l, "Coupling strength");
  worst->add_option("--which", wc_which, "bi-ubar, bi-ubar-u2, uni-u1star or uni-u2-uniform");
  worst->callback([&] { code = cmd_worst_case(wc_n, wc_l, wc_which, out); });

  SweepFlags sw;
  auto* sweep = app.add_subcommand("sweep", "Simulate over a grid of coupling strengths");
  sweep->add_option("--n", sw.n, "Number of oscillators");
  sweep->add_option("--direction", sw.direction, "uni or bi");
  sweep->add_option("--l-range", sw.l_range, "from:to:count");
  sweep->add_option("--init", sw.init, "Initial condition (default: worst case for the direction)");
  sweep->add_option("--init-l", sw.init_l, "Fixed coupling for building worst-case states");
  sweep->add_option("--refractory", sw.refractory, "node:length (one-based node), repeatable")
      ->allow_extra_args(false);
  sweep->add_option("--horizon-rounds", sw.horizon_rounds, "Maximum firing rounds");
  sweep->add_option("--eps", sw.eps, "Synchronization tolerance");
  sweep->add_option("--seed", sw.seed, "Seed for random initial conditions");
  sweep->add_option("--out", sw.out, "CSV output file");
  sweep->add_option("--jobs", sw.jobs, "Concurrent runs");
  sweep->callback([&] { code = cmd_sweep(sw, out); });

  std::size_t g_n = 8;
  double g_l = 0.8377;
  std::string g_dir = "bi";
  std::string g_order = "ascending";
  auto* gamma = app.add_subcommand("gamma", "Equilibrium of the round map with its clustering pattern");
  gamma->add_option("--n", g_n, "Number of oscillators");
  gamma->add_option("--l", g_l, "Coupling strength in (0, 1)");
  gamma->add_option("--direction", g_dir, "uni or bi");
  gamma->add_option("--order", g_order, "Firing order: ascending or descending");
  gamma->callback([&] {
    out << format_gamma_report(
        gamma_report(g_n, g_l, parse_direction(g_dir), parse_order(g_order) == CascadeOrder::Ascending));
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: bad number: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const PreconditionError& e) {
    err << "internal precondition failure: " << e.what() << "\n";
    return kExitInvariant;
  }
  return code;
}

}  // namespace pco
