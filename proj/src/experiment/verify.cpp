#include "pco/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <fmt/format.h>

#include "pco/analysis.hpp"
#include "pco/coupling.hpp"
#include "pco/errors.hpp"
#include "pco/experiment.hpp"
#include "pco/prc.hpp"

namespace pco {
namespace {

std::vector<std::uint64_t> trial_seeds(std::uint64_t seed, std::int64_t trials) {
  SplitMix64 master(seed);
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(std::max<std::int64_t>(trials, 0)));
  for (auto& s : seeds) s = master();
  return seeds;
}

/// Tallies per-property failures from many trials.
class Tally {
 public:
  Tally(std::string suite, std::vector<std::string> properties) : suite_(std::move(suite)) {
    for (auto& p : properties) {
      order_.push_back(p);
      results_[p] = PropertyResult{suite_, p, true, 0, 0, ""};
    }
  }

  void add(const std::string& property, bool ok, const std::string& detail = {}) {
    auto& r = results_.at(property);
    r.trials += 1;
    if (!ok) {
      r.failures += 1;
      r.passed = false;
      if (r.detail.empty()) r.detail = detail;
    }
  }

  void note(const std::string& property, std::string detail) {
    auto& r = results_.at(property);
    if (r.detail.empty()) r.detail = std::move(detail);
  }

  std::vector<PropertyResult> finish() const {
    std::vector<PropertyResult> out;
    for (const auto& p : order_) out.push_back(results_.at(p));
    return out;
  }

 private:
  std::string suite_;
  std::vector<std::string> order_;
  std::map<std::string, PropertyResult> results_;
};

struct TrialRecord {
  std::vector<std::pair<std::string, bool>> checks;
  std::string detail;
};

std::vector<PropertyResult> run_trials(
    const std::string& suite, const std::vector<std::string>& properties,
    const VerifyOptions& options, const std::function<TrialRecord(SplitMix64&)>& trial) {
  const auto seeds = trial_seeds(options.seed, options.trials);
  std::vector<TrialRecord> records(seeds.size());
  parallel_for(seeds.size(), options.jobs, [&](std::size_t k) {
    SplitMix64 rng(seeds[k]);
    records[k] = trial(rng);
  });
  Tally tally(suite, properties);
  for (std::size_t k = 0; k < records.size(); ++k) {
    for (const auto& [property, ok] : records[k].checks) {
      tally.add(property, ok, fmt::format("trial {}: {}", k, records[k].detail));
    }
  }
  return tally.finish();
}

Direction random_direction(SplitMix64& rng) {
  return rng.below(2) == 0 ? Direction::Unidirectional : Direction::Bidirectional;
}

// l in (0, 1].
double random_coupling(SplitMix64& rng) { return 1.0 - rng.uniform(); }

std::string describe(std::size_t n, Direction d, double l) {
  return fmt::format("n={} {} l={:.17g}", n, to_string(d), l);
}

// ---------------------------------------------------------------------------

std::vector<PropertyResult> proposition1(const VerifyOptions& options) {
  const std::vector<std::string> props = {"complete_to_horizon", "jumps_per_instant_le_n",
                                          "interfiring_time_le_period", "phases_in_range",
                                          "hybrid_time_domain"};
  return run_trials("proposition1", props, options, [](SplitMix64& rng) {
    const std::size_t n = 4 + rng.below(13);
    const Direction dir = random_direction(rng);
    const double l = random_coupling(rng);
    const double w = kTwoPi;
    PrcSpec prc(rng.below(2) == 0 ? TiePolicy::Advance : TiePolicy::Delay);
    if (rng.below(2) == 0) prc = prc.with_refractory(n, rng.below(n), kTwoPi * rng.uniform());
    const SimulationConfig config{
        .topology = CycleTopology(n, dir, l),
        .prc = prc,
        .w = NaturalFrequency(w),
        .initial = random_state(n, rng),
        .horizon = Horizon{.rounds = 40},
        .order = rng.below(2) == 0 ? CascadeOrder::Ascending : CascadeOrder::Descending,
    };
    TrialRecord rec;
    rec.detail = describe(n, dir, l);
    RunOutcome outcome;
    try {
      outcome = run(config);
    } catch (const std::exception& e) {
      rec.detail += std::string(" threw: ") + e.what();
      for (const auto& p : {"complete_to_horizon", "jumps_per_instant_le_n",
                            "interfiring_time_le_period", "phases_in_range",
                            "hybrid_time_domain"}) {
        rec.checks.emplace_back(p, false);
      }
      return rec;
    }
    const auto& samples = outcome.trajectory.samples;
    const bool complete =
        outcome.verdict != Verdict::HorizonExhausted ||
        outcome.final_state.j >= config.horizon.rounds * static_cast<std::int64_t>(n);
    rec.checks.emplace_back("complete_to_horizon", complete && !samples.empty());

    bool in_range = true;
    bool domain_ok = true;
    bool per_instant_ok = true;
    bool interfiring_ok = true;
    std::size_t run_length = 0;
    double last_jump_t = 0.0;
    double batch_t = -1.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const auto& s = samples[k];
      for (double x : s.phases) in_range = in_range && x >= 0.0 && x <= kTwoPi;
      if (k > 0) {
        const auto& p = samples[k - 1];
        if (s.j != p.j && s.t != p.t) domain_ok = false;
        if (s.j < p.j || s.t < p.t) domain_ok = false;
      }
      if (s.fired.empty()) continue;
      if (s.t == batch_t) {
        ++run_length;
      } else {
        if (s.t - last_jump_t > (kTwoPi / w) * (1.0 + 1e-12)) interfiring_ok = false;
        last_jump_t = s.t;
        batch_t = s.t;
        run_length = 1;
      }
      if (run_length > n) per_instant_ok = false;
    }
    rec.checks.emplace_back("jumps_per_instant_le_n", per_instant_ok);
    rec.checks.emplace_back("interfiring_time_le_period", interfiring_ok);
    rec.checks.emplace_back("phases_in_range", in_range);
    rec.checks.emplace_back("hybrid_time_domain", domain_ok);
    return rec;
  });
}

std::vector<PropertyResult> lemma1(const VerifyOptions& options) {
  return run_trials("lemma1", {"semicircle_synchronizes"}, options, [](SplitMix64& rng) {
    const std::size_t n = 4 + rng.below(13);
    const Direction dir = random_direction(rng);
    const double l = random_coupling(rng);
    PrcSpec prc;
    std::string refractory = "none";
    if (rng.below(4) != 0) {
      const NodeIndex node = rng.below(n);
      const double r = kPi * (1.0 - rng.uniform());
      prc = prc.with_refractory(n, node, r);
      refractory = fmt::format("{}:{:.17g}", node + 1, r);
    }
    const SimulationConfig config{
        .topology = CycleTopology(n, dir, l),
        .prc = prc,
        .w = NaturalFrequency(kTwoPi),
        .initial = semicircle_state(n, rng),
        .horizon = Horizon{.rounds = 2'000'000},
        .record = false,
    };
    const RunOutcome outcome = run(config);
    TrialRecord rec;
    rec.detail = describe(n, dir, l) + " refractory=" + refractory + " verdict=" +
                 std::string(to_string(outcome.verdict));
    rec.checks.emplace_back("semicircle_synchronizes", outcome.verdict == Verdict::Synchronized);
    return rec;
  });
}

// Random U member: gaps in firing order, each at most half a cycle, laid out
// with node 1 at 2pi, then cyclically relabelled and shifted down rigidly
// without wrapping.
PhaseState random_u_member(SplitMix64& rng, std::size_t n, GapOrdering ordering) {
  std::vector<double> gaps(n);
  for (;;) {
    double total = 0.0;
    for (double& g : gaps) {
      g = -std::log(1.0 - rng.uniform());
      total += g;
    }
    for (double& g : gaps) g /= total;
    if (*std::max_element(gaps.begin(), gaps.end()) <= 0.5) break;
  }
  const PhaseState base = state_from_gaps(gaps, ordering);
  const std::size_t shift = rng.below(n);
  const double lowest = *std::min_element(base.phases.begin(), base.phases.end());
  const double down = lowest * rng.uniform();
  std::vector<double> phases(n);
  for (std::size_t k = 0; k < n; ++k) phases[(k + shift) % n] = base.phases[k] - down;
  return make_state(std::move(phases));
}

std::vector<PropertyResult> lemma2(const VerifyOptions& options) {
  const std::vector<std::string> props = {"classify_exhaustive", "semicircle_or_wide_gap",
                                          "u_members_wide_extremes", "decrease_condition_shortens"};
  return run_trials("lemma2", props, options, [](SplitMix64& rng) {
    const std::size_t n = 4 + rng.below(13);
    TrialRecord rec;
    rec.detail = fmt::format("n={}", n);

    // Exactly one class predicate holds, and the tag names it.
    const PhaseState x = rng.below(2) == 0 ? random_state(n, rng) : semicircle_state(n, rng);
    {
      const StateClass c = classify(x);
      const double len = distance_vector(x).length();
      const bool below = len < kTwoPi - kLengthTolerance;
      const bool above = len > kTwoPi + kLengthTolerance;
      const bool at = !below && !above;
      const bool u1 = at && monotone_descending(x);
      const bool u2 = at && !u1 && monotone_ascending(x);
      const bool outside = at && !u1 && !u2;
      const int holding = below + above + u1 + u2 + outside;
      const StateTag expected = below   ? StateTag::LengthBelow2Pi
                                : above ? StateTag::LengthAbove2Pi
                                : u1    ? StateTag::InU1
                                : u2    ? StateTag::InU2
                                        : StateTag::At2PiOutsideU;
      rec.checks.emplace_back("classify_exhaustive", holding == 1 && c.tag == expected);

      if (below) {
        const auto& p = x.phases;
        bool wide_gap = false;
        // The wide pair may touch an extreme, but must not be the extreme pair itself.
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t k = (i + 1) % n;
          const bool extreme_pair = (i == c.max_node && k == c.min_node) ||
                                    (i == c.min_node && k == c.max_node);
          if (extreme_pair) continue;
          wide_gap = wide_gap || std::abs(p[i] - p[k]) > kPi;
        }
        rec.checks.emplace_back("semicircle_or_wide_gap", wide_gap || c.spread < kPi);
      }
    }

    // Monotone states on a 2pi cycle have their extremes at least pi apart
    // and every other neighbour gap within pi.
    {
      const GapOrdering ordering = rng.below(2) == 0 ? GapOrdering::Descending : GapOrdering::Ascending;
      const PhaseState u = random_u_member(rng, n, ordering);
      const StateClass c = classify(u);
      bool ok = c.tag == StateTag::InU1 || c.tag == StateTag::InU2;
      ok = ok && c.spread >= kPi - 1e-9;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == c.max_node || i == c.min_node) continue;
        ok = ok && std::abs(u.phases[i] - u.phases[(i + 1) % n]) <= kPi + 1e-9;
      }
      rec.checks.emplace_back("u_members_wide_extremes", ok);
    }

    // Whenever the decrease condition holds for node i, firing i shortens the cycle.
    {
      const PhaseState y0 = random_state(n, rng);
      const NodeIndex i = rng.below(n);
      if (length_decrease_condition(y0, i)) {
        const Direction dir = random_direction(rng);
        const double l = random_coupling(rng);
        const PhaseState y = rotate_to_fire(y0, i);
        const PhaseState z = apply_jump(y, i, CycleTopology(n, dir, l), PrcSpec());
        const double before = distance_vector(y).length();
        const double after = distance_vector(z).length();
        rec.checks.emplace_back("decrease_condition_shortens", after < before);
      }
    }
    return rec;
  });
}

std::vector<PropertyResult> matrices(const VerifyOptions& options) {
  const std::vector<std::string> props = {"column_stochastic", "length_preserving",
                                          "oracle_equivalence"};
  return run_trials("matrices", props, options, [](SplitMix64& rng) {
    const std::size_t n = 4 + rng.below(13);
    const Direction dir = random_direction(rng);
    const double l = random_coupling(rng);
    TrialRecord rec;
    rec.detail = describe(n, dir, l);

    const NodeIndex i = rng.below(n);
    const auto c = transition_matrix(i, n, l, dir).entries;
    bool stochastic = (c.array() >= 0.0).all();
    for (Eigen::Index col = 0; col < c.cols(); ++col) {
      stochastic = stochastic && std::abs(c.col(col).sum() - 1.0) <= 1e-14;
    }
    rec.checks.emplace_back("column_stochastic", stochastic);

    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = kPi * rng.uniform();
    rec.checks.emplace_back("length_preserving", std::abs((c * v).sum() - v.sum()) <= 1e-12);

    // State in U with the firing node at 2pi and both shifted gaps staying below pi.
    const GapOrdering ordering =
        rng.below(2) == 0 ? GapOrdering::Descending : GapOrdering::Ascending;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      PhaseState u = random_u_member(rng, n, ordering);
      const NodeIndex fire = classify(u).max_node;
      u = rotate_to_fire(u, fire);
      const auto vd = distance_vector(u).components;
      const auto at = [&](int k) { return vd[(fire + n + static_cast<std::size_t>(k + 2) - 2) % n]; };
      bool gaps_ok = at(1) + l * at(0) < kPi;
      if (dir == Direction::Bidirectional) gaps_ok = gaps_ok && at(-2) + l * at(-1) < kPi;
      if (!gaps_ok || classify(u).tag == StateTag::LengthBelow2Pi) continue;

      const auto after = distance_vector(apply_jump(u, fire, CycleTopology(n, dir, l), PrcSpec()));
      const Eigen::Map<const Eigen::VectorXd> vmap(vd.data(), static_cast<Eigen::Index>(n));
      const Eigen::VectorXd predicted = transition_matrix(fire, n, l, dir).entries * vmap;
      double err = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        err = std::max(err, std::abs(after.components[k] - predicted[static_cast<Eigen::Index>(k)]));
      }
      rec.checks.emplace_back("oracle_equivalence", err <= 1e-12);
      if (err > 1e-12) rec.detail += fmt::format(" oracle error {:.3g}", err);
      break;
    }
    return rec;
  });
}

bool synchronizes_from_worst_case(std::size_t n, Direction dir, double l) {
  PrcSpec prc;
  PhaseState initial;
  if (dir == Direction::Bidirectional) {
    initial = worst_case_state(n, l, WorstCase::BiUbar);
  } else {
    initial = worst_case_state(n, l, WorstCase::UniU1star);
    prc = prc.with_refractory(n, 0, kPi);
  }
  const SimulationConfig config{
      .topology = CycleTopology(n, dir, l),
      .prc = prc,
      .w = NaturalFrequency(kTwoPi),
      .initial = initial,
      .record = false,
  };
  return run(config).verdict == Verdict::Synchronized;
}

std::vector<PropertyResult> thresholds(const VerifyOptions& options) {
  Tally tally("thresholds", {"bi_boundary_brackets_lstar", "uni_boundary_brackets_lstar",
                             "gamma_exceeds_half_iff_above_lstar",
                             "delta_ratio_exceeds_half_iff_above_lstar"});
  const std::size_t n = options.n;
  if (n < kMinNodes) throw UsageError("thresholds suite needs --n >= 4");

  for (Direction dir : {Direction::Bidirectional, Direction::Unidirectional}) {
    const std::string prop = dir == Direction::Bidirectional ? "bi_boundary_brackets_lstar"
                                                             : "uni_boundary_brackets_lstar";
    double lo = 0.05;
    double hi = 0.999;
    const bool ends_ok =
        !synchronizes_from_worst_case(n, dir, lo) && synchronizes_from_worst_case(n, dir, hi);
    while (ends_ok && hi - lo > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      (synchronizes_from_worst_case(n, dir, mid) ? hi : lo) = mid;
    }
    const double lstar = critical_coupling(n, dir);
    const bool ok = ends_ok && lo <= lstar && lstar <= hi;
    tally.note(prop, fmt::format("bracket=[{:.7f},{:.7f}] l*={:.7f}{}", lo, hi, lstar,
                                 ends_ok ? "" : " endpoints do not bracket a boundary"));
    tally.add(prop, ok);
  }

  for (std::size_t m = 4; m <= 20; ++m) {
    for (Direction dir : {Direction::Bidirectional, Direction::Unidirectional}) {
      const double lstar = critical_coupling(m, dir);
      const DeltaCase dc = dir == Direction::Bidirectional ? DeltaCase::BiWorst
                                                           : DeltaCase::UniWorstU1;
      std::vector<double> grid;
      for (int k = 1; k <= 19; ++k) grid.push_back(0.05 * k);
      for (double off : {-1e-3, -1e-4, 1e-4, 1e-3}) {
        if (lstar + off < 1.0) grid.push_back(lstar + off);
      }
      for (double l : grid) {
        const auto gamma = equilibrium_gamma(m, l, dir, ascending_order(m));
        const double ratio = solve_delta(m, l, dc) / (1.0 - l);
        // A grid point landing on l* itself (uni, n = 6) must give exactly one half.
        if (std::abs(l - lstar) < 1e-12) {
          tally.add("gamma_exceeds_half_iff_above_lstar", std::abs(gamma.maxCoeff() - 0.5) < 1e-9,
                    describe(m, dir, l));
          tally.add("delta_ratio_exceeds_half_iff_above_lstar", std::abs(ratio - 0.5) < 1e-12,
                    describe(m, dir, l));
          continue;
        }
        const bool above = l > lstar;
        tally.add("gamma_exceeds_half_iff_above_lstar", (gamma.maxCoeff() > 0.5) == above,
                  describe(m, dir, l));
        tally.add("delta_ratio_exceeds_half_iff_above_lstar", (ratio > 0.5) == above,
                  describe(m, dir, l));
      }
    }
  }
  return tally.finish();
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {"proposition1", "lemma1", "lemma2", "matrices",
                                                 "thresholds"};
  return names;
}

std::vector<PropertyResult> run_verify_suite(std::string_view suite, const VerifyOptions& options) {
  if (suite == "proposition1") return proposition1(options);
  if (suite == "lemma1") return lemma1(options);
  if (suite == "lemma2") return lemma2(options);
  if (suite == "matrices") return matrices(options);
  if (suite == "thresholds") return thresholds(options);
  throw UsageError("unknown verification suite '" + std::string(suite) + "'");
}

std::string format_results(const std::vector<PropertyResult>& results) {
  std::string out = "suite,property,status,trials,failures,detail\n";
  for (const auto& r : results) {
    std::string detail = r.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    out += fmt::format("{},{},{},{},{},{}\n", r.suite, r.property, r.passed ? "PASS" : "FAIL",
                       r.trials, r.failures, detail);
  }
  return out;
}

}  // namespace pco
