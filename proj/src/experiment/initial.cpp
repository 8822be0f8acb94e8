#include <charconv>
#include <string>

#include "pco/analysis.hpp"
#include "pco/experiment.hpp"

namespace pco {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_number(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw UsageError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

double parse_angle(std::string_view text) {
  const std::string_view s = trim(text);
  const auto at = s.find("pi");
  if (at == std::string_view::npos) return parse_number(s);

  std::string_view factor = trim(s.substr(0, at));
  if (!factor.empty() && factor.back() == '*') factor = trim(factor.substr(0, factor.size() - 1));
  double scale = 1.0;
  if (factor == "-") {
    scale = -1.0;
  } else if (!factor.empty()) {
    scale = parse_number(factor);
  }

  std::string_view rest = trim(s.substr(at + 2));
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw UsageError("bad angle expression: '" + std::string(s) + "'");
    divisor = parse_number(rest.substr(1));
    if (divisor == 0.0) throw UsageError("division by zero in angle: '" + std::string(s) + "'");
  }
  return scale * kPi / divisor;
}

PhaseState make_initial(std::string_view init, std::size_t n, double construction_l,
                        std::uint64_t seed) {
  if (init == "worst-bi") return worst_case_state(n, construction_l, WorstCase::BiUbar);
  if (init == "worst-bi-u2") {
    return worst_case_state(n, construction_l, WorstCase::BiUbar, GapOrdering::Ascending);
  }
  if (init == "worst-uni-u1") return worst_case_state(n, construction_l, WorstCase::UniU1star);
  if (init == "uniform-u2") return worst_case_state(n, construction_l, WorstCase::UniU2uniform);
  if (init == "random") {
    SplitMix64 rng(seed);
    return random_state(n, rng);
  }
  if (init == "semicircle") {
    SplitMix64 rng(seed);
    return semicircle_state(n, rng);
  }
  if (init.starts_with("phases:")) {
    std::vector<double> phases;
    std::string_view rest = init.substr(7);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      phases.push_back(parse_angle(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (phases.size() != n) {
      throw UsageError("explicit phases list has " + std::to_string(phases.size()) +
                       " entries, ring has " + std::to_string(n));
    }
    return make_state(std::move(phases));
  }
  throw UsageError("unknown initial condition '" + std::string(init) + "'");
}

}  // namespace pco
