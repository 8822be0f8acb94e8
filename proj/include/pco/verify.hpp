#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pco {

struct PropertyResult {
  std::string suite;
  std::string property;
  bool passed = true;
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::int64_t trials = 200;
  std::size_t n = 8;
  unsigned jobs = 1;
};

/// proposition1, lemma1, lemma2, matrices, thresholds.
const std::vector<std::string>& verify_suite_names();

/// Runs a randomized property suite. Trial k draws from its own generator
/// seeded with the k-th output of SplitMix64(seed), so results do not depend
/// on the number of jobs. Throws UsageError for an unknown suite.
std::vector<PropertyResult> run_verify_suite(std::string_view suite, const VerifyOptions& options);

/// `suite,property,status,trials,failures,detail` lines.
std::string format_results(const std::vector<PropertyResult>& results);

/// Runs fn(0..count-1) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn);

}  // namespace pco

#include "pco/detail/parallel.hpp"
