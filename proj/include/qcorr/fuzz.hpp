#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcorr/random.hpp"

namespace qcorr {

struct PropSample {
  bool ok = true;
  /// Slack remaining before violation (bound - value); negative on failure.
  double margin = 0.0;
};

using PropertyFn = std::function<PropSample(Rng&)>;

struct PropertyDef {
  std::string name;
  PropertyFn fn;
};

/// Registered property suite covering the library invariants.
const std::vector<PropertyDef>& property_registry();

struct PropertyResult {
  std::string name;
  int samples = 0;
  int failures = 0;
  double worst_margin = 0.0;
  std::uint64_t worst_seed = 0;   // task seed reproducing the worst sample
  int worst_index = -1;
};

struct FuzzReport {
  std::vector<PropertyResult> results;
  bool all_pass = true;
};

/// Runs `budget` samples of each named property (all registered when
/// `names` is empty). Sample i of a property uses the task-split seed
/// derived from (seed, property, i), so failures replay exactly.
FuzzReport run_fuzz(const std::vector<std::string>& names, int budget,
                    std::uint64_t seed, int threads = 0);

std::string fuzz_report_csv(const FuzzReport& report);

}  // namespace qcorr
