#pragma once

#include <cstdint>

#include "qcorr/state.hpp"

namespace qcorr {

/// Small counter-style generator (splitmix64 core) with explicit task
/// splitting. Normal deviates are produced by Box-Muller from the raw bit
/// stream, so identical seeds give identical values on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static Rng for_task(std::uint64_t seed, std::uint64_t task) {
    return Rng(mix(seed ^ mix(task + 0x9E3779B97F4A7C15ull)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  /// Uniform in [0, 1).
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n) {  // [0, n)
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  double normal();

  cxd cnormal() { return {normal(), normal()}; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Ginibre matrix: i.i.d. standard complex Gaussian entries.
Mat ginibre(Rng& rng, long rows, long cols);

/// Ginibre-induced random state of the given rank: partial trace of a
/// Haar-uniform pure state on dim x rank.
MultipartiteState random_state(const SubsystemLayout& layout, int rank,
                               Rng& rng);
MultipartiteState random_state(const SubsystemLayout& layout, int rank,
                               std::uint64_t seed);

MultipartiteState random_pure_state(const SubsystemLayout& layout, Rng& rng);

/// Haar-random isometry of shape (rows x cols), rows >= cols.
Mat haar_isometry(Rng& rng, long rows, long cols);

/// Shorthand for n qubits labeled with consecutive strings.
SubsystemLayout qubits(const std::vector<std::string>& labels);

}  // namespace qcorr
