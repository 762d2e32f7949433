#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qcorr/bounds.hpp"
#include "qcorr/entropy.hpp"

namespace qcorr {

enum class SchemeKind { spectral, basis, random_subspace };

struct LabelScheme {
  SchemeKind kind = SchemeKind::spectral;
  std::vector<int> ranks;  // strictly increasing, ending at the label dim
  std::uint64_t seed = 0;  // random_subspace only
};

/// Per-label projector sequences Q_k = P^k_{A1} (x) ... (x) P^k_{An}.
/// Labels absent from the map stay untruncated. All rank lists share one
/// grid length.
struct TruncationScheme {
  std::map<std::string, LabelScheme> per_label;
  int grid_size() const;
  void validate(const SubsystemLayout& layout) const;
};

/// Projector family at grid index k. Spectral ranks cut the top of each
/// label's marginal spectrum of s; basis ranks take leading computational
/// basis vectors; random_subspace takes nested Haar subspaces.
ProjectorFamily projectors_at(const TruncationScheme& scheme,
                              const MultipartiteState& s, int k);

struct SweepPoint {
  std::map<std::string, int> ranks;
  double lambda;
  double value;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double reference = 0.0;  // measure on the untruncated state
  double final_gap = 0.0;
  bool converged = false;
};

/// Evaluates `measure` along the truncation trajectory; converged when the
/// final point is within tols().conv of the untruncated value.
SweepResult faithfulness_sweep(const MultipartiteState& s,
                               const MeasureFn& measure,
                               const TruncationScheme& scheme,
                               int threads = 0);

SweepResult marginal_entropy_convergence(const MultipartiteState& s,
                                         const TruncationScheme& scheme,
                                         const LabelSet& subset,
                                         int threads = 0);

struct DoubleLimitResult {
  std::vector<std::vector<double>> table;  // [ac rank index][b rank index]
  std::vector<double> inner_limits;        // per ac index, at full B rank
  double estimate = 0.0;
  double direct = 0.0;
};

/// Iterated-limit CMI estimate: inner limit over B ranks first, then over
/// the shared A/C rank grid. Grids must end at full rank.
DoubleLimitResult cmi_double_limit(const MultipartiteState& s,
                                   const LabelSet& a, const LabelSet& c,
                                   const LabelSet& b,
                                   const std::vector<int>& ranks_ac,
                                   const std::vector<int>& ranks_b);

enum class SupremumSide { over_a, over_c };

struct SupremumResult {
  std::vector<double> values;  // per rank
  double supremum = 0.0;
  double direct = 0.0;
};

/// Running maximum over spectral truncations of the bracketed MI difference
/// (projector on A for over_a, on C for over_c), with the cone convention
/// for the mutual information of Q omega Q.
SupremumResult ie_projector_supremum(const MultipartiteState& s,
                                     const LabelSet& a, const LabelSet& c,
                                     const LabelSet& b, SupremumSide side,
                                     const std::vector<int>& ranks);

/// Truncated two-mode squeezed vacuum, pure on labels A, B; the Schmidt
/// weights tanh^{2n}(r)(1 - tanh^2 r) are renormalized after the cutoff.
MultipartiteState model_tmsv(double squeeze_r, int cutoff);

/// Truncated Gibbs-weighted thermal state of mean number nbar, label A.
MultipartiteState model_thermal(double nbar, int cutoff);

MultipartiteState model_random_induced(const SubsystemLayout& layout,
                                       int ancilla_rank, std::uint64_t seed);

/// Entropy of the exact (untruncated) thermal state of mean number nbar.
double thermal_entropy(double nbar);

}  // namespace qcorr
