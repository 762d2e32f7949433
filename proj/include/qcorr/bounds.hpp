#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcorr/entropy.hpp"
#include "qcorr/random.hpp"

namespace qcorr {

enum class Curvature { concave, convex, neither };

/// Data backing the generic uniform-continuity bound: the coefficient list,
/// the range sup |F - F'| over finite-rank states, and the curvature of F.
struct BoundSpec {
  EntropicCombo combo;
  double sup_range = 0.0;
  Curvature curvature = Curvature::neither;
};

/// eps * sup|F-F'| + (1+eps) h2(eps/(1+eps)) * S, where S is sum |alpha_k|
/// or, for concave (convex) F, the positive (negative) coefficient mass.
double generic_bound(const BoundSpec& spec, double eps);

enum class BoundKind {
  entropy,
  conditional_entropy,
  mi,
  mi_multipartite,
  cmi,
  cmi_multipartite,
  secrecy,
  info_gap,
  interaction,
  entropy_gain,
};

/// Closed-form specialized bound in nats. `dims` carries the relevant
/// system dimensions per kind: the single finite system for entropy /
/// conditional_entropy / entropy_gain (Choi rank), the candidate finite
/// systems for mi / cmi / interaction (the minimum log-dim is used), all n
/// parts for the multipartite kinds, the n unprimed parts for info_gap.
double specialized_bound(BoundKind kind, const std::vector<int>& dims,
                         double eps);

std::string bound_kind_name(BoundKind kind);

struct WinterInterpolation {
  MultipartiteState omega_star;
  MultipartiteState w1_tilde;
  MultipartiteState w2_tilde;
  double epsilon;
};

/// omega* = (1+eps)^{-1}(w1 + [w2 - w1]_+) with both convex decompositions;
/// rejects identical pairs (eps = 0) and the eps = 1 boundary.
WinterInterpolation winter_interpolation(const MultipartiteState& w1,
                                         const MultipartiteState& w2);

using StatePairSampler =
    std::function<std::pair<MultipartiteState, MultipartiteState>(Rng&)>;
using MeasureFn = std::function<double(const MultipartiteState&)>;

struct BoundSample {
  std::uint64_t seed;
  double epsilon;
  double delta_f;
  double bound;
  double ratio;
};

struct BoundReport {
  BoundKind kind;
  std::vector<BoundSample> rows;
  double max_ratio = 0.0;
  bool pass = true;
};

/// Samples n_pairs state pairs, evaluates |F(w1) - F(w2)| against
/// bound(eps); PASS iff every pair satisfies delta_F <= bound + tols().bound.
BoundReport verify_bound(BoundKind kind, const StatePairSampler& sampler,
                         const MeasureFn& measure,
                         const std::vector<int>& bound_dims, int n_pairs,
                         std::uint64_t seed, int threads = 0);

/// verify_bound wired with the default Ginibre pair sampler and the library
/// measure matching `kind`, at local dimension d per subsystem.
BoundReport verify_bound_default(BoundKind kind, int d, int n_pairs,
                                 std::uint64_t seed, int threads = 0);

}  // namespace qcorr
