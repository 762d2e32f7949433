#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcorr/channel.hpp"

namespace qcorr {

struct RecoveryReport {
  QuantumChannel channel;   // B -> BC, marginal-exact when fixup applied
  double fidelity = 0.0;    // best achieved F(omega_ABC, id_A (x) Phi(omega_AB))
  double cmi = 0.0;         // I(A:C|B) in nats
  double fr_lhs = 0.0;      // exp(-cmi/2)
  double marginal_residual_b = 0.0;  // trace-norm residuals of the reported
  double marginal_residual_c = 0.0;  // channel's marginals on omega_B
  bool pass = false;        // fr_lhs <= fidelity + tols().fr
  int ascent_restarts_used = 0;
};

/// Petz transpose map for (omega_BC, omega_B) as a B -> BC channel; the
/// support complement of omega_B is dumped to omega_BC so the map stays
/// trace preserving. Phi(omega_B) = omega_BC exactly.
QuantumChannel petz_map(const MultipartiteState& omega_bc,
                        const MultipartiteState& omega_b);

struct RecoveryOpts {
  int restarts = 4;
  int max_iters = 120;
  std::uint64_t seed = 1;
  int threads = 0;
  /// Skip the ascent when the Petz warm start already satisfies the
  /// Fawzi-Renner inequality.
  bool ascent_only_if_needed = true;
};

/// Searches for a recovery channel Phi: B -> BC with
/// exp(-I(A:C|B)/2) <= F(omega_ABC, id_A (x) Phi(omega_AB)). Petz warm
/// start, then multi-start ascent over Stinespring-parametrized channels.
RecoveryReport recovery_search(const MultipartiteState& s, const LabelSet& a,
                               const LabelSet& b, const LabelSet& c,
                               const RecoveryOpts& opts = {});

/// Completes an operation to a channel that reproduces both marginals:
/// Phi(rho) = Phi'(rho) + [Tr rho - Tr Phi'(rho)] sigma with sigma built
/// from the marginal deficits. Requires [Phi'(omega_B)]_X <= omega_X.
/// When both deficits vanish the completion uses omega_B (x) omega_C and
/// `flagged` is set on the result.
struct FixupResult {
  QuantumChannel channel;
  bool flagged = false;
};
FixupResult marginal_fixup(const QuantumChannel& op,
                           const MultipartiteState& omega_b,
                           const MultipartiteState& omega_c);

enum class MarkovVerdict { markov, not_markov };

struct MarkovReport {
  double cmi = 0.0;
  double best_fidelity = 0.0;
  MarkovVerdict verdict = MarkovVerdict::not_markov;
};

/// MARKOV iff I(A:C|B) <= tols().markov; Markov verdicts must recover via
/// the Petz map with infidelity <= 1e-6.
MarkovReport markov_check(const MultipartiteState& s, const LabelSet& a,
                          const LabelSet& b, const LabelSet& c);

struct WildeReport {
  double delta_i_nats = 0.0;
  double delta_i_bits = 0.0;  // secondary column, base-2 reading
  double recon_trace_norm = 0.0;
  double rhs = 0.0;  // (1/4n^2) ||omega - recon||_1^2, nats form
  bool pass = false;
};

/// Checks Delta I >= (1/4n^2) || omega - (x)_i Phi_i(omega_{A'}) ||_1^2 with
/// the given per-pair recovery channels Phi_i : A'_i -> A'_i A_i.
WildeReport wilde_check(const MultipartiteState& s, const Partition& unprimed,
                        const Partition& primed,
                        const std::vector<QuantumChannel>& recoveries);

/// Per-pair recovery channels for wilde_check, from recovery_search with
/// B = A'_i, C = A_i and A = the rest.
std::vector<QuantumChannel> pairwise_recoveries(const MultipartiteState& s,
                                                const Partition& unprimed,
                                                const Partition& primed,
                                                const RecoveryOpts& opts = {});

}  // namespace qcorr
