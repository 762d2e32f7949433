#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcorr/entropy.hpp"
#include "qcorr/random.hpp"

namespace qcorr {

enum class ChannelKind { channel, operation };

/// Completely positive map in Kraus form. Channels are trace preserving,
/// operations trace non-increasing. On construction the Kraus list is
/// canonicalized to the Choi rank (threshold 1e-10), so kraus().size() is
/// the Choi rank and Stinespring dilations use the minimal environment.
class QuantumChannel {
 public:
  static QuantumChannel channel(std::vector<Mat> kraus, SubsystemLayout in,
                                SubsystemLayout out);
  static QuantumChannel operation(std::vector<Mat> kraus, SubsystemLayout in,
                                  SubsystemLayout out);

  const std::vector<Mat>& kraus() const { return kraus_; }
  const SubsystemLayout& in_layout() const { return in_; }
  const SubsystemLayout& out_layout() const { return out_; }
  ChannelKind kind() const { return kind_; }
  long in_dim() const { return in_.total_dim(); }
  long out_dim() const { return out_.total_dim(); }
  int choi_rank() const { return static_cast<int>(kraus_.size()); }

  /// sum_k K^dag K (identity for channels, <= identity for operations).
  Mat completeness() const;

  /// Choi matrix sum_{ij} |i><j| (x) Phi(|i><j|), trace = in_dim for
  /// channels.
  Mat choi() const;

  Mat apply_matrix(const Mat& rho) const;

 private:
  QuantumChannel(std::vector<Mat> kraus, SubsystemLayout in,
                 SubsystemLayout out, ChannelKind kind);

  std::vector<Mat> kraus_;
  SubsystemLayout in_, out_;
  ChannelKind kind_;
};

/// Kraus action on a whole state; layout must match the input layout.
MultipartiteState apply(const QuantumChannel& ch, const MultipartiteState& s);

/// Applies the channel to the `targets` factors of s (in that order), the
/// identity elsewhere. The output layout is [untouched factors..., channel
/// output labels...]; out_labels overrides the output labels when given.
MultipartiteState apply_to(const QuantumChannel& ch, const MultipartiteState& s,
                           const LabelSet& targets,
                           const LabelSet& out_labels = {});

/// Stinespring isometry V with Phi(rho) = Tr_E V rho V^dag; the environment
/// is the trailing factor and dim E = number of Kraus operators.
Mat stinespring(const QuantumChannel& ch);

/// Complementary channel rho -> Tr_B V rho V^dag for the V above.
QuantumChannel complementary(const QuantumChannel& ch);

/// I(Phi, rho) = H(Phi (x) Id_R (purification) || Phi(rho) (x) R-marginal).
double channel_mutual_information(const QuantumChannel& ch,
                                  const MultipartiteState& rho);

/// H(rho) + H(Phi(rho)) - H(complement(rho)); finite-dimensional
/// cross-check form.
double channel_mutual_information_entropic(const QuantumChannel& ch,
                                           const MultipartiteState& rho);

/// Coherent information I_c = I(Phi, rho) - H(rho).
double coherent_information(const QuantumChannel& ch,
                            const MultipartiteState& rho);

enum class GainKind { of_channel, of_complement };

/// Entropy gain via the joint-state relative-entropy extension:
/// of_channel    = H(V rho V* || Phi(rho) (x) hatPhi(rho)) - H_hatPhi(rho)
/// of_complement = same with H_Phi(rho) subtracted.
double entropy_gain(const QuantumChannel& ch, const MultipartiteState& rho,
                    GainKind which);

/// Psi = Phi (+) Delta on the direct-sum output, Delta(rho) =
/// [Tr rho - Tr Phi(rho)] sigma. Completes an operation to a channel.
QuantumChannel completed_channel(const QuantumChannel& op,
                                 const MultipartiteState& sigma);

struct ConstraintSpec {
  Mat F;      // Hermitian PSD on the input space
  double E;   // Tr F rho <= E
};

struct CapacityResult {
  double value = 0.0;
  Mat argmax;                          // optimal input state
  double constraint_value = 0.0;       // Tr F argmax
  std::vector<double> best_per_restart;
  long iterations = 0;
};

struct CapacityOpts {
  int restarts = 16;
  int max_iters = 240;
  std::uint64_t seed = 1;
  int threads = 0;
};

/// Constrained entanglement-assisted capacity sup_{Tr F rho <= E} I(Phi, rho)
/// by multi-start penalized gradient ascent over square-root-parametrized
/// states. The returned value is the best certified lower bound found.
CapacityResult constrained_capacity(const QuantumChannel& ch,
                                    const ConstraintSpec& constraint,
                                    const CapacityOpts& opts = {});

/// CPTP map with the given Choi rank from a Haar isometry.
QuantumChannel random_channel(const SubsystemLayout& in,
                              const SubsystemLayout& out, int choi_rank,
                              Rng& rng);
QuantumChannel random_channel(const SubsystemLayout& in,
                              const SubsystemLayout& out, int choi_rank,
                              std::uint64_t seed);

/// Trace non-increasing map: random channel scaled by t in (0,1].
QuantumChannel random_operation(const SubsystemLayout& in,
                                const SubsystemLayout& out, int choi_rank,
                                double t, Rng& rng);

QuantumChannel identity_channel(const SubsystemLayout& layout);

}  // namespace qcorr
