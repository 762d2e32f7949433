#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qcorr/tensor.hpp"

namespace qcorr {

using LabelSet = std::vector<std::string>;
using Partition = std::vector<LabelSet>;

/// Measured quantity in nats; +infinity only arises from relative-entropy
/// support violations.
struct MeasureValue {
  double value = 0.0;
  std::string formula_tag;
  bool is_infinite() const { return std::isinf(value); }
  operator double() const { return value; }
};

struct ComboTerm {
  double alpha;
  LabelSet subsystems;
};
using EntropicCombo = std::vector<ComboTerm>;

double combo_sum_abs(const EntropicCombo& c);
double combo_sum_pos(const EntropicCombo& c);
double combo_sum_neg(const EntropicCombo& c);  // sum over alpha<0 of |alpha|

/// Extended von Neumann entropy on the cone: Tr eta(rho) - eta(Tr rho).
double von_neumann_entropy(const MultipartiteState& s);

double marginal_entropy(const MultipartiteState& s, const LabelSet& labels);

/// Sum_k alpha_k H(omega_{X_k}).
double combo_value(const MultipartiteState& s, const EntropicCombo& combo);

/// Quantum relative entropy H(r || s); +infinity iff the support of r leaks
/// outside the support of s beyond tolerance.
MeasureValue relative_entropy(const MultipartiteState& r,
                              const MultipartiteState& s);

/// Mutual information across the partition cells, via the relative-entropy
/// form with the cone divisor [Tr omega]^{n-1}. One cell gives 0.
MeasureValue mutual_information(const MultipartiteState& s,
                                const Partition& partition);

/// Extended conditional entropy H_e(A|B) = H(omega_A) - I(A:B).
double conditional_entropy_ext(const MultipartiteState& s, const LabelSet& a,
                               const LabelSet& b);

enum class CmiFormula { direct, via_ab, via_cb, four_mi, purified };

/// Conditional mutual information I(A:C|B). Empty B reduces to I(A:C).
MeasureValue cmi(const MultipartiteState& s, const LabelSet& a,
                 const LabelSet& c, const LabelSet& b,
                 CmiFormula formula = CmiFormula::direct);

/// I(A_1:...:A_n|B) via the chain of pairwise terms.
MeasureValue cmi_multipartite(const MultipartiteState& s,
                              const Partition& parts, const LabelSet& b);

/// Same, with the chain built over the given index permutation.
MeasureValue cmi_multipartite_perm(const MultipartiteState& s,
                                   const Partition& parts, const LabelSet& b,
                                   const std::vector<int>& perm);

/// Direct linear-combination form of the multipartite CMI.
double cmi_multipartite_direct(const MultipartiteState& s,
                               const Partition& parts, const LabelSet& b);

/// Secrecy monotone S_n(A_1:...:A_n|B), chain form; empty B allowed.
MeasureValue secrecy_monotone(const MultipartiteState& s,
                              const Partition& parts, const LabelSet& b);

double secrecy_monotone_direct(const MultipartiteState& s,
                               const Partition& parts, const LabelSet& b);

/// Interaction information I_n: alternating-sign sum of marginal entropies
/// over all nonempty part subsets. n=1 entropy, n=2 mutual information,
/// n=3 topological entanglement entropy.
MeasureValue interaction_information(const MultipartiteState& s,
                                     const Partition& parts);

/// Conditional-entropy expansion of I_n around pivot part i (tee-d++ shape).
double interaction_information_pivot(const MultipartiteState& s,
                                     const Partition& parts, int pivot);

/// Information gap I(A1A'1:...:AnA'n) - I(A'1:...:A'n). For n=1 this is
/// I(A1:A'1). unprimed[i] pairs with primed[i].
MeasureValue information_gap(const MultipartiteState& s,
                             const Partition& unprimed,
                             const Partition& primed);

/// Chain form of the information gap built from CMI terms.
MeasureValue information_gap_chain(const MultipartiteState& s,
                                   const Partition& unprimed,
                                   const Partition& primed);

/// [F_{.|B} - F] = -sum_k alpha_k I(X_k : B).
double conditional_combo_difference(const MultipartiteState& s,
                                    const EntropicCombo& combo,
                                    const LabelSet& b);

/// [F_{.\ A_i0} - F] = -sum_{k: A_i0 in X_k} alpha_k H_e(A_i0 | X_k \ A_i0).
double reduced_combo_difference(const MultipartiteState& s,
                                const EntropicCombo& combo,
                                const std::string& drop_label);

enum class MeasureBound {
  mi_bipartite,       // 2 min{H(A), H(B)}
  mi_multipartite,    // 2 min_j sum_{i != j} H(A_i)
  cmi_tripartite,     // min of the six dominating quantities, doubled
  cmi_multipartite,   // 2 min_j sum_{i != j} min{H(A_i), H(A_i B)}
  secrecy,            // 2 min_j sum_{i != j} H(A_i)
  interaction,        // 2^{n-1} min_i H(A_i)
  info_gap,           // 2 sum_i H(A_i) over unprimed parts
};

/// Value of the requested upper bound for the given partition (and B where
/// the bound uses it).
double measure_upper_bound(const MultipartiteState& s, MeasureBound which,
                           const Partition& parts, const LabelSet& b = {});

/// For rank-1 omega_ABC: I(A:B) + I(B:C) = 2 H(omega_B). Returns both sides.
std::pair<double, double> pure_tripartite_identity_check(
    const MultipartiteState& s, const LabelSet& a, const LabelSet& b,
    const LabelSet& c);

/// Convenience overload using the three layout factors as A, B, C.
std::pair<double, double> pure_tripartite_identity_check(
    const MultipartiteState& s);

}  // namespace qcorr
