#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qcorr/state.hpp"

namespace qcorr {

// ---- Hermitian matrix utilities -------------------------------------------

/// (M + M^dagger)/2.
Mat hermitian_part(const Mat& m);

struct EigenSystem {
  RVec values;   // ascending
  Mat vectors;   // columns
};

/// Eigendecomposition of the Hermitian part of m.
EigenSystem hermitian_eig(const Mat& m);

/// Eigenvalues cleaned per the spectra policy: values below -tols().psd
/// raise numeric_error, negatives within tolerance are zeroed.
RVec cleaned_spectrum(const Mat& m);

Mat matrix_sqrt(const Mat& m);

/// Positive part [m]_+ : negative eigenvalues zeroed.
Mat positive_part(const Mat& m);

double trace_norm(const Mat& m);

// ---- Operations on multipartite states -------------------------------------

MultipartiteState tensor_product(const MultipartiteState& a,
                                 const MultipartiteState& b);

/// Marginal on `keep`, factors in layout order. Trace preserved.
MultipartiteState partial_trace(const MultipartiteState& s,
                                const std::vector<std::string>& keep);

/// Permute tensor factors into the given label order.
MultipartiteState reorder(const MultipartiteState& s,
                          const std::vector<std::string>& order);

/// Marginal on `labels` with factors in exactly that order.
MultipartiteState marginal(const MultipartiteState& s,
                           const std::vector<std::string>& labels);

/// omega -> (Q omega Q / lambda, lambda), lambda = Tr Q omega Q.
std::pair<MultipartiteState, double> truncate(const MultipartiteState& s,
                                              const ProjectorFamily& q);

/// Rank-1 purification on H (x) K, dim K = dim H. The ancilla enters the
/// layout as one factor labeled by the concatenated labels plus "~R".
MultipartiteState purify(const MultipartiteState& s,
                         const std::string& ancilla_label = "");

/// Uhlmann fidelity ||sqrt(r) sqrt(s)||_1.
double fidelity(const MultipartiteState& r, const MultipartiteState& s);

/// (1/2) || r - s ||_1.
double trace_distance_half(const MultipartiteState& r,
                           const MultipartiteState& s);

/// Rank-n projector onto the top-n eigenvectors of the marginal on `label`.
/// Ties among equal eigenvalues are broken by ascending index of the
/// eigenvector's dominant computational-basis component.
Mat spectral_projector(const MultipartiteState& s, const std::string& label,
                       int n);

/// Kronecker product of plain matrices.
Mat kron(const Mat& a, const Mat& b);

/// Tensor product of per-factor operators (identity where entry is empty)
/// in layout order.
Mat lift_family(const ProjectorFamily& family, const SubsystemLayout& layout);

}  // namespace qcorr
