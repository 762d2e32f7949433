#include "qcorr/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcorr {

Tolerances& tols() {
  static Tolerances t;
  return t;
}

void MultipartiteState::validate() const {
  if (m_.rows() != m_.cols())
    throw layout_error("state: matrix not square");
  if (m_.rows() != layout_.total_dim())
    throw layout_error("state: matrix side does not match layout dim");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tols().herm * scale)
    throw numeric_error("state: not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(m_),
                                        Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tols().psd)
    throw numeric_error("state: negative eigenvalue beyond tolerance");
  const double tr = m_.trace().real();
  if (tr <= 0.0 || tr > 1.0 + tols().trace)
    throw numeric_error("state: trace outside (0, 1]");
}

void ProjectorFamily::set(const std::string& label, Mat p) {
  if (p.rows() != p.cols()) throw layout_error("projector: not square");
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  if ((p - p.adjoint()).cwiseAbs().maxCoeff() > tols().herm * scale)
    throw numeric_error("projector: not Hermitian");
  if ((p * p - p).cwiseAbs().maxCoeff() > tols().herm * scale)
    throw numeric_error("projector: not idempotent");
  ranks_[label] = static_cast<int>(std::lround(p.trace().real()));
  projectors_[label] = std::move(p);
}

Mat hermitian_part(const Mat& m) { return 0.5 * (m + m.adjoint()); }

EigenSystem hermitian_eig(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(m));
  if (es.info() != Eigen::Success)
    throw numeric_error("hermitian_eig: solver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

RVec cleaned_spectrum(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(m),
                                        Eigen::EigenvaluesOnly);
  RVec v = es.eigenvalues();
  for (int i = 0; i < v.size(); ++i) {
    if (v[i] < -tols().psd)
      throw numeric_error("spectrum: negative eigenvalue beyond tolerance");
    if (v[i] < 0.0) v[i] = 0.0;
  }
  return v;
}

Mat matrix_sqrt(const Mat& m) {
  auto [vals, vecs] = hermitian_eig(m);
  RVec s = vals;
  for (int i = 0; i < s.size(); ++i) s[i] = s[i] > 0.0 ? std::sqrt(s[i]) : 0.0;
  return vecs * s.asDiagonal() * vecs.adjoint();
}

Mat positive_part(const Mat& m) {
  auto [vals, vecs] = hermitian_eig(m);
  RVec s = vals.cwiseMax(0.0);
  return vecs * s.asDiagonal() * vecs.adjoint();
}

double trace_norm(const Mat& m) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() <=
      tols().herm * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(m),
                                          Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().sum();
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

MultipartiteState tensor_product(const MultipartiteState& a,
                                 const MultipartiteState& b) {
  for (const auto& l : b.layout().labels())
    if (a.layout().contains(l))
      throw layout_error("tensor_product: label collision on " + l);
  return MultipartiteState::trusted(
      kron(a.matrix(), b.matrix()),
      SubsystemLayout::concat(a.layout(), b.layout()));
}

namespace {

// Flat indices contributed by a subset of factors, all other digits zero.
std::vector<long> subset_offsets(const SubsystemLayout& layout,
                                 const std::vector<int>& indices) {
  const auto strides = layout.strides();
  long count = 1;
  for (int i : indices) count *= layout.dim(i);
  std::vector<long> offsets(count, 0);
  long repeat = 1;
  for (auto it = indices.rbegin(); it != indices.rend(); ++it) {
    const int d = layout.dim(*it);
    const long stride = strides[*it];
    for (long x = 0; x < count; ++x)
      offsets[x] += stride * ((x / repeat) % d);
    repeat *= d;
  }
  return offsets;
}

}  // namespace

MultipartiteState partial_trace(const MultipartiteState& s,
                                const std::vector<std::string>& keep) {
  if (keep.empty()) throw layout_error("partial_trace: empty keep set");
  const auto& layout = s.layout();
  const auto keep_idx = layout.indices_of(keep);
  std::vector<int> traced_idx;
  for (int i = 0; i < layout.size(); ++i)
    if (std::find(keep_idx.begin(), keep_idx.end(), i) == keep_idx.end())
      traced_idx.push_back(i);
  if (traced_idx.empty()) return s;

  const auto kp = subset_offsets(layout, keep_idx);
  const auto tp = subset_offsets(layout, traced_idx);
  const long dk = static_cast<long>(kp.size());
  Mat out = Mat::Zero(dk, dk);
  const Mat& in = s.matrix();
  for (long i = 0; i < dk; ++i)
    for (long j = 0; j < dk; ++j) {
      cxd acc = 0.0;
      for (long t : tp) acc += in(kp[i] + t, kp[j] + t);
      out(i, j) = acc;
    }
  return MultipartiteState::trusted(std::move(out), layout.select(keep_idx));
}

MultipartiteState reorder(const MultipartiteState& s,
                          const std::vector<std::string>& order) {
  const auto& layout = s.layout();
  if (static_cast<int>(order.size()) != layout.size())
    throw layout_error("reorder: order must list every label");
  if (order == layout.labels()) return s;
  std::vector<int> src(order.size());
  SubsystemLayout new_layout;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int j = layout.index_of(order[i]);
    if (j < 0) throw layout_error("reorder: unknown label " + order[i]);
    src[i] = j;
    new_layout.push_back(order[i], layout.dim(j));
  }
  const auto old_strides = layout.strides();
  const auto new_strides = new_layout.strides();
  const long d = layout.total_dim();
  std::vector<long> map(d);
  for (long x = 0; x < d; ++x) {
    long y = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      const long digit = (x / old_strides[src[i]]) % layout.dim(src[i]);
      y += digit * new_strides[i];
    }
    map[x] = y;
  }
  const Mat& in = s.matrix();
  Mat out(d, d);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) out(map[r], map[c]) = in(r, c);
  return MultipartiteState::trusted(std::move(out), std::move(new_layout));
}

MultipartiteState marginal(const MultipartiteState& s,
                           const std::vector<std::string>& labels) {
  return reorder(partial_trace(s, labels), labels);
}

Mat lift_family(const ProjectorFamily& family, const SubsystemLayout& layout) {
  Mat q = Mat::Identity(1, 1);
  for (int i = 0; i < layout.size(); ++i) {
    const auto& l = layout.label(i);
    if (family.has(l)) {
      const Mat& p = family.get(l);
      if (p.rows() != layout.dim(i))
        throw layout_error("projector dim mismatch on label " + l);
      q = kron(q, p);
    } else {
      q = kron(q, Mat::Identity(layout.dim(i), layout.dim(i)));
    }
  }
  return q;
}

std::pair<MultipartiteState, double> truncate(const MultipartiteState& s,
                                              const ProjectorFamily& q) {
  for (const auto& [l, p] : q.all())
    if (!s.layout().contains(l))
      throw layout_error("truncate: projector label " + l + " not in layout");
  const Mat big_q = lift_family(q, s.layout());
  Mat t = big_q * s.matrix() * big_q;
  const double lambda = t.trace().real();
  if (lambda <= tols().zero)
    throw degenerate_truncation("truncate: Tr Q omega Q below threshold");
  t /= lambda;
  return {MultipartiteState::trusted(std::move(t), s.layout()), lambda};
}

MultipartiteState purify(const MultipartiteState& s,
                         const std::string& ancilla_label) {
  if (!s.is_state()) throw numeric_error("purify: input must have unit trace");
  std::string anc = ancilla_label;
  if (anc.empty()) {
    for (const auto& l : s.layout().labels()) anc += l;
    anc += "~R";
  }
  const long d = s.dim();
  auto [vals, vecs] = hermitian_eig(s.matrix());
  Vec psi = Vec::Zero(d * d);
  for (long i = 0; i < d; ++i) {
    if (vals[i] <= tols().eig_floor) continue;
    const double w = std::sqrt(vals[i]);
    for (long x = 0; x < d; ++x) psi[x * d + i] += w * vecs(x, i);
  }
  SubsystemLayout layout = s.layout();
  layout.push_back(anc, static_cast<int>(d));
  return MultipartiteState::trusted(psi * psi.adjoint(), std::move(layout));
}

double fidelity(const MultipartiteState& r, const MultipartiteState& s) {
  if (r.layout() != s.layout())
    throw layout_error("fidelity: layout mismatch");
  const Mat sr = matrix_sqrt(r.matrix());
  const Mat inner = hermitian_part(sr * s.matrix() * sr);
  Eigen::SelfAdjointEigenSolver<Mat> es(inner, Eigen::EigenvaluesOnly);
  double f = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()[i];
    if (v > 0.0) f += std::sqrt(v);
  }
  return f;
}

double trace_distance_half(const MultipartiteState& r,
                           const MultipartiteState& s) {
  if (r.layout() != s.layout())
    throw layout_error("trace_distance_half: layout mismatch");
  return 0.5 * trace_norm(r.matrix() - s.matrix());
}

Mat spectral_projector(const MultipartiteState& s, const std::string& label,
                       int n) {
  const auto marg = partial_trace(s, {label});
  const long d = marg.dim();
  if (n < 0 || n > d)
    throw layout_error("spectral_projector: rank out of range");
  auto [vals, vecs] = hermitian_eig(marg.matrix());

  // Tie rule: equal eigenvalues ordered by the index of the eigenvector's
  // dominant component.
  std::vector<int> dominant(d);
  for (long i = 0; i < d; ++i) {
    int best = 0;
    double best_mag = -1.0;
    for (long x = 0; x < d; ++x) {
      const double mag = std::abs(vecs(x, i));
      if (mag > best_mag + 1e-12) {
        best_mag = mag;
        best = static_cast<int>(x);
      }
    }
    dominant[i] = best;
  }
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (std::abs(vals[a] - vals[b]) > 1e-12) return vals[a] > vals[b];
    return dominant[a] < dominant[b];
  });
  Mat p = Mat::Zero(d, d);
  for (int k = 0; k < n; ++k) {
    const auto v = vecs.col(order[k]);
    p += v * v.adjoint();
  }
  return p;
}

}  // namespace qcorr
