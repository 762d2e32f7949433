#include "qcorr/extension.hpp"

#include <algorithm>
#include <cmath>

#include "qcorr/parallel.hpp"

namespace qcorr {

int TruncationScheme::grid_size() const {
  int g = -1;
  for (const auto& [label, ls] : per_label) {
    if (g < 0) g = static_cast<int>(ls.ranks.size());
    if (g != static_cast<int>(ls.ranks.size()))
      throw layout_error("scheme: rank lists must share one grid length");
  }
  return std::max(g, 0);
}

void TruncationScheme::validate(const SubsystemLayout& layout) const {
  grid_size();
  for (const auto& [label, ls] : per_label) {
    if (!layout.contains(label))
      throw layout_error("scheme: unknown label " + label);
    if (ls.ranks.empty()) throw layout_error("scheme: empty rank list");
    for (std::size_t i = 0; i + 1 < ls.ranks.size(); ++i)
      if (ls.ranks[i] >= ls.ranks[i + 1])
        throw layout_error("scheme: ranks must be strictly increasing");
    if (ls.ranks.front() < 1 || ls.ranks.back() != layout.dim_of(label))
      throw layout_error("scheme: ranks must end at the full dim of " + label);
  }
}

namespace {

Mat basis_projector(int d, int rank) {
  Mat p = Mat::Zero(d, d);
  for (int i = 0; i < rank; ++i) p(i, i) = 1.0;
  return p;
}

Mat random_subspace_projector(int d, int rank, std::uint64_t seed) {
  Rng rng(seed);
  const Mat u = haar_isometry(rng, d, d);
  const Mat cols = u.leftCols(rank);
  return cols * cols.adjoint();
}

}  // namespace

ProjectorFamily projectors_at(const TruncationScheme& scheme,
                              const MultipartiteState& s, int k) {
  scheme.validate(s.layout());
  ProjectorFamily family;
  for (const auto& [label, ls] : scheme.per_label) {
    const int d = s.layout().dim_of(label);
    const int rank = ls.ranks.at(k);
    switch (ls.kind) {
      case SchemeKind::spectral:
        family.set(label, spectral_projector(s, label, rank));
        break;
      case SchemeKind::basis:
        family.set(label, basis_projector(d, rank));
        break;
      case SchemeKind::random_subspace:
        // Nested subspaces from one Haar unitary per label.
        family.set(label, random_subspace_projector(d, rank, ls.seed));
        break;
    }
  }
  return family;
}

SweepResult faithfulness_sweep(const MultipartiteState& s,
                               const MeasureFn& measure,
                               const TruncationScheme& scheme, int threads) {
  scheme.validate(s.layout());
  const int g = scheme.grid_size();
  SweepResult result;
  result.reference = measure(s);
  result.points.resize(g);
  parallel_for(
      g,
      [&](int k) {
        const ProjectorFamily family = projectors_at(scheme, s, k);
        auto [trunc, lambda] = truncate(s, family);
        SweepPoint pt;
        for (const auto& [label, ls] : scheme.per_label)
          pt.ranks[label] = ls.ranks[k];
        pt.lambda = lambda;
        pt.value = measure(trunc);
        result.points[k] = std::move(pt);
      },
      threads);
  if (g > 0) {
    result.final_gap = std::abs(result.points.back().value - result.reference);
    result.converged = result.final_gap <= tols().conv;
  } else {
    result.converged = true;
  }
  return result;
}

SweepResult marginal_entropy_convergence(const MultipartiteState& s,
                                         const TruncationScheme& scheme,
                                         const LabelSet& subset, int threads) {
  return faithfulness_sweep(
      s,
      [subset](const MultipartiteState& x) {
        return marginal_entropy(x, subset);
      },
      scheme, threads);
}

DoubleLimitResult cmi_double_limit(const MultipartiteState& s,
                                   const LabelSet& a, const LabelSet& c,
                                   const LabelSet& b,
                                   const std::vector<int>& ranks_ac,
                                   const std::vector<int>& ranks_b) {
  if (ranks_ac.empty() || ranks_b.empty())
    throw layout_error("cmi_double_limit: empty grids");
  if (a.size() != 1 || c.size() != 1 || b.size() != 1)
    throw layout_error("cmi_double_limit: single-label subsystems expected");
  const int da = s.layout().dim_of(a[0]);
  const int dc = s.layout().dim_of(c[0]);
  const int db = s.layout().dim_of(b[0]);
  if (ranks_ac.back() < std::max(da, dc) || ranks_b.back() != db)
    throw layout_error("cmi_double_limit: grids must end at full rank");

  DoubleLimitResult out;
  out.direct = cmi(s, a, c, b).value;
  for (int ri : ranks_ac) {
    std::vector<double> row;
    for (int rl : ranks_b) {
      ProjectorFamily family;
      family.set(a[0], spectral_projector(s, a[0], std::min(ri, da)));
      family.set(c[0], spectral_projector(s, c[0], std::min(ri, dc)));
      family.set(b[0], spectral_projector(s, b[0], rl));
      auto [trunc, lambda] = truncate(s, family);
      row.push_back(cmi(trunc, a, c, b).value);
    }
    // Inner limit over B first, per the iterated-limit order.
    out.inner_limits.push_back(row.back());
    out.table.push_back(std::move(row));
  }
  out.estimate = out.inner_limits.back();
  return out;
}

SupremumResult ie_projector_supremum(const MultipartiteState& s,
                                     const LabelSet& a, const LabelSet& c,
                                     const LabelSet& b, SupremumSide side,
                                     const std::vector<int>& ranks) {
  SupremumResult out;
  out.direct = cmi(s, a, c, b).value;
  const LabelSet& cut = side == SupremumSide::over_a ? a : c;
  if (cut.size() != 1)
    throw layout_error("ie_projector_supremum: single-label cut expected");
  const int d = s.layout().dim_of(cut[0]);
  out.supremum = 0.0;
  for (int r : ranks) {
    ProjectorFamily family;
    family.set(cut[0], spectral_projector(s, cut[0], std::min(r, d)));
    const Mat q = lift_family(family, s.layout());
    Mat cutm = q * s.matrix() * q;
    const double lambda = cutm.trace().real();
    double value = 0.0;
    if (lambda > tols().zero) {
      cutm /= lambda;
      const auto trunc = MultipartiteState::trusted(std::move(cutm),
                                                    s.layout());
      // Cone convention: I(X:Y)_{Q w Q} = lambda * I(X:Y) of the
      // normalized truncation.
      LabelSet bc = b;
      bc.insert(bc.end(), c.begin(), c.end());
      LabelSet ab = a;
      ab.insert(ab.end(), b.begin(), b.end());
      if (side == SupremumSide::over_a) {
        value = lambda * (mutual_information(trunc, {a, bc}).value -
                          (b.empty() ? 0.0
                                     : mutual_information(trunc, {a, b}).value));
      } else {
        value = lambda * (mutual_information(trunc, {ab, c}).value -
                          (b.empty() ? 0.0
                                     : mutual_information(trunc, {b, c}).value));
      }
    }
    out.values.push_back(value);
    out.supremum = std::max(out.supremum, value);
  }
  return out;
}

MultipartiteState model_tmsv(double squeeze_r, int cutoff) {
  if (cutoff < 2) throw layout_error("model_tmsv: cutoff must be >= 2");
  if (squeeze_r < 0.0) throw layout_error("model_tmsv: negative squeezing");
  const double t = std::tanh(squeeze_r);
  Vec psi = Vec::Zero(static_cast<long>(cutoff) * cutoff);
  for (int n = 0; n < cutoff; ++n) psi[n * cutoff + n] = std::pow(t, n);
  psi /= psi.norm();
  return MultipartiteState::trusted(
      psi * psi.adjoint(), SubsystemLayout{{"A", cutoff}, {"B", cutoff}});
}

MultipartiteState model_thermal(double nbar, int cutoff) {
  if (cutoff < 2) throw layout_error("model_thermal: cutoff must be >= 2");
  if (nbar < 0.0) throw layout_error("model_thermal: negative mean number");
  Mat m = Mat::Zero(cutoff, cutoff);
  if (nbar == 0.0) {
    m(0, 0) = 1.0;
  } else {
    const double q = nbar / (1.0 + nbar);
    double norm = 0.0;
    for (int n = 0; n < cutoff; ++n) norm += std::pow(q, n);
    for (int n = 0; n < cutoff; ++n) m(n, n) = std::pow(q, n) / norm;
  }
  return MultipartiteState::trusted(std::move(m),
                                    SubsystemLayout{{"A", cutoff}});
}

MultipartiteState model_random_induced(const SubsystemLayout& layout,
                                       int ancilla_rank, std::uint64_t seed) {
  return random_state(layout, ancilla_rank, seed);
}

double thermal_entropy(double nbar) {
  if (nbar <= 0.0) return 0.0;
  return (nbar + 1.0) * std::log(nbar + 1.0) - nbar * std::log(nbar);
}

}  // namespace qcorr
