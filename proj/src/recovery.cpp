#include "qcorr/recovery.hpp"

#include <algorithm>
#include <cmath>

#include "qcorr/parallel.hpp"

namespace qcorr {

namespace {

LabelSet join(const LabelSet& a, const LabelSet& b) {
  LabelSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

QuantumChannel petz_map(const MultipartiteState& omega_bc,
                        const MultipartiteState& omega_b) {
  const long d_b = omega_b.dim();
  const long d_bc = omega_bc.dim();
  if (d_bc % d_b != 0)
    throw layout_error("petz_map: omega_BC dim not divisible by omega_B dim");
  const long d_c = d_bc / d_b;
  if (omega_b.matrix().cwiseAbs().maxCoeff() <= tols().eig_floor)
    throw numeric_error("petz_map: zero omega_B");

  auto [bvals, bvecs] = hermitian_eig(omega_b.matrix());
  Mat b_inv_sqrt = Mat::Zero(d_b, d_b);
  Mat b_kernel = Mat::Zero(d_b, d_b);
  for (int i = 0; i < bvals.size(); ++i) {
    const auto v = bvecs.col(i);
    if (bvals[i] > tols().eig_floor)
      b_inv_sqrt += (1.0 / std::sqrt(bvals[i])) * v * v.adjoint();
    else
      b_kernel += v * v.adjoint();
  }
  const Mat sqrt_bc = matrix_sqrt(omega_bc.matrix());

  std::vector<Mat> kraus;
  for (long c = 0; c < d_c; ++c) {
    // E_c : |psi>_B -> |psi>_B (x) |c>_C, composed into sqrt(w_BC) E_c
    // w_B^{-1/2}.
    Mat e(d_bc, d_b);
    e.setZero();
    for (long b = 0; b < d_b; ++b) e(b * d_c + c, b) = 1.0;
    kraus.push_back(sqrt_bc * e * b_inv_sqrt);
  }
  // Trace dump for the support complement of omega_B: send it to omega_BC.
  if (b_kernel.cwiseAbs().maxCoeff() > 0.5 / double(d_b)) {
    auto [wvals, wvecs] = hermitian_eig(omega_bc.matrix());
    auto [kvals, kvecs] = hermitian_eig(b_kernel);
    for (int j = 0; j < kvals.size(); ++j) {
      if (kvals[j] < 0.5) continue;  // kernel projector eigenvalues are 0/1
      for (int i = 0; i < wvals.size(); ++i) {
        if (wvals[i] <= tols().eig_floor) continue;
        kraus.push_back(std::sqrt(wvals[i]) * wvecs.col(i) *
                        kvecs.col(j).adjoint());
      }
    }
  }
  return QuantumChannel::channel(std::move(kraus), omega_b.layout(),
                                 omega_bc.layout());
}

namespace {

struct RecoveryProblem {
  MultipartiteState target;    // omega_ABC ordered [a..., b..., c...]
  MultipartiteState omega_ab;  // ordered [a..., b...]
  LabelSet a, b, c;
  long d_a, d_b, d_c;
};

double recovery_fidelity(const RecoveryProblem& prob,
                         const QuantumChannel& ch) {
  const auto recovered = apply_to(ch, prob.omega_ab, prob.b);
  return fidelity(prob.target, recovered);
}

// Fidelity achieved by the isometry V : B -> BC (x) E given as a
// (d_bc * d_e) x d_b matrix.
double fidelity_of_isometry(const RecoveryProblem& prob, const Mat& v) {
  const long d_bc = prob.d_b * prob.d_c;
  const long d_e = v.rows() / d_bc;
  const Mat eye_a = Mat::Identity(prob.d_a, prob.d_a);
  Mat recovered = Mat::Zero(prob.d_a * d_bc, prob.d_a * d_bc);
  for (long e = 0; e < d_e; ++e) {
    Mat k(d_bc, prob.d_b);
    for (long x = 0; x < d_bc; ++x)
      for (long y = 0; y < prob.d_b; ++y) k(x, y) = v(x * d_e + e, y);
    const Mat lifted = kron(eye_a, k);
    recovered += lifted * prob.omega_ab.matrix() * lifted.adjoint();
  }
  const auto rec_state =
      MultipartiteState::trusted(std::move(recovered), prob.target.layout());
  return fidelity(prob.target, rec_state);
}

// Thin-QR retraction onto isometries with a phase fix making the map from
// the raw parameters deterministic and smooth.
Mat retract(const Mat& x) {
  Eigen::HouseholderQR<Mat> qr(x);
  Mat q = qr.householderQ() * Mat::Identity(x.rows(), x.cols());
  const Mat r = q.adjoint() * x;
  for (long j = 0; j < x.cols(); ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

struct IsometryAscent {
  Mat v;
  double fidelity = 0.0;
};

IsometryAscent ascend_isometry(const RecoveryProblem& prob, Mat x,
                               int max_iters) {
  const auto f = [&](const Mat& m) {
    return fidelity_of_isometry(prob, retract(m));
  };
  double best = f(x);
  double step = 0.15;
  const double h = 1e-5;
  const long rows = x.rows(), cols = x.cols();
  for (int it = 0; it < max_iters; ++it) {
    Mat grad(rows, cols);
    for (long r = 0; r < rows; ++r)
      for (long cidx = 0; cidx < cols; ++cidx) {
        Mat xp = x, xm = x;
        xp(r, cidx) += h;
        xm(r, cidx) -= h;
        const double dre = (f(xp) - f(xm)) / (2 * h);
        xp = x;
        xm = x;
        xp(r, cidx) += cxd(0, h);
        xm(r, cidx) -= cxd(0, h);
        const double dim_ = (f(xp) - f(xm)) / (2 * h);
        grad(r, cidx) = cxd(dre, dim_);
      }
    const double gnorm = grad.norm();
    if (gnorm < 1e-10) break;
    bool improved = false;
    for (int tries = 0; tries < 25; ++tries) {
      const Mat cand = x + (step / gnorm) * grad;
      const double v = f(cand);
      if (v > best + 1e-13) {
        best = v;
        x = cand;
        step *= 1.4;
        improved = true;
        break;
      }
      step *= 0.5;
      if (step < 1e-9) break;
    }
    if (!improved) break;
  }
  return {retract(x), best};
}

Mat isometry_from_channel(const QuantumChannel& ch, long d_e) {
  const long d_out = ch.out_dim();
  const long d_in = ch.in_dim();
  if (ch.choi_rank() > d_e)
    throw layout_error("recovery: channel rank exceeds environment dim");
  Mat v = Mat::Zero(d_out * d_e, d_in);
  for (long e = 0; e < static_cast<long>(ch.kraus().size()); ++e)
    for (long x = 0; x < d_out; ++x)
      for (long y = 0; y < d_in; ++y) v(x * d_e + e, y) = ch.kraus()[e](x, y);
  return v;
}

QuantumChannel channel_from_isometry(const Mat& v, const SubsystemLayout& in,
                                     const SubsystemLayout& out) {
  const long d_out = out.total_dim();
  const long d_e = v.rows() / d_out;
  std::vector<Mat> kraus;
  for (long e = 0; e < d_e; ++e) {
    Mat k(d_out, in.total_dim());
    for (long x = 0; x < d_out; ++x)
      for (long y = 0; y < in.total_dim(); ++y) k(x, y) = v(x * d_e + e, y);
    kraus.push_back(std::move(k));
  }
  return QuantumChannel::channel(std::move(kraus), in, out);
}

std::pair<double, double> marginal_residuals(const RecoveryProblem& prob,
                                             const QuantumChannel& ch) {
  const auto omega_b = marginal(prob.omega_ab, prob.b);
  const auto out = apply(ch, omega_b);
  const auto out_b = marginal(out, prob.b);
  const auto out_c = marginal(out, prob.c);
  const auto target_b = marginal(prob.target, prob.b);
  const auto target_c = marginal(prob.target, prob.c);
  return {trace_norm(out_b.matrix() - target_b.matrix()),
          trace_norm(out_c.matrix() - target_c.matrix())};
}

}  // namespace

FixupResult marginal_fixup(const QuantumChannel& op,
                           const MultipartiteState& omega_b,
                           const MultipartiteState& omega_c) {
  const auto out = apply(op, omega_b);
  const auto& out_layout = op.out_layout();
  const auto out_b = marginal(out, omega_b.layout().labels());
  LabelSet c_labels;
  for (const auto& l : out_layout.labels())
    if (!omega_b.layout().contains(l)) c_labels.push_back(l);
  const auto out_c = marginal(out, c_labels);

  const Mat def_b = omega_b.matrix() - out_b.matrix();
  const Mat def_c = omega_c.matrix() - out_c.matrix();
  {
    Eigen::SelfAdjointEigenSolver<Mat> eb(hermitian_part(def_b),
                                          Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Mat> ec(hermitian_part(def_c),
                                          Eigen::EigenvaluesOnly);
    if (eb.eigenvalues().minCoeff() < -tols().psd ||
        ec.eigenvalues().minCoeff() < -tols().psd)
      throw numeric_error("marginal_fixup: marginal deficits are not PSD");
  }

  const double mass_b = def_b.trace().real();
  const double mass_c = def_c.trace().real();
  Mat sigma;
  bool flagged = false;
  if (mass_b <= tols().supp || mass_c <= tols().supp) {
    // Both deficits vanish: complete with the fixed product state.
    sigma = kron(omega_b.matrix(), omega_c.matrix());
    flagged = true;
  } else {
    sigma = kron(positive_part(def_b) / mass_b,
                 positive_part(def_c) / mass_c);
  }

  std::vector<Mat> kraus = op.kraus();
  const Mat r =
      Mat::Identity(op.in_dim(), op.in_dim()) - op.completeness();
  auto [rvals, rvecs] = hermitian_eig(r);
  auto [svals, svecs] = hermitian_eig(sigma);
  for (int j = 0; j < rvals.size(); ++j) {
    if (rvals[j] <= tols().eig_floor) continue;
    for (int i = 0; i < svals.size(); ++i) {
      if (svals[i] <= tols().eig_floor) continue;
      kraus.push_back(std::sqrt(svals[i] * rvals[j]) * svecs.col(i) *
                      rvecs.col(j).adjoint());
    }
  }
  return {QuantumChannel::channel(std::move(kraus), op.in_layout(),
                                  op.out_layout()),
          flagged};
}

namespace {

// Damps a channel until its marginals on omega_B are dominated by the
// targets, then completes via marginal_fixup. Returns the input channel
// unchanged when its marginals are already exact.
QuantumChannel fixup_candidate(const RecoveryProblem& prob,
                               const QuantumChannel& ch) {
  auto [res_b, res_c] = marginal_residuals(prob, ch);
  if (res_b <= 1e-12 && res_c <= 1e-12) return ch;

  const auto omega_b_state = marginal(prob.omega_ab, prob.b);
  const auto out = apply(ch, omega_b_state);
  const auto target_b = marginal(prob.target, prob.b);
  const auto target_c = marginal(prob.target, prob.c);
  const auto out_b = marginal(out, prob.b);
  const auto out_c = marginal(out, prob.c);

  // Largest factor keeping (1-delta) M_X <= omega_X for both marginals.
  const auto max_ratio = [](const Mat& m, const Mat& target) {
    auto [tvals, tvecs] = hermitian_eig(target);
    Mat t_inv_sqrt = Mat::Zero(target.rows(), target.cols());
    for (int i = 0; i < tvals.size(); ++i) {
      if (tvals[i] > tols().eig_floor)
        t_inv_sqrt += (1.0 / std::sqrt(tvals[i])) * tvecs.col(i) *
                      tvecs.col(i).adjoint();
      else if ((tvecs.col(i).adjoint() * m * tvecs.col(i))(0, 0).real() >
               tols().supp)
        return kInf;  // mass outside the target support, cannot damp
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(
        hermitian_part(t_inv_sqrt * m * t_inv_sqrt), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
  };
  const double ratio = std::max(
      {max_ratio(out_b.matrix(), target_b.matrix()),
       max_ratio(out_c.matrix(), target_c.matrix()), 1.0});
  if (std::isinf(ratio))
    throw numeric_error("recovery fixup: marginal support mismatch");
  const double scale = 1.0 / ratio;

  std::vector<Mat> kraus = ch.kraus();
  for (auto& k : kraus) k *= std::sqrt(scale);
  const auto damped = QuantumChannel::operation(std::move(kraus),
                                                ch.in_layout(),
                                                ch.out_layout());
  return marginal_fixup(damped, target_b, target_c).channel;
}

}  // namespace

RecoveryReport recovery_search(const MultipartiteState& s, const LabelSet& a,
                               const LabelSet& b, const LabelSet& c,
                               const RecoveryOpts& opts) {
  RecoveryProblem prob{marginal(s, join(join(a, b), c)),
                       marginal(s, join(a, b)),
                       a,
                       b,
                       c,
                       s.layout().dim_of(a),
                       s.layout().dim_of(b),
                       s.layout().dim_of(c)};

  const double cmi_value = cmi(s, a, c, b).value;
  const double fr_lhs = std::exp(-0.5 * std::max(0.0, cmi_value));

  const auto omega_bc = marginal(s, join(b, c));
  const auto omega_b = marginal(s, b);
  QuantumChannel best = petz_map(omega_bc, omega_b);
  double best_fidelity = recovery_fidelity(prob, best);
  int restarts_used = 0;

  const bool need_ascent =
      !(opts.ascent_only_if_needed && best_fidelity >= fr_lhs);
  if (need_ascent && opts.restarts > 0) {
    const long d_bc = prob.d_b * prob.d_c;
    const long d_e = d_bc;  // Stinespring environment = dim BC
    std::vector<IsometryAscent> outs(opts.restarts);
    const Mat warm = isometry_from_channel(best, d_e);
    parallel_for(
        opts.restarts,
        [&](int r) {
          Rng rng = Rng::for_task(opts.seed, static_cast<std::uint64_t>(r));
          Mat x0 = r == 0 ? warm : ginibre(rng, d_bc * d_e, prob.d_b);
          outs[r] = ascend_isometry(prob, std::move(x0), opts.max_iters);
        },
        opts.threads);
    for (const auto& o : outs) {
      ++restarts_used;
      if (o.fidelity > best_fidelity) {
        best_fidelity = o.fidelity;
        best = channel_from_isometry(o.v, omega_b.layout(),
                                     omega_bc.layout());
      }
    }
  }

  // Report a channel that reproduces the marginals exactly; keep the best
  // fidelity among marginal-exact candidates.
  QuantumChannel reported = fixup_candidate(prob, best);
  double reported_fidelity = recovery_fidelity(prob, reported);
  auto [res_b, res_c] = marginal_residuals(prob, reported);

  RecoveryReport report{std::move(reported),
                        reported_fidelity,
                        cmi_value,
                        fr_lhs,
                        res_b,
                        res_c,
                        false,
                        restarts_used};
  report.pass = report.fr_lhs <= report.fidelity + tols().fr;
  return report;
}

MarkovReport markov_check(const MultipartiteState& s, const LabelSet& a,
                          const LabelSet& b, const LabelSet& c) {
  MarkovReport report;
  report.cmi = cmi(s, a, c, b).value;
  const auto omega_bc = marginal(s, join(b, c));
  const auto omega_b = marginal(s, b);
  RecoveryProblem prob{marginal(s, join(join(a, b), c)),
                       marginal(s, join(a, b)),
                       a,
                       b,
                       c,
                       s.layout().dim_of(a),
                       s.layout().dim_of(b),
                       s.layout().dim_of(c)};
  report.best_fidelity = recovery_fidelity(prob, petz_map(omega_bc, omega_b));
  report.verdict = report.cmi <= tols().markov ? MarkovVerdict::markov
                                               : MarkovVerdict::not_markov;
  return report;
}

std::vector<QuantumChannel> pairwise_recoveries(const MultipartiteState& s,
                                                const Partition& unprimed,
                                                const Partition& primed,
                                                const RecoveryOpts& opts) {
  if (unprimed.size() != primed.size())
    throw layout_error("pairwise_recoveries: pairing mismatch");
  std::vector<QuantumChannel> out;
  for (std::size_t i = 0; i < unprimed.size(); ++i) {
    LabelSet rest;
    for (std::size_t j = 0; j < unprimed.size(); ++j) {
      if (j == i) continue;
      rest.insert(rest.end(), unprimed[j].begin(), unprimed[j].end());
      rest.insert(rest.end(), primed[j].begin(), primed[j].end());
    }
    out.push_back(
        recovery_search(s, rest, primed[i], unprimed[i], opts).channel);
  }
  return out;
}

WildeReport wilde_check(const MultipartiteState& s, const Partition& unprimed,
                        const Partition& primed,
                        const std::vector<QuantumChannel>& recoveries) {
  const int n = static_cast<int>(unprimed.size());
  if (static_cast<int>(primed.size()) != n ||
      static_cast<int>(recoveries.size()) != n)
    throw layout_error("wilde_check: pairing mismatch");

  WildeReport report;
  report.delta_i_nats = information_gap_chain(s, unprimed, primed).value;
  report.delta_i_bits = report.delta_i_nats / std::log(2.0);

  LabelSet all_primed;
  for (const auto& p : primed)
    all_primed.insert(all_primed.end(), p.begin(), p.end());
  MultipartiteState recon = marginal(s, all_primed);
  for (int i = 0; i < n; ++i)
    recon = apply_to(recoveries[i], recon, primed[i]);
  recon = reorder(recon, s.layout().labels());

  report.recon_trace_norm = trace_norm(s.matrix() - recon.matrix());
  report.rhs = report.recon_trace_norm * report.recon_trace_norm /
               (4.0 * n * n);
  report.pass = report.delta_i_nats >= report.rhs - tols().fr;
  return report;
}

}  // namespace qcorr
