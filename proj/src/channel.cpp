#include "qcorr/channel.hpp"

#include <algorithm>
#include <cmath>

#include "qcorr/parallel.hpp"

namespace qcorr {

namespace {

// Canonical Kraus list from the Choi eigendecomposition, rank threshold
// 1e-10.
std::vector<Mat> canonical_kraus(const std::vector<Mat>& kraus, long d_in,
                                 long d_out) {
  Mat choi = Mat::Zero(d_in * d_out, d_in * d_out);
  for (const auto& k : kraus) {
    Vec v(d_in * d_out);
    for (long i = 0; i < d_in; ++i)
      for (long b = 0; b < d_out; ++b) v[i * d_out + b] = k(b, i);
    choi += v * v.adjoint();
  }
  auto [vals, vecs] = hermitian_eig(choi);
  std::vector<Mat> out;
  for (int m = static_cast<int>(vals.size()) - 1; m >= 0; --m) {
    if (vals[m] <= 1e-10) break;
    Mat k(d_out, d_in);
    const double w = std::sqrt(vals[m]);
    for (long i = 0; i < d_in; ++i)
      for (long b = 0; b < d_out; ++b) k(b, i) = w * vecs(i * d_out + b, m);
    out.push_back(std::move(k));
  }
  if (out.empty()) out.push_back(Mat::Zero(d_out, d_in));
  return out;
}

}  // namespace

QuantumChannel::QuantumChannel(std::vector<Mat> kraus, SubsystemLayout in,
                               SubsystemLayout out, ChannelKind kind)
    : kraus_(std::move(kraus)), in_(std::move(in)), out_(std::move(out)),
      kind_(kind) {
  if (kraus_.empty()) throw layout_error("channel: empty Kraus list");
  for (const auto& k : kraus_)
    if (k.rows() != out_.total_dim() || k.cols() != in_.total_dim())
      throw layout_error("channel: Kraus shape does not match layouts");
  kraus_ = canonical_kraus(kraus_, in_.total_dim(), out_.total_dim());
  const Mat c = completeness();
  if (kind_ == ChannelKind::channel) {
    if ((c - Mat::Identity(c.rows(), c.cols())).cwiseAbs().maxCoeff() >
        tols().cptp)
      throw numeric_error("channel: Kraus operators are not trace preserving");
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(c),
                                          Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() > 1.0 + tols().cptp)
      throw numeric_error("operation: Kraus operators increase trace");
  }
}

QuantumChannel QuantumChannel::channel(std::vector<Mat> kraus,
                                       SubsystemLayout in,
                                       SubsystemLayout out) {
  return QuantumChannel(std::move(kraus), std::move(in), std::move(out),
                        ChannelKind::channel);
}

QuantumChannel QuantumChannel::operation(std::vector<Mat> kraus,
                                         SubsystemLayout in,
                                         SubsystemLayout out) {
  return QuantumChannel(std::move(kraus), std::move(in), std::move(out),
                        ChannelKind::operation);
}

Mat QuantumChannel::completeness() const {
  Mat c = Mat::Zero(in_dim(), in_dim());
  for (const auto& k : kraus_) c += k.adjoint() * k;
  return c;
}

Mat QuantumChannel::choi() const {
  const long d_in = in_dim(), d_out = out_dim();
  Mat choi = Mat::Zero(d_in * d_out, d_in * d_out);
  for (const auto& k : kraus_) {
    Vec v(d_in * d_out);
    for (long i = 0; i < d_in; ++i)
      for (long b = 0; b < d_out; ++b) v[i * d_out + b] = k(b, i);
    choi += v * v.adjoint();
  }
  return choi;
}

Mat QuantumChannel::apply_matrix(const Mat& rho) const {
  Mat out = Mat::Zero(out_dim(), out_dim());
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

MultipartiteState apply(const QuantumChannel& ch, const MultipartiteState& s) {
  if (s.dim() != ch.in_dim())
    throw layout_error("apply: state dimension does not match channel input");
  return MultipartiteState::trusted(ch.apply_matrix(s.matrix()),
                                    ch.out_layout());
}

MultipartiteState apply_to(const QuantumChannel& ch, const MultipartiteState& s,
                           const LabelSet& targets,
                           const LabelSet& out_labels) {
  if (targets.empty()) throw layout_error("apply_to: no target labels");
  LabelSet rest;
  for (const auto& l : s.layout().labels())
    if (std::find(targets.begin(), targets.end(), l) == targets.end())
      rest.push_back(l);
  LabelSet order = rest;
  order.insert(order.end(), targets.begin(), targets.end());
  const MultipartiteState moved = reorder(s, order);

  long d_t = 1;
  for (const auto& l : targets) d_t *= s.layout().dim_of(l);
  if (d_t != ch.in_dim())
    throw layout_error("apply_to: target dims do not match channel input");
  const long d_rest = s.dim() / d_t;

  SubsystemLayout out_layout;
  for (const auto& l : rest) out_layout.push_back(l, s.layout().dim_of(l));
  const auto& ch_out = ch.out_layout();
  if (!out_labels.empty() &&
      static_cast<int>(out_labels.size()) != ch_out.size())
    throw layout_error("apply_to: out label override size mismatch");
  for (int i = 0; i < ch_out.size(); ++i)
    out_layout.push_back(out_labels.empty() ? ch_out.label(i) : out_labels[i],
                         ch_out.dim(i));

  const Mat eye = Mat::Identity(d_rest, d_rest);
  Mat acc = Mat::Zero(d_rest * ch.out_dim(), d_rest * ch.out_dim());
  for (const auto& k : ch.kraus()) {
    const Mat lifted = kron(eye, k);
    acc += lifted * moved.matrix() * lifted.adjoint();
  }
  return MultipartiteState::trusted(std::move(acc), std::move(out_layout));
}

Mat stinespring(const QuantumChannel& ch) {
  const long k = ch.choi_rank();
  const long d_in = ch.in_dim(), d_out = ch.out_dim();
  Mat v = Mat::Zero(d_out * k, d_in);
  for (long e = 0; e < k; ++e)
    for (long b = 0; b < d_out; ++b)
      for (long a = 0; a < d_in; ++a) v(b * k + e, a) = ch.kraus()[e](b, a);
  return v;
}

QuantumChannel complementary(const QuantumChannel& ch) {
  if (ch.kind() != ChannelKind::channel)
    throw layout_error("complementary: defined here only for channels");
  const long k = ch.choi_rank();
  const long d_in = ch.in_dim(), d_out = ch.out_dim();
  std::vector<Mat> hat(d_out, Mat::Zero(k, d_in));
  for (long b = 0; b < d_out; ++b)
    for (long e = 0; e < k; ++e)
      for (long a = 0; a < d_in; ++a) hat[b](e, a) = ch.kraus()[e](b, a);
  return QuantumChannel::channel(std::move(hat), ch.in_layout(),
                                 SubsystemLayout{{"E", static_cast<int>(k)}});
}

namespace {

// Joint output/environment state V rho V^dag on [out labels..., "E"].
MultipartiteState dilated_state(const QuantumChannel& ch,
                                const MultipartiteState& rho) {
  const Mat v = stinespring(ch);
  SubsystemLayout layout = ch.out_layout();
  layout.push_back("E", ch.choi_rank());
  return MultipartiteState::trusted(v * rho.matrix() * v.adjoint(), layout);
}

}  // namespace

double channel_mutual_information(const QuantumChannel& ch,
                                  const MultipartiteState& rho) {
  const MultipartiteState pure = purify(rho);
  const std::string anc = pure.layout().label(pure.layout().size() - 1);
  const MultipartiteState out =
      apply_to(ch, pure, rho.layout().labels());
  return mutual_information(out, {ch.out_layout().labels(), {anc}}).value;
}

double channel_mutual_information_entropic(const QuantumChannel& ch,
                                           const MultipartiteState& rho) {
  return von_neumann_entropy(rho) + von_neumann_entropy(apply(ch, rho)) -
         von_neumann_entropy(apply(complementary(ch), rho));
}

double coherent_information(const QuantumChannel& ch,
                            const MultipartiteState& rho) {
  return channel_mutual_information(ch, rho) - von_neumann_entropy(rho);
}

double entropy_gain(const QuantumChannel& ch, const MultipartiteState& rho,
                    GainKind which) {
  if (ch.kind() != ChannelKind::channel)
    throw layout_error("entropy_gain: channel input required");
  const MultipartiteState joint = dilated_state(ch, rho);
  const double mi =
      mutual_information(joint, {ch.out_layout().labels(), {"E"}}).value;
  const double h_env = marginal_entropy(joint, {"E"});
  const double h_out = marginal_entropy(joint, ch.out_layout().labels());
  return which == GainKind::of_channel ? mi - h_env : mi - h_out;
}

QuantumChannel completed_channel(const QuantumChannel& op,
                                 const MultipartiteState& sigma) {
  if (!sigma.is_state())
    throw numeric_error("completed_channel: sigma must be a state");
  const long d_in = op.in_dim(), d_out = op.out_dim();
  const long d_c = sigma.dim();
  const long d_total = d_out + d_c;

  std::vector<Mat> kraus;
  for (const auto& k : op.kraus()) {
    Mat big = Mat::Zero(d_total, d_in);
    big.topRows(d_out) = k;
    kraus.push_back(std::move(big));
  }
  const Mat r = Mat::Identity(d_in, d_in) - op.completeness();
  auto [rvals, rvecs] = hermitian_eig(r);
  auto [svals, svecs] = hermitian_eig(sigma.matrix());
  for (int j = 0; j < rvals.size(); ++j) {
    if (rvals[j] <= tols().eig_floor) continue;
    for (int i = 0; i < svals.size(); ++i) {
      if (svals[i] <= tols().eig_floor) continue;
      Mat big = Mat::Zero(d_total, d_in);
      big.bottomRows(d_c) = std::sqrt(svals[i] * rvals[j]) * svecs.col(i) *
                            rvecs.col(j).adjoint();
      kraus.push_back(std::move(big));
    }
  }
  std::string label;
  for (const auto& l : op.out_layout().labels()) label += l;
  label += "+c";
  return QuantumChannel::channel(
      std::move(kraus), op.in_layout(),
      SubsystemLayout{{label, static_cast<int>(d_total)}});
}

QuantumChannel random_channel(const SubsystemLayout& in,
                              const SubsystemLayout& out, int choi_rank,
                              Rng& rng) {
  if (choi_rank < 1) throw layout_error("random_channel: choi_rank < 1");
  const long d_in = in.total_dim(), d_out = out.total_dim();
  if (choi_rank > d_in * d_out)
    throw layout_error("random_channel: choi_rank too large");
  const Mat v = haar_isometry(rng, d_out * choi_rank, d_in);
  std::vector<Mat> kraus(choi_rank, Mat::Zero(d_out, d_in));
  for (int e = 0; e < choi_rank; ++e)
    for (long b = 0; b < d_out; ++b)
      for (long a = 0; a < d_in; ++a) kraus[e](b, a) = v(b * choi_rank + e, a);
  return QuantumChannel::channel(std::move(kraus), in, out);
}

QuantumChannel random_channel(const SubsystemLayout& in,
                              const SubsystemLayout& out, int choi_rank,
                              std::uint64_t seed) {
  Rng rng(seed);
  return random_channel(in, out, choi_rank, rng);
}

QuantumChannel random_operation(const SubsystemLayout& in,
                                const SubsystemLayout& out, int choi_rank,
                                double t, Rng& rng) {
  if (t <= 0.0 || t > 1.0)
    throw layout_error("random_operation: t must lie in (0, 1]");
  auto ch = random_channel(in, out, choi_rank, rng);
  std::vector<Mat> kraus = ch.kraus();
  for (auto& k : kraus) k *= std::sqrt(t);
  return QuantumChannel::operation(std::move(kraus), in, out);
}

QuantumChannel identity_channel(const SubsystemLayout& layout) {
  const long d = layout.total_dim();
  return QuantumChannel::channel({Mat::Identity(d, d)}, layout, layout);
}

namespace {

struct AscentResult {
  double objective = -kInf;
  Mat l;
  long iterations = 0;
};

// Adaptive-step gradient ascent with central finite differences over the
// real/imaginary parts of L.
AscentResult ascend(const std::function<double(const Mat&)>& f, Mat l,
                    int max_iters) {
  const long d = l.rows(), c = l.cols();
  const int n_params = static_cast<int>(2 * d * c);
  double step = 0.25;
  double best = f(l);
  long iters = 0;
  const double h = 1e-5;
  for (int it = 0; it < max_iters; ++it) {
    ++iters;
    Eigen::VectorXd grad(n_params);
    for (int p = 0; p < n_params; ++p) {
      const long idx = p / 2;
      const bool imag = p % 2;
      Mat lp = l, lm = l;
      const cxd delta = imag ? cxd(0, h) : cxd(h, 0);
      lp(idx % d, idx / d) += delta;
      lm(idx % d, idx / d) -= delta;
      grad[p] = (f(lp) - f(lm)) / (2.0 * h);
    }
    const double gnorm = grad.norm();
    if (gnorm < 1e-9) break;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      Mat cand = l;
      for (int p = 0; p < n_params; ++p) {
        const long idx = p / 2;
        const cxd delta = (p % 2) ? cxd(0, grad[p]) : cxd(grad[p], 0);
        cand(idx % d, idx / d) += (step / gnorm) * delta;
      }
      const double v = f(cand);
      if (v > best + 1e-14) {
        best = v;
        l = cand;
        step *= 1.4;
        improved = true;
        break;
      }
      step *= 0.45;
      if (step < 1e-10) break;
    }
    if (!improved) break;
  }
  return {best, l, iters};
}

}  // namespace

CapacityResult constrained_capacity(const QuantumChannel& ch,
                                    const ConstraintSpec& constraint,
                                    const CapacityOpts& opts) {
  const long d = ch.in_dim();
  if (constraint.F.rows() != d)
    throw layout_error("constrained_capacity: F dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> fes(hermitian_part(constraint.F));
  if (fes.eigenvalues().minCoeff() > constraint.E + tols().constraint)
    throw numeric_error("constrained_capacity: infeasible constraint");

  const auto rho_of = [d](const Mat& l) {
    Mat rho = l * l.adjoint();
    const double tr = rho.trace().real();
    if (tr <= 0.0) return Mat(Mat::Identity(d, d) / double(d));
    return Mat(rho / tr);
  };
  const auto mi_of = [&](const Mat& rho) {
    return channel_mutual_information(
        ch, MultipartiteState::trusted(rho, ch.in_layout()));
  };
  const auto constraint_of = [&](const Mat& rho) {
    return (constraint.F * rho).trace().real();
  };

  struct RestartOut {
    double value = -kInf;
    Mat rho;
    long iterations = 0;
  };
  std::vector<RestartOut> outs(opts.restarts);

  parallel_for(
      opts.restarts,
      [&](int r) {
        Rng rng = Rng::for_task(opts.seed, static_cast<std::uint64_t>(r));
        Mat l = r == 0 ? Mat(Mat::Identity(d, d)) : ginibre(rng, d, d);
        double mu = 64.0;
        AscentResult res;
        long total_iters = 0;
        for (int round = 0; round < 4; ++round) {
          const auto f = [&](const Mat& m) {
            const Mat rho = rho_of(m);
            const double excess =
                std::max(0.0, constraint_of(rho) - constraint.E);
            return mi_of(rho) - mu * excess * excess;
          };
          res = ascend(f, l, opts.max_iters);
          total_iters += res.iterations;
          l = res.l;
          const Mat rho = rho_of(l);
          if (constraint_of(rho) <= constraint.E + tols().constraint) break;
          mu *= 16.0;
        }
        Mat rho = rho_of(l);
        // Final feasibility projection: mix toward the minimal-F eigenstate.
        if (constraint_of(rho) > constraint.E) {
          const Vec ground = fes.eigenvectors().col(0);
          const Mat floor_state = ground * ground.adjoint();
          const double fr = constraint_of(rho);
          const double ff = fes.eigenvalues().minCoeff();
          if (fr > ff) {
            double t = (fr - constraint.E) / (fr - ff);
            t = std::min(1.0, std::max(0.0, t));
            rho = (1.0 - t) * rho + t * floor_state;
          }
        }
        outs[r] = {mi_of(rho), rho, total_iters};
      },
      opts.threads);

  CapacityResult result;
  for (const auto& o : outs) {
    result.best_per_restart.push_back(o.value);
    result.iterations += o.iterations;
    if (o.value > result.value) {
      result.value = o.value;
      result.argmax = o.rho;
    }
  }
  result.constraint_value = (constraint.F * result.argmax).trace().real();
  return result;
}

}  // namespace qcorr
