#include "qcorr/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "qcorr/parallel.hpp"

namespace qcorr {

namespace {

double g_of(double eps) {
  return (1.0 + eps) * binary_entropy(eps / (1.0 + eps));
}

double min_log(const std::vector<int>& dims) {
  double best = kInf;
  for (int d : dims) best = std::min(best, std::log(double(d)));
  return best;
}

double sum_log(const std::vector<int>& dims) {
  double s = 0.0;
  for (int d : dims) s += std::log(double(d));
  return s;
}

// Product log-dim with the largest factor dropped (the infinite-dimensional
// slot in the n-1 finite-systems corollaries).
double sum_log_drop_max(const std::vector<int>& dims) {
  double s = 0.0, mx = 0.0;
  for (int d : dims) {
    s += std::log(double(d));
    mx = std::max(mx, std::log(double(d)));
  }
  return s - mx;
}

}  // namespace

double generic_bound(const BoundSpec& spec, double eps) {
  if (eps < 0.0 || eps >= 1.0)
    throw numeric_error("generic_bound: eps must lie in [0, 1)");
  double mass = combo_sum_abs(spec.combo);
  if (spec.curvature == Curvature::concave) mass = combo_sum_pos(spec.combo);
  if (spec.curvature == Curvature::convex) mass = combo_sum_neg(spec.combo);
  return eps * spec.sup_range + g_of(eps) * mass;
}

double specialized_bound(BoundKind kind, const std::vector<int>& dims,
                         double eps) {
  if (eps < 0.0 || eps >= 1.0)
    throw numeric_error("specialized_bound: eps must lie in [0, 1)");
  if (dims.empty()) throw layout_error("specialized_bound: no dims");
  const double g = g_of(eps);
  const int n = static_cast<int>(dims.size());
  switch (kind) {
    case BoundKind::entropy:
      return eps * min_log(dims) + g;
    case BoundKind::conditional_entropy:
      return 2.0 * eps * min_log(dims) + g;
    case BoundKind::mi:
      return 2.0 * eps * min_log(dims) + 3.0 * g;
    case BoundKind::cmi:
      return 2.0 * eps * min_log(dims) + 4.0 * g;
    case BoundKind::mi_multipartite:
      return 2.0 * eps * sum_log_drop_max(dims) + (n + 1) * g;
    case BoundKind::cmi_multipartite:
    case BoundKind::secrecy:
      return 2.0 * eps * sum_log_drop_max(dims) + 2.0 * n * g;
    case BoundKind::info_gap:
      return 2.0 * eps * sum_log(dims) + 2.0 * (n + 1) * g;
    case BoundKind::interaction:
      return std::pow(2.0, n) * eps * min_log(dims) +
             (std::pow(2.0, n) - 1.0) * g;
    case BoundKind::entropy_gain:
      return 2.0 * eps * min_log(dims) + g;
  }
  throw layout_error("specialized_bound: unknown kind");
}

std::string bound_kind_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::entropy: return "entropy";
    case BoundKind::conditional_entropy: return "conditional-entropy";
    case BoundKind::mi: return "mi";
    case BoundKind::mi_multipartite: return "mi-multipartite";
    case BoundKind::cmi: return "cmi";
    case BoundKind::cmi_multipartite: return "cmi-multipartite";
    case BoundKind::secrecy: return "secrecy";
    case BoundKind::info_gap: return "info-gap";
    case BoundKind::interaction: return "interaction";
    case BoundKind::entropy_gain: return "entropy-gain";
  }
  return "unknown";
}

WinterInterpolation winter_interpolation(const MultipartiteState& w1,
                                         const MultipartiteState& w2) {
  if (w1.layout() != w2.layout())
    throw layout_error("winter_interpolation: layout mismatch");
  const Mat diff = w2.matrix() - w1.matrix();
  const double eps = 0.5 * trace_norm(diff);
  if (eps <= tols().zero)
    throw numeric_error("winter_interpolation: degenerate pair (eps = 0)");
  if (eps >= 1.0 - 1e-12)
    throw numeric_error("winter_interpolation: eps = 1 boundary rejected");
  const Mat plus = positive_part(diff);
  Mat star = (w1.matrix() + plus) / (1.0 + eps);
  Mat t1 = plus / eps;
  Mat t2 = ((1.0 + eps) * star - w2.matrix()) / eps;
  return {MultipartiteState::trusted(std::move(star), w1.layout()),
          MultipartiteState::trusted(std::move(t1), w1.layout()),
          MultipartiteState::trusted(std::move(t2), w1.layout()), eps};
}

BoundReport verify_bound(BoundKind kind, const StatePairSampler& sampler,
                         const MeasureFn& measure,
                         const std::vector<int>& bound_dims, int n_pairs,
                         std::uint64_t seed, int threads) {
  BoundReport report;
  report.kind = kind;
  report.rows.resize(n_pairs);
  parallel_for(
      n_pairs,
      [&](int i) {
        Rng rng = Rng::for_task(seed, static_cast<std::uint64_t>(i));
        const std::uint64_t task_seed = seed ^ (0x9E3779B97F4A7C15ull * (i + 1));
        auto [w1, w2] = sampler(rng);
        const double eps = trace_distance_half(w1, w2);
        const double df = std::abs(measure(w1) - measure(w2));
        const double bound =
            eps >= 1.0 ? kInf : specialized_bound(kind, bound_dims, eps);
        double ratio = 0.0;
        if (df > tols().zero)
          ratio = bound > 0.0 ? df / bound : kInf;
        report.rows[i] = {task_seed, eps, df, bound, ratio};
      },
      threads);
  for (const auto& r : report.rows) {
    report.max_ratio = std::max(report.max_ratio, r.ratio);
    if (!(r.delta_f <= r.bound + tols().bound)) report.pass = false;
  }
  return report;
}

BoundReport verify_bound_default(BoundKind kind, int d, int n_pairs,
                                 std::uint64_t seed, int threads) {
  SubsystemLayout layout;
  std::vector<int> dims;
  MeasureFn measure;
  Partition parts;

  switch (kind) {
    case BoundKind::entropy:
      layout = SubsystemLayout{{"A", d}};
      dims = {d};
      measure = [](const MultipartiteState& s) {
        return von_neumann_entropy(s);
      };
      break;
    case BoundKind::conditional_entropy:
      layout = SubsystemLayout{{"A", d}, {"B", d}};
      dims = {d};
      measure = [](const MultipartiteState& s) {
        return conditional_entropy_ext(s, {"A"}, {"B"});
      };
      break;
    case BoundKind::mi:
      layout = SubsystemLayout{{"A", d}, {"B", d}};
      dims = {d, d};
      measure = [](const MultipartiteState& s) {
        return mutual_information(s, {{"A"}, {"B"}}).value;
      };
      break;
    case BoundKind::mi_multipartite:
      layout = SubsystemLayout{{"A", d}, {"B", d}, {"C", d}};
      dims = {d, d, d};
      measure = [](const MultipartiteState& s) {
        return mutual_information(s, {{"A"}, {"B"}, {"C"}}).value;
      };
      break;
    case BoundKind::cmi:
      layout = SubsystemLayout{{"A", d}, {"B", d}, {"C", d}};
      dims = {d, d};
      measure = [](const MultipartiteState& s) {
        return cmi(s, {"A"}, {"C"}, {"B"}).value;
      };
      break;
    case BoundKind::cmi_multipartite:
      layout = SubsystemLayout{{"A", d}, {"B", d}, {"C", d}, {"D", d}};
      dims = {d, d, d};
      measure = [](const MultipartiteState& s) {
        return cmi_multipartite(s, {{"A"}, {"B"}, {"C"}}, {"D"}).value;
      };
      break;
    case BoundKind::secrecy:
      layout = SubsystemLayout{{"A", d}, {"B", d}, {"C", d}};
      dims = {d, d, d};
      measure = [](const MultipartiteState& s) {
        return secrecy_monotone(s, {{"A"}, {"B"}, {"C"}}, {}).value;
      };
      break;
    case BoundKind::info_gap:
      layout = SubsystemLayout{{"A", d}, {"Ap", d}, {"B", d}, {"Bp", d}};
      dims = {d, d};
      measure = [](const MultipartiteState& s) {
        return information_gap(s, {{"A"}, {"B"}}, {{"Ap"}, {"Bp"}}).value;
      };
      break;
    case BoundKind::interaction:
      layout = SubsystemLayout{{"A", d}, {"B", d}, {"C", d}};
      dims = {d, d, d};
      measure = [](const MultipartiteState& s) {
        return interaction_information(s, {{"A"}, {"B"}, {"C"}}).value;
      };
      break;
    case BoundKind::entropy_gain:
      throw layout_error(
          "verify_bound_default: entropy_gain needs a channel sampler");
  }

  const long total = layout.total_dim();
  StatePairSampler sampler = [layout, total](Rng& rng) {
    const int r1 = rng.uniform_int(static_cast<int>(total)) + 1;
    const int r2 = rng.uniform_int(static_cast<int>(total)) + 1;
    auto w1 = random_state(layout, r1, rng);
    auto w2 = random_state(layout, r2, rng);
    return std::make_pair(std::move(w1), std::move(w2));
  };
  return verify_bound(kind, sampler, measure, dims, n_pairs, seed, threads);
}

}  // namespace qcorr
