#include "qcorr/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qcorr {

namespace {

LabelSet join(const LabelSet& a, const LabelSet& b) {
  LabelSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

LabelSet join_cells(const Partition& cells, int first, int last_exclusive) {
  LabelSet out;
  for (int i = first; i < last_exclusive; ++i)
    out.insert(out.end(), cells[i].begin(), cells[i].end());
  return out;
}

void require_disjoint(const Partition& cells, const LabelSet& extra = {}) {
  std::set<std::string> seen(extra.begin(), extra.end());
  if (seen.size() != extra.size())
    throw layout_error("partition: repeated label");
  for (const auto& cell : cells) {
    if (cell.empty()) throw layout_error("partition: empty cell");
    for (const auto& l : cell)
      if (!seen.insert(l).second)
        throw layout_error("partition: overlapping cells at label " + l);
  }
}

}  // namespace

double combo_sum_abs(const EntropicCombo& c) {
  double s = 0.0;
  for (const auto& t : c) s += std::abs(t.alpha);
  return s;
}

double combo_sum_pos(const EntropicCombo& c) {
  double s = 0.0;
  for (const auto& t : c) s += t.alpha > 0.0 ? t.alpha : 0.0;
  return s;
}

double combo_sum_neg(const EntropicCombo& c) {
  double s = 0.0;
  for (const auto& t : c) s += t.alpha < 0.0 ? -t.alpha : 0.0;
  return s;
}

double von_neumann_entropy(const MultipartiteState& s) {
  const RVec spec = cleaned_spectrum(s.matrix());
  double h = 0.0;
  for (int i = 0; i < spec.size(); ++i) h += eta(spec[i]);
  return h - eta(s.trace_weight());
}

double marginal_entropy(const MultipartiteState& s, const LabelSet& labels) {
  if (labels.empty()) return 0.0;
  return von_neumann_entropy(partial_trace(s, labels));
}

double combo_value(const MultipartiteState& s, const EntropicCombo& combo) {
  double v = 0.0;
  for (const auto& t : combo) v += t.alpha * marginal_entropy(s, t.subsystems);
  return v;
}

MeasureValue relative_entropy(const MultipartiteState& r,
                              const MultipartiteState& s) {
  if (r.layout() != s.layout())
    throw layout_error("relative_entropy: layout mismatch");

  auto [svals, svecs] = hermitian_eig(s.matrix());
  const Mat& rho = r.matrix();

  // Evaluate in the eigenbasis of sigma; the mass of rho outside
  // supp sigma decides finite vs infinite.
  double rho_on_supp = 0.0;
  double cross = 0.0;  // Tr rho log sigma restricted to supp sigma
  for (int j = 0; j < svals.size(); ++j) {
    if (svals[j] <= tols().eig_floor) continue;
    const double pj = std::max(0.0, (svecs.col(j).adjoint() * rho * svecs.col(j))(0, 0).real());
    rho_on_supp += pj;
    cross += pj * std::log(svals[j]);
  }
  const double leakage = r.trace_weight() - rho_on_supp;
  if (leakage > tols().supp) return {kInf, "relative-entropy"};

  const RVec rvals = cleaned_spectrum(rho);
  double rho_log_rho = 0.0;
  for (int i = 0; i < rvals.size(); ++i)
    if (rvals[i] > tols().eig_floor) rho_log_rho += rvals[i] * std::log(rvals[i]);

  const double value =
      rho_log_rho - cross + s.trace_weight() - r.trace_weight();
  return {value, "relative-entropy"};
}

MeasureValue mutual_information(const MultipartiteState& s,
                                const Partition& partition) {
  require_disjoint(partition);
  const int n = static_cast<int>(partition.size());
  if (n == 0) throw layout_error("mutual_information: empty partition");
  if (n == 1) return {0.0, "relative-entropy"};

  const LabelSet all = join_cells(partition, 0, n);
  const MultipartiteState joint = marginal(s, all);
  MultipartiteState prod = marginal(s, partition[0]);
  for (int i = 1; i < n; ++i)
    prod = tensor_product(prod, marginal(s, partition[i]));

  const double tr = joint.trace_weight();
  Mat ref = prod.matrix() / std::pow(tr, n - 1);
  const auto sigma = MultipartiteState::trusted(std::move(ref), prod.layout());
  MeasureValue v = relative_entropy(joint, sigma);
  if (!v.is_infinite() && v.value < 0.0) v.value = 0.0;
  return {v.value, "relative-entropy"};
}

double conditional_entropy_ext(const MultipartiteState& s, const LabelSet& a,
                               const LabelSet& b) {
  const double ha = marginal_entropy(s, a);
  if (b.empty()) return ha;
  return ha - mutual_information(s, {a, b}).value;
}

MeasureValue cmi(const MultipartiteState& s, const LabelSet& a,
                 const LabelSet& c, const LabelSet& b, CmiFormula formula) {
  require_disjoint({a, c}, b);
  switch (formula) {
    case CmiFormula::direct: {
      if (b.empty()) {
        const double v = marginal_entropy(s, a) + marginal_entropy(s, c) -
                         marginal_entropy(s, join(a, c));
        return {v, "direct"};
      }
      const double v = marginal_entropy(s, join(a, b)) +
                       marginal_entropy(s, join(b, c)) -
                       marginal_entropy(s, join(join(a, b), c)) -
                       marginal_entropy(s, b);
      return {v, "direct"};
    }
    case CmiFormula::via_ab: {
      const double v = mutual_information(s, {a, join(b, c)}).value -
                       (b.empty() ? 0.0 : mutual_information(s, {a, b}).value);
      return {v, "via_ab"};
    }
    case CmiFormula::via_cb: {
      const double v = mutual_information(s, {join(a, b), c}).value -
                       (b.empty() ? 0.0 : mutual_information(s, {b, c}).value);
      return {v, "via_cb"};
    }
    case CmiFormula::four_mi: {
      double v = mutual_information(s, {a, c}).value;
      if (!b.empty()) {
        v -= mutual_information(s, {a, b}).value;
        v -= mutual_information(s, {c, b}).value;
        v += mutual_information(s, {join(a, c), b}).value;
      }
      return {v, "four_mi"};
    }
    case CmiFormula::purified: {
      const LabelSet abc = join(join(a, b), c);
      const MultipartiteState m = marginal(s, abc);
      if (!m.is_state())
        throw numeric_error("cmi purified: requires a unit-trace state");
      const MultipartiteState pure = purify(m);
      const LabelSet d = {pure.layout().label(pure.layout().size() - 1)};
      double v = mutual_information(pure, {a, c}).value +
                 mutual_information(pure, {join(a, b), d}).value +
                 mutual_information(pure, {join(b, c), d}).value +
                 mutual_information(pure, {join(a, c), d}).value -
                 4.0 * von_neumann_entropy(m);
      return {v, "purified"};
    }
  }
  throw layout_error("cmi: unknown formula");
}

MeasureValue cmi_multipartite_perm(const MultipartiteState& s,
                                   const Partition& parts, const LabelSet& b,
                                   const std::vector<int>& perm) {
  require_disjoint(parts, b);
  if (perm.size() != parts.size())
    throw layout_error("cmi_multipartite: bad permutation");
  Partition ordered;
  for (int i : perm) ordered.push_back(parts.at(i));
  double v = 0.0;
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    const LabelSet prior = join_cells(ordered, 0, static_cast<int>(i));
    v += cmi(s, ordered[i], prior, b).value;
  }
  return {v, "chain"};
}

MeasureValue cmi_multipartite(const MultipartiteState& s,
                              const Partition& parts, const LabelSet& b) {
  std::vector<int> perm(parts.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  return cmi_multipartite_perm(s, parts, b, perm);
}

double cmi_multipartite_direct(const MultipartiteState& s,
                               const Partition& parts, const LabelSet& b) {
  require_disjoint(parts, b);
  const int n = static_cast<int>(parts.size());
  double v = 0.0;
  for (const auto& p : parts) v += marginal_entropy(s, join(p, b));
  v -= marginal_entropy(s, join(join_cells(parts, 0, n), b));
  v -= (n - 1) * marginal_entropy(s, b);
  return v;
}

MeasureValue secrecy_monotone(const MultipartiteState& s,
                              const Partition& parts, const LabelSet& b) {
  require_disjoint(parts, b);
  const int n = static_cast<int>(parts.size());
  double v = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const LabelSet rest = join_cells(parts, i + 1, n);
    const LabelSet cond = join(join_cells(parts, 0, i), b);
    v += cmi(s, parts[i], rest, cond).value;
  }
  return {v, "chain"};
}

double secrecy_monotone_direct(const MultipartiteState& s,
                               const Partition& parts, const LabelSet& b) {
  require_disjoint(parts, b);
  const int n = static_cast<int>(parts.size());
  double v = 0.0;
  for (int i = 0; i < n; ++i) {
    LabelSet complement;
    for (int j = 0; j < n; ++j)
      if (j != i)
        complement.insert(complement.end(), parts[j].begin(), parts[j].end());
    v += marginal_entropy(s, join(complement, b));
  }
  v -= (n - 1) * marginal_entropy(s, join(join_cells(parts, 0, n), b));
  v -= marginal_entropy(s, b);
  return v;
}

MeasureValue interaction_information(const MultipartiteState& s,
                                     const Partition& parts) {
  require_disjoint(parts);
  const int n = static_cast<int>(parts.size());
  if (n == 0) throw layout_error("interaction_information: empty parts");
  double v = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    LabelSet sub;
    int bits = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        sub.insert(sub.end(), parts[i].begin(), parts[i].end());
        ++bits;
      }
    const double sign = (bits % 2 == 1) ? 1.0 : -1.0;
    v += sign * marginal_entropy(s, sub);
  }
  return {v, "alternating-sum"};
}

double interaction_information_pivot(const MultipartiteState& s,
                                     const Partition& parts, int pivot) {
  require_disjoint(parts);
  const int n = static_cast<int>(parts.size());
  if (pivot < 0 || pivot >= n)
    throw layout_error("interaction_information_pivot: bad pivot");
  std::vector<int> others;
  for (int i = 0; i < n; ++i)
    if (i != pivot) others.push_back(i);
  double v = marginal_entropy(s, parts[pivot]);
  const int m = static_cast<int>(others.size());
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    LabelSet cond;
    int bits = 0;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) {
        const auto& cell = parts[others[i]];
        cond.insert(cond.end(), cell.begin(), cell.end());
        ++bits;
      }
    const double sign = (bits % 2 == 1) ? -1.0 : 1.0;
    v += sign * conditional_entropy_ext(s, parts[pivot], cond);
  }
  return v;
}

namespace {

void require_pairing(const Partition& unprimed, const Partition& primed) {
  if (unprimed.size() != primed.size() || unprimed.empty())
    throw layout_error("information_gap: pairing mismatch");
  Partition all = unprimed;
  all.insert(all.end(), primed.begin(), primed.end());
  require_disjoint(all);
}

}  // namespace

MeasureValue information_gap(const MultipartiteState& s,
                             const Partition& unprimed,
                             const Partition& primed) {
  require_pairing(unprimed, primed);
  const int n = static_cast<int>(unprimed.size());
  if (n == 1)
    return {mutual_information(s, {unprimed[0], primed[0]}).value, "direct"};
  Partition pairs;
  for (int i = 0; i < n; ++i) pairs.push_back(join(unprimed[i], primed[i]));
  const double v = mutual_information(s, pairs).value -
                   mutual_information(s, primed).value;
  return {v, "direct"};
}

MeasureValue information_gap_chain(const MultipartiteState& s,
                                   const Partition& unprimed,
                                   const Partition& primed) {
  require_pairing(unprimed, primed);
  const int n = static_cast<int>(unprimed.size());
  if (n == 1)
    return {cmi(s, unprimed[0], primed[0], {}).value, "chain"};
  double v = cmi(s, unprimed[0], join_cells(primed, 1, n), primed[0]).value;
  for (int i = 1; i < n; ++i) {
    LabelSet other = join_cells(unprimed, 0, i);
    for (int j = 0; j < n; ++j)
      if (j != i)
        other.insert(other.end(), primed[j].begin(), primed[j].end());
    v += cmi(s, unprimed[i], other, primed[i]).value;
  }
  return {v, "chain"};
}

double conditional_combo_difference(const MultipartiteState& s,
                                    const EntropicCombo& combo,
                                    const LabelSet& b) {
  double v = 0.0;
  for (const auto& t : combo) {
    for (const auto& l : t.subsystems)
      if (std::find(b.begin(), b.end(), l) != b.end())
        throw layout_error("conditional_combo_difference: overlap on " + l);
    v -= t.alpha * mutual_information(s, {t.subsystems, b}).value;
  }
  return v;
}

double reduced_combo_difference(const MultipartiteState& s,
                                const EntropicCombo& combo,
                                const std::string& drop_label) {
  if (!s.layout().contains(drop_label))
    throw layout_error("reduced_combo_difference: unknown label " + drop_label);
  double v = 0.0;
  for (const auto& t : combo) {
    if (std::find(t.subsystems.begin(), t.subsystems.end(), drop_label) ==
        t.subsystems.end())
      continue;
    LabelSet rest;
    for (const auto& l : t.subsystems)
      if (l != drop_label) rest.push_back(l);
    v -= t.alpha * conditional_entropy_ext(s, {drop_label}, rest);
  }
  return v;
}

double measure_upper_bound(const MultipartiteState& s, MeasureBound which,
                           const Partition& parts, const LabelSet& b) {
  const int n = static_cast<int>(parts.size());
  switch (which) {
    case MeasureBound::mi_bipartite: {
      if (n != 2) throw layout_error("mi bound needs two parts");
      return 2.0 * std::min(marginal_entropy(s, parts[0]),
                            marginal_entropy(s, parts[1]));
    }
    case MeasureBound::mi_multipartite:
    case MeasureBound::secrecy: {
      std::vector<double> h(n);
      for (int i = 0; i < n; ++i) h[i] = marginal_entropy(s, parts[i]);
      double best = kInf;
      for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
          if (i != j) sum += h[i];
        best = std::min(best, sum);
      }
      return 2.0 * best;
    }
    case MeasureBound::cmi_tripartite: {
      if (n != 2) throw layout_error("cmi bound needs parts {A, C}");
      const LabelSet& a = parts[0];
      const LabelSet& c = parts[1];
      LabelSet ab = a, bc = b, abc = a, ac = a;
      ab.insert(ab.end(), b.begin(), b.end());
      bc.insert(bc.end(), c.begin(), c.end());
      abc.insert(abc.end(), b.begin(), b.end());
      abc.insert(abc.end(), c.begin(), c.end());
      ac.insert(ac.end(), c.begin(), c.end());
      const double iac = mutual_information(s, {a, c}).value;
      double best = std::min({2.0 * marginal_entropy(s, a),
                              2.0 * marginal_entropy(s, c),
                              2.0 * marginal_entropy(s, ab),
                              2.0 * marginal_entropy(s, bc)});
      best = std::min(best, 2.0 * marginal_entropy(s, b) + iac);
      best = std::min(best, 2.0 * marginal_entropy(s, abc) + iac);
      return best;
    }
    case MeasureBound::cmi_multipartite: {
      std::vector<double> h(n);
      for (int i = 0; i < n; ++i) {
        LabelSet cell_b = parts[i];
        cell_b.insert(cell_b.end(), b.begin(), b.end());
        h[i] = std::min(marginal_entropy(s, parts[i]),
                        marginal_entropy(s, cell_b));
      }
      double best = kInf;
      for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
          if (i != j) sum += h[i];
        best = std::min(best, sum);
      }
      return 2.0 * best;
    }
    case MeasureBound::interaction: {
      double hmin = kInf;
      for (const auto& p : parts)
        hmin = std::min(hmin, marginal_entropy(s, p));
      return std::pow(2.0, n - 1) * hmin;
    }
    case MeasureBound::info_gap: {
      double sum = 0.0;
      for (const auto& p : parts) sum += marginal_entropy(s, p);
      return 2.0 * sum;
    }
  }
  throw layout_error("measure_upper_bound: unknown kind");
}

std::pair<double, double> pure_tripartite_identity_check(
    const MultipartiteState& s, const LabelSet& a, const LabelSet& b,
    const LabelSet& c) {
  const RVec spec = cleaned_spectrum(s.matrix());
  if (spec.maxCoeff() < s.trace_weight() - 1e-8)
    throw numeric_error("pure_tripartite_identity_check: input is not rank-1");
  const double lhs = mutual_information(s, {a, b}).value +
                     mutual_information(s, {b, c}).value;
  const double rhs = 2.0 * marginal_entropy(s, b);
  return {lhs, rhs};
}

std::pair<double, double> pure_tripartite_identity_check(
    const MultipartiteState& s) {
  if (s.layout().size() != 3)
    throw layout_error("pure_tripartite_identity_check: need three factors");
  return pure_tripartite_identity_check(s, {s.layout().label(0)},
                                        {s.layout().label(1)},
                                        {s.layout().label(2)});
}

}  // namespace qcorr
