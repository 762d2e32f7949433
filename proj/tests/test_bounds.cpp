#include <doctest.h>

#include <cmath>

#include "qcorr/bounds.hpp"
#include "test_helpers.hpp"

using namespace qcorr;
using namespace qcorr::testing;

namespace {

// Independent arithmetic for (1+eps) h2(eps/(1+eps)), used to freeze the
// specialized-bound values.
double g_oracle(double eps) {
  const double x = eps / (1.0 + eps);
  return (1.0 + eps) * (-(x)*std::log(x) - (1.0 - x) * std::log(1.0 - x));
}

}  // namespace

TEST_CASE("generic bound") {
  BoundSpec entropy_spec{{{1.0, {"A"}}}, std::log(2.0), Curvature::concave};
  CHECK(generic_bound(entropy_spec, 0.0) == doctest::Approx(0.0));

  // Entropy combo reproduces eps ln d + (1+eps) h2(eps/(1+eps)).
  for (double eps : {0.1, 0.3, 0.7}) {
    CHECK(generic_bound(entropy_spec, eps) ==
          doctest::Approx(eps * std::log(2.0) + g_oracle(eps))
              .epsilon(1e-12));
  }

  // Conditional-entropy combo {(1, AB), (-1, B)} with range 2 ln d and the
  // concave refinement reproduces 2 eps ln d + (1+eps) h2(...).
  BoundSpec cond_spec{{{1.0, {"A", "B"}}, {-1.0, {"B"}}},
                      2.0 * std::log(2.0),
                      Curvature::concave};
  for (double eps : {0.2, 0.5}) {
    CHECK(generic_bound(cond_spec, eps) ==
          doctest::Approx(2.0 * eps * std::log(2.0) + g_oracle(eps))
              .epsilon(1e-12));
  }

  CHECK_THROWS_AS(generic_bound(entropy_spec, 1.0), numeric_error);
  CHECK_THROWS_AS(generic_bound(entropy_spec, -0.1), numeric_error);

  // Refinement never exceeds the unrefined bound.
  BoundSpec plain = cond_spec;
  plain.curvature = Curvature::neither;
  for (double eps : {0.1, 0.4, 0.8})
    CHECK(generic_bound(cond_spec, eps) <= generic_bound(plain, eps) + 1e-13);
}

TEST_CASE("specialized bounds, frozen arithmetic") {
  for (auto kind : {BoundKind::entropy, BoundKind::mi, BoundKind::cmi,
                    BoundKind::secrecy, BoundKind::interaction}) {
    CHECK(specialized_bound(kind, {2, 2, 2}, 0.0) == doctest::Approx(0.0));
  }

  // CMI bound, d_A = 2, eps = 0.5: 2*0.5*ln2 + 4*1.5*h2(1/3).
  const double cmi_expect = std::log(2.0) + 4.0 * g_oracle(0.5);
  CHECK(specialized_bound(BoundKind::cmi, {2}, 0.5) ==
        doctest::Approx(cmi_expect).epsilon(1e-12));
  CHECK(cmi_expect == doctest::Approx(4.5122321903288245).epsilon(1e-12));

  // Conditional-entropy bound, d_A = 2, eps = 0.5: ln2 + 1.5*h2(1/3).
  const double cond_expect = std::log(2.0) + g_oracle(0.5);
  CHECK(specialized_bound(BoundKind::conditional_entropy, {2}, 0.5) ==
        doctest::Approx(cond_expect).epsilon(1e-12));
  CHECK(cond_expect == doctest::Approx(1.6479184330021651).epsilon(1e-12));

  // MI bound: 2 eps ln d + 3 g.
  CHECK(specialized_bound(BoundKind::mi, {2}, 0.25) ==
        doctest::Approx(0.5 * std::log(2.0) + 3.0 * g_oracle(0.25))
            .epsilon(1e-12));

  // Interaction bound with n = 3: 8 eps ln d + 7 g.
  CHECK(specialized_bound(BoundKind::interaction, {2, 2, 2}, 0.25) ==
        doctest::Approx(8.0 * 0.25 * std::log(2.0) + 7.0 * g_oracle(0.25))
            .epsilon(1e-12));

  CHECK_THROWS_AS(specialized_bound(BoundKind::mi, {2}, 1.0), numeric_error);
}

TEST_CASE("winter interpolation") {
  const SubsystemLayout qa{{"A", 2}};
  // Scalar oracle: diag(0.6, 0.4) vs diag(0.4, 0.6).
  const auto w1 = diag_state({0.6, 0.4}, qa);
  const auto w2 = diag_state({0.4, 0.6}, qa);
  const auto wi = winter_interpolation(w1, w2);
  CHECK(wi.epsilon == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::abs(wi.omega_star.matrix()(0, 0) - cxd(0.5)) < 1e-12);
  CHECK(std::abs(wi.omega_star.matrix()(1, 1) - cxd(0.5)) < 1e-12);
  CHECK(std::abs(wi.w1_tilde.matrix()(1, 1) - cxd(1.0)) < 1e-12);

  // Orthogonal pure states hit the eps = 1 boundary.
  CHECK_THROWS_AS(
      winter_interpolation(basis_state(0, qa), basis_state(1, qa)),
      numeric_error);
  // Identical pair is degenerate.
  CHECK_THROWS_AS(winter_interpolation(w1, w1), numeric_error);

  // Reconstruction residuals on random pairs.
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const auto layout = qubits({"A", "B"});
    const auto a = random_state(layout, 4, rng);
    const auto b = random_state(layout, 3, rng);
    const auto w = winter_interpolation(a, b);
    const double e = w.epsilon;
    const double r1 = ((a.matrix() + e * w.w1_tilde.matrix()) / (1.0 + e) -
                       w.omega_star.matrix())
                          .cwiseAbs()
                          .maxCoeff();
    const double r2 = ((b.matrix() + e * w.w2_tilde.matrix()) / (1.0 + e) -
                       w.omega_star.matrix())
                          .cwiseAbs()
                          .maxCoeff();
    CHECK(r1 < 1e-12);
    CHECK(r2 < 1e-12);
    CHECK(w.w1_tilde.trace_weight() == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(w.w2_tilde.trace_weight() == doctest::Approx(1.0).epsilon(1e-11));
  }
}

TEST_CASE("verify_bound") {
  // Identical-pair sampler: zero ratios, PASS.
  const auto layout = qubits({"A", "B"});
  StatePairSampler same = [layout](Rng& rng) {
    const auto s = random_state(layout, 3, rng);
    return std::make_pair(s, s);
  };
  const auto id_report = verify_bound(
      BoundKind::mi, same,
      [](const MultipartiteState& s) {
        return mutual_information(s, {{"A"}, {"B"}}).value;
      },
      {2}, 20, 7);
  CHECK(id_report.pass);
  CHECK(id_report.max_ratio == doctest::Approx(0.0));

  // Bell vs its product of marginals: both sides computed directly.
  StatePairSampler bell_pair = [layout](Rng&) {
    return std::make_pair(bell(), maximally_mixed(layout));
  };
  const auto bell_report = verify_bound(
      BoundKind::mi, bell_pair,
      [](const MultipartiteState& s) {
        return mutual_information(s, {{"A"}, {"B"}}).value;
      },
      {2}, 1, 7);
  CHECK(bell_report.pass);
  CHECK(bell_report.rows[0].delta_f ==
        doctest::Approx(2.0 * kLn2).epsilon(1e-10));
  CHECK(bell_report.rows[0].epsilon == doctest::Approx(0.75).epsilon(1e-10));

  // Monte Carlo sweep across every default kind at d = 2.
  for (auto kind : {BoundKind::entropy, BoundKind::conditional_entropy,
                    BoundKind::mi, BoundKind::cmi, BoundKind::secrecy,
                    BoundKind::interaction, BoundKind::info_gap}) {
    const auto report = verify_bound_default(kind, 2, 60, 11);
    CHECK(report.pass);
  }
}
