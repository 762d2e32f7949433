#include <doctest.h>

#include <cmath>

#include "qcorr/extension.hpp"
#include "test_helpers.hpp"

using namespace qcorr;
using namespace qcorr::testing;

TEST_CASE("truncation schemes validate") {
  TruncationScheme bad;
  bad.per_label["A"] = {SchemeKind::spectral, {1, 1, 2}, 0};
  CHECK_THROWS_AS(bad.validate(qubits({"A", "B"})), layout_error);

  TruncationScheme short_end;
  short_end.per_label["A"] = {SchemeKind::spectral, {1}, 0};
  CHECK_THROWS_AS(short_end.validate(qubits({"A", "B"})), layout_error);

  TruncationScheme ok;
  ok.per_label["A"] = {SchemeKind::basis, {1, 2}, 0};
  CHECK_NOTHROW(ok.validate(qubits({"A", "B"})));
}

TEST_CASE("faithfulness sweep") {
  // Full-rank-only scheme: single point, zero gap.
  const auto g = ghz();
  TruncationScheme full;
  full.per_label["A"] = {SchemeKind::spectral, {2}, 0};
  const auto mi_fn = [](const MultipartiteState& s) {
    return mutual_information(s, {{"A"}, {"B", "C"}}).value;
  };
  const auto res = faithfulness_sweep(g, mi_fn, full);
  CHECK(res.points.size() == 1);
  CHECK(res.final_gap == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(res.converged);

  // Bell under spectral ranks (1,2) on A: rank-1 truncation collapses the
  // state to |00><00| (MI 0), rank 2 restores 2 ln2.
  TruncationScheme spec;
  spec.per_label["A"] = {SchemeKind::spectral, {1, 2}, 0};
  const auto bell_mi = [](const MultipartiteState& s) {
    return mutual_information(s, {{"A"}, {"B"}}).value;
  };
  const auto bres = faithfulness_sweep(bell(), bell_mi, spec);
  CHECK(bres.points.size() == 2);
  CHECK(bres.points[0].value == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(bres.points[0].lambda == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bres.points[1].value ==
        doctest::Approx(2.0 * kLn2).epsilon(1e-10));
  CHECK(bres.converged);

  // Lambda is nondecreasing along nested spectral refinement.
  Rng rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    const auto s = random_state(qubits({"A", "B", "C"}), 6, rng);
    TruncationScheme sch;
    sch.per_label["A"] = {SchemeKind::spectral, {1, 2}, 0};
    sch.per_label["B"] = {SchemeKind::random_subspace, {1, 2}, rng.next_u64()};
    const auto r = faithfulness_sweep(s, mi_fn, sch);
    CHECK(r.points[0].lambda <= r.points[1].lambda + 1e-12);
    CHECK(r.converged);
  }
}

TEST_CASE("marginal entropy convergence") {
  // Pure marginal stays zero along the sweep.
  const auto prod = tensor_product(basis_state(0, qubits({"A"})),
                                   basis_state(0, qubits({"B"})));
  TruncationScheme sch;
  sch.per_label["A"] = {SchemeKind::spectral, {1, 2}, 0};
  const auto res = marginal_entropy_convergence(prod, sch, {"A"});
  for (const auto& pt : res.points)
    CHECK(pt.value == doctest::Approx(0.0).epsilon(1e-12));

  // I/2 under basis ranks (1,2): entropy 0 then ln2.
  const auto mm = maximally_mixed(qubits({"A"}));
  TruncationScheme basis;
  basis.per_label["A"] = {SchemeKind::basis, {1, 2}, 0};
  const auto mres = marginal_entropy_convergence(mm, basis, {"A"});
  CHECK(mres.points[0].value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mres.points[1].value == doctest::Approx(kLn2).epsilon(1e-12));

  // Thermal qutrit: the truncated-entropy trajectory follows the sorted
  // spectrum oracle.
  const auto th = diag_state({0.6, 0.3, 0.1}, SubsystemLayout{{"A", 3}});
  TruncationScheme spec3;
  spec3.per_label["A"] = {SchemeKind::spectral, {2, 3}, 0};
  const auto tres = marginal_entropy_convergence(th, spec3, {"A"});
  const double lam2 = 0.9;
  const double h2_oracle = eta(0.6 / lam2) + eta(0.3 / lam2);
  CHECK(tres.points[0].lambda == doctest::Approx(lam2).epsilon(1e-12));
  CHECK(tres.points[0].value == doctest::Approx(h2_oracle).epsilon(1e-12));
  CHECK(tres.points[1].value ==
        doctest::Approx(eta(0.6) + eta(0.3) + eta(0.1)).epsilon(1e-12));
}

TEST_CASE("cmi double limit") {
  // Product state: zero at every grid point.
  Rng rng(5);
  auto prod = tensor_product(random_state(qubits({"A"}), 2, rng),
                             random_state(qubits({"B"}), 2, rng));
  prod = tensor_product(prod, random_state(qubits({"C"}), 2, rng));
  const auto pres =
      cmi_double_limit(prod, {"A"}, {"C"}, {"B"}, {1, 2}, {1, 2});
  for (const auto& row : pres.table)
    for (double v : row) CHECK(v == doctest::Approx(0.0).epsilon(1e-9));

  // GHZ with full grids ends at ln2.
  const auto gres =
      cmi_double_limit(ghz(), {"A"}, {"C"}, {"B"}, {1, 2}, {1, 2});
  CHECK(gres.estimate == doctest::Approx(kLn2).epsilon(1e-10));
  CHECK(gres.direct == doctest::Approx(kLn2).epsilon(1e-10));

  // Random 3-qutrit state: iterated estimate matches the direct value.
  const SubsystemLayout qutrits{{"A", 3}, {"B", 3}, {"C", 3}};
  for (int rep = 0; rep < 3; ++rep) {
    const auto s = random_state(qutrits, 9, rng);
    const auto res =
        cmi_double_limit(s, {"A"}, {"C"}, {"B"}, {1, 2, 3}, {2, 3});
    CHECK(res.estimate == doctest::Approx(res.direct).epsilon(1e-6));
  }
}

TEST_CASE("projector supremum") {
  Rng rng(7);
  auto prod = tensor_product(random_state(qubits({"A"}), 2, rng),
                             random_state(qubits({"B"}), 2, rng));
  prod = tensor_product(prod, random_state(qubits({"C"}), 2, rng));
  const auto pres = ie_projector_supremum(prod, {"A"}, {"C"}, {"B"},
                                          SupremumSide::over_a, {1, 2});
  CHECK(pres.supremum == doctest::Approx(0.0).epsilon(1e-9));

  const auto gres = ie_projector_supremum(ghz(), {"A"}, {"C"}, {"B"},
                                          SupremumSide::over_a, {1, 2});
  CHECK(gres.supremum == doctest::Approx(kLn2).epsilon(1e-10));
  CHECK(gres.values.back() == doctest::Approx(kLn2).epsilon(1e-10));

  for (int rep = 0; rep < 6; ++rep) {
    const auto s = random_state(qubits({"A", "B", "C"}), 6, rng);
    const auto oa = ie_projector_supremum(s, {"A"}, {"C"}, {"B"},
                                          SupremumSide::over_a, {1, 2});
    const auto oc = ie_projector_supremum(s, {"A"}, {"C"}, {"B"},
                                          SupremumSide::over_c, {1, 2});
    CHECK(oa.supremum == doctest::Approx(oc.supremum).epsilon(1e-8));
    // Truncated values never exceed the direct cmi.
    for (double v : oa.values) CHECK(v <= oa.direct + 1e-10);
    for (double v : oc.values) CHECK(v <= oc.direct + 1e-10);
  }
}

TEST_CASE("model states") {
  // tmsv(r=0) is the two-mode vacuum.
  const auto vac = model_tmsv(0.0, 4);
  CHECK(std::abs(vac.matrix()(0, 0) - cxd(1.0)) < 1e-14);

  // thermal(nbar -> 0) is the ground state.
  const auto ground = model_thermal(0.0, 4);
  CHECK(std::abs(ground.matrix()(0, 0) - cxd(1.0)) < 1e-14);

  // tmsv(r=0.5, cutoff 12): the A-marginal matches the analytic Schmidt
  // weights tanh^{2n}(r) (1 - tanh^2 r) within 1e-6.
  const double r = 0.5;
  const auto tm = model_tmsv(r, 12);
  const auto ma = partial_trace(tm, {"A"});
  const double t2 = std::tanh(r) * std::tanh(r);
  for (int n = 0; n < 12; ++n) {
    const double analytic = std::pow(t2, n) * (1.0 - t2);
    CHECK(std::abs(ma.matrix()(n, n).real() - analytic) < 1e-6);
  }
  // Mean occupation close to sinh^2(r).
  double mean = 0.0;
  for (int n = 0; n < 12; ++n) mean += n * ma.matrix()(n, n).real();
  CHECK(mean == doctest::Approx(std::sinh(r) * std::sinh(r)).epsilon(1e-5));

  CHECK_THROWS_AS(model_tmsv(0.5, 1), layout_error);
  CHECK_THROWS_AS(model_thermal(-1.0, 4), layout_error);
}

TEST_CASE("tmsv mutual information approaches the analytic value") {
  // Cutoff-16 TMSV at r = 0.5: MI within 1e-3 of 2 H(thermal(sinh^2 r)),
  // approached monotonically along the spectral sweep.
  const double r = 0.5;
  const auto tm = model_tmsv(r, 16);
  const double analytic = 2.0 * thermal_entropy(std::sinh(r) * std::sinh(r));

  TruncationScheme sch;
  std::vector<int> ranks;
  for (int k = 2; k <= 16; k += 2) ranks.push_back(k);
  sch.per_label["A"] = {SchemeKind::spectral, ranks, 0};
  sch.per_label["B"] = {SchemeKind::spectral, ranks, 0};
  const auto sweep = faithfulness_sweep(
      tm,
      [](const MultipartiteState& s) {
        return mutual_information(s, {{"A"}, {"B"}}).value;
      },
      sch);
  for (std::size_t i = 0; i + 1 < sweep.points.size(); ++i)
    CHECK(sweep.points[i].value <= sweep.points[i + 1].value + 1e-9);
  CHECK(std::abs(sweep.points.back().value - analytic) < 1e-3);
}
