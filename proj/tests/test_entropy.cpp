#include <doctest.h>

#include <cmath>

#include "qcorr/entropy.hpp"
#include "test_helpers.hpp"

using namespace qcorr;
using namespace qcorr::testing;

TEST_CASE("von Neumann entropy on states and cone elements") {
  const SubsystemLayout qa{{"A", 2}};
  CHECK(von_neumann_entropy(basis_state(0, qa)) == doctest::Approx(0.0));
  CHECK(von_neumann_entropy(maximally_mixed(qa)) ==
        doctest::Approx(kLn2).epsilon(1e-12));

  // Cone element 0.5 * (I/2): the extension gives Tr eta(rho) - eta(Tr rho),
  // and the scalar oracle is 2*eta(0.25) - eta(0.5) = 0.5*ln2 (homogeneity).
  const auto half = MultipartiteState::trusted(Mat::Identity(2, 2) / 4.0, qa);
  const double oracle = 2.0 * eta(0.25) - eta(0.5);
  CHECK(von_neumann_entropy(half) == doctest::Approx(oracle).epsilon(1e-13));
  CHECK(von_neumann_entropy(half) ==
        doctest::Approx(0.5 * kLn2).epsilon(1e-13));

  // Homogeneity H(lambda rho) = lambda H(rho) on random cone elements.
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const auto s = random_state(qubits({"A", "B"}), 3, rng);
    const double lam = rng.uniform(0.1, 1.0);
    const auto scaled =
        MultipartiteState::trusted(lam * s.matrix(), s.layout());
    CHECK(von_neumann_entropy(scaled) ==
          doctest::Approx(lam * von_neumann_entropy(s)).epsilon(1e-11));
  }
}

TEST_CASE("relative entropy") {
  const SubsystemLayout qa{{"A", 2}};
  Rng rng(7);
  const auto rho = random_state(qa, 2, rng);
  CHECK(relative_entropy(rho, rho).value == doctest::Approx(0.0));

  // Support violation.
  const auto z0 = basis_state(0, qa);
  const auto z1 = basis_state(1, qa);
  CHECK(relative_entropy(z0, z1).is_infinite());

  // Diagonal scalar oracle: sum p_i (ln p_i - ln q_i).
  const auto mm = maximally_mixed(qa);
  const auto q = diag_state({0.75, 0.25}, qa);
  const double oracle = 0.5 * (std::log(0.5) - std::log(0.75)) +
                        0.5 * (std::log(0.5) - std::log(0.25));
  CHECK(relative_entropy(mm, q).value ==
        doctest::Approx(oracle).epsilon(1e-12));

  // Scaling relation H(lambda rho || lambda sigma) = lambda H(rho || sigma).
  const auto sig = random_state(qa, 2, rng);
  const double lam = 0.37;
  const auto lr = MultipartiteState::trusted(lam * rho.matrix(), qa);
  const auto ls = MultipartiteState::trusted(lam * sig.matrix(), qa);
  CHECK(relative_entropy(lr, ls).value ==
        doctest::Approx(lam * relative_entropy(rho, sig).value)
            .epsilon(1e-11));

  CHECK_THROWS_AS(relative_entropy(z0, bell()), layout_error);
}

TEST_CASE("mutual information") {
  Rng rng(11);
  // Product state has zero MI.
  const auto prod = tensor_product(random_state(qubits({"A"}), 2, rng),
                                   random_state(qubits({"B"}), 2, rng));
  CHECK(mutual_information(prod, {{"A"}, {"B"}}).value ==
        doctest::Approx(0.0).epsilon(1e-10));

  CHECK(mutual_information(bell(), {{"A"}, {"B"}}).value ==
        doctest::Approx(2.0 * kLn2).epsilon(1e-12));

  // GHZ tripartite MI by the entropy-combination oracle:
  // sum_i H(A_i) - H(ABC) = 3 ln2 - 0.
  const auto g = ghz();
  const double oracle = marginal_entropy(g, {"A"}) +
                        marginal_entropy(g, {"B"}) +
                        marginal_entropy(g, {"C"}) -
                        von_neumann_entropy(g);
  CHECK(oracle == doctest::Approx(3.0 * kLn2).epsilon(1e-12));
  CHECK(mutual_information(g, {{"A"}, {"B"}, {"C"}}).value ==
        doctest::Approx(oracle).epsilon(1e-10));

  // Relative-entropy and entropy-combination forms agree on random states.
  for (int rep = 0; rep < 10; ++rep) {
    const auto s = random_state(qubits({"A", "B"}), 3, rng);
    const double combo = marginal_entropy(s, {"A"}) +
                         marginal_entropy(s, {"B"}) - von_neumann_entropy(s);
    CHECK(mutual_information(s, {{"A"}, {"B"}}).value ==
          doctest::Approx(combo).epsilon(1e-9));
  }

  CHECK_THROWS_AS(mutual_information(bell(), {{"A"}, {"A"}}), layout_error);
}

TEST_CASE("extended conditional entropy") {
  Rng rng(13);
  const auto rho_a = random_state(qubits({"A"}), 2, rng);
  const auto sig_b = random_state(qubits({"B"}), 2, rng);
  const auto prod = tensor_product(rho_a, sig_b);
  CHECK(conditional_entropy_ext(prod, {"A"}, {"B"}) ==
        doctest::Approx(von_neumann_entropy(rho_a)).epsilon(1e-10));

  CHECK(conditional_entropy_ext(bell(), {"A"}, {"B"}) ==
        doctest::Approx(-kLn2).epsilon(1e-11));

  // Cross-check against H(AB) - H(B), and the |H_e| <= H(A) bound.
  for (int rep = 0; rep < 10; ++rep) {
    const auto s = random_state(qubits({"A", "B"}), 4, rng);
    const double he = conditional_entropy_ext(s, {"A"}, {"B"});
    const double direct = von_neumann_entropy(s) - marginal_entropy(s, {"B"});
    CHECK(he == doctest::Approx(direct).epsilon(1e-10));
    CHECK(std::abs(he) <= marginal_entropy(s, {"A"}) + 1e-10);
  }
}

TEST_CASE("conditional mutual information, five formulas") {
  Rng rng(17);
  const auto prod = tensor_product(
      tensor_product(random_state(qubits({"A"}), 2, rng),
                     random_state(qubits({"B"}), 2, rng)),
      random_state(qubits({"C"}), 2, rng));
  CHECK(cmi(prod, {"A"}, {"C"}, {"B"}).value ==
        doctest::Approx(0.0).epsilon(1e-9));

  CHECK(cmi(ghz(), {"A"}, {"C"}, {"B"}).value ==
        doctest::Approx(kLn2).epsilon(1e-11));

  for (int rep = 0; rep < 10; ++rep) {
    const auto s = random_state(qubits({"A", "B", "C"}), 6, rng);
    const double direct = cmi(s, {"A"}, {"C"}, {"B"}).value;
    for (auto f : {CmiFormula::via_ab, CmiFormula::via_cb,
                   CmiFormula::four_mi, CmiFormula::purified}) {
      CHECK(cmi(s, {"A"}, {"C"}, {"B"}, f).value ==
            doctest::Approx(direct).epsilon(1e-8));
    }
  }

  CHECK_THROWS_AS(cmi(ghz(), {"A"}, {"A"}, {"B"}), layout_error);
}

TEST_CASE("multipartite cmi") {
  Rng rng(19);
  // Fully product state: zero.
  auto prod = tensor_product(random_state(qubits({"A"}), 2, rng),
                             random_state(qubits({"B"}), 2, rng));
  prod = tensor_product(prod, random_state(qubits({"C"}), 2, rng));
  prod = tensor_product(prod, random_state(qubits({"D"}), 2, rng));
  CHECK(cmi_multipartite(prod, {{"A"}, {"B"}, {"C"}}, {"D"}).value ==
        doctest::Approx(0.0).epsilon(1e-9));

  // n = 2 collapses to the pairwise cmi.
  for (int rep = 0; rep < 5; ++rep) {
    const auto s = random_state(qubits({"A", "B", "D"}), 4, rng);
    CHECK(cmi_multipartite(s, {{"A"}, {"B"}}, {"D"}).value ==
          doctest::Approx(cmi(s, {"B"}, {"A"}, {"D"}).value)
              .epsilon(1e-10));
  }

  // Permutation invariance and agreement with the direct combination.
  for (int rep = 0; rep < 5; ++rep) {
    const auto s = random_state(qubits({"A", "B", "C", "D"}), 8, rng);
    const Partition parts{{"A"}, {"B"}, {"C"}};
    const double v = cmi_multipartite(s, parts, {"D"}).value;
    CHECK(cmi_multipartite_perm(s, parts, {"D"}, {1, 2, 0}).value ==
          doctest::Approx(v).epsilon(1e-8));
    CHECK(cmi_multipartite_direct(s, parts, {"D"}) ==
          doctest::Approx(v).epsilon(1e-8));
  }
}

TEST_CASE("secrecy monotone") {
  Rng rng(23);
  auto prod = tensor_product(random_state(qubits({"A"}), 2, rng),
                             random_state(qubits({"B"}), 2, rng));
  prod = tensor_product(prod, random_state(qubits({"C"}), 2, rng));
  CHECK(secrecy_monotone(prod, {{"A"}, {"B"}, {"C"}}, {}).value ==
        doctest::Approx(0.0).epsilon(1e-9));

  // GHZ with trivial B: 3 ln2 by the direct combination.
  CHECK(secrecy_monotone(ghz(), {{"A"}, {"B"}, {"C"}}, {}).value ==
        doctest::Approx(3.0 * kLn2).epsilon(1e-10));
  CHECK(secrecy_monotone_direct(ghz(), {{"A"}, {"B"}, {"C"}}, {}) ==
        doctest::Approx(3.0 * kLn2).epsilon(1e-12));

  // Chain form matches the direct combination on random states.
  for (int rep = 0; rep < 8; ++rep) {
    const auto s = random_state(qubits({"A", "B", "C"}), 5, rng);
    CHECK(secrecy_monotone(s, {{"A"}, {"B"}, {"C"}}, {}).value ==
          doctest::Approx(secrecy_monotone_direct(s, {{"A"}, {"B"}, {"C"}},
                                                  {}))
              .epsilon(1e-8));
  }
}

TEST_CASE("interaction information") {
  // GHZ: I3 = 3ln2 - 3ln2 + 0 = 0.
  CHECK(interaction_information(ghz(), {{"A"}, {"B"}, {"C"}}).value ==
        doctest::Approx(0.0).epsilon(1e-10));

  // Bell (x) pure C: C uncorrelated, I3 = 0.
  const auto bc = tensor_product(bell(), basis_state(0, qubits({"C"})));
  CHECK(interaction_information(bc, {{"A"}, {"B"}, {"C"}}).value ==
        doctest::Approx(0.0).epsilon(1e-10));

  // n=1 entropy, n=2 mutual information.
  Rng rng(29);
  const auto s2 = random_state(qubits({"A", "B"}), 3, rng);
  CHECK(interaction_information(s2, {{"A"}}).value ==
        doctest::Approx(marginal_entropy(s2, {"A"})).epsilon(1e-12));
  CHECK(interaction_information(s2, {{"A"}, {"B"}}).value ==
        doctest::Approx(mutual_information(s2, {{"A"}, {"B"}}).value)
            .epsilon(1e-9));

  // Alternating-sum form vs the pivot expansion and the tripartite
  // I(A:B) - I(A:B|C) identity.
  for (int rep = 0; rep < 8; ++rep) {
    const auto s = random_state(qubits({"A", "B", "C"}), 6, rng);
    const Partition parts{{"A"}, {"B"}, {"C"}};
    const double alt = interaction_information(s, parts).value;
    CHECK(interaction_information_pivot(s, parts, 0) ==
          doctest::Approx(alt).epsilon(1e-8));
    const double remark = mutual_information(s, {{"A"}, {"B"}}).value -
                          cmi(s, {"A"}, {"B"}, {"C"}).value;
    CHECK(remark == doctest::Approx(alt).epsilon(1e-8));
    // |I_n| <= 2^{n-1} min_i H(A_i).
    CHECK(std::abs(alt) <=
          measure_upper_bound(s, MeasureBound::interaction, parts) + 1e-9);
  }
}

TEST_CASE("information gap") {
  Rng rng(31);
  // Product across the pairs, each pair itself product: gap 0.
  auto prod = tensor_product(random_state(qubits({"A"}), 2, rng),
                             random_state(qubits({"Ap"}), 2, rng));
  prod = tensor_product(prod, random_state(qubits({"B"}), 2, rng));
  prod = tensor_product(prod, random_state(qubits({"Bp"}), 2, rng));
  CHECK(information_gap(prod, {{"A"}, {"B"}}, {{"Ap"}, {"Bp"}}).value ==
        doctest::Approx(0.0).epsilon(1e-9));

  // n = 1 collapse: the gap is I(A1 : A'1) in both forms.
  for (int rep = 0; rep < 5; ++rep) {
    const auto s = random_state(qubits({"A", "Ap"}), 3, rng);
    const double mi = mutual_information(s, {{"A"}, {"Ap"}}).value;
    CHECK(information_gap(s, {{"A"}}, {{"Ap"}}).value ==
          doctest::Approx(mi).epsilon(1e-10));
    CHECK(information_gap_chain(s, {{"A"}}, {{"Ap"}}).value ==
          doctest::Approx(mi).epsilon(1e-10));
  }

  // Direct vs chain on random 4-qubit states.
  for (int rep = 0; rep < 8; ++rep) {
    const auto s = random_state(qubits({"A", "Ap", "B", "Bp"}), 6, rng);
    const double direct =
        information_gap(s, {{"A"}, {"B"}}, {{"Ap"}, {"Bp"}}).value;
    const double chain =
        information_gap_chain(s, {{"A"}, {"B"}}, {{"Ap"}, {"Bp"}}).value;
    CHECK(direct == doctest::Approx(chain).epsilon(1e-8));
    CHECK(direct >= -1e-9);
  }

  CHECK_THROWS_AS(information_gap(prod, {{"A"}, {"B"}}, {{"Ap"}}),
                  layout_error);
}

TEST_CASE("combo differences") {
  Rng rng(37);
  // Product across B: conditional difference vanishes.
  auto prod = tensor_product(random_state(qubits({"A", "B"}), 3, rng),
                             random_state(qubits({"C"}), 2, rng));
  EntropicCombo combo{{1.0, {"A"}}, {-0.5, {"A", "B"}}};
  CHECK(conditional_combo_difference(prod, combo, {"C"}) ==
        doctest::Approx(0.0).epsilon(1e-9));

  // Bell with combo {(1, A)}: -I(A:B) = -2 ln2.
  CHECK(conditional_combo_difference(bell(), {{1.0, {"A"}}}, {"B"}) ==
        doctest::Approx(-2.0 * kLn2).epsilon(1e-10));

  // Reduced difference: drop label absent from every term.
  CHECK(reduced_combo_difference(prod, {{1.0, {"A"}}}, "B") ==
        doctest::Approx(0.0));

  // Product case: combo {(1, AB)}, drop A -> H(B) - H(AB) = -H(A).
  const auto pa = random_state(qubits({"A"}), 2, rng);
  const auto pb = random_state(qubits({"B"}), 2, rng);
  const auto p2 = tensor_product(pa, pb);
  CHECK(reduced_combo_difference(p2, {{1.0, {"A", "B"}}}, "A") ==
        doctest::Approx(-von_neumann_entropy(pa)).epsilon(1e-10));

  // Direct-difference oracle on random 3-qubit states.
  for (int rep = 0; rep < 8; ++rep) {
    const auto s = random_state(qubits({"A", "B", "C"}), 5, rng);
    EntropicCombo rc{{rng.uniform(-2.0, 2.0), {"A"}},
                     {rng.uniform(-2.0, 2.0), {"B"}},
                     {rng.uniform(-2.0, 2.0), {"A", "B"}}};
    double direct = 0.0;
    for (const auto& t : rc) {
      LabelSet with_c = t.subsystems;
      with_c.push_back("C");
      direct += t.alpha * (marginal_entropy(s, with_c) -
                           marginal_entropy(s, {"C"}) -
                           marginal_entropy(s, t.subsystems));
    }
    CHECK(conditional_combo_difference(s, rc, {"C"}) ==
          doctest::Approx(direct).epsilon(1e-9));

    double red_direct = 0.0;
    for (const auto& t : rc) {
      bool has_a = false;
      LabelSet rest;
      for (const auto& l : t.subsystems) {
        if (l == "A") has_a = true;
        else rest.push_back(l);
      }
      if (!has_a) continue;
      const double h_rest = rest.empty() ? 0.0 : marginal_entropy(s, rest);
      red_direct += t.alpha * (h_rest - marginal_entropy(s, t.subsystems));
    }
    CHECK(reduced_combo_difference(s, rc, "A") ==
          doctest::Approx(red_direct).epsilon(1e-9));
  }

  CHECK_THROWS_AS(conditional_combo_difference(prod, combo, {"A"}),
                  layout_error);
}

TEST_CASE("upper bounds") {
  // Bell: the bipartite bound is tight.
  CHECK(measure_upper_bound(bell(), MeasureBound::mi_bipartite,
                            {{"A"}, {"B"}}) ==
        doctest::Approx(2.0 * kLn2).epsilon(1e-11));
  CHECK(mutual_information(bell(), {{"A"}, {"B"}}).value ==
        doctest::Approx(2.0 * kLn2).epsilon(1e-11));

  // GHZ: CMI = ln2 <= 2 H(A) = 2 ln2.
  const double ghz_bound = measure_upper_bound(
      ghz(), MeasureBound::cmi_tripartite, {{"A"}, {"C"}}, {"B"});
  CHECK(cmi(ghz(), {"A"}, {"C"}, {"B"}).value <= ghz_bound + 1e-10);
  CHECK(ghz_bound == doctest::Approx(2.0 * kLn2).epsilon(1e-10));

  // Random 4-partite: multipartite MI below its bound.
  Rng rng(41);
  for (int rep = 0; rep < 6; ++rep) {
    const auto s = random_state(qubits({"A", "B", "C", "D"}), 8, rng);
    const Partition parts{{"A"}, {"B"}, {"C"}, {"D"}};
    CHECK(mutual_information(s, parts).value <=
          measure_upper_bound(s, MeasureBound::mi_multipartite, parts) +
              1e-9);
  }
}

TEST_CASE("pure tripartite identity") {
  const auto [glhs, grhs] = pure_tripartite_identity_check(ghz());
  CHECK(glhs == doctest::Approx(2.0 * kLn2).epsilon(1e-10));
  CHECK(grhs == doctest::Approx(2.0 * kLn2).epsilon(1e-10));

  const auto prod = tensor_product(
      tensor_product(basis_state(0, qubits({"A"})),
                     basis_state(0, qubits({"B"}))),
      basis_state(0, qubits({"C"})));
  const auto [plhs, prhs] = pure_tripartite_identity_check(prod);
  CHECK(plhs == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(prhs == doctest::Approx(0.0).epsilon(1e-12));

  Rng rng(43);
  for (int rep = 0; rep < 10; ++rep) {
    const auto s = random_pure_state(qubits({"A", "B", "C"}), rng);
    const auto [lhs, rhs] = pure_tripartite_identity_check(s);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }

  Rng rng2(47);
  CHECK_THROWS_AS(
      pure_tripartite_identity_check(
          random_state(qubits({"A", "B", "C"}), 4, rng2)),
      numeric_error);
}

TEST_CASE("entropy mixing inequality on cone elements") {
  Rng rng(53);
  for (int rep = 0; rep < 15; ++rep) {
    const auto layout = qubits({"A", "B"});
    const auto r1 = random_state(layout, 3, rng);
    const auto r2 = random_state(layout, 2, rng);
    const double t1 = rng.uniform(0.2, 1.0), t2 = rng.uniform(0.2, 1.0);
    const auto rho = MultipartiteState::trusted(t1 * r1.matrix(), layout);
    const auto sig = MultipartiteState::trusted(t2 * r2.matrix(), layout);
    const double lam = rng.uniform(0.05, 0.95);
    const auto mix = MultipartiteState::trusted(
        lam * rho.matrix() + (1.0 - lam) * sig.matrix(), layout);
    const double lhs = lam * von_neumann_entropy(rho) +
                       (1.0 - lam) * von_neumann_entropy(sig);
    const double mid = von_neumann_entropy(mix);
    const double cap = std::max(t1, t2) * binary_entropy(lam);
    CHECK(lhs <= mid + 1e-10);
    CHECK(mid <= lhs + cap + 1e-10);
  }
}
