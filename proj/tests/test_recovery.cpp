#include <doctest.h>

#include <cmath>

#include "qcorr/recovery.hpp"
#include "test_helpers.hpp"

using namespace qcorr;
using namespace qcorr::testing;

namespace {

// Classical Markov chain p(a,b,c) = p(a) p(b|a) p(c|b) embedded diagonally.
MultipartiteState classical_markov() {
  const double pa[2] = {0.6, 0.4};
  const double pba[2][2] = {{0.7, 0.3}, {0.2, 0.8}};
  const double pcb[2][2] = {{0.9, 0.1}, {0.4, 0.6}};
  Mat m = Mat::Zero(8, 8);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        m(a * 4 + b * 2 + c, a * 4 + b * 2 + c) = pa[a] * pba[a][b] * pcb[b][c];
  return MultipartiteState::trusted(std::move(m), qubits({"A", "B", "C"}));
}

}  // namespace

TEST_CASE("petz map") {
  Rng rng(3);
  // Product omega_BC: the Petz map appends omega_C.
  const auto ob = random_state(qubits({"B"}), 2, rng);
  const auto oc = random_state(qubits({"C"}), 2, rng);
  const auto prod = tensor_product(ob, oc);
  const auto petz_prod = petz_map(prod, ob);
  const auto rho = random_state(qubits({"B"}), 2, rng);
  const auto mapped = apply(petz_prod, rho);
  CHECK((partial_trace(mapped, {"B"}).matrix() - rho.matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  CHECK((partial_trace(mapped, {"C"}).matrix() - oc.matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-10);

  // Phi(omega_B) = omega_BC exactly, on random joint states.
  for (int rep = 0; rep < 10; ++rep) {
    const auto obc = random_state(qubits({"B", "C"}),
                                  rng.uniform_int(4) + 1, rng);
    const auto marg_b = marginal(obc, {"B"});
    const auto petz = petz_map(obc, marg_b);
    const auto rec = apply(petz, marg_b);
    CHECK(trace_norm(rec.matrix() - obc.matrix()) < 1e-9);
    // Trace preserving.
    const auto probe = random_state(qubits({"B"}), 2, rng);
    CHECK(apply(petz, probe).trace_weight() ==
          doctest::Approx(1.0).epsilon(1e-11));
  }
}

TEST_CASE("markov check") {
  Rng rng(5);
  // rho_AB (x) rho_C is Markov with fidelity 1.
  const auto prod = tensor_product(random_state(qubits({"A", "B"}), 3, rng),
                                   random_state(qubits({"C"}), 2, rng));
  const auto rep1 = markov_check(prod, {"A"}, {"B"}, {"C"});
  CHECK(rep1.verdict == MarkovVerdict::markov);
  CHECK(rep1.best_fidelity == doctest::Approx(1.0).epsilon(1e-8));

  // GHZ is not Markov.
  const auto rep2 = markov_check(ghz(), {"A"}, {"B"}, {"C"});
  CHECK(rep2.verdict == MarkovVerdict::not_markov);
  CHECK(rep2.cmi == doctest::Approx(kLn2).epsilon(1e-10));

  // Classical Markov chain: zero CMI, exact Petz recovery.
  const auto chain = classical_markov();
  const auto rep3 = markov_check(chain, {"A"}, {"B"}, {"C"});
  CHECK(rep3.verdict == MarkovVerdict::markov);
  CHECK(rep3.cmi == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(rep3.best_fidelity >= 1.0 - 1e-8);
}

TEST_CASE("recovery search") {
  // Markov state: fidelity essentially 1.
  Rng rng(7);
  const auto prod = tensor_product(random_state(qubits({"A", "B"}), 3, rng),
                                   random_state(qubits({"C"}), 2, rng));
  RecoveryOpts opts;
  opts.seed = 11;
  const auto rep1 = recovery_search(prod, {"A"}, {"B"}, {"C"}, opts);
  CHECK(rep1.fidelity >= 1.0 - 1e-6);
  CHECK(rep1.pass);

  // GHZ: fr_lhs = e^{-ln2/2} = 1/sqrt(2); the Petz map attains it.
  const auto rep2 = recovery_search(ghz(), {"A"}, {"B"}, {"C"}, opts);
  CHECK(rep2.fr_lhs == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(rep2.fidelity >= rep2.fr_lhs - 1e-6);
  CHECK(rep2.pass);
  CHECK(rep2.marginal_residual_b <= 1e-8);
  CHECK(rep2.marginal_residual_c <= 1e-8);

  // Random 3-qubit states: no FR violations, marginal-exact channels.
  for (int rep = 0; rep < 10; ++rep) {
    const auto s = random_state(qubits({"A", "B", "C"}),
                                rng.uniform_int(8) + 1, rng);
    RecoveryOpts o;
    o.seed = rng.next_u64();
    o.restarts = 2;
    o.max_iters = 60;
    const auto r = recovery_search(s, {"A"}, {"B"}, {"C"}, o);
    CHECK(r.fr_lhs <= r.fidelity + 1e-6);
    CHECK(r.marginal_residual_b <= 1e-8);
    CHECK(r.marginal_residual_c <= 1e-8);
  }
}

TEST_CASE("marginal fixup") {
  Rng rng(13);
  const auto obc = random_state(qubits({"B", "C"}), 4, rng);
  const auto ob = marginal(obc, {"B"});
  const auto oc = marginal(obc, {"C"});
  const auto petz = petz_map(obc, ob);

  // A channel already meeting the marginal conditions is unchanged on
  // states.
  const auto fixed0 = marginal_fixup(
      QuantumChannel::operation(petz.kraus(), petz.in_layout(),
                                petz.out_layout()),
      ob, oc);
  CHECK(fixed0.flagged);  // vanishing deficits take the flagged completion
  const auto out0 = apply(fixed0.channel, ob);
  CHECK(trace_norm(out0.matrix() - obc.matrix()) < 1e-9);

  // Damped Petz map: the fixup restores both marginals.
  for (double damp : {0.5, 0.8}) {
    std::vector<Mat> kraus = petz.kraus();
    for (auto& k : kraus) k *= std::sqrt(damp);
    const auto op = QuantumChannel::operation(std::move(kraus),
                                              petz.in_layout(),
                                              petz.out_layout());
    const auto fixed = marginal_fixup(op, ob, oc);
    const auto out = apply(fixed.channel, ob);
    CHECK(trace_norm(marginal(out, {"B"}).matrix() - ob.matrix()) < 1e-9);
    CHECK(trace_norm(marginal(out, {"C"}).matrix() - oc.matrix()) < 1e-9);
  }

  // Violating the domination precondition raises.
  Mat swap_to_c(4, 2);  // maps B states onto something bigger than omega_C
  swap_to_c.setZero();
  swap_to_c(0, 0) = swap_to_c(1, 1) = 1.0;
  const auto bad_op = QuantumChannel::operation(
      {swap_to_c}, ob.layout(), SubsystemLayout{{"B", 2}, {"C", 2}});
  CHECK_THROWS_AS(marginal_fixup(bad_op, ob, oc), numeric_error);
}

TEST_CASE("wilde inequality") {
  Rng rng(17);
  // Fully product four-party state: gap 0, exact reconstruction.
  auto prod = tensor_product(random_state(qubits({"A"}), 2, rng),
                             random_state(qubits({"Ap"}), 2, rng));
  prod = tensor_product(prod, random_state(qubits({"B"}), 2, rng));
  prod = tensor_product(prod, random_state(qubits({"Bp"}), 2, rng));
  RecoveryOpts opts;
  opts.seed = 19;
  opts.restarts = 0;
  const Partition unprimed{{"A"}, {"B"}};
  const Partition primed{{"Ap"}, {"Bp"}};
  const auto rec = pairwise_recoveries(prod, unprimed, primed, opts);
  const auto rep = wilde_check(prod, unprimed, primed, rec);
  CHECK(rep.delta_i_nats == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(rep.recon_trace_norm == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(rep.pass);

  // n = 1 Bell pair: gap = 2 ln2, rhs <= 1.
  const auto b = bell("A", "Ap");
  const auto rec1 = pairwise_recoveries(b, {{"A"}}, {{"Ap"}}, opts);
  const auto rep1 = wilde_check(b, {{"A"}}, {{"Ap"}}, rec1);
  CHECK(rep1.delta_i_nats == doctest::Approx(2.0 * kLn2).epsilon(1e-9));
  CHECK(rep1.rhs <= 1.0 + 1e-9);
  CHECK(rep1.pass);
  CHECK(rep1.delta_i_bits == doctest::Approx(2.0).epsilon(1e-9));

  // Random paired states.
  for (int rep_i = 0; rep_i < 6; ++rep_i) {
    const auto s = random_state(qubits({"A", "Ap", "B", "Bp"}),
                                rng.uniform_int(8) + 1, rng);
    RecoveryOpts o;
    o.seed = rng.next_u64();
    o.restarts = 1;
    o.max_iters = 50;
    const auto chans = pairwise_recoveries(s, unprimed, primed, o);
    const auto w = wilde_check(s, unprimed, primed, chans);
    CHECK(w.pass);
  }
}

TEST_CASE("recovered states never gain information gap") {
  Rng rng(23);
  for (int rep = 0; rep < 5; ++rep) {
    const auto s = random_state(qubits({"A", "Ap", "B", "Bp"}), 4, rng);
    const Partition unprimed{{"A"}, {"B"}};
    const Partition primed{{"Ap"}, {"Bp"}};
    RecoveryOpts o;
    o.seed = rng.next_u64();
    o.restarts = 0;
    const auto chans = pairwise_recoveries(s, unprimed, primed, o);
    MultipartiteState recon = marginal(s, {"Ap", "Bp"});
    recon = apply_to(chans[0], recon, {"Ap"});
    recon = apply_to(chans[1], recon, {"Bp"});
    recon = reorder(recon, s.layout().labels());
    CHECK(information_gap(recon, unprimed, primed).value <=
          information_gap(s, unprimed, primed).value + 1e-9);
  }
}
