#include <doctest.h>

#include "oracles.hpp"
#include "qsre/errors.hpp"
#include "qsre/propagator.hpp"

using namespace qsre;

TEST_CASE("Krylov propagation matches the dense exponential") {
  const int n = 6;
  const auto h = build_tfim_l(n, 1.0, 1.5, 0.5);
  const auto psi = oracle::random_state(n, 5);
  for (double t : {0.1, 1.0, -0.7, 5.0}) {
    const oracle::Vec ref = oracle::expm_minus_i(h.dense(), t) * oracle::vec(psi);
    const auto r = krylov_propagate(h, psi, t, KrylovConfig{});
    CHECK((oracle::vec(r.state) - ref).norm() < 1e-10);
    CHECK(r.norm_drift < 1e-12);
  }
}

TEST_CASE("small subspaces fall back to substeps and still converge") {
  const int n = 5;
  const auto h = build_xxz_nnn(n, 0.5, 0.5);
  const auto psi = oracle::random_state(n, 6);
  KrylovConfig cfg;
  cfg.max_subspace = 4;
  const auto r = krylov_propagate(h, psi, 2.0, cfg);
  CHECK(r.substeps > 1);
  CHECK(r.max_dimension <= 4);
  const oracle::Vec ref = oracle::expm_minus_i(h.dense(), 2.0) * oracle::vec(psi);
  CHECK((oracle::vec(r.state) - ref).norm() < 1e-9);
}

TEST_CASE("eigenstates terminate the Lanczos recursion immediately") {
  const auto h = build_tfim_l(4, 1.0, 1.0, 0.0);
  ExactPropagator ex(h);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(h.dense());
  const auto psi = oracle::state(4, es.eigenvectors().col(0));
  const auto r = krylov_propagate(h, psi, 3.0, KrylovConfig{});
  CHECK(r.max_dimension <= 2);
  CHECK(std::abs(inner_product(psi, r.state) - std::polar(1.0, -es.eigenvalues()(0) * 3.0)) < 1e-10);
}

TEST_CASE("subspace larger than the Hilbert space is clamped") {
  const auto h = build_tfim_l(3, 1.0, 0.3, 0.2);
  KrylovConfig cfg;
  cfg.max_subspace = 50;
  const auto psi = oracle::random_state(3, 9);
  const auto r = krylov_propagate(h, psi, 1.0, cfg);
  CHECK(r.max_dimension <= 8);
  CHECK((oracle::vec(r.state) - oracle::expm_minus_i(h.dense(), 1.0) * oracle::vec(psi)).norm() < 1e-10);
}

TEST_CASE("evolve: observer sees every step, norm and energy are conserved") {
  const int n = 6;
  const auto h = build_tfim_l(n, 1.0, 1.5, 0.5);
  const auto psi = oracle::random_state(n, 10);
  std::vector<int> seen;
  KrylovConfig cfg;
  cfg.dt = 0.5;
  const auto s = evolve(h, psi, 5.0, cfg, [&](int step, double t, const StateVector&) {
    CHECK(t == doctest::Approx(step * 0.5));
    seen.push_back(step);
  });
  CHECK(seen.size() == 11);
  CHECK(seen.front() == 0);
  CHECK(s.cumulative_norm_drift < 1e-10);
  CHECK(std::abs(h.energy(s.final_state) - h.energy(psi)) < 1e-10);
  CHECK(fidelity(s.final_state, exact_propagate(h, psi, 5.0)) > 1 - 1e-12);
}

TEST_CASE("resuming evolve from an intermediate state is bitwise identical") {
  const auto h = build_xxz_nnn(6, 0.5, 0.5);
  const auto psi = oracle::random_state(6, 12);
  KrylovConfig cfg;
  cfg.dt = 0.25;
  StateVector mid(6);
  const auto full = evolve(h, psi, 2.0, cfg, [&](int step, double, const StateVector& p) {
    if (step == 3) mid = p;
  });
  const auto resumed = evolve(h, mid, 2.0, cfg, {}, 3);
  CHECK(resumed.final_state == full.final_state);
}

TEST_CASE("argument checks") {
  const auto h = build_tfim_l(4, 1, 1, 1);
  KrylovConfig bad;
  bad.dt = 0.0;
  CHECK_THROWS(krylov_step(h, StateVector(4), bad));
  bad = KrylovConfig{};
  bad.max_subspace = 1;
  CHECK_THROWS(bad.validate());
  CHECK_THROWS(krylov_step(h, StateVector(5), KrylovConfig{}));
  CHECK_THROWS(step_count(1.0, 0.3));
  CHECK(step_count(1000.0, 2.0) == 500);
  CHECK_THROWS_AS(ExactPropagator(build_tfim_l(11, 1, 1, 1)), ResourceError);
}
