#include <doctest.h>

#include "oracles.hpp"
#include "qsre/ensembles.hpp"
#include "qsre/errors.hpp"
#include "qsre/measures.hpp"

using namespace qsre;

namespace {

StateVector t_state() {  // T|+>
  std::vector<std::array<cplx, 2>> q{{cplx(M_SQRT1_2), std::polar(M_SQRT1_2, M_PI / 4)}};
  return product_state(q);
}

StateVector bell_pairs(int pairs) {
  StateVector psi(2 * pairs);
  for (int p = 0; p < pairs; ++p) {
    psi.apply_one_qubit_inplace(2 * p, gates::hadamard());
    psi.apply_two_qubit_inplace(2 * p, 2 * p + 1, gates::cnot());
  }
  return psi;
}

}  // namespace

TEST_CASE("Renyi entropies of known spectra") {
  const std::vector<double> flat{0.25, 0.25, 0.25, 0.25};
  for (double a : {0.0, 1.0, 2.0, 3.0}) CHECK(renyi_entropy(flat, a) == doctest::Approx(std::log(4.0)));
  const std::vector<double> p{0.5, 0.3, 0.2, 0.0};
  CHECK(renyi_entropy(p, 1.0) == doctest::Approx(-(0.5 * std::log(0.5) + 0.3 * std::log(0.3) + 0.2 * std::log(0.2))));
  CHECK(renyi_entropy(p, 2.0) == doctest::Approx(-std::log(0.25 + 0.09 + 0.04)));
  CHECK(renyi_entropy(p, 0.0) == doctest::Approx(std::log(3.0)));
  CHECK_THROWS(renyi_entropy(std::vector<double>{0.5, 0.4}, 1.0));
  CHECK_THROWS(renyi_entropy(std::vector<double>{1.1, -0.1}, 1.0));
  CHECK_THROWS(renyi_entropy(std::vector<double>{}, 1.0));
}

TEST_CASE("SRE of the single-qubit T state is log2(4/3)") {
  const auto m = sre_exact(t_state(), 2);
  CHECK(m.sre == doctest::Approx(std::log2(4.0 / 3.0)).epsilon(1e-12));
  CHECK(m.sre_linearized == doctest::Approx(0.25));
}

TEST_CASE("SRE agrees with the dense brute-force oracle and the serial kernel") {
  for (int n : {2, 3, 4}) {
    const auto psi = oracle::random_state(n, 100 + n);
    const double ref = oracle::sre2(oracle::vec(psi), n);
    CHECK(sre_exact(psi, 2).sre == doctest::Approx(ref).epsilon(1e-12));
    for (int a : {1, 2, 3}) {
      const auto fast = sre_exact(psi, a), slow = sre_reference(psi, a);
      CHECK(fast.sre == doctest::Approx(slow.sre).epsilon(1e-12));
      CHECK(fast.stabilizer_purity == doctest::Approx(slow.stabilizer_purity).epsilon(1e-12));
    }
  }
}

TEST_CASE("stabilizer states have zero SRE and a flat spectrum") {
  const auto bell = bell_pairs(3);
  CHECK(std::abs(sre_exact(bell, 2).sre) < 1e-12);
  CHECK(std::abs(sre_exact(bell, 1).sre) < 1e-12);
  const auto rho = reduced_density_matrix(bell, std::vector<int>{0, 1, 2});
  CHECK(std::abs(antiflatness(rho).antiflatness) < 1e-14);
}

TEST_CASE("SRE is additive over tensor products") {
  const auto a = oracle::random_state(2, 1), b = oracle::random_state(3, 2);
  const Eigen::VectorXcd ab = Eigen::kroneckerProduct(oracle::vec(b), oracle::vec(a));
  const auto psi = oracle::state(5, ab);
  CHECK(sre_exact(psi, 2).sre == doctest::Approx(sre_exact(a, 2).sre + sre_exact(b, 2).sre).epsilon(1e-12));
}

TEST_CASE("SRE is invariant under Clifford circuits") {
  const auto psi = oracle::random_state(4, 77);
  const double m0 = sre_exact(psi, 2).sre;
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    StateVector phi = psi;
    apply_circuit(phi, sample_nfc_circuit(4, 3, rng));
    CHECK(std::abs(sre_exact(phi, 2).sre - m0) < 1e-9);
  }
}

TEST_CASE("SRE cap and argument checks") {
  CHECK_THROWS_AS(sre_exact(StateVector(15)), ResourceError);
  CHECK_THROWS(sre_exact(StateVector(2), 0));
}

TEST_CASE("anti-flatness: spectrum and trace routes agree, and is non-negative") {
  const auto psi = oracle::random_state(6, 31);
  const auto rho_a = reduced_density_matrix(psi, std::vector<int>{0, 1, 2});
  const auto via_matrix = antiflatness(rho_a);  // no spectrum cached yet
  CHECK_FALSE(rho_a.has_spectrum());
  const auto via_spec = antiflatness_from_spectrum(rho_a.spectrum());
  CHECK(via_matrix.antiflatness == doctest::Approx(via_spec.antiflatness).epsilon(1e-10));
  CHECK(via_matrix.tr_rho3 == doctest::Approx(via_spec.tr_rho3).epsilon(1e-12));
  CHECK(via_spec.antiflatness >= 0.0);
  CHECK(via_spec.log_antiflatness >= 0.0);
  const double s2 = renyi_entropy(rho_a.spectrum(), 2.0), s3 = renyi_entropy(rho_a.spectrum(), 3.0);
  CHECK(via_spec.log_antiflatness == doctest::Approx(2 * (s2 - s3)).epsilon(1e-12));
}

TEST_CASE("Renyi monotonicity and partition averaging") {
  const auto psi = oracle::random_state(7, 41);
  for (int r = 1; r < 7; ++r) {
    const auto pm = partition_measures(psi, r);
    CHECK(pm.s1_avg >= pm.s2_avg - 1e-12);
    CHECK(pm.s2_avg >= pm.s3_avg - 1e-12);
    const auto prof = entropy_profile(psi, r, 1.0);
    CHECK(prof.per_partition.size() == 7);
    CHECK(prof.partition_average == doctest::Approx(pm.s1_avg).epsilon(1e-12));
  }
  CHECK_THROWS(partition_measures(psi, 0));
  CHECK_THROWS(partition_measures(psi, 7));
}

TEST_CASE("relative difference") {
  CHECK(relative_difference(0.9, 1.0) == doctest::Approx(0.1));
  CHECK(relative_difference(1.2, 1.0) == doctest::Approx(0.2));
  CHECK_THROWS(relative_difference(1.0, 0.0));
}

TEST_CASE("SRE upper bound log2(d + 1) - 1") {
  for (int n : {2, 3, 4})
    for (int k = 0; k < 1000; ++k) {
      const auto psi = oracle::random_state(n, 9000 + 1000 * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(k));
      CHECK(sre_exact(psi, 2).sre <= std::log2(std::ldexp(1.0, n) + 1.0) - 1.0 + 1e-12);
    }
}
