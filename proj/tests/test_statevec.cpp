#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "oracles.hpp"
#include "qsre/errors.hpp"
#include "qsre/statevec.hpp"

using namespace qsre;

TEST_CASE("construction and basis states") {
  StateVector z(3);
  CHECK(z.dim() == 8);
  CHECK(z[0] == cplx(1.0));
  CHECK(basis_state(3, 5)[5] == cplx(1.0));
  CHECK_THROWS_AS(StateVector(2, std::vector<cplx>(3)), std::invalid_argument);
  CHECK_THROWS(StateVector(0));
}

TEST_CASE("product state puts qubit 0 on the lowest bit") {
  const std::array<cplx, 2> zero{1.0, 0.0}, one{0.0, 1.0};
  std::vector<std::array<cplx, 2>> q{one, zero, zero};
  CHECK(product_state(q)[1] == cplx(1.0));
}

TEST_CASE("one- and two-qubit gates match embedded dense gates") {
  const int n = 4;
  const auto psi = oracle::random_state(n, 3);
  const auto v = oracle::vec(psi);
  for (int s = 0; s < n; ++s) {
    for (const Gate1& g : {gates::hadamard(), gates::phase_s(), gates::t_gate(), gates::pauli_y()}) {
      const oracle::Mat gm = g;
      CHECK((oracle::vec(apply_one_qubit_gate(psi, s, g)) - oracle::embed_one(n, s, gm) * v).norm() < 1e-13);
    }
  }
  for (int c = 0; c < n; ++c)
    for (int t = 0; t < n; ++t) {
      if (c == t) continue;
      CHECK((oracle::vec(apply_two_qubit_gate(psi, c, t, gates::cnot())) - oracle::cnot(n, c, t) * v).norm() < 1e-13);
      // kron(first, second) acts as first on site c and second on site t
      const Gate2 k = gates::kron(gates::hadamard(), gates::phase_s());
      const oracle::Mat ref =
          oracle::embed_one(n, c, oracle::Mat(gates::hadamard())) * oracle::embed_one(n, t, oracle::Mat(gates::phase_s()));
      CHECK((oracle::vec(apply_two_qubit_gate(psi, c, t, k)) - ref * v).norm() < 1e-13);
    }
  CHECK_THROWS_AS(apply_two_qubit_gate(psi, 1, 1, gates::cnot()), std::invalid_argument);
  Gate1 bad = Gate1::Identity() * 2.0;
  CHECK_THROWS_AS(apply_one_qubit_gate(psi, 0, bad), std::invalid_argument);
}

TEST_CASE("reduced density matrix matches the partial-trace oracle") {
  const int n = 5;
  const auto psi = oracle::random_state(n, 8);
  const auto v = oracle::vec(psi);
  for (const std::vector<int>& region : {std::vector<int>{0}, {1, 2}, {4, 0, 1}, {3, 1}, {0, 1, 2, 3}}) {
    const auto rho = reduced_density_matrix(psi, region);
    CHECK((rho.matrix() - oracle::partial_trace(v, n, region)).norm() < 1e-13);
    CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK((rho.matrix() - rho.matrix().adjoint()).norm() < 1e-14);
  }
  CHECK_THROWS(reduced_density_matrix(psi, std::vector<int>{}));
  CHECK_THROWS(reduced_density_matrix(psi, std::vector<int>{0, 1, 2, 3, 4}));
  CHECK_THROWS(reduced_density_matrix(psi, std::vector<int>{1, 1}));
}

TEST_CASE("Schmidt symmetry: complementary regions share their nonzero spectrum") {
  const int n = 6;
  const auto psi = oracle::random_state(n, 21);
  const auto a = entanglement_spectrum(reduced_density_matrix(psi, std::vector<int>{0, 1}));
  const auto b = entanglement_spectrum(reduced_density_matrix(psi, std::vector<int>{2, 3, 4, 5}));
  REQUIRE(b.size() == 16);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));
  for (std::size_t k = a.size(); k < b.size(); ++k) CHECK(std::abs(b[k]) < 1e-12);
  for (std::size_t k = 1; k < b.size(); ++k) CHECK(b[k - 1] >= b[k]);
}

TEST_CASE("spectrum rejects clearly negative matrices") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = 1.1;
  m(1, 1) = -0.1;
  CHECK_THROWS_AS(entanglement_spectrum(m), NumericError);
}

TEST_CASE("contiguous regions wrap around the ring") {
  CHECK(contiguous_region(5, 3, 3) == std::vector<int>{3, 4, 0});
  CHECK_THROWS(contiguous_region(5, 0, 6));
}

TEST_CASE("binary dump round-trips exactly and checks its header") {
  const auto psi = oracle::random_state(5, 2);
  const auto path = std::filesystem::temp_directory_path() / "qsre_state_test.bin";
  save_state(psi, path);
  CHECK(load_state(path) == psi);
  CHECK(std::filesystem::file_size(path) == 12 + 32 * 16);
  {
    std::FILE* f = std::fopen(path.c_str(), "r+b");
    std::fputc('X', f);
    std::fclose(f);
  }
  CHECK_THROWS(load_state(path));
  std::filesystem::remove(path);
}

TEST_CASE("inner product and fidelity") {
  const auto a = oracle::random_state(3, 5);
  const auto b = oracle::random_state(3, 6);
  CHECK(inner_product(a, b) == std::conj(inner_product(b, a)));
  const cplx ref = (oracle::vec(a).adjoint() * oracle::vec(b))(0, 0);
  CHECK(std::abs(inner_product(a, b) - ref) < 1e-14);
  CHECK(fidelity(a, a) == doctest::Approx(1.0));
}
