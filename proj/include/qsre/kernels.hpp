#pragma once

// Data-parallel inner loops behind the public API.
//
// Every kernel exists twice: `serial::` is the straightforward reference kept
// for testing and benchmarking, `parallel::` is the OpenMP version the
// library uses. Parallel reductions go through chunked_sum or per-index
// partials, so their results are independent of the thread count.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qsre::kernels {

using cplx = std::complex<double>;
using Mask = std::uint64_t;

/// One Hermitian term c * i^phase * X^x Z^z with the full scalar folded
/// into `factor`.
struct PauliTermView {
  Mask x_mask;
  Mask z_mask;
  cplx factor;
};

/// Sum over all 4^n Pauli strings of a function of <P>^2.
struct PauliMoments {
  double power_sum = 0.0;    // sum_P <P>^(2 alpha)
  double shannon_sum = 0.0;  // -sum_P xi_P log2 xi_P with xi_P = <P>^2 / d
};

inline int parity(Mask m) noexcept { return __builtin_popcountll(m) & 1; }

namespace serial {

/// sum_i conj(psi[i ^ x]) (-1)^{|i & z|} psi[i]  (no phase factor)
cplx pauli_overlap(std::span<const cplx> psi, Mask x, Mask z);
void apply_pauli_accumulate(std::span<const cplx> in, std::span<cplx> out, Mask x, Mask z,
                            cplx factor);
/// out = sum_t factor_t P_t in, term by term.
void apply_pauli_sum(std::span<const PauliTermView> terms, std::span<const cplx> in,
                     std::span<cplx> out);
/// Enumerates the 4^n strings one at a time: O(8^n).
PauliMoments pauli_moments(std::span<const cplx> psi, int n, int alpha, bool with_shannon);
Eigen::MatrixXcd reduced_density_matrix(std::span<const cplx> psi, int n,
                                        std::span<const int> region);
void apply_one_qubit(std::span<cplx> psi, int site, const Eigen::Matrix2cd& g);
void apply_two_qubit(std::span<cplx> psi, int site_a, int site_b, const Eigen::Matrix4cd& g);
cplx inner(std::span<const cplx> bra, std::span<const cplx> ket);

}  // namespace serial

namespace parallel {

cplx pauli_overlap(std::span<const cplx> psi, Mask x, Mask z);
void apply_pauli_accumulate(std::span<const cplx> in, std::span<cplx> out, Mask x, Mask z,
                            cplx factor);

/// Pauli sum with diagonal (x_mask = 0) terms folded into one precomputed
/// diagonal and the rest applied per output amplitude.
class CompiledPauliSum {
 public:
  CompiledPauliSum() = default;
  CompiledPauliSum(int n_qubits, std::span<const PauliTermView> terms);

  void apply(std::span<const cplx> in, std::span<cplx> out) const;
  std::size_t dim() const noexcept { return diagonal_.size(); }

 private:
  std::vector<double> diagonal_;
  std::vector<PauliTermView> off_diagonal_;
};

/// For each x_mask, one Walsh-Hadamard transform over z of
/// conj(psi[i ^ x]) psi[i] yields all 2^n overlaps at once: O(n 4^n).
PauliMoments pauli_moments(std::span<const cplx> psi, int n, int alpha, bool with_shannon);
Eigen::MatrixXcd reduced_density_matrix(std::span<const cplx> psi, int n,
                                        std::span<const int> region);
void apply_one_qubit(std::span<cplx> psi, int site, const Eigen::Matrix2cd& g);
void apply_two_qubit(std::span<cplx> psi, int site_a, int site_b, const Eigen::Matrix4cd& g);
cplx inner(std::span<const cplx> bra, std::span<const cplx> ket);

}  // namespace parallel

}  // namespace qsre::kernels
