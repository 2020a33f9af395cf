#pragma once

// Dense pure states of N qubits.
//
// Bit order: qubit j is bit j of the basis index (qubit 0 is the least
// significant bit). When a state or Pauli string is written as a label,
// qubit 0 is the leftmost character, so basis index 5 on three qubits
// reads "101".

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qsre {

using cplx = std::complex<double>;
using Gate1 = Eigen::Matrix2cd;
/// Two-qubit gate in the basis |a b>, row index 2a + b, with a the first
/// site argument and b the second.
using Gate2 = Eigen::Matrix4cd;

/// Hard cap for dense state vectors.
inline constexpr int kMaxStateQubits = 28;

class StateVector {
 public:
  /// |0...0> on n qubits.
  explicit StateVector(int n_qubits);
  /// Takes ownership of `amplitudes`; length must be 2^n_qubits. The
  /// amplitudes are not renormalized.
  StateVector(int n_qubits, std::vector<cplx> amplitudes);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return amplitudes_.size(); }

  std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }
  std::span<cplx> mutable_amplitudes() noexcept { return amplitudes_; }
  const cplx& operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm() const;
  /// Rescales to unit norm; returns the norm before rescaling.
  double normalize();

  // In-place variants mutate this vector and are single-owner: do not call
  // them on a state shared with other threads.
  void apply_one_qubit_inplace(int site, const Gate1& g);
  void apply_two_qubit_inplace(int site_a, int site_b, const Gate2& g);

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  int n_qubits_;
  std::vector<cplx> amplitudes_;
};

StateVector basis_state(int n_qubits, std::uint64_t index);

/// Tensor product of single-qubit states, qubit 0 first.
StateVector product_state(std::span<const std::array<cplx, 2>> qubits);

StateVector apply_one_qubit_gate(const StateVector& psi, int site, const Gate1& g);
StateVector apply_two_qubit_gate(const StateVector& psi, int site_a, int site_b, const Gate2& g);

cplx inner_product(const StateVector& bra, const StateVector& ket);
/// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);

namespace gates {
Gate1 identity();
Gate1 hadamard();
Gate1 phase_s();
Gate1 t_gate();
Gate1 pauli_x();
Gate1 pauli_y();
Gate1 pauli_z();
/// Control = first site argument, target = second.
Gate2 cnot();
Gate2 kron(const Gate1& first, const Gate1& second);
}  // namespace gates

bool is_unitary(const Eigen::MatrixXcd& g, double tol = 1e-12);

/// Reduced state of a subset of sites. Basis bit k of the matrix index
/// corresponds to sites[k].
class ReducedDensityMatrix {
 public:
  ReducedDensityMatrix(std::vector<int> sites, Eigen::MatrixXcd matrix);

  int region_size() const noexcept { return static_cast<int>(sites_.size()); }
  const std::vector<int>& sites() const noexcept { return sites_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }

  /// Descending spectrum, computed on first use and cached. Not safe to call
  /// concurrently on the same object.
  const std::vector<double>& spectrum() const;
  bool has_spectrum() const noexcept { return spectrum_.has_value(); }

 private:
  std::vector<int> sites_;
  Eigen::MatrixXcd matrix_;
  mutable std::optional<std::vector<double>> spectrum_;
};

/// rho_R = Tr_{R^c} |psi><psi|. `region` must be a non-empty strict subset of
/// distinct sites; any order is accepted.
ReducedDensityMatrix reduced_density_matrix(const StateVector& psi, std::span<const int> region);

/// Eigenvalues of rho in descending order. Negative values down to -1e-12
/// are clamped to zero and the list renormalized; anything more negative is
/// a NumericError.
std::vector<double> entanglement_spectrum(const ReducedDensityMatrix& rho);
std::vector<double> entanglement_spectrum(const Eigen::MatrixXcd& rho);

/// `len` consecutive sites starting at `start` on a ring of n sites.
std::vector<int> contiguous_region(int n_qubits, int start, int len);

// Binary dump: "QSVD" magic, uint32 version, uint32 n_qubits, then 2^n
// little-endian (float64 re, float64 im) pairs.
void save_state(const StateVector& psi, const std::filesystem::path& path);
StateVector load_state(const std::filesystem::path& path);

}  // namespace qsre
