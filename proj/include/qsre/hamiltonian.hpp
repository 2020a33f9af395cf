#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qsre/kernels.hpp"
#include "qsre/pauli.hpp"
#include "qsre/statevec.hpp"

namespace qsre {

enum class Regime { integrable_ff, integrable_ba, non_integrable };

std::string to_string(Regime r);

struct PauliTerm {
  double coefficient;
  PauliString op;
};

/// H = sum_k c_k P_k with real c_k and Hermitian, phase-free P_k. Applied
/// matrix-free; immutable after construction and safe to share.
///
/// Energies are in units of the nearest-neighbour coupling, times in its
/// inverse.
class PauliSumHamiltonian {
 public:
  PauliSumHamiltonian(int n_qubits, std::vector<PauliTerm> terms, std::string model = "custom",
                      Regime regime = Regime::non_integrable);

  int n_qubits() const noexcept { return n_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  const std::string& model() const noexcept { return model_; }
  Regime regime() const noexcept { return regime_; }

  /// out = H in (out is overwritten). Spans must have length 2^N.
  void apply_into(std::span<const cplx> in, std::span<cplx> out) const;
  StateVector apply(const StateVector& psi) const;
  /// <psi|H|psi>
  double energy(const StateVector& psi) const;

  /// Term list in the kernel's folded-phase form.
  std::vector<kernels::PauliTermView> term_views() const;

  /// Dense 2^N x 2^N matrix; throws ResourceError above 12 qubits.
  Eigen::MatrixXcd dense() const;

 private:
  int n_;
  std::vector<PauliTerm> terms_;
  std::string model_;
  Regime regime_;
  kernels::parallel::CompiledPauliSum compiled_;
};

/// -J sum X_i X_{i+1} - h_z sum Z_i - h_x sum X_i on a ring of n >= 3 sites.
/// Term order: bonds ascending, then Z fields, then X fields (only when
/// h_x != 0). Regime is free-fermion integrable iff h_x == 0.
PauliSumHamiltonian build_tfim_l(int n, double j_coupling, double hz, double hx);

/// sum [XX + YY + delta ZZ]_{i,i+1} + nnn_coupling sum [XX + YY + delta ZZ]_{i,i+2}
/// on a ring of n >= 5 sites. ZZ terms are dropped when delta == 0 and the
/// next-nearest block when nnn_coupling == 0.
PauliSumHamiltonian build_xxz_nnn(int n, double delta, double nnn_coupling);

}  // namespace qsre
