#pragma once

// Four-point out-of-time-ordered correlators of single-site Paulis in a
// pure state, evaluated with state propagations only.

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "qsre/ensembles.hpp"
#include "qsre/hamiltonian.hpp"
#include "qsre/propagator.hpp"

namespace qsre {

struct OtocSpec {
  int v_site = 0;
  int w_site = 0;
  char v_op = 'Z';
  char w_op = 'Z';
  /// Strictly increasing, starting at 0.
  std::vector<double> times;

  void validate(int n_qubits) const;
};

/// {0, dt, 2 dt, ..., t_final}
std::vector<double> uniform_times(double t_final, double dt);

/// F(t) = <psi_{W(t)V} | psi_{VW(t)}> with
///   psi_{W(t)V} = e^{iHt} W e^{-iHt} V psi,
///   psi_{VW(t)} = V e^{iHt} W e^{-iHt} psi.
/// divided by <psi|psi> so that roundoff in the norm cannot move F(0) off 1.
/// Forward states are carried along the grid; each time point costs two
/// backward propagations.
std::vector<std::complex<double>> otoc_trajectory(const PauliSumHamiltonian& h, const StateVector& psi,
                                                  const OtocSpec& spec, const KrylovConfig& cfg);

struct OtocSeries {
  std::string ensemble;
  std::vector<double> times;
  std::vector<std::complex<double>> mean;
  /// Sample standard deviations (M - 1 normalization; 0 when M == 1).
  std::vector<double> re_std;
  std::vector<double> im_std;
  int realizations = 0;
};

/// Realizations run concurrently; the reduction is in realization order.
OtocSeries otoc_ensemble(const PauliSumHamiltonian& h, const EnsembleSpec& ensemble, const OtocSpec& spec,
                         const KrylovConfig& cfg);

/// Columns: time,ensemble,re_mean,im_mean,re_std,im_std,M
void write_otoc_csv(std::ostream& os, const std::vector<OtocSeries>& series);

}  // namespace qsre
