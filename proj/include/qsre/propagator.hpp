#pragma once

#include <functional>

#include "qsre/hamiltonian.hpp"
#include "qsre/statevec.hpp"

namespace qsre {

struct KrylovConfig {
  double dt = 0.1;
  int max_subspace = 30;
  double rel_tolerance = 1e-12;
  bool reorthogonalize = true;

  /// Throws std::invalid_argument unless dt > 0, max_subspace >= 2 and
  /// rel_tolerance exceeds machine epsilon. A subspace larger than the
  /// Hilbert space is clamped to 2^N at run time.
  void validate() const;
};

struct StepResult {
  StateVector state;
  /// Sum of the a-posteriori error estimates of all sub-intervals.
  double error_estimate = 0.0;
  /// | ||psi'|| - 1 | before the final renormalization.
  double norm_drift = 0.0;
  int substeps = 0;
  int max_dimension = 0;
};

/// psi -> exp(-i H dt) psi with dt = cfg.dt.
StepResult krylov_step(const PauliSumHamiltonian& h, const StateVector& psi,
                       const KrylovConfig& cfg);

/// psi -> exp(-i H t) psi for any real t (negative t runs backwards).
///
/// Lanczos tridiagonalization from psi; the small exponential exp(-i T t) e1
/// is lifted back to the full space. The subspace grows until
/// beta_{m+1} |[exp(-i T_m t) e1]_m| < rel_tolerance. If the cap is hit
/// first, the same basis is reused for the largest halving of t that
/// converges and the remainder is propagated from the new state. Raises
/// ConvergenceError if no sub-interval converges.
StepResult krylov_propagate(const PauliSumHamiltonian& h, const StateVector& psi, double t,
                            const KrylovConfig& cfg);

using EvolutionObserver = std::function<void(int step, double time, const StateVector& psi)>;

struct EvolutionSummary {
  StateVector final_state;
  int steps = 0;
  double cumulative_norm_drift = 0.0;
  double max_error_estimate = 0.0;
  double total_error_estimate = 0.0;
};

/// Fixed-step evolution from psi0 to t_final; t_final / cfg.dt must be an
/// integer within 1e-9. The observer sees step 0 (the initial state) and
/// every following step. `first_step` resumes a run whose state psi0 sits at
/// time first_step * dt. Errors from a step are rethrown with the step index.
EvolutionSummary evolve(const PauliSumHamiltonian& h, const StateVector& psi0, double t_final,
                        const KrylovConfig& cfg, const EvolutionObserver& observer = {},
                        int first_step = 0);

/// Number of steps implied by (t_final, dt); throws when not integral.
int step_count(double t_final, double dt);

/// Dense reference propagator: H = U D U^dagger, eigendecomposition cached.
class ExactPropagator {
 public:
  /// Throws ResourceError above 10 qubits.
  explicit ExactPropagator(const PauliSumHamiltonian& h);

  StateVector propagate(const StateVector& psi0, double t) const;
  const Eigen::VectorXd& energies() const noexcept { return energies_; }

 private:
  int n_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXcd vectors_;
};

/// U e^{-iDt} U^dagger psi0 (one-shot convenience wrapper).
StateVector exact_propagate(const PauliSumHamiltonian& h, const StateVector& psi0, double t);

}  // namespace qsre
