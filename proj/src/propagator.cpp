#include "qsre/propagator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <spdlog/spdlog.h>

#include "qsre/errors.hpp"
#include "qsre/kernels.hpp"

namespace qsre {

void KrylovConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("Krylov dt must be positive");
  if (max_subspace < 2) throw std::invalid_argument("Krylov subspace must allow at least 2 vectors");
  if (!(rel_tolerance > std::numeric_limits<double>::epsilon()))
    throw std::invalid_argument("Krylov tolerance must exceed machine epsilon");
}

namespace {

namespace kp = kernels::parallel;

// exp(-i T tau) e1 for the real symmetric tridiagonal T(alpha, beta).
Eigen::VectorXcd tridiagonal_exp_e1(const std::vector<double>& alpha, const std::vector<double>& beta,
                                    int size, double tau) {
  Eigen::VectorXd diag(size);
  Eigen::VectorXd sub(size > 1 ? size - 1 : 0);
  for (int k = 0; k < size; ++k) diag(k) = alpha[static_cast<std::size_t>(k)];
  for (int k = 0; k + 1 < size; ++k) sub(k) = beta[static_cast<std::size_t>(k)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  if (size == 1) {
    Eigen::VectorXcd y(1);
    y(0) = std::polar(1.0, -diag(0) * tau);
    return y;
  }
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericError("tridiagonal eigensolver failed");
  const Eigen::MatrixXd& q = es.eigenvectors();
  Eigen::VectorXcd coeff(size);
  for (int l = 0; l < size; ++l) coeff(l) = std::polar(q(0, l), -es.eigenvalues()(l) * tau);
  return q.cast<cplx>() * coeff;
}

}  // namespace

StepResult krylov_propagate(const PauliSumHamiltonian& h, const StateVector& psi, double t,
                            const KrylovConfig& cfg) {
  cfg.validate();
  if (psi.n_qubits() != h.n_qubits()) throw std::invalid_argument("Hamiltonian/state dimension mismatch");

  const std::size_t dim = psi.dim();
  const int m_max = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(cfg.max_subspace), dim));
  const double norm0 = psi.norm();

  StepResult res{psi};
  if (t == 0.0) return res;

  std::vector<std::vector<cplx>> basis(static_cast<std::size_t>(m_max), std::vector<cplx>(dim));
  std::vector<cplx> w(dim);
  std::vector<double> alpha(static_cast<std::size_t>(m_max));
  std::vector<double> beta(static_cast<std::size_t>(m_max));

  StateVector& cur = res.state;
  double remaining = t;
  while (remaining != 0.0) {
    const double nrm = cur.norm();
    {
      const double inv = 1.0 / nrm;
      auto src = cur.amplitudes();
      for (std::size_t i = 0; i < dim; ++i) basis[0][i] = src[i] * inv;
    }

    int size = 0;
    bool converged = false;
    double err = 0.0;
    Eigen::VectorXcd y;
    for (int k = 0; k < m_max; ++k) {
      auto& vk = basis[static_cast<std::size_t>(k)];
      h.apply_into(vk, w);
      const double a = kp::inner(vk, w).real();
      alpha[static_cast<std::size_t>(k)] = a;
      for (std::size_t i = 0; i < dim; ++i) w[i] -= a * vk[i];
      if (k > 0) {
        const double b = beta[static_cast<std::size_t>(k - 1)];
        const auto& vp = basis[static_cast<std::size_t>(k - 1)];
        for (std::size_t i = 0; i < dim; ++i) w[i] -= b * vp[i];
      }
      if (cfg.reorthogonalize) {
        for (int j = 0; j <= k; ++j) {
          const auto& vj = basis[static_cast<std::size_t>(j)];
          const cplx c = kp::inner(vj, w);
          for (std::size_t i = 0; i < dim; ++i) w[i] -= c * vj[i];
        }
      }
      const double b = std::sqrt(kp::inner(w, w).real());
      beta[static_cast<std::size_t>(k)] = b;
      size = k + 1;

      y = tridiagonal_exp_e1(alpha, beta, size, remaining);
      const double scale = std::abs(a) + (k > 0 ? beta[static_cast<std::size_t>(k - 1)] : 0.0) + 1.0;
      if (b <= 1e-14 * scale) {  // invariant subspace: the projection is exact
        err = 0.0;
        converged = true;
        break;
      }
      err = b * std::abs(y(size - 1));
      if (err < cfg.rel_tolerance) {
        converged = true;
        break;
      }
      if (size < m_max) {
        auto& vn = basis[static_cast<std::size_t>(k + 1)];
        const double inv = 1.0 / b;
        for (std::size_t i = 0; i < dim; ++i) vn[i] = w[i] * inv;
      }
    }

    double tau = remaining;
    if (!converged) {
      const double b_last = beta[static_cast<std::size_t>(size - 1)];
      int halvings = 0;
      while (err >= cfg.rel_tolerance) {
        if (++halvings > 60)
          throw ConvergenceError("Krylov propagation did not converge (estimate " +
                                     std::to_string(err) + ")",
                                 err);
        tau *= 0.5;
        y = tridiagonal_exp_e1(alpha, beta, size, tau);
        err = b_last * std::abs(y(size - 1));
      }
    }

    std::vector<cplx> next(dim, cplx{0.0});
    for (int j = 0; j < size; ++j) {
      const cplx c = nrm * y(j);
      const auto& vj = basis[static_cast<std::size_t>(j)];
      for (std::size_t i = 0; i < dim; ++i) next[i] += c * vj[i];
    }
    cur = StateVector(psi.n_qubits(), std::move(next));
    res.error_estimate += err;
    res.substeps += 1;
    res.max_dimension = std::max(res.max_dimension, size);
    remaining = (tau == remaining) ? 0.0 : remaining - tau;
  }

  const double norm1 = cur.norm();
  res.norm_drift = std::abs(norm1 - norm0);
  if (res.norm_drift > 1e-12) spdlog::debug("Krylov norm drift {:.3e} before renormalization", res.norm_drift);
  const double s = norm0 / norm1;
  for (auto& a : cur.mutable_amplitudes()) a *= s;
  return res;
}

StepResult krylov_step(const PauliSumHamiltonian& h, const StateVector& psi, const KrylovConfig& cfg) {
  return krylov_propagate(h, psi, cfg.dt, cfg);
}

int step_count(double t_final, double dt) {
  if (!(t_final > 0.0)) throw std::invalid_argument("t_final must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double ratio = t_final / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("t_final is not an integer multiple of dt");
  return static_cast<int>(rounded);
}

EvolutionSummary evolve(const PauliSumHamiltonian& h, const StateVector& psi0, double t_final,
                        const KrylovConfig& cfg, const EvolutionObserver& observer, int first_step) {
  cfg.validate();
  const int steps = step_count(t_final, cfg.dt);
  if (first_step < 0 || first_step > steps) throw std::invalid_argument("resume step out of range");

  EvolutionSummary summary{psi0};
  summary.steps = steps;
  if (observer) observer(first_step, first_step * cfg.dt, summary.final_state);
  for (int s = first_step + 1; s <= steps; ++s) {
    StepResult r = [&] {
      try {
        return krylov_step(h, summary.final_state, cfg);
      } catch (const ConvergenceError& e) {
        throw ConvergenceError("step " + std::to_string(s) + ": " + e.what(), e.achieved_estimate());
      } catch (const NumericError& e) {
        throw NumericError("step " + std::to_string(s) + ": " + e.what());
      }
    }();
    summary.final_state = std::move(r.state);
    summary.cumulative_norm_drift += r.norm_drift;
    summary.max_error_estimate = std::max(summary.max_error_estimate, r.error_estimate);
    summary.total_error_estimate += r.error_estimate;
    if (observer) observer(s, s * cfg.dt, summary.final_state);
  }
  if (summary.cumulative_norm_drift >= 1e-10)
    throw NumericError("cumulative norm drift " + std::to_string(summary.cumulative_norm_drift) +
                       " exceeds 1e-10");
  return summary;
}

ExactPropagator::ExactPropagator(const PauliSumHamiltonian& h) : n_(h.n_qubits()) {
  if (n_ > 10) throw ResourceError("exact propagation limited to 10 qubits");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
  if (es.info() != Eigen::Success) throw NumericError("Hamiltonian diagonalization failed");
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

StateVector ExactPropagator::propagate(const StateVector& psi0, double t) const {
  if (psi0.n_qubits() != n_) throw std::invalid_argument("Hamiltonian/state dimension mismatch");
  const auto amps = psi0.amplitudes();
  Eigen::Map<const Eigen::VectorXcd> v(amps.data(), static_cast<Eigen::Index>(amps.size()));
  Eigen::VectorXcd c = vectors_.adjoint() * v;
  for (Eigen::Index l = 0; l < c.size(); ++l) c(l) *= std::polar(1.0, -energies_(l) * t);
  const Eigen::VectorXcd out = vectors_ * c;
  return StateVector(n_, std::vector<cplx>(out.data(), out.data() + out.size()));
}

StateVector exact_propagate(const PauliSumHamiltonian& h, const StateVector& psi0, double t) {
  return ExactPropagator(h).propagate(psi0, t);
}

}  // namespace qsre
