#include "qsre/otoc.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "qsre/errors.hpp"
#include "qsre/pauli.hpp"

namespace qsre {

void OtocSpec::validate(int n_qubits) const {
  if (v_site < 0 || v_site >= n_qubits || w_site < 0 || w_site >= n_qubits)
    throw std::invalid_argument("OTOC site out of range");
  for (char op : {v_op, w_op})
    if (op != 'X' && op != 'Y' && op != 'Z') throw std::invalid_argument("OTOC operators must be X, Y or Z");
  if (times.empty() || times.front() != 0.0) throw std::invalid_argument("OTOC time grid must start at 0");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw std::invalid_argument("OTOC time grid must be strictly increasing");
}

std::vector<double> uniform_times(double t_final, double dt) {
  const int steps = step_count(t_final, dt);
  std::vector<double> t(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) t[static_cast<std::size_t>(k)] = k * dt;
  return t;
}

std::vector<std::complex<double>> otoc_trajectory(const PauliSumHamiltonian& h, const StateVector& psi,
                                                  const OtocSpec& spec, const KrylovConfig& cfg) {
  const int n = psi.n_qubits();
  spec.validate(n);
  if (h.n_qubits() != n) throw std::invalid_argument("Hamiltonian/state dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw std::invalid_argument("OTOC needs a normalized state");

  const PauliString v = PauliString::single(n, spec.v_site, spec.v_op);
  const PauliString w = PauliString::single(n, spec.w_site, spec.w_op);

  const double norm2 = inner_product(psi, psi).real();
  StateVector fwd = psi;                 // e^{-iHt} psi
  StateVector fwd_v = apply_pauli(v, psi);  // e^{-iHt} V psi
  std::vector<std::complex<double>> out;
  out.reserve(spec.times.size());
  double t_prev = 0.0;
  for (std::size_t k = 0; k < spec.times.size(); ++k) {
    const double t = spec.times[k];
    try {
      if (t > t_prev) {
        fwd = krylov_propagate(h, fwd, t - t_prev, cfg).state;
        fwd_v = krylov_propagate(h, fwd_v, t - t_prev, cfg).state;
      }
      StateVector a = apply_pauli(w, fwd);
      StateVector b = apply_pauli(w, fwd_v);
      if (t > 0.0) {
        a = krylov_propagate(h, a, -t, cfg).state;
        b = krylov_propagate(h, b, -t, cfg).state;
      }
      a = apply_pauli(v, a);
      out.push_back(inner_product(b, a) / norm2);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(fmt::format("OTOC time index {}: {}", k, e.what()), e.achieved_estimate());
    } catch (const NumericError& e) {
      throw NumericError(fmt::format("OTOC time index {}: {}", k, e.what()));
    }
    t_prev = t;
  }
  return out;
}

OtocSeries otoc_ensemble(const PauliSumHamiltonian& h, const EnsembleSpec& ensemble, const OtocSpec& spec,
                         const KrylovConfig& cfg) {
  ensemble.validate();
  spec.validate(ensemble.n_qubits);
  const int m_count = ensemble.n_realizations;
  std::vector<std::vector<std::complex<double>>> traj(static_cast<std::size_t>(m_count));
  std::vector<std::string> errors(static_cast<std::size_t>(m_count));

#pragma omp parallel for schedule(dynamic, 1)
  for (int m = 0; m < m_count; ++m) {
    try {
      traj[static_cast<std::size_t>(m)] = otoc_trajectory(h, generate(ensemble, m), spec, cfg);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(m)] = e.what();
    }
  }
  for (int m = 0; m < m_count; ++m)
    if (!errors[static_cast<std::size_t>(m)].empty())
      throw NumericError(fmt::format("OTOC realization {}: {}", m, errors[static_cast<std::size_t>(m)]));

  OtocSeries s;
  s.ensemble = to_string(ensemble.kind);
  s.times = spec.times;
  s.realizations = m_count;
  const std::size_t nt = spec.times.size();
  s.mean.assign(nt, 0.0);
  s.re_std.assign(nt, 0.0);
  s.im_std.assign(nt, 0.0);
  for (std::size_t k = 0; k < nt; ++k) {
    std::complex<double> sum = 0.0;
    for (const auto& tr : traj) sum += tr[k];
    const std::complex<double> mean = sum / static_cast<double>(m_count);
    double vr = 0.0, vi = 0.0;
    for (const auto& tr : traj) {
      vr += std::pow(tr[k].real() - mean.real(), 2);
      vi += std::pow(tr[k].imag() - mean.imag(), 2);
    }
    s.mean[k] = mean;
    if (m_count > 1) {
      s.re_std[k] = std::sqrt(vr / (m_count - 1));
      s.im_std[k] = std::sqrt(vi / (m_count - 1));
    }
  }
  return s;
}

void write_otoc_csv(std::ostream& os, const std::vector<OtocSeries>& series) {
  os << "time,ensemble,re_mean,im_mean,re_std,im_std,M\n";
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.times.size(); ++k)
      os << fmt::format("{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", s.times[k], s.ensemble,
                        s.mean[k].real(), s.mean[k].imag(), s.re_std[k], s.im_std[k], s.realizations);
}

}  // namespace qsre
