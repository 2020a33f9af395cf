#include "qsre/measures.hpp"

#include <cmath>
#include <stdexcept>

#include "qsre/kernels.hpp"

namespace qsre {

namespace {

void check_spectrum(std::span<const double> spectrum) {
  if (spectrum.empty()) throw std::invalid_argument("empty spectrum");
  double total = 0.0;
  for (double v : spectrum) {
    if (v < -1e-12) throw std::invalid_argument("spectrum has a negative entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-8) throw std::invalid_argument("spectrum does not sum to 1");
}

void check_region(const StateVector& psi, int region_size) {
  if (region_size < 1 || region_size >= psi.n_qubits())
    throw std::invalid_argument("region size must satisfy 1 <= R < N");
}

MagicRecord magic_from_moments(const kernels::PauliMoments& m, int alpha, int n) {
  const double d = std::ldexp(1.0, n);
  MagicRecord rec;
  rec.alpha = alpha;
  if (alpha == 1) {
    rec.sre = std::max(0.0, m.shannon_sum - n);
    rec.stabilizer_purity = std::exp2(-rec.sre);
  } else {
    rec.stabilizer_purity = std::min(1.0, m.power_sum / d);
    rec.sre = std::max(0.0, std::log2(rec.stabilizer_purity) / (1.0 - alpha));
  }
  rec.sre_linearized = 1.0 - rec.stabilizer_purity;
  return rec;
}

void check_sre_args(const StateVector& psi, int alpha, int cap) {
  if (alpha < 1) throw std::invalid_argument("SRE index must be a positive integer");
  PauliGroup(psi.n_qubits(), cap);  // throws ResourceError past the cap
}

}  // namespace

double renyi_entropy(std::span<const double> spectrum, double alpha) {
  check_spectrum(spectrum);
  if (alpha < 0.0) throw std::invalid_argument("Rényi index must be non-negative");
  if (alpha == 1.0) {
    double s = 0.0;
    for (double v : spectrum)
      if (v > kSpectrumZero) s -= v * std::log(v);
    return std::max(0.0, s);
  }
  double sum = 0.0;
  for (double v : spectrum)
    if (v > kSpectrumZero) sum += alpha == 0.0 ? 1.0 : std::pow(v, alpha);
  return std::max(0.0, std::log(sum) / (1.0 - alpha));
}

EntropyProfile entropy_profile(const StateVector& psi, int region_size, double alpha) {
  check_region(psi, region_size);
  const int n = psi.n_qubits();
  EntropyProfile p;
  p.alpha = alpha;
  p.region_size = region_size;
  double total = 0.0;
  for (int start = 0; start < n; ++start) {
    const auto sites = contiguous_region(n, start, region_size);
    const auto rho = reduced_density_matrix(psi, sites);
    const double s = renyi_entropy(rho.spectrum(), alpha);
    p.per_partition.emplace_back(start, s);
    total += s;
  }
  p.partition_average = total / n;
  return p;
}

double averaged_entropy(const StateVector& psi, int region_size, double alpha) {
  return entropy_profile(psi, region_size, alpha).partition_average;
}

MagicRecord sre_exact(const StateVector& psi, int alpha, int cap) {
  check_sre_args(psi, alpha, cap);
  const auto m = kernels::parallel::pauli_moments(psi.amplitudes(), psi.n_qubits(), alpha, alpha == 1);
  return magic_from_moments(m, alpha, psi.n_qubits());
}

MagicRecord sre_reference(const StateVector& psi, int alpha, int cap) {
  check_sre_args(psi, alpha, cap);
  const auto m = kernels::serial::pauli_moments(psi.amplitudes(), psi.n_qubits(), alpha, alpha == 1);
  return magic_from_moments(m, alpha, psi.n_qubits());
}

FlatnessRecord antiflatness_from_spectrum(std::span<const double> spectrum) {
  check_spectrum(spectrum);
  FlatnessRecord f;
  f.tr_rho2 = 0.0;
  f.tr_rho3 = 0.0;
  for (double v : spectrum) {
    f.tr_rho2 += v * v;
    f.tr_rho3 += v * v * v;
  }
  f.antiflatness = f.tr_rho3 - f.tr_rho2 * f.tr_rho2;
  f.log_antiflatness = std::log(f.tr_rho3) - 2.0 * std::log(f.tr_rho2);
  return f;
}

FlatnessRecord antiflatness_from_matrix(const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd rho2 = rho * rho;
  FlatnessRecord f;
  f.tr_rho2 = rho2.trace().real();
  f.tr_rho3 = (rho2.cwiseProduct(rho.transpose())).sum().real();
  f.antiflatness = f.tr_rho3 - f.tr_rho2 * f.tr_rho2;
  f.log_antiflatness = std::log(f.tr_rho3) - 2.0 * std::log(f.tr_rho2);
  return f;
}

FlatnessRecord antiflatness(const ReducedDensityMatrix& rho) {
  if (rho.has_spectrum()) return antiflatness_from_spectrum(rho.spectrum());
  return antiflatness_from_matrix(rho.matrix());
}

double relative_difference(double value, double haar_value) {
  if (haar_value == 0.0) throw std::invalid_argument("relative difference needs a non-zero baseline");
  return std::abs(value - haar_value) / haar_value;
}

PartitionMeasures partition_measures(const StateVector& psi, int region_size) {
  check_region(psi, region_size);
  const int n = psi.n_qubits();
  PartitionMeasures pm;
  pm.region_size = region_size;
  for (int start = 0; start < n; ++start) {
    const auto rho = reduced_density_matrix(psi, contiguous_region(n, start, region_size));
    const auto& spec = rho.spectrum();
    pm.s1_avg += renyi_entropy(spec, 1.0);
    pm.s2_avg += renyi_entropy(spec, 2.0);
    pm.s3_avg += renyi_entropy(spec, 3.0);
    const auto f = antiflatness_from_spectrum(spec);
    pm.antiflatness_avg += f.antiflatness;
    pm.log_antiflatness_avg += f.log_antiflatness;
  }
  pm.s1_avg /= n;
  pm.s2_avg /= n;
  pm.s3_avg /= n;
  pm.antiflatness_avg /= n;
  pm.log_antiflatness_avg /= n;
  return pm;
}

}  // namespace qsre
