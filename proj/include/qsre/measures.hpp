#pragma once

// State functionals. Units: entanglement entropies in nats, stabilizer
// Rényi entropies in bits.

#include <span>
#include <string>
#include <vector>

#include "qsre/pauli.hpp"
#include "qsre/statevec.hpp"

namespace qsre {

/// Eigenvalues below this are exact zeros in entropy sums (0 log 0 = 0).
inline constexpr double kSpectrumZero = 1e-14;

/// S_alpha = log(sum lambda^alpha) / (1 - alpha); alpha == 1 gives the von
/// Neumann entropy and alpha == 0 the log-rank. Throws std::invalid_argument
/// unless the spectrum is non-negative and sums to 1 within 1e-8.
double renyi_entropy(std::span<const double> spectrum, double alpha);

struct EntropyProfile {
  static constexpr const char* units = "nats";
  double alpha = 1.0;
  int region_size = 0;
  /// (first site of the window, entropy) for each of the N windows.
  std::vector<std::pair<int, double>> per_partition;
  double partition_average = 0.0;
};

/// S_alpha of each of the N contiguous windows of length R on the ring.
EntropyProfile entropy_profile(const StateVector& psi, int region_size, double alpha);
/// Mean over the N windows; 1 <= R < N.
double averaged_entropy(const StateVector& psi, int region_size, double alpha);

struct MagicRecord {
  static constexpr const char* units = "bits";
  int alpha = 2;
  double sre = 0.0;
  double sre_linearized = 0.0;
  double stabilizer_purity = 1.0;
};

/// P_alpha = (1/d) sum_P <P>^{2 alpha}, M_alpha = log2(P_alpha) / (1 - alpha),
/// M_lin = 1 - P_alpha, by exhaustive enumeration of all 4^N strings.
/// alpha == 1 returns the Shannon limit M_1 = H(xi) - N with
/// xi_P = <P>^2 / d, and reports stabilizer_purity = 2^{-M_1}.
MagicRecord sre_exact(const StateVector& psi, int alpha = 2, int cap = kDefaultEnumerationCap);

/// Same quantity through the serial one-string-at-a-time reference kernel.
MagicRecord sre_reference(const StateVector& psi, int alpha = 2, int cap = kDefaultEnumerationCap);

struct FlatnessRecord {
  double antiflatness = 0.0;      // Tr rho^3 - (Tr rho^2)^2
  double log_antiflatness = 0.0;  // 2 (S_2 - S_3)
  double tr_rho2 = 1.0;
  double tr_rho3 = 1.0;
};

FlatnessRecord antiflatness_from_spectrum(std::span<const double> spectrum);
/// Moments from matrix products, without diagonalizing.
FlatnessRecord antiflatness_from_matrix(const Eigen::MatrixXcd& rho);
/// Uses the cached spectrum when present, otherwise the trace route.
FlatnessRecord antiflatness(const ReducedDensityMatrix& rho);

/// |value - haar| / haar; throws std::invalid_argument on a zero baseline.
double relative_difference(double value, double haar_value);

/// Everything the runner records for one region size, from a single RDM
/// diagonalization per window.
struct PartitionMeasures {
  int region_size = 0;
  double s1_avg = 0.0;
  double s2_avg = 0.0;
  double s3_avg = 0.0;
  double antiflatness_avg = 0.0;
  double log_antiflatness_avg = 0.0;
};

PartitionMeasures partition_measures(const StateVector& psi, int region_size);

}  // namespace qsre
