#pragma once

// Analytic Haar-random baselines (leading order in 2^-N) and a Haar state
// sampler used as the numerical oracle for them.

#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>

#include "qsre/statevec.hpp"

namespace qsre {

/// Exact rational with normalized sign and lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  constexpr double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend constexpr Rational operator+(Rational a, Rational b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  friend constexpr Rational operator-(Rational a, Rational b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
  }
  friend constexpr Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
  friend constexpr Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
  friend constexpr bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
};

/// H(alpha, k) = C(alpha, k) C(alpha, k - 1) / alpha for 1 <= k <= alpha.
Rational narayana(int alpha, int k);

/// sum_k H(alpha, k), the Catalan number C_alpha.
Rational narayana_row_sum(int alpha);

/// Leading-order Haar average of S_alpha (nats) for a region of r of n
/// qubits. Regions with r > n/2 use r -> n - r; r == 0 or r == n gives 0.
/// alpha == 1 uses r log 2 - 2^{2r - n} / 2 (Page), which is
/// (n/2) log 2 - 1/2 at the half chain.
double page_renyi(int n, int r, int alpha);

/// exp(F_Haar) at the half chain, F = 2 (S_2 - S_3): C_3 / C_2^2 = 5/4.
Rational haar_log_antiflatness_argument();

/// M_2^lin = 1 - 4 / (d + 3).
double haar_m2_linear(int n);
/// -log2(1 - M_2^lin) = log2(d + 3) - 2 (bits).
double haar_m2(int n);
/// Large-N form N - 2.
double haar_m2_limit(int n);

/// Leading-order moments Tr rho_R^2 and Tr rho_R^3 for r of n qubits.
double haar_tr_rho2(int n, int r);
double haar_tr_rho3(int n, int r);
/// Tr rho^3 - (Tr rho^2)^2 at leading order; equals 2^{-n} for every r.
double haar_antiflatness(int n, int r);
/// 2 (S_2 - S_3) at leading order; log(5/4) at the half chain.
double haar_log_antiflatness(int n, int r);

struct HaarBaseline {
  int n_qubits = 0;
  int region_size = 0;
  std::map<int, double> s_alpha;  // alpha -> nats
  double m2 = 0.0;                // bits, finite-size form
  double m2_linear = 0.0;
  double antiflatness = 0.0;
  double log_antiflatness = 0.0;
};

HaarBaseline haar_baseline(int n, int r);

/// Normalized complex-Gaussian vector on n <= 12 qubits.
StateVector sample_haar_state(int n, std::uint64_t seed);

}  // namespace qsre
