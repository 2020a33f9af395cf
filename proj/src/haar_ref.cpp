#include "qsre/haar_ref.hpp"

#include <cmath>
#include <numbers>

#include "qsre/rng.hpp"

namespace qsre {

namespace {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_nr(int n, int r) {
  if (n < 1) throw std::invalid_argument("baseline needs n >= 1");
  if (r < 0 || r > n) throw std::invalid_argument("region size out of range");
}

int smaller_side(int n, int r) { return 2 * r > n ? n - r : r; }

}  // namespace

Rational narayana(int alpha, int k) {
  if (alpha < 1 || k < 1 || k > alpha) throw std::invalid_argument("Narayana index out of range");
  return Rational(binomial(alpha, k) * binomial(alpha, k - 1), alpha);
}

Rational narayana_row_sum(int alpha) {
  Rational s(0);
  for (int k = 1; k <= alpha; ++k) s = s + narayana(alpha, k);
  return s;
}

double page_renyi(int n, int r, int alpha) {
  check_nr(n, r);
  if (alpha < 1) throw std::invalid_argument("Page formula needs an integer alpha >= 1");
  r = smaller_side(n, r);
  if (r == 0) return 0.0;
  if (alpha == 1) return r * std::numbers::ln2 - 0.5 * std::ldexp(1.0, 2 * r - n);
  // log[2^{n - r(1+alpha)} sum_k H(alpha,k) 2^{(2r - n) k}] / (1 - alpha)
  double sum = 0.0;
  for (int k = 1; k <= alpha; ++k) sum += narayana(alpha, k).to_double() * std::ldexp(1.0, (2 * r - n) * k);
  const double log_arg = (n - r * (1 + alpha)) * std::numbers::ln2 + std::log(sum);
  return log_arg / (1.0 - alpha);
}

Rational haar_log_antiflatness_argument() {
  const Rational c2 = narayana_row_sum(2);
  const Rational c3 = narayana_row_sum(3);
  return c3 / (c2 * c2);
}

double haar_m2_linear(int n) { return 1.0 - 4.0 / (std::ldexp(1.0, n) + 3.0); }

double haar_m2(int n) { return std::log2(std::ldexp(1.0, n) + 3.0) - 2.0; }

double haar_m2_limit(int n) { return n - 2.0; }

double haar_tr_rho2(int n, int r) { return std::exp(-page_renyi(n, r, 2)); }

double haar_tr_rho3(int n, int r) { return std::exp(-2.0 * page_renyi(n, r, 3)); }

double haar_antiflatness(int n, int r) {
  const double p2 = haar_tr_rho2(n, r);
  return haar_tr_rho3(n, r) - p2 * p2;
}

double haar_log_antiflatness(int n, int r) { return 2.0 * (page_renyi(n, r, 2) - page_renyi(n, r, 3)); }

HaarBaseline haar_baseline(int n, int r) {
  check_nr(n, r);
  HaarBaseline b;
  b.n_qubits = n;
  b.region_size = r;
  for (int a = 1; a <= 3; ++a) b.s_alpha[a] = page_renyi(n, r, a);
  b.m2 = haar_m2(n);
  b.m2_linear = haar_m2_linear(n);
  b.antiflatness = haar_antiflatness(n, r);
  b.log_antiflatness = haar_log_antiflatness(n, r);
  return b;
}

StateVector sample_haar_state(int n, std::uint64_t seed) {
  if (n < 1 || n > 12) throw std::invalid_argument("Haar sampler supports 1..12 qubits");
  Rng rng(splitmix64(seed ^ 0x5851f42d4c957f2dULL));
  std::vector<cplx> amps(std::size_t{1} << n);
  for (auto& a : amps) {
    const double re = rng.normal();
    const double im = rng.normal();
    a = cplx(re, im);
  }
  StateVector psi(n, std::move(amps));
  psi.normalize();
  return psi;
}

}  // namespace qsre
