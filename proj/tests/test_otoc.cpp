#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "qsre/otoc.hpp"

using namespace qsre;

namespace {

// <psi_{W(t)V} | psi_{VW(t)}> with the explicit operator W(t) = e^{iHt} W e^{-iHt}
std::complex<double> heisenberg(const oracle::Mat& h, const oracle::Vec& psi, const oracle::Mat& v,
                                const oracle::Mat& w, double t) {
  const oracle::Mat u = oracle::expm_minus_i(h, t);
  const oracle::Mat wt = u.adjoint() * w * u;
  const oracle::Vec a = wt * v * psi;  // psi_{W(t)V}
  const oracle::Vec b = v * wt * psi;  // psi_{VW(t)}
  return a.dot(b);                    // <a|b>, conjugating a
}

}  // namespace

TEST_CASE("time grid helpers and validation") {
  CHECK(uniform_times(1.0, 0.25) == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
  OtocSpec s;
  s.times = {0.0, 1.0};
  CHECK_NOTHROW(s.validate(4));
  s.v_op = 'Q';
  CHECK_THROWS(s.validate(4));
  s.v_op = 'Z';
  s.w_site = 4;
  CHECK_THROWS(s.validate(4));
  s.w_site = 0;
  s.times = {0.5, 1.0};
  CHECK_THROWS(s.validate(4));
  s.times = {0.0, 1.0, 1.0};
  CHECK_THROWS(s.validate(4));
}

TEST_CASE("same-site Z: F(0) is 1") {
  const auto h = build_tfim_l(5, 1.0, 1.5, 0.5);
  OtocSpec s{2, 2, 'Z', 'Z', {0.0}};
  const auto f = otoc_trajectory(h, oracle::random_state(5, 3), s, KrylovConfig{});
  CHECK(f[0] == std::complex<double>(1.0, 0.0));
}

TEST_CASE("commuting dynamics keep F = 1") {
  // H with only Z terms commutes with Z_i, so W(t) = W
  const int n = 4;
  std::vector<PauliTerm> terms{{0.7, pauli_from_label("ZZII")}, {1.3, pauli_from_label("IZZI")},
                               {-0.4, pauli_from_label("IIIZ")}};
  PauliSumHamiltonian h(n, terms);
  OtocSpec s{0, 3, 'Z', 'Z', uniform_times(3.0, 0.5)};
  for (const auto& f : otoc_trajectory(h, oracle::random_state(n, 4), s, KrylovConfig{}))
    CHECK(std::abs(f - 1.0) < 1e-10);
}

TEST_CASE("state route matches the dense Heisenberg-picture oracle") {
  for (int n : {6, 8}) {
    const auto h = build_tfim_l(n, 1.0, 1.5, 0.5);
    const auto psi = oracle::random_state(n, 50 + n);
    const oracle::Mat hd = h.dense();
    for (auto [vs, ws, vo, wo] : {std::tuple{0, 0, 'Z', 'Z'}, std::tuple{1, 3, 'X', 'Y'}}) {
      OtocSpec s{vs, ws, vo, wo, uniform_times(2.0, 0.5)};
      const auto f = otoc_trajectory(h, psi, s, KrylovConfig{});
      for (std::size_t k = 0; k < s.times.size(); ++k) {
        const auto ref = heisenberg(hd, oracle::vec(psi), oracle::embed_pauli(n, vs, vo), oracle::embed_pauli(n, ws, wo),
                                    s.times[k]);
        CHECK(std::abs(f[k] - ref) < 1e-9);
        CHECK(std::abs(f[k]) <= 1.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("ensemble statistics: M = 1 has zero spread; CSV layout") {
  const auto h = build_tfim_l(4, 1.0, 1.5, 0.5);
  EnsembleSpec e;
  e.kind = EnsembleKind::FR;
  e.n_qubits = 4;
  e.n_realizations = 1;
  OtocSpec s{0, 0, 'Z', 'Z', uniform_times(1.0, 0.5)};
  const auto one = otoc_ensemble(h, e, s, KrylovConfig{});
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    CHECK(one.re_std[k] == 0.0);
    CHECK(one.im_std[k] == 0.0);
  }
  e.n_realizations = 3;
  const auto three = otoc_ensemble(h, e, s, KrylovConfig{});
  // realization 0 is shared, so the mean over 3 differs from it but the
  // first-time entry is 1 in both
  CHECK(three.mean[0].real() == doctest::Approx(1.0));
  CHECK(three.re_std[2] > 0.0);
  std::ostringstream os;
  write_otoc_csv(os, {one, three});
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "time,ensemble,re_mean,im_mean,re_std,im_std,M");
  int lines = 0;
  for (std::string l; std::getline(is, l);) ++lines;
  CHECK(lines == 6);
}

TEST_CASE("light cone: departure from 1 is later for more distant operators") {
  const int n = 10;
  const auto h = build_tfim_l(n, 1.0, 1.5, 0.5);
  EnsembleSpec e{EnsembleKind::FR, n, 3, 61};
  std::vector<double> departure;
  for (int sep : {1, 2, 3}) {
    const OtocSpec s{0, sep, 'Z', 'Z', uniform_times(4.0, 0.1)};
    const auto f = otoc_ensemble(h, e, s, KrylovConfig{});
    double t_dep = s.times.back() + 1.0;
    for (std::size_t k = 0; k < s.times.size(); ++k)
      if (std::abs(f.mean[k] - 1.0) > 0.05) {
        t_dep = s.times[k];
        break;
      }
    departure.push_back(t_dep);
  }
  INFO("departure times " << departure[0] << " " << departure[1] << " " << departure[2]);
  CHECK(departure[0] < departure[1]);
  CHECK(departure[1] < departure[2]);
  CHECK(departure[2] <= 4.0);
}

TEST_CASE("late-time fluctuations are smaller in the non-integrable regime") {
  const int n = 8;
  const OtocSpec s{n / 2, n / 2, 'Z', 'Z', uniform_times(10.0, 0.25)};
  auto late_std = [&](double hx) {
    const auto h = build_tfim_l(n, 1.0, 1.5, hx);
    double total = 0.0;
    for (int m = 0; m < 4; ++m) {
      const auto f = otoc_trajectory(h, generate(EnsembleSpec{EnsembleKind::FR, n, 4, 62}, m), s, KrylovConfig{});
      double sum = 0.0, sum2 = 0.0;
      int count = 0;
      for (std::size_t k = 0; k < s.times.size(); ++k)
        if (s.times[k] >= 8.0) {
          sum += f[k].real();
          sum2 += f[k].real() * f[k].real();
          ++count;
        }
      total += std::sqrt(std::max(0.0, sum2 / count - (sum / count) * (sum / count)));
    }
    return total / 4;
  };
  const double ni = late_std(0.5), ff = late_std(0.0);
  INFO("window std NI " << ni << " FF " << ff);
  CHECK(ni < ff);
}
