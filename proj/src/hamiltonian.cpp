#include "qsre/hamiltonian.hpp"

#include <bit>
#include <stdexcept>

#include "qsre/errors.hpp"

namespace qsre {

namespace {

constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

PauliString two_site(int n, int a, int b, char op) {
  return PauliString::single(n, a, op) * PauliString::single(n, b, op);
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::integrable_ff: return "integrable_ff";
    case Regime::integrable_ba: return "integrable_ba";
    case Regime::non_integrable: return "non_integrable";
  }
  return "?";
}

PauliSumHamiltonian::PauliSumHamiltonian(int n_qubits, std::vector<PauliTerm> terms,
                                         std::string model, Regime regime)
    : n_(n_qubits), terms_(std::move(terms)), model_(std::move(model)), regime_(regime) {
  if (n_ < 1 || n_ > kMaxStateQubits) throw std::invalid_argument("Hamiltonian qubit count out of range");
  for (const auto& t : terms_) {
    if (t.op.n_qubits != n_) throw std::invalid_argument("Hamiltonian term has the wrong qubit count");
    if (t.op.phase != 0) throw std::invalid_argument("Hamiltonian terms must be phase-free");
  }
  const auto views = term_views();
  compiled_ = kernels::parallel::CompiledPauliSum(n_, views);
}

std::vector<kernels::PauliTermView> PauliSumHamiltonian::term_views() const {
  std::vector<kernels::PauliTermView> views;
  views.reserve(terms_.size());
  for (const auto& t : terms_) {
    const int k = (t.op.phase + std::popcount(t.op.x_mask & t.op.z_mask)) & 3;
    views.push_back({t.op.x_mask, t.op.z_mask, t.coefficient * kIPow[k]});
  }
  return views;
}

void PauliSumHamiltonian::apply_into(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != compiled_.dim() || out.size() != compiled_.dim())
    throw std::invalid_argument("Hamiltonian/state dimension mismatch");
  compiled_.apply(in, out);
}

StateVector PauliSumHamiltonian::apply(const StateVector& psi) const {
  if (psi.n_qubits() != n_) throw std::invalid_argument("Hamiltonian/state dimension mismatch");
  std::vector<cplx> out(psi.dim());
  compiled_.apply(psi.amplitudes(), out);
  return StateVector(n_, std::move(out));
}

double PauliSumHamiltonian::energy(const StateVector& psi) const {
  return inner_product(psi, apply(psi)).real();
}

Eigen::MatrixXcd PauliSumHamiltonian::dense() const {
  if (n_ > 12) throw ResourceError("dense Hamiltonian limited to 12 qubits");
  const auto dim = Eigen::Index{1} << n_;
  Eigen::MatrixXcd h(dim, dim);
  std::vector<cplx> e(static_cast<std::size_t>(dim)), col(static_cast<std::size_t>(dim));
  for (Eigen::Index c = 0; c < dim; ++c) {
    std::fill(e.begin(), e.end(), cplx{0.0});
    e[static_cast<std::size_t>(c)] = 1.0;
    compiled_.apply(e, col);
    for (Eigen::Index r = 0; r < dim; ++r) h(r, c) = col[static_cast<std::size_t>(r)];
  }
  return h;
}

PauliSumHamiltonian build_tfim_l(int n, double j_coupling, double hz, double hx) {
  if (n < 3) throw std::invalid_argument("TFIM+L ring needs at least 3 sites");
  std::vector<PauliTerm> terms;
  for (int i = 0; i < n; ++i) terms.push_back({-j_coupling, two_site(n, i, (i + 1) % n, 'X')});
  for (int i = 0; i < n; ++i) terms.push_back({-hz, PauliString::single(n, i, 'Z')});
  if (hx != 0.0)
    for (int i = 0; i < n; ++i) terms.push_back({-hx, PauliString::single(n, i, 'X')});
  return PauliSumHamiltonian(n, std::move(terms), "tfim_l",
                             hx == 0.0 ? Regime::integrable_ff : Regime::non_integrable);
}

PauliSumHamiltonian build_xxz_nnn(int n, double delta, double nnn_coupling) {
  if (n < 5) throw std::invalid_argument("XXZ+NNN ring needs at least 5 sites");
  std::vector<PauliTerm> terms;
  auto add_bonds = [&](int range, double scale) {
    for (int i = 0; i < n; ++i) {
      const int k = (i + range) % n;
      terms.push_back({scale, two_site(n, i, k, 'X')});
      terms.push_back({scale, two_site(n, i, k, 'Y')});
      if (delta != 0.0) terms.push_back({scale * delta, two_site(n, i, k, 'Z')});
    }
  };
  add_bonds(1, 1.0);
  if (nnn_coupling != 0.0) add_bonds(2, nnn_coupling);

  Regime regime = Regime::non_integrable;
  if (nnn_coupling == 0.0) regime = delta == 0.0 ? Regime::integrable_ff : Regime::integrable_ba;
  return PauliSumHamiltonian(n, std::move(terms), "xxz_nnn", regime);
}

}  // namespace qsre
