#include "qsre/statevec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "qsre/errors.hpp"
#include "qsre/kernels.hpp"

namespace qsre {

namespace {

void check_qubits(int n) {
  if (n < 1 || n > kMaxStateQubits)
    throw std::invalid_argument("qubit count out of range: " + std::to_string(n));
}

void check_site(const StateVector& psi, int site) {
  if (site < 0 || site >= psi.n_qubits())
    throw std::invalid_argument("site index out of range: " + std::to_string(site));
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  check_qubits(n_qubits);
  amplitudes_.assign(std::size_t{1} << n_qubits, cplx{0.0});
  amplitudes_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubits(n_qubits);
  if (amplitudes_.size() != std::size_t{1} << n_qubits)
    throw std::invalid_argument("amplitude count does not match 2^n_qubits");
}

double StateVector::norm() const {
  return std::sqrt(kernels::parallel::inner(amplitudes_, amplitudes_).real());
}

double StateVector::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) throw NumericError("cannot normalize the zero vector");
  const double inv = 1.0 / nrm;
  for (auto& a : amplitudes_) a *= inv;
  return nrm;
}

void StateVector::apply_one_qubit_inplace(int site, const Gate1& g) {
  check_site(*this, site);
  if (!is_unitary(g)) throw std::invalid_argument("single-qubit gate is not unitary");
  kernels::parallel::apply_one_qubit(amplitudes_, site, g);
}

void StateVector::apply_two_qubit_inplace(int site_a, int site_b, const Gate2& g) {
  check_site(*this, site_a);
  check_site(*this, site_b);
  if (site_a == site_b) throw std::invalid_argument("two-qubit gate needs distinct sites");
  if (!is_unitary(g)) throw std::invalid_argument("two-qubit gate is not unitary");
  kernels::parallel::apply_two_qubit(amplitudes_, site_a, site_b, g);
}

StateVector basis_state(int n_qubits, std::uint64_t index) {
  check_qubits(n_qubits);
  if (index >= (std::uint64_t{1} << n_qubits))
    throw std::invalid_argument("basis index out of range");
  std::vector<cplx> amps(std::size_t{1} << n_qubits, cplx{0.0});
  amps[index] = 1.0;
  return StateVector(n_qubits, std::move(amps));
}

StateVector product_state(std::span<const std::array<cplx, 2>> qubits) {
  const int n = static_cast<int>(qubits.size());
  check_qubits(n);
  std::vector<cplx> amps(std::size_t{1} << n);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    cplx a = 1.0;
    for (int q = 0; q < n; ++q) a *= qubits[static_cast<std::size_t>(q)][i >> q & 1];
    amps[i] = a;
  }
  return StateVector(n, std::move(amps));
}

StateVector apply_one_qubit_gate(const StateVector& psi, int site, const Gate1& g) {
  StateVector out = psi;
  out.apply_one_qubit_inplace(site, g);
  return out;
}

StateVector apply_two_qubit_gate(const StateVector& psi, int site_a, int site_b, const Gate2& g) {
  StateVector out = psi;
  out.apply_two_qubit_inplace(site_a, site_b, g);
  return out;
}

cplx inner_product(const StateVector& bra, const StateVector& ket) {
  if (bra.dim() != ket.dim()) throw std::invalid_argument("dimension mismatch in inner product");
  return kernels::parallel::inner(bra.amplitudes(), ket.amplitudes());
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner_product(a, b)); }

namespace gates {

Gate1 identity() { return Gate1::Identity(); }

Gate1 hadamard() {
  const double s = std::numbers::sqrt2 / 2.0;
  Gate1 g;
  g << s, s, s, -s;
  return g;
}

Gate1 phase_s() {
  Gate1 g;
  g << 1.0, 0.0, 0.0, cplx(0.0, 1.0);
  return g;
}

Gate1 t_gate() {
  Gate1 g;
  g << 1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4.0);
  return g;
}

Gate1 pauli_x() {
  Gate1 g;
  g << 0.0, 1.0, 1.0, 0.0;
  return g;
}

Gate1 pauli_y() {
  Gate1 g;
  g << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
  return g;
}

Gate1 pauli_z() {
  Gate1 g;
  g << 1.0, 0.0, 0.0, -1.0;
  return g;
}

Gate2 cnot() {
  Gate2 g = Gate2::Zero();
  g(0, 0) = 1.0;
  g(1, 1) = 1.0;
  g(2, 3) = 1.0;
  g(3, 2) = 1.0;
  return g;
}

Gate2 kron(const Gate1& first, const Gate1& second) {
  Gate2 g;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) g(2 * a + b, 2 * c + d) = first(a, c) * second(b, d);
  return g;
}

}  // namespace gates

bool is_unitary(const Eigen::MatrixXcd& g, double tol) {
  if (g.rows() != g.cols()) return false;
  const Eigen::MatrixXcd defect = g.adjoint() * g - Eigen::MatrixXcd::Identity(g.rows(), g.cols());
  return defect.cwiseAbs().maxCoeff() <= tol;
}

ReducedDensityMatrix::ReducedDensityMatrix(std::vector<int> sites, Eigen::MatrixXcd matrix)
    : sites_(std::move(sites)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != (Eigen::Index{1} << sites_.size()) || matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("RDM shape does not match its region");
}

const std::vector<double>& ReducedDensityMatrix::spectrum() const {
  if (!spectrum_) spectrum_ = entanglement_spectrum(matrix_);
  return *spectrum_;
}

ReducedDensityMatrix reduced_density_matrix(const StateVector& psi, std::span<const int> region) {
  const int n = psi.n_qubits();
  if (region.empty()) throw std::invalid_argument("region must not be empty");
  if (static_cast<int>(region.size()) >= n)
    throw std::invalid_argument("region must be a strict subset of the sites");
  std::uint64_t seen = 0;
  for (int s : region) {
    check_site(psi, s);
    if (seen >> s & 1) throw std::invalid_argument("region lists a site twice");
    seen |= std::uint64_t{1} << s;
  }
  return ReducedDensityMatrix(std::vector<int>(region.begin(), region.end()),
                              kernels::parallel::reduced_density_matrix(psi.amplitudes(), n, region));
}

std::vector<double> entanglement_spectrum(const ReducedDensityMatrix& rho) { return rho.spectrum(); }

std::vector<double> entanglement_spectrum(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("RDM eigensolver failed");
  const auto& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  double total = 0.0;
  for (auto& v : out) {
    if (v < -1e-12) throw NumericError("RDM has a negative eigenvalue: " + std::to_string(v));
    if (v < 0.0) v = 0.0;
    total += v;
  }
  if (total <= 0.0) throw NumericError("RDM spectrum sums to zero");
  if (std::abs(total - 1.0) > 1e-10)
    spdlog::debug("entanglement spectrum renormalized by {:.3e}", total - 1.0);
  for (auto& v : out) v /= total;
  return out;
}

std::vector<int> contiguous_region(int n_qubits, int start, int len) {
  if (len < 1 || len > n_qubits) throw std::invalid_argument("region length out of range");
  std::vector<int> sites(static_cast<std::size_t>(len));
  for (int k = 0; k < len; ++k) sites[static_cast<std::size_t>(k)] = ((start + k) % n_qubits + n_qubits) % n_qubits;
  return sites;
}

namespace {

constexpr char kMagic[4] = {'Q', 'S', 'V', 'D'};
constexpr std::uint32_t kDumpVersion = 1;

static_assert(std::endian::native == std::endian::little, "binary dumps assume a little-endian host");

}  // namespace

void save_state(const StateVector& psi, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const std::uint32_t header[2] = {kDumpVersion, static_cast<std::uint32_t>(psi.n_qubits())};
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  for (const cplx& a : psi.amplitudes()) {
    const double pair[2] = {a.real(), a.imag()};
    out.write(reinterpret_cast<const char*>(pair), sizeof pair);
  }
  if (!out) throw std::runtime_error("short write to " + path.string());
}

StateVector load_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  std::uint32_t header[2];
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error(path.string() + " is not a state dump");
  if (header[0] != kDumpVersion) throw std::runtime_error("unsupported state dump version");
  const int n = static_cast<int>(header[1]);
  check_qubits(n);
  std::vector<cplx> amps(std::size_t{1} << n);
  for (auto& a : amps) {
    double pair[2];
    in.read(reinterpret_cast<char*>(pair), sizeof pair);
    a = cplx(pair[0], pair[1]);
  }
  if (!in) throw std::runtime_error("truncated state dump " + path.string());
  return StateVector(n, std::move(amps));
}

}  // namespace qsre
