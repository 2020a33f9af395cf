#include "qsre/pauli.hpp"

#include <bit>
#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qsre/errors.hpp"
#include "qsre/kernels.hpp"

namespace qsre {

namespace {

constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

Mask bit(int site) { return Mask{1} << site; }

}  // namespace

PauliString PauliString::single(int n, int site, char op) {
  if (site < 0 || site >= n) throw std::invalid_argument("Pauli site out of range");
  PauliString p = identity(n);
  switch (op) {
    case 'X': p.x_mask = bit(site); break;
    case 'Z': p.z_mask = bit(site); break;
    case 'Y': p.x_mask = p.z_mask = bit(site); break;
    case 'I': break;
    default: throw std::invalid_argument(std::string("unknown Pauli operator '") + op + "'");
  }
  return p;
}

int PauliString::weight() const noexcept { return std::popcount(x_mask | z_mask); }

char PauliString::at(int site) const noexcept {
  const bool x = x_mask >> site & 1;
  const bool z = z_mask >> site & 1;
  return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
}

std::string PauliString::label() const {
  static constexpr const char* kPrefix[4] = {"", "i", "-", "-i"};
  std::string s = kPrefix[phase & 3];
  for (int q = 0; q < n_qubits; ++q) s += at(q);
  return s;
}

std::string PauliString::hex() const {
  std::ostringstream os;
  os << std::hex << x_mask << ':' << z_mask;
  return os.str();
}

bool PauliString::commutes_with(const PauliString& o) const noexcept {
  return (std::popcount(x_mask & o.z_mask) + std::popcount(z_mask & o.x_mask)) % 2 == 0;
}

PauliString PauliString::operator*(const PauliString& rhs) const {
  if (n_qubits != rhs.n_qubits) throw std::invalid_argument("Pauli product of different sizes");
  // Work in the X^x Z^z frame: P = i^(phase + |x&z|) X^x Z^z.
  // Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1.
  const int a = phase + std::popcount(x_mask & z_mask);
  const int b = rhs.phase + std::popcount(rhs.x_mask & rhs.z_mask);
  const int sign = std::popcount(z_mask & rhs.x_mask) % 2 ? 2 : 0;
  PauliString out{n_qubits, x_mask ^ rhs.x_mask, z_mask ^ rhs.z_mask, 0};
  out.phase = ((a + b + sign - std::popcount(out.x_mask & out.z_mask)) % 4 + 4) % 4;
  return out;
}

PauliString pauli_from_label(std::string_view label) {
  if (label.empty()) throw std::invalid_argument("empty Pauli label");
  if (label.size() > 64) throw std::invalid_argument("Pauli label longer than 64 qubits");
  PauliString p = PauliString::identity(static_cast<int>(label.size()));
  for (std::size_t q = 0; q < label.size(); ++q) {
    switch (label[q]) {
      case 'I': break;
      case 'X': p.x_mask |= bit(static_cast<int>(q)); break;
      case 'Z': p.z_mask |= bit(static_cast<int>(q)); break;
      case 'Y':
        p.x_mask |= bit(static_cast<int>(q));
        p.z_mask |= bit(static_cast<int>(q));
        break;
      default:
        throw std::invalid_argument(std::string("invalid Pauli character '") + label[q] + "'");
    }
  }
  return p;
}

double expectation(const PauliString& p, const StateVector& psi) {
  if (p.n_qubits != psi.n_qubits()) throw std::invalid_argument("Pauli/state dimension mismatch");
  if (!p.is_hermitian()) throw std::invalid_argument("expectation needs a Hermitian Pauli string");
  const cplx raw = kernels::parallel::pauli_overlap(psi.amplitudes(), p.x_mask, p.z_mask);
  const cplx value = kIPow[(p.phase + std::popcount(p.x_mask & p.z_mask)) & 3] * raw;
  assert(std::abs(value.imag()) < 1e-12);
  return value.real();
}

StateVector apply_pauli(const PauliString& p, const StateVector& psi) {
  if (p.n_qubits != psi.n_qubits()) throw std::invalid_argument("Pauli/state dimension mismatch");
  std::vector<cplx> out(psi.dim(), cplx{0.0});
  const cplx factor = kIPow[(p.phase + std::popcount(p.x_mask & p.z_mask)) & 3];
  kernels::parallel::apply_pauli_accumulate(psi.amplitudes(), out, p.x_mask, p.z_mask, factor);
  return StateVector(psi.n_qubits(), std::move(out));
}

PauliGroup::PauliGroup(int n, int cap) : n_(n) {
  if (n < 1) throw std::invalid_argument("Pauli group needs at least one qubit");
  if (n > cap)
    throw ResourceError("Pauli enumeration over " + std::to_string(n) +
                        " qubits exceeds the cap of " + std::to_string(cap));
  if (n > 31) throw ResourceError("Pauli enumeration index would overflow");
}

PauliString PauliGroup::at(std::uint64_t index) const noexcept {
  const Mask low = (Mask{1} << n_) - 1;
  return {n_, index >> n_, index & low, 0};
}

}  // namespace qsre
