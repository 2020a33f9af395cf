#include "qsre/ensembles.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qsre {

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::FR: return "FR";
    case EnsembleKind::FC: return "FC";
    case EnsembleKind::NFC: return "NFC";
  }
  return "?";
}

EnsembleKind ensemble_kind_from_string(std::string_view s) {
  if (s == "FR") return EnsembleKind::FR;
  if (s == "FC") return EnsembleKind::FC;
  if (s == "NFC") return EnsembleKind::NFC;
  throw std::invalid_argument("unknown ensemble kind '" + std::string(s) + "'");
}

int EnsembleSpec::layers() const {
  return static_cast<int>(std::lround(layers_per_n_squared * n_qubits * n_qubits));
}

void EnsembleSpec::validate() const {
  if (n_qubits < 2) throw std::invalid_argument("ensemble needs N >= 2");
  if (n_qubits > kMaxStateQubits) throw std::invalid_argument("ensemble N exceeds the state cap");
  if (n_realizations < 1) throw std::invalid_argument("ensemble needs M >= 1");
  if (kind != EnsembleKind::FR && layers() < 1)
    throw std::invalid_argument("Clifford ensembles need at least one layer");
}

CliffordCircuit sample_fc_circuit(int n_qubits, int layers, Rng& rng) {
  static constexpr CliffordGate::Kind kGates[3] = {CliffordGate::Kind::I, CliffordGate::Kind::S,
                                                   CliffordGate::Kind::H};
  CliffordCircuit c;
  c.reserve(static_cast<std::size_t>(layers) * static_cast<std::size_t>(n_qubits - 1));
  for (int layer = 0; layer < layers; ++layer) {
    for (int g = 0; g < n_qubits - 1; ++g) {
      const int site = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_qubits)));
      c.push_back({kGates[rng.below(3)], site});
    }
  }
  return c;
}

CliffordCircuit sample_nfc_circuit(int n_qubits, int layers, Rng& rng) {
  using K = CliffordGate::Kind;
  CliffordCircuit c;
  c.reserve(static_cast<std::size_t>(layers) * static_cast<std::size_t>(n_qubits - 1));
  for (int layer = 0; layer < layers; ++layer) {
    for (int g = 0; g < n_qubits - 1; ++g) {
      const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_qubits)));
      int l = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_qubits - 1)));
      if (l >= j) ++l;
      switch (rng.below(6)) {
        case 0: c.push_back({K::S, l}); break;          // I_j (x) S_l
        case 1: c.push_back({K::S, j}); break;          // S_j (x) I_l
        case 2: c.push_back({K::H, l}); break;          // I_j (x) H_l
        case 3: c.push_back({K::H, j}); break;          // H_j (x) I_l
        case 4: c.push_back({K::CNOT, j, l}); break;    // CNOT_{j,l}
        default: c.push_back({K::CNOT, l, j}); break;   // CNOT_{l,j}
      }
    }
  }
  return c;
}

void apply_circuit(StateVector& psi, const CliffordCircuit& circuit) {
  static const Gate1 s = gates::phase_s();
  static const Gate1 h = gates::hadamard();
  static const Gate2 cx = gates::cnot();
  for (const auto& g : circuit) {
    switch (g.kind) {
      case CliffordGate::Kind::I: break;
      case CliffordGate::Kind::S: psi.apply_one_qubit_inplace(g.site, s); break;
      case CliffordGate::Kind::H: psi.apply_one_qubit_inplace(g.site, h); break;
      case CliffordGate::Kind::CNOT: psi.apply_two_qubit_inplace(g.site, g.target, cx); break;
    }
  }
}

void write_circuit(std::ostream& os, const CliffordCircuit& circuit) {
  for (const auto& g : circuit) {
    switch (g.kind) {
      case CliffordGate::Kind::I: os << "I " << g.site << '\n'; break;
      case CliffordGate::Kind::S: os << "S " << g.site << '\n'; break;
      case CliffordGate::Kind::H: os << "H " << g.site << '\n'; break;
      case CliffordGate::Kind::CNOT: os << "CNOT " << g.site << ' ' << g.target << '\n'; break;
    }
  }
}

CliffordCircuit read_circuit(std::istream& is) {
  CliffordCircuit c;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string name;
    CliffordGate g{CliffordGate::Kind::I, -1};
    ls >> name >> g.site;
    if (name == "I") g.kind = CliffordGate::Kind::I;
    else if (name == "S") g.kind = CliffordGate::Kind::S;
    else if (name == "H") g.kind = CliffordGate::Kind::H;
    else if (name == "CNOT") {
      g.kind = CliffordGate::Kind::CNOT;
      ls >> g.target;
    } else {
      throw std::invalid_argument("circuit line " + std::to_string(line_no) + ": unknown gate '" + name + "'");
    }
    if (!ls) throw std::invalid_argument("circuit line " + std::to_string(line_no) + " is malformed");
    c.push_back(g);
  }
  return c;
}

StateVector fr_state_from_angles(std::span<const double> theta, std::span<const double> phi) {
  if (theta.size() != phi.size()) throw std::invalid_argument("theta/phi length mismatch");
  std::vector<std::array<cplx, 2>> qubits(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j)
    qubits[j] = {cplx(std::cos(theta[j] / 2.0)), std::polar(std::sin(theta[j] / 2.0), phi[j])};
  StateVector psi = product_state(qubits);
  psi.normalize();
  return psi;
}

StateVector generate_fr(const EnsembleSpec& spec, int m) {
  spec.validate();
  if (spec.kind != EnsembleKind::FR) throw std::invalid_argument("generate_fr needs an FR spec");
  Rng rng(substream_seed(spec.seed, static_cast<std::uint64_t>(m)));
  std::vector<double> theta(static_cast<std::size_t>(spec.n_qubits));
  std::vector<double> phi(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    theta[j] = spec.bloch_uniform ? std::acos(1.0 - 2.0 * rng.uniform())
                                  : std::numbers::pi * rng.uniform();
    phi[j] = 2.0 * std::numbers::pi * rng.uniform();
  }
  return fr_state_from_angles(theta, phi);
}

CliffordCircuit realization_circuit(const EnsembleSpec& spec, int m) {
  spec.validate();
  Rng rng(substream_seed(spec.seed, static_cast<std::uint64_t>(m)));
  switch (spec.kind) {
    case EnsembleKind::FC: return sample_fc_circuit(spec.n_qubits, spec.layers(), rng);
    case EnsembleKind::NFC: return sample_nfc_circuit(spec.n_qubits, spec.layers(), rng);
    case EnsembleKind::FR: break;
  }
  throw std::invalid_argument("FR realizations are not circuits");
}

StateVector generate_fc(const EnsembleSpec& spec, int m) {
  if (spec.kind != EnsembleKind::FC) throw std::invalid_argument("generate_fc needs an FC spec");
  StateVector psi(spec.n_qubits);
  apply_circuit(psi, realization_circuit(spec, m));
  psi.normalize();
  return psi;
}

StateVector generate_nfc(const EnsembleSpec& spec, int m) {
  if (spec.kind != EnsembleKind::NFC) throw std::invalid_argument("generate_nfc needs an NFC spec");
  StateVector psi(spec.n_qubits);
  apply_circuit(psi, realization_circuit(spec, m));
  psi.normalize();
  return psi;
}

StateVector generate(const EnsembleSpec& spec, int m) {
  switch (spec.kind) {
    case EnsembleKind::FR: return generate_fr(spec, m);
    case EnsembleKind::FC: return generate_fc(spec, m);
    case EnsembleKind::NFC: return generate_nfc(spec, m);
  }
  throw std::invalid_argument("unknown ensemble kind");
}

}  // namespace qsre
