#pragma once

// Seeded initial-state families for quench experiments:
//   FR  - factorized random product states,
//   FC  - factorized Clifford states (single-qubit I/S/H circuits on |0...0>),
//   NFC - non-factorized Clifford states (adds CNOTs, so they entangle).
//
// Realization m draws from its own substream seeded by (seed, m), so
// realizations can be produced in any order or concurrently with identical
// results.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsre/rng.hpp"
#include "qsre/statevec.hpp"

namespace qsre {

enum class EnsembleKind { FR, FC, NFC };

std::string to_string(EnsembleKind kind);
EnsembleKind ensemble_kind_from_string(std::string_view s);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::FR;
  int n_qubits = 10;
  int n_realizations = 20;
  std::uint64_t seed = 0;
  double layers_per_n_squared = 50.0;
  /// FR only: draw cos(theta) uniformly instead of theta.
  bool bloch_uniform = false;

  /// round(layers_per_n_squared * N^2)
  int layers() const;
  void validate() const;
};

/// Single- and two-qubit gates used by the Clifford circuits.
struct CliffordGate {
  enum class Kind { I, S, H, CNOT };
  Kind kind;
  int site;          // target (single-qubit) or control (CNOT)
  int target = -1;   // CNOT only

  friend bool operator==(const CliffordGate&, const CliffordGate&) = default;
};

using CliffordCircuit = std::vector<CliffordGate>;

/// Layers of N-1 gates from {I, S, H} at positions drawn with replacement.
CliffordCircuit sample_fc_circuit(int n_qubits, int layers, Rng& rng);
/// Layers of N-1 gates on ordered pairs (j, l), j != l, each uniform over
/// {I(x)S, S(x)I, I(x)H, H(x)I, CNOT_{j,l}, CNOT_{l,j}}.
CliffordCircuit sample_nfc_circuit(int n_qubits, int layers, Rng& rng);

void apply_circuit(StateVector& psi, const CliffordCircuit& circuit);

/// One gate per line: "I 3", "S 0", "H 2", "CNOT 1 4" (control, target).
void write_circuit(std::ostream& os, const CliffordCircuit& circuit);
CliffordCircuit read_circuit(std::istream& is);

/// Product of cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, qubit 0 first.
StateVector fr_state_from_angles(std::span<const double> theta, std::span<const double> phi);

StateVector generate_fr(const EnsembleSpec& spec, int m);
StateVector generate_fc(const EnsembleSpec& spec, int m);
StateVector generate_nfc(const EnsembleSpec& spec, int m);
/// Dispatches on spec.kind.
StateVector generate(const EnsembleSpec& spec, int m);

/// The circuit realization m applies (FC / NFC only), for logging and replay.
CliffordCircuit realization_circuit(const EnsembleSpec& spec, int m);

}  // namespace qsre
