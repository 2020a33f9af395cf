#pragma once

#include <cstdint>
#include <iterator>
#include <string>
#include <string_view>

#include "qsre/statevec.hpp"

namespace qsre {

using Mask = std::uint64_t;

/// Default cap on the qubit count for exhaustive 4^n enumeration.
inline constexpr int kDefaultEnumerationCap = 14;

/// N-qubit Pauli operator in symplectic form.
///
/// The represented matrix is  i^phase * prod_j sigma(x_j, z_j)  where
/// sigma(0,0)=I, sigma(1,0)=X, sigma(0,1)=Z and sigma(1,1)=Y=iXZ. The label
/// "Y" therefore has phase 0 and is Hermitian; strings with even phase are
/// Hermitian.
struct PauliString {
  int n_qubits = 0;
  Mask x_mask = 0;
  Mask z_mask = 0;
  int phase = 0;  // power of i, in [0, 4)

  static PauliString identity(int n) { return {n, 0, 0, 0}; }
  /// Single-site operator ('X', 'Y' or 'Z') on `site` of an n-qubit string.
  static PauliString single(int n, int site, char op);

  bool is_hermitian() const noexcept { return phase % 2 == 0; }
  int weight() const noexcept;
  char at(int site) const noexcept;

  /// "IXYZ..." with qubit 0 first; a leading sign/phase is prepended for
  /// non-trivial phases ("-", "i", "-i").
  std::string label() const;
  /// "x_mask:z_mask" in hexadecimal, used in machine-readable dumps.
  std::string hex() const;

  bool commutes_with(const PauliString& other) const noexcept;
  PauliString operator*(const PauliString& rhs) const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

/// Parses "IXYZ..." (qubit 0 first). Throws std::invalid_argument on an empty
/// label, unknown characters or more than 64 qubits.
PauliString pauli_from_label(std::string_view label);

/// <psi|P|psi> for Hermitian P, computed matrix-free in one pass.
double expectation(const PauliString& p, const StateVector& psi);

/// P|psi> (no normalization needed since P is unitary).
StateVector apply_pauli(const PauliString& p, const StateVector& psi);

/// Range over all 4^n phase-free strings in lexicographic (x_mask, z_mask)
/// order. Index k maps to x_mask = k >> n, z_mask = k & (2^n - 1), so
/// disjoint index ranges can be handed to different workers.
class PauliGroup {
 public:
  /// Throws ResourceError when n exceeds `cap`.
  explicit PauliGroup(int n, int cap = kDefaultEnumerationCap);

  int n_qubits() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return std::uint64_t{1} << (2 * n_); }
  PauliString at(std::uint64_t index) const noexcept;

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = PauliString;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = PauliString;

    iterator() = default;
    iterator(const PauliGroup* g, std::uint64_t i) : group_(g), index_(i) {}
    PauliString operator*() const { return group_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      auto old = *this;
      ++index_;
      return old;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.index_ == b.index_; }

   private:
    const PauliGroup* group_ = nullptr;
    std::uint64_t index_ = 0;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size()}; }

 private:
  int n_;
};

inline PauliGroup enumerate_pauli_group(int n, int cap = kDefaultEnumerationCap) {
  return PauliGroup(n, cap);
}

}  // namespace qsre
