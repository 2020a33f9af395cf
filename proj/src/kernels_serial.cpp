#include <cmath>
#include <stdexcept>

#include "qsre/kernels.hpp"

namespace qsre::kernels::serial {

cplx pauli_overlap(std::span<const cplx> psi, Mask x, Mask z) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const cplx term = std::conj(psi[i ^ x]) * psi[i];
    acc += parity(i & z) ? -term : term;
  }
  return acc;
}

void apply_pauli_accumulate(std::span<const cplx> in, std::span<cplx> out, Mask x, Mask z,
                            cplx factor) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    const cplx v = factor * in[i];
    out[i ^ x] += parity(i & z) ? -v : v;
  }
}

void apply_pauli_sum(std::span<const PauliTermView> terms, std::span<const cplx> in,
                     std::span<cplx> out) {
  std::fill(out.begin(), out.end(), cplx{0.0});
  for (const auto& t : terms) apply_pauli_accumulate(in, out, t.x_mask, t.z_mask, t.factor);
}

PauliMoments pauli_moments(std::span<const cplx> psi, int n, int alpha, bool with_shannon) {
  const Mask dim = Mask{1} << n;
  const double inv_d = 1.0 / static_cast<double>(dim);
  PauliMoments m;
  for (Mask x = 0; x < dim; ++x) {
    for (Mask z = 0; z < dim; ++z) {
      const double e = std::norm(pauli_overlap(psi, x, z));
      m.power_sum += std::pow(e, alpha);
      if (with_shannon) {
        const double xi = e * inv_d;
        if (xi > 0.0) m.shannon_sum -= xi * std::log2(xi);
      }
    }
  }
  return m;
}

Eigen::MatrixXcd reduced_density_matrix(std::span<const cplx> psi, int n,
                                        std::span<const int> region) {
  const int r = static_cast<int>(region.size());
  Mask region_mask = 0;
  for (int s : region) region_mask |= Mask{1} << s;
  std::vector<int> rest;
  for (int s = 0; s < n; ++s)
    if (!(region_mask >> s & 1)) rest.push_back(s);

  auto scatter = [](Mask bits, std::span<const int> sites) {
    Mask out = 0;
    for (std::size_t k = 0; k < sites.size(); ++k)
      if (bits >> k & 1) out |= Mask{1} << sites[k];
    return out;
  };

  const Mask dr = Mask{1} << r;
  const Mask dc = Mask{1} << (n - r);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dr),
                                                static_cast<Eigen::Index>(dr));
  for (Mask a = 0; a < dr; ++a) {
    for (Mask b = 0; b < dr; ++b) {
      cplx acc = 0.0;
      for (Mask c = 0; c < dc; ++c) {
        const Mask rc = scatter(c, rest);
        acc += psi[scatter(a, region) | rc] * std::conj(psi[scatter(b, region) | rc]);
      }
      rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
    }
  }
  return rho;
}

void apply_one_qubit(std::span<cplx> psi, int site, const Eigen::Matrix2cd& g) {
  const Mask bit = Mask{1} << site;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (i & bit) continue;
    const cplx a0 = psi[i];
    const cplx a1 = psi[i | bit];
    psi[i] = g(0, 0) * a0 + g(0, 1) * a1;
    psi[i | bit] = g(1, 0) * a0 + g(1, 1) * a1;
  }
}

void apply_two_qubit(std::span<cplx> psi, int site_a, int site_b, const Eigen::Matrix4cd& g) {
  const Mask ba = Mask{1} << site_a;
  const Mask bb = Mask{1} << site_b;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if ((i & ba) || (i & bb)) continue;
    const std::size_t idx[4] = {i, i | bb, i | ba, i | ba | bb};
    cplx v[4];
    for (int k = 0; k < 4; ++k) v[k] = psi[idx[k]];
    for (int row = 0; row < 4; ++row) {
      cplx acc = 0.0;
      for (int col = 0; col < 4; ++col) acc += g(row, col) * v[col];
      psi[idx[row]] = acc;
    }
  }
}

cplx inner(std::span<const cplx> bra, std::span<const cplx> ket) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < bra.size(); ++i) acc += std::conj(bra[i]) * ket[i];
  return acc;
}

}  // namespace qsre::kernels::serial
