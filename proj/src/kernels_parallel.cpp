#include <cassert>
#include <cmath>

#include "qsre/kernels.hpp"
#include "qsre/parallel.hpp"

namespace qsre::kernels::parallel {

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

// In-place unnormalized Walsh-Hadamard transform:
// out[z] = sum_i in[i] (-1)^{|i & z|}.
void walsh_hadamard(std::span<cplx> v) {
  const std::size_t n = v.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const cplx a = v[j];
        const cplx b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

std::vector<Mask> scatter_table(std::span<const int> sites) {
  std::vector<Mask> table(std::size_t{1} << sites.size(), 0);
  for (std::size_t bits = 0; bits < table.size(); ++bits) {
    Mask out = 0;
    for (std::size_t k = 0; k < sites.size(); ++k)
      if (bits >> k & 1) out |= Mask{1} << sites[k];
    table[bits] = out;
  }
  return table;
}

}  // namespace

cplx pauli_overlap(std::span<const cplx> psi, Mask x, Mask z) {
  return chunked_sum<cplx>(psi.size(), [&](std::size_t b, std::size_t e) {
    cplx acc = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      const cplx term = std::conj(psi[i ^ x]) * psi[i];
      acc += parity(i & z) ? -term : term;
    }
    return acc;
  });
}

void apply_pauli_accumulate(std::span<const cplx> in, std::span<cplx> out, Mask x, Mask z,
                            cplx factor) {
  const auto dim = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < dim; ++j) {
    const std::size_t src = static_cast<std::size_t>(j) ^ x;
    const cplx v = factor * in[src];
    out[static_cast<std::size_t>(j)] += parity(src & z) ? -v : v;
  }
}

CompiledPauliSum::CompiledPauliSum(int n_qubits, std::span<const PauliTermView> terms)
    : diagonal_(std::size_t{1} << n_qubits, 0.0) {
  for (const auto& t : terms) {
    if (t.x_mask != 0) {
      off_diagonal_.push_back(t);
      continue;
    }
    assert(std::abs(t.factor.imag()) < 1e-14);
    const double c = t.factor.real();
    for (std::size_t i = 0; i < diagonal_.size(); ++i)
      diagonal_[i] += parity(i & t.z_mask) ? -c : c;
  }
}

void CompiledPauliSum::apply(std::span<const cplx> in, std::span<cplx> out) const {
  const auto dim = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t jj = 0; jj < dim; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    cplx acc = diagonal_[j] * in[j];
    for (const auto& t : off_diagonal_) {
      const std::size_t src = j ^ t.x_mask;
      const cplx v = t.factor * in[src];
      acc += parity(src & t.z_mask) ? -v : v;
    }
    out[j] = acc;
  }
}

PauliMoments pauli_moments(std::span<const cplx> psi, int n, int alpha, bool with_shannon) {
  const std::size_t dim = std::size_t{1} << n;
  const double inv_d = 1.0 / static_cast<double>(dim);
  std::vector<PauliMoments> partial(dim);
#pragma omp parallel
  {
    std::vector<cplx> buf(dim);
#pragma omp for schedule(static)
    for (std::int64_t xx = 0; xx < static_cast<std::int64_t>(dim); ++xx) {
      const auto x = static_cast<Mask>(xx);
      for (std::size_t i = 0; i < dim; ++i) buf[i] = std::conj(psi[i ^ x]) * psi[i];
      walsh_hadamard(buf);
      PauliMoments m;
      for (std::size_t z = 0; z < dim; ++z) {
        const double e = std::norm(buf[z]);
        m.power_sum += ipow(e, alpha);
        if (with_shannon) {
          const double xi = e * inv_d;
          if (xi > 0.0) m.shannon_sum -= xi * std::log2(xi);
        }
      }
      partial[static_cast<std::size_t>(xx)] = m;
    }
  }
  PauliMoments total;
  for (const auto& m : partial) {
    total.power_sum += m.power_sum;
    total.shannon_sum += m.shannon_sum;
  }
  return total;
}

Eigen::MatrixXcd reduced_density_matrix(std::span<const cplx> psi, int n,
                                        std::span<const int> region) {
  Mask region_mask = 0;
  for (int s : region) region_mask |= Mask{1} << s;
  std::vector<int> rest;
  for (int s = 0; s < n; ++s)
    if (!(region_mask >> s & 1)) rest.push_back(s);

  const auto in_table = scatter_table(region);
  const auto out_table = scatter_table(rest);
  const auto dr = static_cast<Eigen::Index>(in_table.size());
  const auto dc = static_cast<Eigen::Index>(out_table.size());

  Eigen::MatrixXcd amp(dr, dc);
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < dc; ++c)
    for (Eigen::Index a = 0; a < dr; ++a)
      amp(a, c) = psi[in_table[static_cast<std::size_t>(a)] | out_table[static_cast<std::size_t>(c)]];

  Eigen::MatrixXcd rho = amp * amp.adjoint();
  return rho;
}

void apply_one_qubit(std::span<cplx> psi, int site, const Eigen::Matrix2cd& g) {
  const Mask bit = Mask{1} << site;
  const Mask low = bit - 1;
  const auto half = static_cast<std::int64_t>(psi.size() / 2);
  const cplx g00 = g(0, 0), g01 = g(0, 1), g10 = g(1, 0), g11 = g(1, 1);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < half; ++k) {
    const auto kk = static_cast<Mask>(k);
    const std::size_t i = ((kk & ~low) << 1) | (kk & low);
    const cplx a0 = psi[i];
    const cplx a1 = psi[i | bit];
    psi[i] = g00 * a0 + g01 * a1;
    psi[i | bit] = g10 * a0 + g11 * a1;
  }
}

void apply_two_qubit(std::span<cplx> psi, int site_a, int site_b, const Eigen::Matrix4cd& g) {
  const Mask ba = Mask{1} << site_a;
  const Mask bb = Mask{1} << site_b;
  const int lo = site_a < site_b ? site_a : site_b;
  const int hi = site_a < site_b ? site_b : site_a;
  const Mask lo_mask = (Mask{1} << lo) - 1;
  const Mask hi_mask = (Mask{1} << hi) - 1;
  const auto quarter = static_cast<std::int64_t>(psi.size() / 4);
  cplx m[4][4];
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m[r][c] = g(r, c);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < quarter; ++k) {
    auto i = static_cast<Mask>(k);
    i = ((i >> lo) << (lo + 1)) | (i & lo_mask);
    i = ((i >> hi) << (hi + 1)) | (i & hi_mask);
    const std::size_t idx[4] = {i, i | bb, i | ba, i | ba | bb};
    cplx v[4], out[4];
    for (int c = 0; c < 4; ++c) v[c] = psi[idx[c]];
    for (int r = 0; r < 4; ++r) {
      cplx acc = 0.0;
      for (int c = 0; c < 4; ++c) acc += m[r][c] * v[c];
      out[r] = acc;
    }
    for (int r = 0; r < 4; ++r) psi[idx[r]] = out[r];
  }
}

cplx inner(std::span<const cplx> bra, std::span<const cplx> ket) {
  return chunked_sum<cplx>(bra.size(), [&](std::size_t b, std::size_t e) {
    cplx acc = 0.0;
    for (std::size_t i = b; i < e; ++i) acc += std::conj(bra[i]) * ket[i];
    return acc;
  });
}

}  // namespace qsre::kernels::parallel
