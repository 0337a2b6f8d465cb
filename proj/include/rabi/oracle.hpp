#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rabi/errors.hpp"
#include "rabi/fockspace.hpp"
#include "rabi/model.hpp"
#include "rabi/numerics/eigh.hpp"
#include "rabi/numerics/symmetric_matrix.hpp"
#include "rabi/resonance.hpp"

namespace rabi {

/// Which single-qubit Pauli operator is diagonal in the product basis.
enum class QubitBasis { sigma_z, sigma_x };

/// |n, m, q1, q2> in a truncated product basis. q labels are the
/// eigenvalues (-1 or +1) of the basis-defining Pauli operator; for sigma_z
/// the -1 state is the ground level g and +1 the excited level e. m is the
/// pseudomode occupation and stays 0 for single-mode bases.
struct ProductBasisState {
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  Sign q1 = Sign::minus;
  Sign q2 = Sign::minus;

  friend bool operator==(const ProductBasisState&, const ProductBasisState&) = default;
};

inline std::string to_string(const ProductBasisState& s) {
  return "|n=" + std::to_string(s.n) + ",m=" + std::to_string(s.m) + "," + symbol(s.q1) + "," + symbol(s.q2) + ">";
}

using ProductMatrix = LabeledMatrix<ProductBasisState>;

/// Photon-major, then pseudomode, then (q1, q2) with -1 before +1.
inline std::vector<ProductBasisState> product_basis(std::uint32_t n_max, std::uint32_t m_max = 0) {
  std::vector<ProductBasisState> basis;
  basis.reserve(4 * (static_cast<std::size_t>(n_max) + 1) * (static_cast<std::size_t>(m_max) + 1));
  for (std::uint32_t n = 0; n <= n_max; ++n)
    for (std::uint32_t m = 0; m <= m_max; ++m)
      for (Sign q1 : {Sign::minus, Sign::plus})
        for (Sign q2 : {Sign::minus, Sign::plus}) basis.push_back({n, m, q1, q2});
  return basis;
}

namespace detail {

inline std::size_t product_index(const ProductBasisState& s, std::uint32_t m_max) {
  const std::size_t q = (s.q1 == Sign::plus ? 2u : 0u) + (s.q2 == Sign::plus ? 1u : 0u);
  return ((static_cast<std::size_t>(s.n) * (m_max + 1)) + s.m) * 4 + q;
}

// Adds coupling * (mode + mode^+) (x) X_i where X_i flips qubit i; used for
// both the photon (a) and pseudomode (b) ladders.
inline void add_flip_ladder(ProductMatrix& h, std::uint32_t n_max, std::uint32_t m_max, bool photon, int qubit,
                            double coupling) {
  if (coupling == 0.0) return;
  for (std::size_t i = 0; i < h.basis.size(); ++i) {
    ProductBasisState up = h.basis[i];
    std::uint32_t occ = photon ? up.n : up.m;
    if (occ >= (photon ? n_max : m_max)) continue;
    (photon ? up.n : up.m) += 1;
    if (qubit == 1) up.q1 = flip(up.q1);
    else up.q2 = flip(up.q2);
    const std::size_t j = product_index(up, m_max);
    h.matrix.set(i, j, h.matrix(i, j) + coupling * std::sqrt(static_cast<double>(occ) + 1.0));
  }
}

}  // namespace detail

/// omega a^+a + g1 s1x (a + a^+) + g2 s2x (a + a^+) + delta1 s1z + delta2 s2z
/// in the sigma_z product basis, dimension 4 (n_max + 1).
inline ProductMatrix build_full_rabi(const ModelParams& p, std::uint32_t n_max) {
  ProductMatrix h{product_basis(n_max), SymmetricMatrix(4 * (static_cast<std::size_t>(n_max) + 1))};
  for (std::size_t i = 0; i < h.basis.size(); ++i) {
    const auto& s = h.basis[i];
    h.matrix.set(i, i, p.omega * s.n + p.delta1 * value(s.q1) + p.delta2 * value(s.q2));
  }
  detail::add_flip_ladder(h, n_max, 0, true, 1, p.g1);
  detail::add_flip_ladder(h, n_max, 0, true, 2, p.g2);
  return h;
}

/// The y-rotated form omega a^+a - g1 s1z (a + a^+) - g2 s2z (a + a^+)
/// + delta1 s1x + delta2 s2x. In the sigma_x basis the exchange parity
/// exp(i pi a^+a) s1x s2x is diagonal.
inline ProductMatrix build_rotated_rabi(const ModelParams& p, std::uint32_t n_max,
                                        QubitBasis basis = QubitBasis::sigma_z) {
  ProductMatrix h{product_basis(n_max), SymmetricMatrix(4 * (static_cast<std::size_t>(n_max) + 1))};
  if (basis == QubitBasis::sigma_x) {
    // s_z flips sigma_x labels; s_x is diagonal.
    for (std::size_t i = 0; i < h.basis.size(); ++i) {
      const auto& s = h.basis[i];
      h.matrix.set(i, i, p.omega * s.n + p.delta1 * value(s.q1) + p.delta2 * value(s.q2));
    }
    detail::add_flip_ladder(h, n_max, 0, true, 1, -p.g1);
    detail::add_flip_ladder(h, n_max, 0, true, 2, -p.g2);
    return h;
  }
  for (std::size_t i = 0; i < h.basis.size(); ++i) {
    const auto& s = h.basis[i];
    h.matrix.set(i, i, p.omega * s.n);
    ProductBasisState f1 = s;
    f1.q1 = flip(f1.q1);
    ProductBasisState f2 = s;
    f2.q2 = flip(f2.q2);
    h.matrix.set(i, detail::product_index(f1, 0), p.delta1);
    h.matrix.set(i, detail::product_index(f2, 0), p.delta2);
    if (s.n < n_max) {
      ProductBasisState up = s;
      up.n += 1;
      const double root = std::sqrt(static_cast<double>(s.n) + 1.0);
      h.matrix.set(i, detail::product_index(up, 0), -(p.g1 * value(s.q1) + p.g2 * value(s.q2)) * root);
    }
  }
  return h;
}

/// Photon mode, pseudomode and two qubits:
///   omega a^+a + omega1 b^+b + V (b^+a + a^+b)
///   + sum_i [g_i (a + a^+) + g_i' (b + b^+)] s_ix + delta_i s_iz
/// in the sigma_z product basis, dimension 4 (m_max + 1)(n_max + 1).
inline ProductMatrix build_full_pseudomode(const ReservoirParams& r, std::uint32_t m_max, std::uint32_t n_max) {
  detail::require(m_max >= 1 && n_max >= 1, "build_full_pseudomode: truncations must be positive");
  const std::size_t dim = 4 * (static_cast<std::size_t>(m_max) + 1) * (static_cast<std::size_t>(n_max) + 1);
  ProductMatrix h{product_basis(n_max, m_max), SymmetricMatrix(dim)};
  for (std::size_t i = 0; i < h.basis.size(); ++i) {
    const auto& s = h.basis[i];
    h.matrix.set(i, i, r.omega * s.n + r.omega1 * s.m + r.delta1 * value(s.q1) + r.delta2 * value(s.q2));
    // b^+ a: one photon moves into the pseudomode.
    if (r.V != 0.0 && s.n > 0 && s.m < m_max) {
      ProductBasisState to = s;
      to.n -= 1;
      to.m += 1;
      h.matrix.set(i, detail::product_index(to, m_max),
                   r.V * std::sqrt(static_cast<double>(s.n)) * std::sqrt(static_cast<double>(s.m) + 1.0));
    }
  }
  detail::add_flip_ladder(h, n_max, m_max, true, 1, r.g1);
  detail::add_flip_ladder(h, n_max, m_max, true, 2, r.g2);
  detail::add_flip_ladder(h, n_max, m_max, false, 1, r.g1p);
  detail::add_flip_ladder(h, n_max, m_max, false, 2, r.g2p);
  return h;
}

inline constexpr std::uint32_t kDefaultPseudomodeMMax = 12;
inline constexpr std::uint32_t kDefaultPseudomodeNMax = 12;

/// Z2 parity (-1)^(n+m) q1 q2 of a product state; it is the conserved
/// parity whenever the basis-defining Pauli operator is the one that
/// commutes with the Hamiltonian's qubit terms.
inline Sign product_parity(const ProductBasisState& s) {
  const int p = (((s.n + s.m) % 2 == 0) ? 1 : -1) * value(s.q1) * value(s.q2);
  return p > 0 ? Sign::plus : Sign::minus;
}

/// Largest |H_ij| between product states of opposite parity.
inline double parity_defect(const ProductMatrix& h) {
  double worst = 0.0;
  for (std::size_t i = 0; i < h.dim(); ++i)
    for (std::size_t j = i + 1; j < h.dim(); ++j)
      if (product_parity(h.basis[i]) != product_parity(h.basis[j])) worst = std::max(worst, std::abs(h.matrix(i, j)));
  return worst;
}

/// Parity defect of the rotated Hamiltonian under exp(i pi a^+a) s1x s2x.
inline double parity_defect(const ModelParams& p, std::uint32_t n_max) {
  return parity_defect(build_rotated_rabi(p, n_max, QubitBasis::sigma_x));
}

/// Lowest-level stability between truncations n_max and 2 n_max.
struct ConvergenceReport {
  std::uint32_t n_levels = 0;
  std::uint32_t n_max = 0;
  std::uint32_t n_max_reference = 0;
  std::vector<double> deltas;
  double max_delta = 0;
  double tolerance = 0;
  bool converged = false;
};

struct ExactSpectrum {
  std::vector<double> energies;
  ConvergenceReport convergence;
};

inline constexpr std::uint32_t kDefaultOracleNMax = 60;

inline ExactSpectrum exact_spectrum(const ModelParams& p, std::uint32_t n_max, std::uint32_t n_levels) {
  detail::require(n_max >= 1 && n_levels >= 1 && n_levels <= 2 * n_max,
                  "exact_spectrum: need 1 <= n_levels <= 2 n_max");
  const auto coarse = eigvalsh(build_full_rabi(p, n_max).matrix);
  const auto fine = eigvalsh(build_full_rabi(p, 2 * n_max).matrix);
  ExactSpectrum out;
  out.energies.assign(coarse.begin(), coarse.begin() + n_levels);
  auto& rep = out.convergence;
  rep.n_levels = n_levels;
  rep.n_max = n_max;
  rep.n_max_reference = 2 * n_max;
  rep.tolerance = 1e-8 * p.omega;
  for (std::uint32_t k = 0; k < n_levels; ++k) {
    rep.deltas.push_back(std::abs(coarse[k] - fine[k]));
    rep.max_delta = std::max(rep.max_delta, rep.deltas.back());
  }
  rep.converged = rep.max_delta <= rep.tolerance;
  return out;
}

struct DeviationRow {
  std::uint32_t level_index = 0;
  double e_trwa = 0;
  double e_exact = 0;
  double abs_dev = 0;
  double rel_dev = 0;
};

/// TRWA block spectrum against exact diagonalization, both shifted so that
/// their ground level sits at zero. rel_dev divides by max(|e_exact|, omega).
struct TrwaComparison {
  ResonantDesign design;
  double trwa_ground = 0;
  double exact_ground = 0;
  std::vector<DeviationRow> rows;
  ConvergenceReport convergence;

  double max_abs_dev() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.abs_dev);
    return m;
  }
};

inline TrwaComparison compare_trwa_exact(double omega, double delta2, double g2, double g1, std::uint32_t n_levels,
                                         std::uint32_t n_max = kDefaultOracleNMax,
                                         std::uint32_t n_blocks = kDefaultBlocks) {
  TrwaComparison out;
  out.design = design_resonant(omega, delta2, g2, g1);
  const ModelParams p = out.design.model();
  const TrwaParams t = out.design.trwa();

  std::vector<double> trwa;
  for (Sign parity : {Sign::plus, Sign::minus}) {
    const auto lv = block_levels(p, t, parity, n_blocks, CoefficientMode::approx);
    trwa.insert(trwa.end(), lv.begin(), lv.end());
  }
  std::sort(trwa.begin(), trwa.end());
  detail::require(n_levels >= 1 && n_levels <= trwa.size(), "compare_trwa_exact: too many levels for n_blocks");

  const ExactSpectrum exact = exact_spectrum(p, n_max, n_levels);
  out.convergence = exact.convergence;
  out.trwa_ground = trwa.front();
  out.exact_ground = exact.energies.front();
  for (std::uint32_t k = 0; k < n_levels; ++k) {
    DeviationRow row;
    row.level_index = k;
    row.e_trwa = trwa[k] - out.trwa_ground;
    row.e_exact = exact.energies[k] - out.exact_ground;
    row.abs_dev = std::abs(row.e_trwa - row.e_exact);
    row.rel_dev = row.abs_dev / std::max(std::abs(row.e_exact), omega);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace rabi
