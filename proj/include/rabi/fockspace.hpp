#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rabi/errors.hpp"
#include "rabi/model.hpp"
#include "rabi/numerics/eigh.hpp"
#include "rabi/numerics/symmetric_matrix.hpp"
#include "rabi/parallel.hpp"
#include "rabi/resonance.hpp"

namespace rabi {

/// Two-valued label: a sigma_x eigenvalue of one qubit, or a parity.
enum class Sign : std::int8_t { minus = -1, plus = 1 };

inline int value(Sign s) { return static_cast<int>(s); }
inline Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
inline char symbol(Sign s) { return s == Sign::plus ? '+' : '-'; }

/// |n, s1, s2>: photon number and the sigma_x eigenvalues of both qubits.
struct ChainState {
  std::uint32_t n = 0;
  Sign s1 = Sign::plus;
  Sign s2 = Sign::plus;

  friend bool operator==(const ChainState&, const ChainState&) = default;
};

/// Eigenvalue of exp(i pi a^+ a) (x) sigma_1x (x) sigma_2x on the state.
inline Sign parity_of(const ChainState& s) {
  const int p = ((s.n % 2 == 0) ? 1 : -1) * value(s.s1) * value(s.s2);
  return p > 0 ? Sign::plus : Sign::minus;
}

inline std::string to_string(const ChainState& s) {
  return "|" + std::to_string(s.n) + "," + symbol(s.s1) + "," + symbol(s.s2) + ">";
}

struct ParityChain {
  Sign parity = Sign::plus;
  std::uint32_t n_max = 0;
  std::vector<ChainState> states;
};

/// Two states per photon number, ascending n: the (-,+), (+,-) pair when
/// s1 s2 = -1 is required by the parity, else the (+,+), (-,-) pair.
inline ParityChain build_parity_chain(Sign parity, std::uint32_t n_max) {
  ParityChain chain{parity, n_max, {}};
  chain.states.reserve(2 * (static_cast<std::size_t>(n_max) + 1));
  for (std::uint32_t n = 0; n <= n_max; ++n) {
    const int spin_product = value(parity) * ((n % 2 == 0) ? 1 : -1);
    if (spin_product < 0) {
      chain.states.push_back({n, Sign::minus, Sign::plus});
      chain.states.push_back({n, Sign::plus, Sign::minus});
    } else {
      chain.states.push_back({n, Sign::plus, Sign::plus});
      chain.states.push_back({n, Sign::minus, Sign::minus});
    }
  }
  return chain;
}

/// One matrix element of the single-photon TRWA Hamiltonian between chain
/// states:
///  - diagonal: omega n + offset + s1 delta1 G0(lambda1, n) + s2 delta2 G0(lambda2, n)
///  - same n, both spins flipped: the resonance relation value
///  - n <-> n+1 with qubit i flipped: (g_i + lambda_i omega) sqrt(n+1)
///    +/- delta_i F1(lambda_i, n), plus when qubit i goes - -> + on the
///    way up, minus when it goes + -> -
/// and zero otherwise (all |n - n'| >= 2 couplings are dropped).
inline double effective_element(const ModelParams& p, const TrwaParams& t, const ChainState& a, const ChainState& b,
                                CoefficientMode mode) {
  if (a == b) {
    return p.omega * a.n + energy_offset(p, t) + value(a.s1) * p.delta1 * coeff_g0(t.lambda1, a.n, mode) +
           value(a.s2) * p.delta2 * coeff_g0(t.lambda2, a.n, mode);
  }
  const bool flip1 = a.s1 != b.s1;
  const bool flip2 = a.s2 != b.s2;
  if (a.n == b.n) {
    return (flip1 && flip2) ? resonance_residual(t.lambda1, t.lambda2, p.g1, p.g2, p.omega) : 0.0;
  }
  const ChainState& lo = a.n < b.n ? a : b;
  const ChainState& hi = a.n < b.n ? b : a;
  if (hi.n != lo.n + 1 || flip1 == flip2) return 0.0;
  const double root = std::sqrt(static_cast<double>(lo.n) + 1.0);
  if (flip1) {
    const double sign = lo.s1 == Sign::minus ? 1.0 : -1.0;
    return (p.g1 + t.lambda1 * p.omega) * root + sign * p.delta1 * coeff_f1(t.lambda1, lo.n, mode);
  }
  const double sign = lo.s2 == Sign::minus ? 1.0 : -1.0;
  return (p.g2 + t.lambda2 * p.omega) * root + sign * p.delta2 * coeff_f1(t.lambda2, lo.n, mode);
}

using ChainMatrix = LabeledMatrix<ChainState>;

inline ChainMatrix build_effective_matrix(const ModelParams& p, const TrwaParams& t,
                                          const std::vector<ChainState>& states, CoefficientMode mode) {
  ChainMatrix out{states, SymmetricMatrix(states.size())};
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i; j < states.size(); ++j)
      out.matrix.set(i, j, effective_element(p, t, states[i], states[j], mode));
  return out;
}

inline ChainMatrix build_effective_chain_matrix(const ModelParams& p, const TrwaParams& t, const ParityChain& chain,
                                                CoefficientMode mode) {
  return build_effective_matrix(p, t, chain.states, mode);
}

/// Lowest photon number k of a four-state block: odd for the plus chain,
/// even for the minus chain.
inline std::uint32_t block_base(Sign parity, std::uint32_t n) {
  return parity == Sign::plus ? 2 * n + 1 : 2 * n;
}

/// Block index of a chain state under the resonant block structure; the
/// chain head (states before block 0) maps to -1.
inline long block_index(const ChainState& s) {
  long base = static_cast<long>(s.n);
  if (s.s1 == s.s2) base -= 1;
  else if (s.s1 == Sign::minus) base -= 2;
  const long first = parity_of(s) == Sign::plus ? 1 : 0;
  const long diff = base - first;
  return diff >= 0 ? diff / 2 : -1;
}

/// A 4x4 block over (|k,+,->, |k+1,+,+>, |k+1,-,->, |k+2,-,+>) with the
/// named diagonal values of its neighbourhood. A and B' are the diagonal
/// elements of |k,-,+> and |k+2,+,->, which belong to the adjacent blocks.
///
/// x and y are the upper couplings at photon index k+1; x_lower and y_lower
/// are the exact couplings at index k+2 that the schematic block form
/// writes as X and Y again. r is the same-n coupling between |k+1,+,+> and
/// |k+1,-,-> (zero under the resonance relation).
struct Block4 {
  std::uint32_t n = 0;
  Sign parity = Sign::plus;
  std::uint32_t base = 0;
  double a = 0, b = 0, c = 0, d = 0, a_prime = 0, b_prime = 0;
  double x = 0, y = 0, x_lower = 0, y_lower = 0, r = 0;
  std::array<ChainState, 4> basis{};
  SymmetricMatrix matrix;
};

inline Block4 build_block4(const ModelParams& p, const TrwaParams& t, std::uint32_t n, CoefficientMode mode,
                           Sign parity = Sign::plus) {
  Block4 blk;
  blk.n = n;
  blk.parity = parity;
  const std::uint32_t k = block_base(parity, n);
  blk.base = k;
  blk.basis = {ChainState{k, Sign::plus, Sign::minus}, ChainState{k + 1, Sign::plus, Sign::plus},
               ChainState{k + 1, Sign::minus, Sign::minus}, ChainState{k + 2, Sign::minus, Sign::plus}};

  const double shift = energy_offset(p, t);
  auto level = [&](std::uint32_t m, int s1, int s2) {
    return p.omega * m + shift + s1 * p.delta1 * coeff_g0(t.lambda1, m, mode) +
           s2 * p.delta2 * coeff_g0(t.lambda2, m, mode);
  };
  blk.a = level(k, -1, +1);
  blk.b = level(k, +1, -1);
  blk.c = level(k + 1, +1, +1);
  blk.d = level(k + 1, -1, -1);
  blk.a_prime = level(k + 2, -1, +1);
  blk.b_prime = level(k + 2, +1, -1);

  const double up1 = p.g1 + t.lambda1 * p.omega;
  const double up2 = p.g2 + t.lambda2 * p.omega;
  const double root1 = std::sqrt(static_cast<double>(k) + 1.0);
  const double root2 = std::sqrt(static_cast<double>(k) + 2.0);
  blk.x = up2 * root1 + p.delta2 * coeff_f1(t.lambda2, k, mode);
  blk.y = up1 * root1 - p.delta1 * coeff_f1(t.lambda1, k, mode);
  blk.x_lower = up2 * root2 + p.delta2 * coeff_f1(t.lambda2, k + 1, mode);
  blk.y_lower = up1 * root2 - p.delta1 * coeff_f1(t.lambda1, k + 1, mode);
  blk.r = resonance_residual(t.lambda1, t.lambda2, p.g1, p.g2, p.omega);

  blk.matrix = SymmetricMatrix(4);
  blk.matrix.set(0, 0, blk.b);
  blk.matrix.set(1, 1, blk.c);
  blk.matrix.set(2, 2, blk.d);
  blk.matrix.set(3, 3, blk.a_prime);
  blk.matrix.set(0, 1, blk.x);
  blk.matrix.set(0, 2, blk.y);
  blk.matrix.set(1, 2, blk.r);
  blk.matrix.set(1, 3, blk.y_lower);
  blk.matrix.set(2, 3, blk.x_lower);
  return blk;
}

/// States of a chain that precede its block 0: |0,+,+>, |0,-,->, |1,-,+>
/// for the plus chain and the lone |0,-,+> for the minus chain.
inline std::vector<ChainState> chain_head(Sign parity) {
  if (parity == Sign::plus)
    return {{0, Sign::plus, Sign::plus}, {0, Sign::minus, Sign::minus}, {1, Sign::minus, Sign::plus}};
  return {{0, Sign::minus, Sign::plus}};
}

/// Largest |H_ij| between states assigned to different blocks.
inline double max_off_block_element(const ChainMatrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i + 1; j < m.dim(); ++j)
      if (block_index(m.basis[i]) != block_index(m.basis[j])) worst = std::max(worst, std::abs(m.matrix(i, j)));
  return worst;
}

/// Largest |H_ij| between distinct states with equal photon number.
inline double max_same_n_coupling(const ChainMatrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i + 1; j < m.dim(); ++j)
      if (m.basis[i].n == m.basis[j].n) worst = std::max(worst, std::abs(m.matrix(i, j)));
  return worst;
}

/// Ascending block-diagonal levels of one chain: the chain head plus
/// blocks 0 .. n_blocks-1.
inline std::vector<double> block_levels(const ModelParams& p, const TrwaParams& t, Sign parity, std::uint32_t n_blocks,
                                        CoefficientMode mode) {
  std::vector<double> levels = eigvalsh(build_effective_matrix(p, t, chain_head(parity), mode).matrix);
  for (std::uint32_t n = 0; n < n_blocks; ++n) {
    const auto vals = eigvalsh(build_block4(p, t, n, mode, parity).matrix);
    levels.insert(levels.end(), vals.begin(), vals.end());
  }
  std::sort(levels.begin(), levels.end());
  return levels;
}

inline constexpr std::uint32_t kDefaultBlocks = 8;

inline std::uint32_t default_chain_n_max(std::uint32_t n_blocks) { return 2 * n_blocks + 3; }

struct SpectrumRow {
  double g1 = 0;
  std::optional<double> delta1;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<Sign> parity;
  std::optional<std::uint32_t> level_index;
  std::optional<double> energy;
  std::optional<double> offset;
  std::string error;
};

using SpectrumTable = std::vector<SpectrumRow>;

/// Resonant-design spectrum versus g1. Each g1 yields the plus-chain
/// levels followed by the minus-chain levels, each ascending. Energies
/// include the constant offset, which is also reported per row. A failed
/// design produces one row with only g1 and the error set.
inline SpectrumTable spectrum_vs_g1(double omega, double delta2, double g2, const std::vector<double>& g1_grid,
                                    std::uint32_t n_blocks = kDefaultBlocks,
                                    CoefficientMode mode = CoefficientMode::approx, unsigned jobs = 1) {
  detail::require_grid(g1_grid, "g1_grid", false);
  detail::require(n_blocks > 0, "spectrum_vs_g1: n_blocks must be positive");
  auto per_point = parallel_map(g1_grid.size(), jobs, [&](std::size_t i) {
    SpectrumTable rows;
    const double g1 = g1_grid[i];
    try {
      const ResonantDesign d = design_resonant(omega, delta2, g2, g1);
      const ModelParams p = d.model();
      const TrwaParams t = d.trwa();
      const double shift = energy_offset(p, t);
      for (Sign parity : {Sign::plus, Sign::minus}) {
        const auto levels = block_levels(p, t, parity, n_blocks, mode);
        for (std::size_t k = 0; k < levels.size(); ++k)
          rows.push_back({g1, d.delta1, d.lambda1, d.lambda2, parity, static_cast<std::uint32_t>(k), levels[k],
                          shift, {}});
      }
    } catch (const Error& e) {
      SpectrumRow row;
      row.g1 = g1;
      row.error = detail::describe(e);
      rows.push_back(std::move(row));
    }
    return rows;
  });
  SpectrumTable out;
  for (auto& chunk : per_point) out.insert(out.end(), chunk.begin(), chunk.end());
  return out;
}

/// Attaches block eigenvector coefficients to their kets, normalized.
inline std::vector<std::pair<ChainState, double>> block_eigenvector_to_wavefunction(const Block4& b,
                                                                                    std::span<const double> eigvec) {
  if (eigvec.size() != 4) throw Error(ErrorKind::validation, "block eigenvector must have 4 components");
  const double norm = norm2(eigvec);
  if (!(norm > 0)) throw Error(ErrorKind::validation, "block eigenvector is zero");
  std::vector<std::pair<ChainState, double>> out;
  for (std::size_t i = 0; i < 4; ++i) out.emplace_back(b.basis[i], eigvec[i] / norm);
  return out;
}

}  // namespace rabi
