#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rabi/errors.hpp"
#include "rabi/fockspace.hpp"
#include "rabi/model.hpp"
#include "rabi/numerics/eigh.hpp"
#include "rabi/numerics/symmetric_matrix.hpp"
#include "rabi/resonance.hpp"

namespace rabi {

/// Gamma / ((w - w_c)^2 + (Gamma/2)^2).
inline double lorentzian_density(double omega_eval, double gamma, double omega_c) {
  detail::require(gamma > 0, "lorentzian_density: gamma must be positive");
  const double det = omega_eval - omega_c;
  return gamma / (det * det + 0.25 * gamma * gamma);
}

/// Photon-coupling coefficients of the pseudomode effective Hamiltonian.
///   eta_i    = 2 delta_i exp(-(g_i / (omega - 2 delta_i))^2)
///   lambda_i = -g_i / (omega - eta_i)
///   K_i      = g_i + lambda_i omega + 2 delta_i lambda_i exp(-2 lambda_i^2)
/// lambda_i is the displacement implied by K_i; it also sets the constant
/// offset and the G0 factors on the diagonal.
struct ReservoirCoefficients {
  double eta1 = 0, eta2 = 0;
  double lambda1 = 0, lambda2 = 0;
  double K1 = 0, K2 = 0;
  double offset = 0;
};

inline ReservoirCoefficients compute_K(const ReservoirParams& r) {
  ReservoirCoefficients c;
  auto one = [&](double g, double delta, double& eta, double& lambda, double& K) {
    if (std::abs(r.omega - 2.0 * delta) < 1e-12)
      throw Error(ErrorKind::singular_eta, "compute_K: omega = 2 delta makes eta singular");
    const double ratio = g / (r.omega - 2.0 * delta);
    eta = 2.0 * delta * std::exp(-ratio * ratio);
    if (std::abs(r.omega - eta) < 1e-12)
      throw Error(ErrorKind::singular_denominator, "compute_K: omega - eta vanishes");
    const double x = g / (r.omega - eta);
    lambda = -x;
    K = g - x * r.omega - 2.0 * delta * x * std::exp(-2.0 * x * x);
  };
  one(r.g1, r.delta1, c.eta1, c.lambda1, c.K1);
  one(r.g2, r.delta2, c.eta2, c.lambda2, c.K2);
  c.offset = c.lambda1 * c.lambda1 * r.omega + c.lambda2 * c.lambda2 * r.omega + 2.0 * c.lambda1 * r.g1 +
             2.0 * c.lambda2 * r.g2;
  return c;
}

/// |m, n, s1, s2>: pseudomode quanta, photon quanta, sigma_x labels.
struct ReservoirChainState {
  std::uint32_t m = 0;
  std::uint32_t n = 0;
  Sign s1 = Sign::plus;
  Sign s2 = Sign::plus;

  friend bool operator==(const ReservoirChainState&, const ReservoirChainState&) = default;
};

inline std::string to_string(const ReservoirChainState& s) {
  return "|" + std::to_string(s.m) + "," + std::to_string(s.n) + "," + symbol(s.s1) + "," + symbol(s.s2) + ">";
}

/// Eigenvalue of exp(i pi a^+a) exp(i pi b^+b) s1x s2x.
inline Sign parity_of(const ReservoirChainState& s) {
  const int p = (((s.m + s.n) % 2 == 0) ? 1 : -1) * value(s.s1) * value(s.s2);
  return p > 0 ? Sign::plus : Sign::minus;
}

namespace detail {

// Appends |m, n, s1, s2> when both occupations are non-negative.
inline void push_state(std::vector<ReservoirChainState>& out, long m, long n, Sign s1, Sign s2) {
  if (m < 0 || n < 0) return;
  out.push_back({static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(n), s1, s2});
}

// Singlet pair at shift j: |m+j, n+j, +, ->, |m+j, n+j, -, +>.
inline void push_center(std::vector<ReservoirChainState>& out, long m, long n, long j) {
  push_state(out, m + j, n + j, Sign::plus, Sign::minus);
  push_state(out, m + j, n + j, Sign::minus, Sign::plus);
}

// Link pair at shift j: |m+j+1, n+j, -, ->, |m+j, n+j+1, +, +>.
inline void push_link(std::vector<ReservoirChainState>& out, long m, long n, long j) {
  push_state(out, m + j + 1, n + j, Sign::minus, Sign::minus);
  push_state(out, m + j, n + j + 1, Sign::plus, Sign::plus);
}

}  // namespace detail

/// Odd-parity chain around (m0, n0):
///   |m,n-1,-,->, |m-1,n,+,+>, |m,n,+,->, |m,n,-,+>, |m+1,n,-,->, |m,n+1,+,+>, ...
/// i.e. `depth` link pairs on each side of the central singlet pair, with
/// the singlet pairs between them. Kets with a negative occupation are
/// dropped.
inline std::vector<ReservoirChainState> build_reservoir_chain(std::uint32_t m0, std::uint32_t n0, std::uint32_t depth) {
  detail::require((m0 + n0) % 2 == 0, "build_reservoir_chain: m0 + n0 must be even");
  detail::require(depth >= 1, "build_reservoir_chain: depth must be positive");
  std::vector<ReservoirChainState> out;
  const long m = m0, n = n0, d = depth;
  detail::push_link(out, m, n, -d);
  for (long j = -d + 1; j <= d - 1; ++j) {
    detail::push_center(out, m, n, j);
    detail::push_link(out, m, n, j);
  }
  return out;
}

/// Matrix element of the pseudomode effective Hamiltonian:
///  - diagonal: omega1 m + omega n + offset + s1 delta1 G0(lambda1) + s2 delta2 G0(lambda2)
///  - m <-> m+1 with qubit i flipped: g_i' sqrt(m+1)
///  - n -> n+1 with qubit i raised - -> +: K_i sqrt(n+1); the lowering
///    partner of the same pair is its transpose, counter-rotating pairs are 0
inline double reservoir_element(const ReservoirParams& r, const ReservoirCoefficients& c, const ReservoirChainState& a,
                                const ReservoirChainState& b, bool include_offset = true) {
  if (a == b) {
    return r.omega1 * a.m + r.omega * a.n + (include_offset ? c.offset : 0.0) +
           value(a.s1) * r.delta1 * coeff_g0(c.lambda1, a.n, CoefficientMode::approx) +
           value(a.s2) * r.delta2 * coeff_g0(c.lambda2, a.n, CoefficientMode::approx);
  }
  const bool flip1 = a.s1 != b.s1;
  const bool flip2 = a.s2 != b.s2;
  if (flip1 == flip2) return 0.0;
  if (a.n == b.n && (a.m + 1 == b.m || b.m + 1 == a.m)) {
    const double root = std::sqrt(static_cast<double>(std::max(a.m, b.m)));
    return (flip1 ? r.g1p : r.g2p) * root;
  }
  if (a.m == b.m && (a.n + 1 == b.n || b.n + 1 == a.n)) {
    const ReservoirChainState& lo = a.n < b.n ? a : b;
    const Sign lo_spin = flip1 ? lo.s1 : lo.s2;
    if (lo_spin != Sign::minus) return 0.0;
    return (flip1 ? c.K1 : c.K2) * std::sqrt(static_cast<double>(lo.n) + 1.0);
  }
  return 0.0;
}

using ReservoirMatrix = LabeledMatrix<ReservoirChainState>;

inline ReservoirMatrix build_reservoir_matrix(const ReservoirParams& r, const std::vector<ReservoirChainState>& chain,
                                              bool include_offset = true) {
  const ReservoirCoefficients c = compute_K(r);
  ReservoirMatrix out{chain, SymmetricMatrix(chain.size())};
  for (std::size_t i = 0; i < chain.size(); ++i)
    for (std::size_t j = i; j < chain.size(); ++j)
      out.matrix.set(i, j, reservoir_element(r, c, chain[i], chain[j], include_offset));
  return out;
}

/// Largest |H_ij| between reservoir states of opposite parity.
inline double parity_defect(const ReservoirMatrix& h) {
  double worst = 0.0;
  for (std::size_t i = 0; i < h.dim(); ++i)
    for (std::size_t j = i + 1; j < h.dim(); ++j)
      if (parity_of(h.basis[i]) != parity_of(h.basis[j])) worst = std::max(worst, std::abs(h.matrix(i, j)));
  return worst;
}

struct NamedValue {
  std::string name;
  double value = 0;
};

/// Disagreement between a literal matrix transcription and the generator.
struct EntryMismatch {
  std::size_t row = 0;
  std::size_t col = 0;
  std::string row_state;
  std::string col_state;
  double printed = 0;
  double generated = 0;
};

/// Quantified residuals and mismatches for a claimed matrix or eigenpair.
struct DiscrepancyReport {
  std::string label;
  std::vector<std::string> basis;
  std::vector<NamedValue> residuals;
  std::vector<EntryMismatch> mismatches;
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;
  std::vector<std::string> notes;

  std::optional<double> residual(const std::string& name) const {
    for (const auto& r : residuals)
      if (r.name == name) return r.value;
    return std::nullopt;
  }
};

/// Upper-triangle entries of two same-basis matrices that differ by more
/// than tol.
inline std::vector<EntryMismatch> compare_entries(const ReservoirMatrix& printed, const SymmetricMatrix& generated,
                                                  double tol = 1e-12) {
  detail::require(printed.matrix.dim() == generated.dim(), "compare_entries: dimension mismatch");
  std::vector<EntryMismatch> out;
  for (std::size_t i = 0; i < generated.dim(); ++i)
    for (std::size_t j = i; j < generated.dim(); ++j)
      if (std::abs(printed.matrix(i, j) - generated(i, j)) > tol)
        out.push_back({i, j, to_string(printed.basis[i]), to_string(printed.basis[j]), printed.matrix(i, j),
                       generated(i, j)});
  return out;
}

/// Pseudomode couplings in the ten-state window around (m, n) as typeset:
/// `verbatim` keeps the unprimed g_i that the literal layout shows next to
/// the sqrt(m+1), sqrt(m+2) factors in its lower rows; `corrected` uses
/// g_i' there. Diagonal entries come from the generator.
enum class WindowTranscription { corrected, verbatim };

inline ReservoirMatrix window_transcription(const ReservoirParams& r, std::uint32_t m, std::uint32_t n,
                                            WindowTranscription variant) {
  detail::require(m >= 1 && n >= 1, "window_transcription: need m >= 1 and n >= 1");
  const ReservoirCoefficients c = compute_K(r);
  std::vector<ReservoirChainState> basis;
  const long lm = m, ln = n;
  detail::push_link(basis, lm, ln, -1);
  detail::push_center(basis, lm, ln, 0);
  detail::push_link(basis, lm, ln, 0);
  detail::push_center(basis, lm, ln, 1);
  detail::push_link(basis, lm, ln, 1);

  ReservoirMatrix h{basis, SymmetricMatrix(basis.size())};
  for (std::size_t i = 0; i < basis.size(); ++i) h.matrix.set(i, i, reservoir_element(r, c, basis[i], basis[i]));
  const double sn = std::sqrt(double(n)), sn1 = std::sqrt(double(n) + 1), sn2 = std::sqrt(double(n) + 2);
  const double sm = std::sqrt(double(m)), sm1 = std::sqrt(double(m) + 1), sm2 = std::sqrt(double(m) + 2);
  const bool verbatim = variant == WindowTranscription::verbatim;
  const double lower1 = verbatim ? r.g1 : r.g1p;
  const double lower2 = verbatim ? r.g2 : r.g2p;
  // Rows A..J, zero-based.
  h.matrix.set(0, 2, sn * c.K1);
  h.matrix.set(0, 3, sn * c.K2);
  h.matrix.set(1, 2, r.g2p * sm);
  h.matrix.set(1, 3, r.g1p * sm);
  h.matrix.set(2, 4, r.g1p * sm1);
  h.matrix.set(2, 5, sn1 * c.K2);
  h.matrix.set(3, 4, r.g2p * sm1);
  h.matrix.set(3, 5, sn1 * c.K1);
  h.matrix.set(4, 6, sn1 * c.K1);
  h.matrix.set(4, 7, sn1 * c.K2);
  h.matrix.set(5, 6, sm1 * lower2);
  h.matrix.set(5, 7, sm1 * lower1);
  h.matrix.set(6, 8, sm2 * lower1);
  h.matrix.set(6, 9, sn2 * c.K2);
  h.matrix.set(7, 8, sm2 * lower2);
  h.matrix.set(7, 9, sn2 * c.K1);
  return h;
}

/// Literal ten-state transcription against the generator, entry by entry.
inline DiscrepancyReport compare_window(const ReservoirParams& r, std::uint32_t m, std::uint32_t n,
                                        WindowTranscription variant) {
  const ReservoirMatrix printed = window_transcription(r, m, n, variant);
  const ReservoirMatrix gen = build_reservoir_matrix(r, printed.basis);
  DiscrepancyReport rep;
  rep.label = variant == WindowTranscription::verbatim ? "window-verbatim-vs-generator"
                                                      : "window-corrected-vs-generator";
  for (const auto& s : printed.basis) rep.basis.push_back(to_string(s));
  rep.mismatches = compare_entries(printed, gen.matrix);
  double worst = 0.0;
  for (const auto& mm : rep.mismatches) worst = std::max(worst, std::abs(mm.printed - mm.generated));
  rep.residuals.push_back({"max_entry_difference", worst});
  return rep;
}

struct DarkStateReport {
  std::uint32_t m = 0;
  std::uint32_t n = 0;
  double energy = 0;  // omega1 m + omega n + offset
  double residual = 0;
  bool symmetric = false;
};

/// ||(H - E) v|| for v = (|m,n,+,-> - |m,n,-,+>)/sqrt(2) and
/// E = omega1 m + omega n + offset, on the window of every state within one
/// quantum of (m, n) in both modes, which contains all neighbours of v.
inline DarkStateReport dark_state_report(const ReservoirParams& r, std::uint32_t m, std::uint32_t n) {
  std::vector<ReservoirChainState> window;
  for (long dm = -1; dm <= 1; ++dm)
    for (long dn = -1; dn <= 1; ++dn)
      for (Sign s1 : {Sign::plus, Sign::minus})
        for (Sign s2 : {Sign::plus, Sign::minus}) detail::push_state(window, long(m) + dm, long(n) + dn, s1, s2);
  const ReservoirMatrix h = build_reservoir_matrix(r, window);
  const ReservoirCoefficients c = compute_K(r);

  DarkStateReport rep{m, n, r.omega1 * m + r.omega * n + c.offset, 0.0, r.symmetric()};
  std::vector<double> v(window.size(), 0.0);
  const double amp = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (window[i] == ReservoirChainState{m, n, Sign::plus, Sign::minus}) v[i] = amp;
    if (window[i] == ReservoirChainState{m, n, Sign::minus, Sign::plus}) v[i] = -amp;
  }
  auto hv = h.matrix.multiply(v);
  for (std::size_t i = 0; i < v.size(); ++i) hv[i] -= rep.energy * v[i];
  rep.residual = norm2(hv);
  return rep;
}

/// Residual of the dark state; Error{asymmetric_params} unless g1' = g2',
/// g1 = g2 and delta1 = delta2 (dark_state_report still works then).
inline double dark_state_residual(const ReservoirParams& r, std::uint32_t m, std::uint32_t n) {
  const DarkStateReport rep = dark_state_report(r, m, n);
  if (!rep.symmetric)
    throw Error(ErrorKind::asymmetric_params,
                "dark_state_residual: needs g1' = g2', g1 = g2, delta1 = delta2 (residual " +
                    std::to_string(rep.residual) + ")");
  return rep.residual;
}

struct QuasiExactSubspace {
  ReservoirMatrix matrix;
  DiscrepancyReport report;
};

/// Truncated chain ending at the singlet pair of (m, n): every link and
/// singlet pair below it, in chain order. With symmetric parameters the
/// singlet is decoupled from the next shell, which closes the truncation
/// for it. The report checks E = omega1 m + omega n + offset against the
/// spectrum and records the two closure combinations, the outward
/// couplings that remain, and the dimension against 2(m+n-1).
inline QuasiExactSubspace quasi_exact_subspace(const ReservoirParams& r, std::uint32_t m, std::uint32_t n) {
  detail::require(m + n >= 2, "quasi_exact_subspace: need m + n >= 2");
  const long lm = m, ln = n;
  std::vector<ReservoirChainState> states;
  for (long j = -(std::min(lm, ln) + 1); j <= -1; ++j) {
    detail::push_center(states, lm, ln, j);
    detail::push_link(states, lm, ln, j);
  }
  detail::push_center(states, lm, ln, 0);

  QuasiExactSubspace out{build_reservoir_matrix(r, states), {}};
  auto& rep = out.report;
  rep.label = "quasi-exact(m=" + std::to_string(m) + ",n=" + std::to_string(n) + ")";
  for (const auto& s : states) rep.basis.push_back(to_string(s));

  const ReservoirCoefficients c = compute_K(r);
  const double target = r.omega1 * m + r.omega * n + c.offset;
  const EigenDecomposition eig = eigh(out.matrix.matrix);
  rep.eigenvalues = eig.values;
  for (std::size_t k = 0; k < eig.dim(); ++k) rep.eigenvectors.push_back(eig.vector(k));

  std::size_t nearest = 0;
  for (std::size_t k = 1; k < eig.dim(); ++k)
    if (std::abs(eig.values[k] - target) < std::abs(eig.values[nearest] - target)) nearest = k;

  std::vector<double> singlet(states.size(), 0.0);
  const double amp = 1.0 / std::sqrt(2.0);
  singlet[states.size() - 2] = amp;
  singlet[states.size() - 1] = -amp;
  auto hv = out.matrix.matrix.multiply(singlet);
  for (std::size_t i = 0; i < hv.size(); ++i) hv[i] -= target * singlet[i];

  // Couplings from the subspace to states one quantum outside it.
  double outward = 0.0;
  double singlet_leak2 = 0.0;
  {
    // Every neighbour of every subspace state that is not itself in it.
    std::vector<ReservoirChainState> outside;
    for (const auto& st : states)
      for (long em = -1; em <= 1; ++em)
        for (long en = -1; en <= 1; ++en)
          for (Sign t1 : {Sign::plus, Sign::minus})
            for (Sign t2 : {Sign::plus, Sign::minus}) {
              std::vector<ReservoirChainState> one;
              detail::push_state(one, long(st.m) + em, long(st.n) + en, t1, t2);
              if (one.empty()) continue;
              if (std::find(states.begin(), states.end(), one[0]) != states.end()) continue;
              if (std::find(outside.begin(), outside.end(), one[0]) != outside.end()) continue;
              outside.push_back(one[0]);
            }
    for (const auto& o : outside) {
      double leak = 0.0;
      for (std::size_t i = 0; i < states.size(); ++i) {
        const double h = reservoir_element(r, c, o, states[i]);
        outward = std::max(outward, std::abs(h));
        leak += h * singlet[i];
      }
      singlet_leak2 += leak * leak;
    }
  }

  const double c1 = amp, c2 = -amp;
  rep.residuals = {
      {"target_energy", target},
      {"nearest_eigenvalue_distance", std::abs(eig.values[nearest] - target)},
      {"singlet_residual_in_subspace", norm2(hv)},
      {"singlet_leakage_outside", std::sqrt(singlet_leak2)},
      {"closure_pseudomode", std::abs(r.g1p * std::sqrt(double(m) + 1) * c1 + r.g2p * std::sqrt(double(m) + 1) * c2)},
      {"closure_photon", std::abs(std::sqrt(double(n) + 1) * c.K2 * c1 + std::sqrt(double(n) + 1) * c.K1 * c2)},
      {"max_outward_coupling", outward},
      {"nearest_eigenvector_singlet_overlap", std::abs(dot(eig.vector(nearest), singlet))},
      {"dimension", static_cast<double>(states.size())},
      {"dimension_formula_2(m+n-1)", 2.0 * (double(m) + double(n) - 1.0)},
  };
  if (static_cast<double>(states.size()) != 2.0 * (double(m) + double(n) - 1.0))
    rep.notes.push_back("subspace dimension " + std::to_string(states.size()) + " differs from 2(m+n-1) = " +
                        std::to_string(2 * (m + n) - 2));
  if (!r.symmetric()) rep.notes.push_back("asymmetric parameters: closure conditions do not hold");
  return out;
}

/// The six-state matrix for the (0,0)-(1,1) window as typeset, basis
/// |0,0,+,->, |0,0,-,+>, |1,0,-,->, |0,1,+,+>, |1,1,+,->, |1,1,-,+>.
inline ReservoirMatrix build_h_2w1_2w(double omega, double omega1, double g1p, double g2p, double K1, double K2) {
  ReservoirMatrix h;
  h.basis = {{0, 0, Sign::plus, Sign::minus}, {0, 0, Sign::minus, Sign::plus}, {1, 0, Sign::minus, Sign::minus},
             {0, 1, Sign::plus, Sign::plus},  {1, 1, Sign::plus, Sign::minus}, {1, 1, Sign::minus, Sign::plus}};
  const double e1 = omega1 + omega;
  const double e2 = 2.0 * omega1 + 2.0 * omega;
  h.matrix = SymmetricMatrix::from_rows({
      {0, 0, g1p, K2, 0, 0},
      {0, 0, g2p, K1, 0, 0},
      {g1p, g2p, e1, 0, K1, K2},
      {K2, K1, 0, e1, g2p, g1p},
      {0, 0, K1, g2p, e2, 0},
      {0, 0, K2, g1p, 0, e2},
  });
  return h;
}

inline ReservoirMatrix build_h_2w1_2w(const ReservoirParams& r) {
  const ReservoirCoefficients c = compute_K(r);
  return build_h_2w1_2w(r.omega, r.omega1, r.g1p, r.g2p, c.K1, c.K2);
}

/// The closed-form six-component vector written in terms of a single g'
/// and K. Empty when a 0/0 or division by zero leaves it undefined; the
/// g' = K = 0 limit keeps only |0,1,+,+> + |1,1,+,-> - |1,1,-,+>.
inline std::optional<std::array<double, 6>> eq24_vector(double omega, double omega1, double gp, double K) {
  if (gp == 0.0 && K == 0.0) return std::array<double, 6>{0, 0, 0, 1, 1, -1};
  if (gp == 0.0 || K == 0.0 || gp * gp == K * K) return std::nullopt;
  const double e1 = omega1 + omega;
  const double lead =
      (gp / K) * (-e1 / gp - gp / (-2.0 * e1) - K / (-2.0 * e1) - (K * K / gp) * (-e1) / (gp * gp - K * K));
  return std::array<double, 6>{lead, lead, -gp / K, 1, 1, -1};
}

namespace detail {

inline void fill_eq24(DiscrepancyReport& rep, const ReservoirMatrix& h, double omega, double omega1, double gp,
                      double K) {
  for (const auto& s : h.basis) rep.basis.push_back(to_string(s));
  const EigenDecomposition eig = eigh(h.matrix);
  rep.eigenvalues = eig.values;
  for (std::size_t k = 0; k < eig.dim(); ++k) rep.eigenvectors.push_back(eig.vector(k));
  const double target = 2.0 * omega1 + 2.0 * omega;
  rep.residuals.push_back({"target_energy", target});

  double nearest = std::numeric_limits<double>::infinity();
  for (double e : eig.values) nearest = std::min(nearest, std::abs(e - target));
  rep.residuals.push_back({"nearest_eigenvalue_distance", nearest});

  const auto vec = eq24_vector(omega, omega1, gp, K);
  if (!vec) {
    rep.notes.push_back("closed-form vector undefined for these g', K (division by zero)");
    return;
  }
  if (gp == 0.0 && K == 0.0) rep.notes.push_back("g' = K = 0 limit: vector reduced to its last terms");
  const std::vector<double> v(vec->begin(), vec->end());
  auto hv = h.matrix.multiply(v);
  for (std::size_t i = 0; i < hv.size(); ++i) hv[i] -= target * v[i];
  const double nv = norm2(v);
  rep.residuals.push_back({"eq24_normalized_residual", norm2(hv) / nv});
  rep.residuals.push_back({"eq24_rayleigh_quotient", dot(v, h.matrix.multiply(v)) / (nv * nv)});
  std::size_t best = 0;
  double best_overlap = -1.0;
  for (std::size_t k = 0; k < eig.dim(); ++k) {
    const double ov = std::abs(dot(eig.vector(k), v)) / nv;
    if (ov > best_overlap) {
      best_overlap = ov;
      best = k;
    }
  }
  rep.residuals.push_back({"best_overlap", best_overlap});
  rep.residuals.push_back({"best_overlap_index", static_cast<double>(best)});
  rep.residuals.push_back({"best_overlap_eigenvalue", eig.values[best]});
}

}  // namespace detail

/// Report for the six-state example given only omega, omega1, g', K.
inline DiscrepancyReport verify_eq24(double omega, double omega1, double gp, double K) {
  DiscrepancyReport rep;
  rep.label = "six-state quasi-exact example";
  detail::fill_eq24(rep, build_h_2w1_2w(omega, omega1, gp, gp, K, K), omega, omega1, gp, K);
  return rep;
}

/// Full report: the symbolic check above with g' = g1', K = K1, plus an
/// entrywise comparison of the typeset six-state matrix against the
/// generator (offset removed) on the same kets.
inline DiscrepancyReport verify_eq24(const ReservoirParams& r) {
  const ReservoirCoefficients c = compute_K(r);
  DiscrepancyReport rep;
  rep.label = "six-state quasi-exact example";
  if (r.g1p != r.g2p || c.K1 != c.K2)
    rep.notes.push_back("g1' != g2' or K1 != K2: closed form evaluated with g' = g1', K = K1");
  const ReservoirMatrix printed = build_h_2w1_2w(r);
  detail::fill_eq24(rep, printed, r.omega, r.omega1, r.g1p, c.K1);
  const ReservoirMatrix gen = build_reservoir_matrix(r, printed.basis, false);
  rep.mismatches = compare_entries(printed, gen.matrix);
  double worst = 0.0;
  for (const auto& mm : rep.mismatches) worst = std::max(worst, std::abs(mm.printed - mm.generated));
  rep.residuals.push_back({"max_entry_difference_vs_generator", worst});
  return rep;
}

}  // namespace rabi
