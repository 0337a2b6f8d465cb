#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "rabi/numerics/laguerre.hpp"

namespace rabi {

/// Photon frequency, qubit splittings and qubit-photon couplings of the
/// two-qubit Rabi Hamiltonian. Everything is measured in the same energy
/// unit; omega sets the scale.
struct ModelParams {
  double omega = 1.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;

  bool valid() const {
    return std::isfinite(omega) && std::isfinite(delta1) && std::isfinite(delta2) && std::isfinite(g1) &&
           std::isfinite(g2) && omega > 0 && delta1 >= 0 && delta2 >= 0 && g1 >= 0 && g2 >= 0;
  }

  /// Both couplings in the 0.1 <= g/omega <= 1 regime.
  bool ultrastrong() const {
    auto in = [&](double g) { return g / omega >= 0.1 && g / omega <= 1.0; };
    return in(g1) && in(g2);
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Two qubits coupled to a photon mode and to a single pseudomode standing
/// in for a Lorentzian reservoir. gamma and omega_c only enter the
/// Lorentzian density itself.
struct ReservoirParams {
  double omega = 1.0;   // photon frequency
  double omega1 = 1.0;  // pseudomode frequency
  double V = 0.0;       // photon-pseudomode hopping
  double g1 = 0.0;
  double g2 = 0.0;
  double g1p = 0.0;  // qubit-pseudomode couplings
  double g2p = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double gamma = 1.0;
  double omega_c = 1.0;

  bool valid() const {
    for (double v : {omega, omega1, V, g1, g2, g1p, g2p, delta1, delta2, gamma, omega_c})
      if (!std::isfinite(v)) return false;
    return omega > 0 && omega1 > 0 && g1 >= 0 && g2 >= 0 && g1p >= 0 && g2p >= 0 && delta1 >= 0 && delta2 >= 0;
  }

  /// g1' = g2', g1 = g2 and delta1 = delta2, compared exactly.
  bool symmetric() const { return g1p == g2p && g1 == g2 && delta1 == delta2; }

  friend bool operator==(const ReservoirParams&, const ReservoirParams&) = default;
};

inline constexpr double kApproxLambdaLimit = 0.1;

/// Displacement parameters of the two qubit-conditioned polaron shifts.
struct TrwaParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  bool approx_valid(double limit = kApproxLambdaLimit) const {
    return std::abs(lambda1) <= limit && std::abs(lambda2) <= limit;
  }

  friend bool operator==(const TrwaParams&, const TrwaParams&) = default;
};

/// `approx` replaces L_n(4 lambda^2) by 1 and L_n^1(4 lambda^2) by n+1;
/// `exact` keeps the full Laguerre values.
enum class CoefficientMode { approx, exact };

inline std::string_view to_string(CoefficientMode mode) {
  return mode == CoefficientMode::approx ? "approx" : "exact";
}

/// Diagonal displacement-operator element <n| cosh[2 lambda (a^+ - a)] |n>.
inline double coeff_g0(double lambda, std::uint32_t n, CoefficientMode mode) {
  const double damp = std::exp(-2.0 * lambda * lambda);
  if (mode == CoefficientMode::approx) return damp;
  return damp * eval_laguerre(n, 0, 4.0 * lambda * lambda);
}

/// One-photon element <n+1| sinh[2 lambda (a^+ - a)] |n>.
inline double coeff_f1(double lambda, std::uint32_t n, CoefficientMode mode) {
  const double pre = 2.0 * lambda * std::exp(-2.0 * lambda * lambda);
  const double root = std::sqrt(static_cast<double>(n) + 1.0);
  if (mode == CoefficientMode::approx) return pre * root;
  return pre * eval_laguerre(n, 1, 4.0 * lambda * lambda) / root;
}

/// Left side of the qubit-1 decoupling condition:
/// (g1 + lambda1 omega) + 2 delta1 lambda1 exp(-2 lambda1^2).
inline double residual_eq8(double omega, double delta1, double g1, double lambda1) {
  return (g1 + lambda1 * omega) + 2.0 * delta1 * lambda1 * std::exp(-2.0 * lambda1 * lambda1);
}

/// Left side of the qubit-2 decoupling condition:
/// (g2 + lambda2 omega) - 2 delta2 lambda2 exp(-2 lambda2^2).
inline double residual_eq9(double omega, double delta2, double g2, double lambda2) {
  return (g2 + lambda2 * omega) - 2.0 * delta2 * lambda2 * std::exp(-2.0 * lambda2 * lambda2);
}

/// 2 lambda2 g1 + 2 g2 lambda1 + 2 lambda1 lambda2 omega. This is also the
/// coupling between the two same-photon-number states of a parity chain.
inline double resonance_residual(double lambda1, double lambda2, double g1, double g2, double omega) {
  return 2.0 * lambda2 * g1 + 2.0 * g2 * lambda1 + 2.0 * lambda1 * lambda2 * omega;
}

/// Constant energy shift lambda1^2 omega + lambda2^2 omega + 2 lambda1 g1 + 2 lambda2 g2
/// carried by every diagonal element of the transformed Hamiltonian.
inline double energy_offset(const ModelParams& p, const TrwaParams& t) {
  return t.lambda1 * t.lambda1 * p.omega + t.lambda2 * t.lambda2 * p.omega + 2.0 * t.lambda1 * p.g1 +
         2.0 * t.lambda2 * p.g2;
}

}  // namespace rabi
