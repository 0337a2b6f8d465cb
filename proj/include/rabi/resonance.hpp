#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rabi/errors.hpp"
#include "rabi/model.hpp"
#include "rabi/numerics/root_finding.hpp"
#include "rabi/parallel.hpp"

namespace rabi {

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::validation, what);
}

inline constexpr std::size_t kLambdaScanSteps = 2048;

}  // namespace detail

/// Root of the qubit-1 decoupling condition closest to zero on [-1, 0].
/// The left side equals g1 > 0 at lambda = 0, so the root is negative.
inline double solve_lambda1(double omega, double delta1, double g1, double tol = kDefaultRootTol) {
  detail::require(omega > 0 && delta1 >= 0 && g1 >= 0, "solve_lambda1: need omega > 0, delta1 >= 0, g1 >= 0");
  if (g1 == 0.0) return 0.0;
  auto f = [&](double l) { return residual_eq8(omega, delta1, g1, l); };
  const auto bracket = first_sign_change(f, 0.0, -1.0, detail::kLambdaScanSteps);
  if (!bracket) throw Error(ErrorKind::no_bracket, "solve_lambda1: no sign change on [-1, 0]");
  return find_root(f, bracket->first, bracket->second, tol);
}

/// Turning point lambda* = sqrt(ln(2 delta2 / omega) / 2) where
/// omega = 2 delta2 exp(-2 lambda^2); only defined for 2 delta2 > omega.
inline double lambda2_turning_point(double omega, double delta2) {
  return std::sqrt(std::log(2.0 * delta2 / omega) / 2.0);
}

/// Root of the qubit-2 decoupling condition with the smallest |lambda2|.
///
/// For 2 delta2 > omega the admissible interval is (0, lambda*). There the
/// condition reads g2 = q(lambda) with q(l) = l (2 delta2 e^{-2 l^2} - omega)
/// unimodal, so a root exists iff g2 <= max q; otherwise Error{singular}.
/// For 2 delta2 <= omega the left side is monotone and the root is sought
/// on [-1, 0]; failure there is Error{no_bracket}.
inline double solve_lambda2(double omega, double delta2, double g2, double tol = kDefaultRootTol) {
  detail::require(omega > 0 && delta2 >= 0 && g2 >= 0, "solve_lambda2: need omega > 0, delta2 >= 0, g2 >= 0");
  if (g2 == 0.0) return 0.0;
  auto f = [&](double l) { return residual_eq9(omega, delta2, g2, l); };

  if (2.0 * delta2 > omega) {
    const double turn = lambda2_turning_point(omega, delta2);
    auto dq = [&](double l) { return 2.0 * delta2 * std::exp(-2.0 * l * l) * (1.0 - 4.0 * l * l) - omega; };
    const double peak = find_root(dq, 0.0, turn, tol);
    const double f_peak = f(peak);
    if (f_peak > 0.0) {
      std::ostringstream os;
      os << "solve_lambda2: g2 = " << g2 << " exceeds the largest coupling " << (g2 - f_peak)
         << " reachable on (0, " << turn << ")";
      throw Error(ErrorKind::singular, os.str());
    }
    return find_root(f, 0.0, peak, tol);
  }

  if (f(-1.0) > 0.0) throw Error(ErrorKind::no_bracket, "solve_lambda2: no sign change on [-1, 0]");
  return find_root(f, -1.0, 0.0, tol);
}

/// A complete resonant parameter set: lambda2 solves the qubit-2 condition,
/// lambda1 enforces the resonance relation and delta1 then follows from
/// the qubit-1 condition.
struct ResonantDesign {
  double omega = 0;
  double delta2 = 0;
  double g2 = 0;
  double g1 = 0;
  double lambda2 = 0;
  double lambda1 = 0;
  double delta1 = 0;
  /// |qubit-1 condition|, |qubit-2 condition|, |resonance relation|.
  std::array<double, 3> residuals{};

  bool approx_valid(double limit = kApproxLambdaLimit) const { return trwa().approx_valid(limit); }
  bool physical() const { return delta1 > 0; }
  double residual_tolerance() const { return 1e-10 * std::max({omega, g1, g2, 1.0}); }

  ModelParams model() const { return {omega, delta1, delta2, g1, g2}; }
  TrwaParams trwa() const { return {lambda1, lambda2}; }
};

inline ResonantDesign design_resonant(double omega, double delta2, double g2, double g1, double tol = kDefaultRootTol) {
  detail::require(omega > 0 && delta2 > 0 && g2 >= 0 && g1 >= 0,
                  "design_resonant: need omega, delta2 > 0 and g2, g1 >= 0");
  if (g1 == 0.0) throw Error(ErrorKind::degenerate_design, "design_resonant: g1 = 0 leaves delta1 indeterminate");

  ResonantDesign d{omega, delta2, g2, g1};
  d.lambda2 = solve_lambda2(omega, delta2, g2, tol);
  const double denom = g2 + d.lambda2 * omega;
  if (denom == 0.0) throw Error(ErrorKind::degenerate_design, "design_resonant: g2 + lambda2 omega = 0");
  d.lambda1 = -d.lambda2 * g1 / denom;
  if (d.lambda1 == 0.0) throw Error(ErrorKind::degenerate_design, "design_resonant: lambda1 = 0");
  d.delta1 = -(g1 + d.lambda1 * omega) / (2.0 * d.lambda1 * std::exp(-2.0 * d.lambda1 * d.lambda1));
  d.residuals = {std::abs(residual_eq8(omega, d.delta1, g1, d.lambda1)),
                 std::abs(residual_eq9(omega, delta2, g2, d.lambda2)),
                 std::abs(resonance_residual(d.lambda1, d.lambda2, g1, g2, omega))};
  return d;
}

/// One grid point of a working-window scan. Optional fields are empty when
/// they do not apply to the scan kind or the point failed.
struct WindowScanRow {
  double omega = 0;
  double delta2 = 0;
  double g2 = 0;
  std::optional<double> g1;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<double> delta1;
  bool in_window = false;
  std::string error;
};

namespace detail {

inline void require_grid(const std::vector<double>& grid, const char* name, bool allow_zero) {
  if (grid.empty()) throw Error(ErrorKind::validation, std::string(name) + ": grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool sign_ok = allow_zero ? grid[i] >= 0 : grid[i] > 0;
    if (!std::isfinite(grid[i]) || !sign_ok)
      throw Error(ErrorKind::validation, std::string(name) + ": grid values must be finite and positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw Error(ErrorKind::validation, std::string(name) + ": grid must be strictly increasing");
  }
}

inline std::string describe(const Error& e) { return std::string(to_string(e.kind())) + ": " + e.what(); }

}  // namespace detail

/// lambda2 over every (omega, delta2, g2) triple, in that nesting order.
/// A point is in the window when |lambda2| <= threshold.
inline std::vector<WindowScanRow> scan_lambda2_window(const std::vector<double>& omega_values,
                                                      const std::vector<double>& delta2_values,
                                                      const std::vector<double>& g2_grid,
                                                      double threshold = kApproxLambdaLimit, unsigned jobs = 1) {
  detail::require_grid(omega_values, "omega_values", false);
  detail::require_grid(delta2_values, "delta2_values", true);
  detail::require_grid(g2_grid, "g2_grid", true);
  const std::size_t per_omega = delta2_values.size() * g2_grid.size();
  return parallel_map(omega_values.size() * per_omega, jobs, [&](std::size_t idx) {
    WindowScanRow row;
    row.omega = omega_values[idx / per_omega];
    row.delta2 = delta2_values[(idx % per_omega) / g2_grid.size()];
    row.g2 = g2_grid[idx % g2_grid.size()];
    try {
      row.lambda2 = solve_lambda2(row.omega, row.delta2, row.g2);
      row.in_window = std::abs(*row.lambda2) <= threshold;
    } catch (const Error& e) {
      row.error = detail::describe(e);
    }
    return row;
  });
}

/// Derived delta1 from design_resonant over every (omega, delta2, g2)
/// triple at fixed g1. In the window: delta1 > 0 and |lambda1| <= threshold.
inline std::vector<WindowScanRow> scan_delta1_window(const std::vector<double>& omega_values,
                                                     const std::vector<double>& delta2_values, double g1,
                                                     const std::vector<double>& g2_grid,
                                                     double threshold = kApproxLambdaLimit, unsigned jobs = 1) {
  detail::require_grid(omega_values, "omega_values", false);
  detail::require_grid(delta2_values, "delta2_values", false);
  detail::require_grid(g2_grid, "g2_grid", true);
  detail::require(std::isfinite(g1) && g1 >= 0, "scan_delta1_window: g1 must be finite and >= 0");
  const std::size_t per_omega = delta2_values.size() * g2_grid.size();
  return parallel_map(omega_values.size() * per_omega, jobs, [&](std::size_t idx) {
    WindowScanRow row;
    row.omega = omega_values[idx / per_omega];
    row.delta2 = delta2_values[(idx % per_omega) / g2_grid.size()];
    row.g2 = g2_grid[idx % g2_grid.size()];
    row.g1 = g1;
    try {
      const ResonantDesign d = design_resonant(row.omega, row.delta2, row.g2, g1);
      row.lambda1 = d.lambda1;
      row.lambda2 = d.lambda2;
      row.delta1 = d.delta1;
      row.in_window = d.physical() && std::abs(d.lambda1) <= threshold;
    } catch (const Error& e) {
      row.error = detail::describe(e);
    }
    return row;
  });
}

/// Extent of the in-window region for one (omega, delta2) pair.
struct WindowSummary {
  double omega = 0;
  double delta2 = 0;
  std::size_t points = 0;
  std::size_t in_window = 0;
  std::size_t failed = 0;
  std::optional<double> g2_min;
  std::optional<double> g2_max;
  std::optional<double> delta1_min;
  std::optional<double> delta1_max;
};

inline std::vector<WindowSummary> summarize_windows(const std::vector<WindowScanRow>& rows) {
  std::vector<WindowSummary> out;
  for (const auto& r : rows) {
    if (out.empty() || out.back().omega != r.omega || out.back().delta2 != r.delta2)
    {
      WindowSummary fresh;
      fresh.omega = r.omega;
      fresh.delta2 = r.delta2;
      out.push_back(fresh);
    }
    auto& s = out.back();
    ++s.points;
    if (!r.error.empty()) ++s.failed;
    if (!r.in_window) continue;
    ++s.in_window;
    s.g2_min = s.g2_min ? std::min(*s.g2_min, r.g2) : r.g2;
    s.g2_max = s.g2_max ? std::max(*s.g2_max, r.g2) : r.g2;
    if (r.delta1) {
      s.delta1_min = s.delta1_min ? std::min(*s.delta1_min, *r.delta1) : *r.delta1;
      s.delta1_max = s.delta1_max ? std::max(*s.delta1_max, *r.delta1) : *r.delta1;
    }
  }
  return out;
}

/// Literature working windows used for side-by-side reporting:
/// g2 in [0.1, 0.8] at omega = 1, delta2 = 2, and delta1 in [0.05, 0.4]
/// at g1 = 0.9.
inline constexpr std::array<double, 2> kReferenceG2Window{0.1, 0.8};
inline constexpr std::array<double, 2> kReferenceDelta1Window{0.05, 0.4};

}  // namespace rabi
