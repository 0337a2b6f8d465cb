// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rabi/cli.hpp"
#include "rabi/rabi.hpp"

using namespace rabi;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      detail << what;
      ok = false;
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0) {
    std::ostringstream w;
    w << "runtime " << secs << " s exceeds " << limit_s << " s";
    c.require(secs < limit_s, w.str());
  }
  const std::string detail = c.detail.str();
  std::printf("%s %2d %s (%.3f s)%s%s\n", c.ok ? "PASS" : "FAIL", id, title, secs, detail.empty() ? "" : ": ",
              detail.c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void info(const std::string& line) { std::printf("     %s\n", line.c_str()); }

cli::Output run_preset(const std::string& name, unsigned jobs) {
  std::vector<cli::Violation> errs;
  const cli::Json flags{{"jobs", jobs}};
  const std::string cmd = cli::presets().at(name)["command"];
  cli::RunConfig c = cli::from_json(cli::merge_layers(cmd, name, cli::Json::object(), flags, std::nullopt), errs);
  for (auto& v : cli::validate(c)) errs.push_back(v);
  if (!errs.empty()) return {"invalid preset: " + errs[0].path + ": " + errs[0].message, 1};
  return cli::execute(c);
}

}  // namespace

int main() {
  criterion(1, "root residuals and bisection agreement on 100 random draws", 5.0, [](Check& c) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> uw(0.5, 1.5), ud(0.0, 2.5), ug(0.0, 1.0);
    int solved1 = 0, solved2 = 0;
    double worst_res = 0, worst_dev = 0;
    for (int attempt = 0; attempt < 10000 && (solved1 < 100 || solved2 < 100); ++attempt) {
      const double w = uw(rng), d = ud(rng), g = ug(rng);
      if (solved1 < 100) {
        try {
          const double l = solve_lambda1(w, d, g);
          const auto f = [&](double x) { return (g + x * w) + 2 * d * x * std::exp(-2 * x * x); };
          worst_res = std::max(worst_res, std::abs(residual_eq8(w, d, g, l)));
          worst_dev = std::max(worst_dev, std::abs(l - oracle::grid_bisection(f, 0.0, -1.0)));
          ++solved1;
        } catch (const Error&) {
        }
      }
      if (solved2 < 100) {
        try {
          const double l = solve_lambda2(w, d, g);
          const auto f = [&](double x) { return (g + x * w) - 2 * d * x * std::exp(-2 * x * x); };
          const double end = 2 * d > w ? std::sqrt(std::log(2 * d / w) / 2) : -1.0;
          worst_res = std::max(worst_res, std::abs(residual_eq9(w, d, g, l)));
          worst_dev = std::max(worst_dev, std::abs(l - oracle::grid_bisection(f, 0.0, end)));
          ++solved2;
        } catch (const Error&) {
        }
      }
    }
    c.require(solved1 == 100 && solved2 == 100, "fewer than 100 bracketed draws");
    c.require(worst_res <= 1e-10, "max residual " + fmt(worst_res));
    c.require(worst_dev <= 1e-8, "max oracle deviation " + fmt(worst_dev));
    info("max |residual| = " + fmt(worst_res) + ", max |lambda - oracle| = " + fmt(worst_dev));
  });

  criterion(2, "trivial roots", 0, [](Check& c) {
    for (double w : {0.5, 1.0, 1.5})
      for (double d : {0.0, 0.7, 2.5}) {
        c.require(solve_lambda1(w, d, 0.0) == 0.0, "lambda1(g=0) != 0");
        c.require(solve_lambda2(w, d, 0.0) == 0.0, "lambda2(g=0) != 0");
      }
    // Delta = 0 roots inside the [-1, 0] search bracket, i.e. g <= omega.
    for (double w : {0.5, 1.0, 1.5})
      for (double g : {0.1, 0.25, 0.5, 1.0}) {
        if (g > w) continue;
        c.require(std::abs(solve_lambda1(w, 0.0, g) + g / w) <= 1e-12, "lambda1(delta=0) != -g/omega");
        c.require(std::abs(solve_lambda2(w, 0.0, g) + g / w) <= 1e-12, "lambda2(delta=0) != -g/omega");
      }
  });

  criterion(3, "block closure at the reference design", 1.0, [](Check& c) {
    const auto d = design_resonant(1.0, 2.0, 0.7, 0.9);
    for (Sign par : {Sign::plus, Sign::minus}) {
      const auto m = build_effective_chain_matrix(d.model(), d.trwa(), build_parity_chain(par, 30),
                                                  CoefficientMode::approx);
      const double off = max_off_block_element(m), same = max_same_n_coupling(m);
      c.require(off <= 1e-12, "off-block element " + fmt(off));
      c.require(same <= 1e-12, "same-n coupling " + fmt(same));
      info(std::string("parity ") + symbol(par) + ": max off-block " + fmt(off) + ", max same-n " + fmt(same));
    }
    info("lambda1 = " + fmt(d.lambda1) + ", lambda2 = " + fmt(d.lambda2) + ", delta1 = " + fmt(d.delta1));
  });

  criterion(4, "Block4 spectra equal chain principal submatrices (n <= 10)", 0, [](Check& c) {
    const auto d = design_resonant(1.0, 2.0, 0.7, 0.9);
    double worst = 0;
    for (Sign par : {Sign::plus, Sign::minus}) {
      const auto chain = build_effective_chain_matrix(d.model(), d.trwa(), build_parity_chain(par, 30),
                                                      CoefficientMode::approx);
      for (std::uint32_t n = 0; n <= 10; ++n) {
        const auto blk = build_block4(d.model(), d.trwa(), n, CoefficientMode::approx, par);
        std::vector<std::size_t> idx;
        for (const auto& s : blk.basis) {
          const auto it = std::find(chain.basis.begin(), chain.basis.end(), s);
          c.require(it != chain.basis.end(), "block state missing from chain");
          idx.push_back(static_cast<std::size_t>(it - chain.basis.begin()));
        }
        const auto a = eigvalsh(blk.matrix);
        const auto b = eigvalsh(chain.matrix.principal(idx));
        for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
      }
    }
    c.require(worst <= 1e-10, "max eigenvalue difference " + fmt(worst));
    info("max eigenvalue difference " + fmt(worst));
  });

  criterion(5, "TRWA vs exact deviations shrink as g1 is scaled by 1/2, 1/4", 30.0, [](Check& c) {
    double prev = std::numeric_limits<double>::infinity();
    for (double s : {1.0, 0.5, 0.25}) {
      const auto cmp = compare_trwa_exact(1.0, 2.0, 0.7, 0.9 * s, 6, 60, 8);
      const double dev = cmp.max_abs_dev();
      std::ostringstream row;
      row << "g1 = " << 0.9 * s << ": ";
      for (const auto& r : cmp.rows) {
        c.require(std::isfinite(r.abs_dev), "non-finite deviation");
        row << fmt(r.abs_dev) << ' ';
      }
      row << "| max " << fmt(dev) << (cmp.convergence.converged ? "" : " (oracle not converged)");
      info(row.str());
      c.require(cmp.convergence.converged, "exact spectrum not converged at n_max = 60");
      c.require(dev < prev, "max deviation did not decrease at g1 = " + fmt(0.9 * s));
      prev = dev;
    }
  });

  criterion(6, "working-window scans on the published grids", 10.0, [](Check& c) {
    for (const char* name : {"fig1a", "fig1b", "fig2a", "fig2b"}) {
      const auto out = run_preset(name, 1);
      c.require(out.status == 0, std::string(name) + " failed");
      c.require(out.text.rfind("# ", 0) == 0, std::string(name) + " missing header line");
    }
    for (const auto& omegas : {std::vector<double>{1.0}, std::vector<double>{0.5, 1.0, 1.5}}) {
      std::vector<double> g2;
      for (int i = 0; i <= 18; ++i) g2.push_back(0.1 + 0.05 * i);
      const std::vector<double> deltas = omegas.size() == 1 ? std::vector<double>{1.0, 1.5, 2.0, 2.5}
                                                            : std::vector<double>{2.0};
      const auto rows = scan_lambda2_window(omegas, deltas, g2);
      for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& a = rows[i - 1];
        const auto& b = rows[i];
        if (a.omega != b.omega || a.delta2 != b.delta2 || !a.lambda2 || !b.lambda2) continue;
        c.require(*b.lambda2 >= *a.lambda2, "lambda2 decreases in g2");
      }
      for (const auto& s : summarize_windows(rows))
        info("lambda2 window omega=" + fmt(s.omega) + " delta2=" + fmt(s.delta2) + ": " +
             (s.g2_min ? "g2 in [" + fmt(*s.g2_min) + ", " + fmt(*s.g2_max) + "]" : std::string("empty")) +
             (s.omega == 1.0 && s.delta2 == 2.0 ? " (reference g2 in [0.1, 0.8])" : ""));
      const auto d1 = scan_delta1_window(omegas, deltas, 0.9, g2);
      for (const auto& s : summarize_windows(d1))
        info("delta1 window omega=" + fmt(s.omega) + " delta2=" + fmt(s.delta2) + ": " +
             (s.delta1_min ? "delta1 in [" + fmt(*s.delta1_min) + ", " + fmt(*s.delta1_max) + "]"
                           : std::string("empty")) +
             (s.omega == 1.0 && s.delta2 == 2.0 ? " (reference delta1 in [0.05, 0.4])" : ""));
    }
  });

  criterion(7, "parity defect is exactly zero", 0, [](Check& c) {
    const double d2 = parity_defect(ModelParams{1.0, 0.4, 2.0, 0.9, 0.7}, 60);
    const auto dd = design_resonant(1.0, 2.0, 0.7, 0.9);
    const double d2b = parity_defect(dd.model(), 60);
    ReservoirParams r;
    r.omega = 1.0, r.omega1 = 0.8, r.V = 0.3, r.g1 = 0.3, r.g2 = 0.25, r.g1p = 0.2, r.g2p = 0.15;
    r.delta1 = 1.0, r.delta2 = 0.7;
    const double d15 = parity_defect(build_full_pseudomode(r, 12, 12));
    c.require(d2 == 0.0 && d2b == 0.0, "rotated Rabi defect " + fmt(std::max(d2, d2b)));
    c.require(d15 == 0.0, "pseudomode defect " + fmt(d15));
  });

  criterion(8, "lab-frame and rotated spectra agree (n_max = 40)", 0, [](Check& c) {
    double worst = 0;
    for (const ModelParams& p : {ModelParams{1.0, 0.4, 2.0, 0.9, 0.7}, design_resonant(1.0, 2.0, 0.7, 0.9).model()}) {
      const auto a = eigvalsh(build_full_rabi(p, 40).matrix);
      const auto b = eigvalsh(build_rotated_rabi(p, 40).matrix);
      for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    }
    c.require(worst <= 1e-10, "max difference " + fmt(worst));
    info("max eigenvalue difference " + fmt(worst));
  });

  criterion(9, "dark state is exact for symmetric reservoir parameters (m, n <= 4)", 1.0, [](Check& c) {
    ReservoirParams r;
    r.omega = 1.0, r.omega1 = 0.8, r.g1 = r.g2 = 0.3, r.delta1 = r.delta2 = 1.0, r.g1p = r.g2p = 0.2;
    double worst = 0;
    for (std::uint32_t m = 0; m <= 4; ++m)
      for (std::uint32_t n = 0; n <= 4; ++n) worst = std::max(worst, dark_state_residual(r, m, n));
    c.require(worst <= 1e-12, "max residual " + fmt(worst));
    info("max residual " + fmt(worst));
  });

  criterion(10, "six-state example report is fully quantified", 0, [](Check& c) {
    ReservoirParams r;
    r.omega = 1.0, r.omega1 = 0.8, r.g1 = r.g2 = 0.3, r.delta1 = r.delta2 = 1.0, r.g1p = r.g2p = 0.2;
    const auto rep = verify_eq24(r);
    c.require(rep.eigenvalues.size() == 6 && rep.eigenvectors.size() == 6, "incomplete eigendecomposition");
    const auto res = rep.residual("eq24_normalized_residual");
    c.require(res.has_value(), "closed-form vector residual missing");
    c.require(rep.residual("max_entry_difference_vs_generator").has_value(), "generator comparison missing");
    for (const auto& nv : rep.residuals) c.require(std::isfinite(nv.value), "non-finite " + nv.name);
    if (res) info("closed-form vector normalized residual " + fmt(*res));
    info(std::to_string(rep.mismatches.size()) + " entries differ from the generator");
  });

  criterion(11, "Laguerre and eigensolver kernels", 5.0, [](Check& c) {
    double worst_l = 0;
    for (std::uint32_t n = 0; n <= 20; ++n)
      for (std::uint32_t k : {0u, 1u})
        for (double x : {0.01, 0.04, 0.25, 1.0, 2.0}) {
          const double ref = oracle::series_laguerre(n, k, x);
          worst_l = std::max(worst_l, std::abs(eval_laguerre(n, k, x) - ref) / std::max(1.0, std::abs(ref)));
        }
    c.require(worst_l <= 1e-12, "Laguerre relative error " + fmt(worst_l));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    double worst_res = 0, worst_orth = 0, worst_rec = 0, worst_jac = 0;
    for (std::size_t dim : {1u, 2u, 3u, 5u, 8u, 16u, 33u, 64u}) {
      SymmetricMatrix m(dim);
      oracle::Dense dense(dim, std::vector<double>(dim));
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j) {
          const double v = u(rng);
          m.set(i, j, v);
          dense[i][j] = dense[j][i] = v;
        }
      const auto e = eigh(m);
      const double scale = std::max(1.0, m.norm_inf());
      for (std::size_t k = 1; k < dim; ++k) c.require(e.values[k - 1] <= e.values[k], "values not ascending");
      for (std::size_t k = 0; k < dim; ++k) {
        const auto v = e.vector(k);
        auto mv = m.multiply(v);
        for (std::size_t i = 0; i < dim; ++i) mv[i] -= e.values[k] * v[i];
        worst_res = std::max(worst_res, norm2(mv) / scale);
        for (std::size_t j = 0; j < dim; ++j)
          worst_orth = std::max(worst_orth, std::abs(dot(v, e.vector(j)) - (j == k ? 1.0 : 0.0)));
      }
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
          double s = 0;
          for (std::size_t k = 0; k < dim; ++k) s += e.component(i, k) * e.values[k] * e.component(j, k);
          worst_rec = std::max(worst_rec, std::abs(s - m(i, j)) / scale);
        }
      const auto jac = oracle::jacobi_eigenvalues(dense);
      for (std::size_t k = 0; k < dim; ++k) worst_jac = std::max(worst_jac, std::abs(jac[k] - e.values[k]) / scale);
    }
    c.require(worst_res <= 1e-10, "eigen residual " + fmt(worst_res));
    c.require(worst_orth <= 1e-10, "orthonormality " + fmt(worst_orth));
    c.require(worst_rec <= 1e-9, "reconstruction " + fmt(worst_rec));
    c.require(worst_jac <= 1e-10, "Jacobi oracle " + fmt(worst_jac));
    info("Laguerre " + fmt(worst_l) + ", residual " + fmt(worst_res) + ", orthonormality " + fmt(worst_orth) +
         ", reconstruction " + fmt(worst_rec) + ", vs Jacobi " + fmt(worst_jac));
  });

  criterion(12, "byte-identical outputs across reruns and --jobs 1 / 8", 0, [](Check& c) {
    for (const auto& [name, body] : cli::presets()) {
      (void)body;
      const auto a = run_preset(name, 1);
      const auto b = run_preset(name, 1);
      const auto p = run_preset(name, 8);
      c.require(a.status == 0, name + " exited with " + std::to_string(a.status));
      c.require(a.text == b.text, name + " differs between reruns");
      c.require(a.text == p.text, name + " differs between --jobs 1 and 8");
      c.require(a.text.find('\r') == std::string::npos, name + " contains CR");
    }
  });

  std::printf("%s: %d of 12 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
