#include "cli/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "thermoqm/thermoqm.hpp"

namespace thermoqm::cli {
namespace {

struct Context {
  const Json& doc;
  OUParams ou;
  double hbar;
  std::uint64_t seed;
  int n_random;
  std::size_t n_samples;
};

double tolerance_for(const Json& verify, const std::string& name) {
  if (verify.contains("tolerance")) return get_number(verify, "tolerance");
  const Json& tols = get_block(verify, "tolerances");
  const double tol = get_number(tols, name);
  if (!(tol > 0.0)) throw ConfigError("tolerance for '" + name + "' must be positive");
  return tol;
}

std::vector<OUParams> random_params(std::uint64_t seed, std::uint64_t stream, int count) {
  CounterRng rng(seed, stream);
  std::vector<OUParams> out;
  for (int i = 0; i < count; ++i) {
    const double s = 0.5 + 2.5 * rng.uniform();
    const double r = 0.5 + 2.5 * rng.uniform();
    const double k_b = 0.5 + 1.5 * rng.uniform();
    out.emplace_back(s, r, k_b);
  }
  return out;
}

template <class F>
double nested_integral(const ThermoSystem& sys, F&& density, VectorXd& y, Eigen::Index dim,
                       const VectorXd& half_widths) {
  if (dim == y.size()) return density(y);
  quadrature::Options opts;
  opts.rel_tol = 1e-11;
  opts.fail_above = 1e-9;
  return quadrature::integrate(
      [&](double v) {
        y[dim] = v;
        return nested_integral(sys, density, y, dim + 1, half_widths);
      },
      -half_widths[dim], half_widths[dim], opts);
}

const std::vector<double> kGridX{-1.0, -0.5, 0.0, 0.5, 1.0};
const std::vector<double> kGridOmegaT{0.3, 0.7, 1.2};

}  // namespace

Json to_json(const IdentityResult& r) {
  return {{"name", r.name},           {"description", r.description}, {"residual", r.residual},
          {"tolerance", r.tolerance}, {"passed", r.passed},           {"seconds", r.seconds},
          {"details", r.details}};
}

std::vector<IdentityResult> run_verification_suite(const Json& doc) {
  const Json& verify = get_block(doc, "verify");
  Context ctx{doc,
              ou_params_from(get_block(doc, "ou")),
              get_number_or(get_block(doc, "quantum"), "hbar", 1.0),
              get_seed(verify, "seed"),
              static_cast<int>(get_number_or(verify, "n_random", 20)),
              static_cast<std::size_t>(get_number_or(verify, "n_samples", 100000))};
  if (!(ctx.hbar > 0.0)) throw ConfigError("quantum.hbar must be positive");
  if (ctx.n_random < 1) throw ConfigError("verify.n_random must be >= 1");
  if (ctx.n_samples < 1000) throw ConfigError("verify.n_samples must be >= 1000");
  const ThermoSystem thermo = thermo_system_from(get_block(doc, "thermo"));

  std::vector<IdentityResult> results;
  auto run = [&](const std::string& name, const std::string& description,
                 const std::function<double(Json&)>& body) {
    IdentityResult r;
    r.name = name;
    r.description = description;
    r.tolerance = tolerance_for(verify, name);
    const auto start = std::chrono::steady_clock::now();
    r.residual = body(r.details);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = std::isfinite(r.residual) && r.residual <= r.tolerance;
    results.push_back(std::move(r));
  };

  // ---- thermo-core --------------------------------------------------------
  run("thermo.reciprocity", "max |L_ij - L_ji| of the configured kinetic matrix", [&](Json&) {
    return check_reciprocity(thermo, 0.0).max_asymmetry;
  });

  run("thermo.forces_gradient", "forces vs central-difference gradient of entropy (relative)", [&](Json&) {
    CounterRng rng(ctx.seed, 1);
    double worst = 0.0;
    for (int k = 0; k < ctx.n_random; ++k) {
      VectorXd y(thermo.n_vars());
      for (auto& v : y) v = rng.normal();
      const VectorXd f = forces(thermo, y);
      VectorXd fd(y.size());
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(y[i]));
        VectorXd up = y, dn = y;
        up[i] += h;
        dn[i] -= h;
        fd[i] = (entropy(thermo, up) - entropy(thermo, dn)) / (2.0 * h);
      }
      worst = std::max(worst, (fd - f).norm() / std::max(f.norm(), 1e-300));
    }
    return worst;
  });

  run("thermo.production_forms", "ydot^T R ydot vs Y^T L Y with Y = R ydot (relative)", [&](Json&) {
    CounterRng rng(ctx.seed, 2);
    double worst = 0.0;
    for (int k = 0; k < ctx.n_random; ++k) {
      VectorXd ydot(thermo.n_vars());
      for (auto& v : ydot) v = rng.normal();
      const double a = entropy_production_rate(thermo, ydot);
      const double b = entropy_production_rate_from_forces(thermo, forces_from_fluxes(thermo, ydot));
      worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
    }
    return worst;
  });

  if (thermo.n_vars() <= 3) {
    run("thermo.boltzmann_normalization", "nested Gauss-Kronrod integral of the Boltzmann density minus 1",
        [&](Json&) {
          const MatrixXd cov = thermo.k_b() * thermo.s_cholesky().solve(MatrixXd::Identity(thermo.n_vars(), thermo.n_vars()));
          const VectorXd half = 12.0 * cov.diagonal().cwiseSqrt();
          VectorXd y(thermo.n_vars());
          const double total = nested_integral(
              thermo, [&](const VectorXd& v) { return boltzmann_density(thermo, v); }, y, 0, half);
          return std::abs(total - 1.0);
        });
  }

  // ---- ou-process ---------------------------------------------------------
  const std::vector<OUParams> params = random_params(ctx.seed, 10, ctx.n_random);

  run("ou.normalization", "|int f1(y2 | y1, dtau) dy2 - 1| over random parameter sets", [&](Json&) {
    CounterRng rng(ctx.seed, 11);
    double worst = 0.0;
    for (const auto& p : params) {
      const double y1 = 2.0 * rng.normal() * std::sqrt(p.stationary_variance());
      const double dtau = (0.05 + 2.0 * rng.uniform()) / p.gamma();
      const auto [mean, var] = transition_moments(p, y1, dtau);
      const double total = quadrature::integrate_gaussian_window(
          [&](double y2) { return transition_density(p, y1, y2, dtau); }, mean, std::sqrt(var));
      worst = std::max(worst, std::abs(total - 1.0));
    }
    return worst;
  });

  run("ou.chapman_kolmogorov", "Chapman-Kolmogorov composition residual, gaps (0.3, 0.7)", [&](Json&) {
    double worst = 0.0;
    for (const auto& p : params) {
      const double sd = std::sqrt(p.stationary_variance());
      const GateSequence gates({0.0, 0.3, 1.0}, {-1.2 * sd, 0.1 * sd, 0.9 * sd});
      worst = std::max(worst, markov_check(p, gates, 1.0).residual);
    }
    return worst;
  });

  run("ou.detailed_balance", "stationary(y1) f1(y2|y1) vs stationary(y2) f1(y1|y2) (relative)", [&](Json&) {
    CounterRng rng(ctx.seed, 12);
    double worst = 0.0;
    for (const auto& p : params) {
      const double sd = std::sqrt(p.stationary_variance());
      const double y1 = sd * rng.normal(), y2 = sd * rng.normal(), dtau = 0.1 + rng.uniform();
      const double a = stationary_density(p, y1) * transition_density(p, y1, y2, dtau);
      const double b = stationary_density(p, y2) * transition_density(p, y2, y1, dtau);
      worst = std::max(worst, std::abs(a - b) / a);
    }
    return worst;
  });

  run("ou.factorization", "kernel product vs Gaussian with covariance (k_b/s) e^{-gamma|dt|}, n = 3, 4",
      [&](Json&) {
        CounterRng rng(ctx.seed, 13);
        double worst = 0.0;
        for (const auto& p : params) {
          for (std::size_t n : {3u, 4u}) {
            std::vector<double> t{0.0}, y;
            for (std::size_t k = 1; k < n; ++k) t.push_back(t.back() + (0.05 + rng.uniform()) / p.gamma());
            for (std::size_t k = 0; k < n; ++k) y.push_back(std::sqrt(p.stationary_variance()) * rng.normal());
            const GateSequence g(t, y);
            const double a = joint_density(p, g);
            const double b = gaussian_process_density(p, g);
            worst = std::max(worst, std::abs(a - b) / b);
          }
        }
        return worst;
      });

  const double lag = 0.5 / ctx.ou.gamma();
  const std::vector<double> pair_times{0.0, lag};
  run("ou.stationary_moments", "stationary ensemble mean and variance, max |z| in standard errors",
      [&](Json& details) {
        const auto n = static_cast<double>(ctx.n_samples);
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < ctx.n_samples; ++i) {
          const double y = sample_path(ctx.ou, StationaryStart{}, pair_times, ctx.seed, i).values[0];
          sum += y;
          sum2 += y * y;
        }
        const double var = ctx.ou.stationary_variance();
        const double mean_hat = sum / n;
        const double var_hat = (sum2 - n * mean_hat * mean_hat) / (n - 1.0);
        const double z_mean = std::abs(mean_hat) / std::sqrt(var / n);
        const double z_var = std::abs(var_hat - var) / (var * std::sqrt(2.0 / (n - 1.0)));
        details = {{"mean", mean_hat}, {"variance", var_hat}, {"expected_variance", var}, {"n_samples", ctx.n_samples}};
        return std::max(z_mean, z_var);
      });

  run("ou.autocorrelation", "lag correlation vs e^{-gamma lag}, |z| in standard errors", [&](Json& details) {
    const auto n = static_cast<double>(ctx.n_samples);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ctx.n_samples; ++i) {
      const PathSample path = sample_path(ctx.ou, StationaryStart{}, pair_times, ctx.seed + 1, i);
      sxy += path.values[0] * path.values[1];
      sxx += path.values[0] * path.values[0];
      syy += path.values[1] * path.values[1];
    }
    const double rho_hat = sxy / std::sqrt(sxx * syy);
    const double rho = std::exp(-ctx.ou.gamma() * lag);
    details = {{"lag", lag}, {"rho_hat", rho_hat}, {"rho", rho}};
    return std::abs(rho_hat - rho) / ((1.0 - rho * rho) / std::sqrt(n));
  });

  run("ou.gate_stationarity", "gate probability vs the same gates shifted by 5, |z| in combined errors",
      [&](Json& details) {
        const double sd = std::sqrt(ctx.ou.stationary_variance());
        const GateSequence gates({0.0, 0.4 / ctx.ou.gamma(), 1.1 / ctx.ou.gamma()}, {0.5 * sd, 1.0 * sd, 0.2 * sd});
        const auto a = estimate_cumulative(ctx.ou, gates, ctx.n_samples, ctx.seed + 2);
        const auto b = estimate_cumulative(ctx.ou, gates.shifted(5.0), ctx.n_samples, ctx.seed + 3);
        details = {{"estimate", a.estimate}, {"shifted_estimate", b.estimate}};
        return std::abs(a.estimate - b.estimate) / std::hypot(a.standard_error, b.standard_error);
      });

  // ---- path-integral ------------------------------------------------------
  run("path.free_slicing_exact", "gamma = 0 slicing vs Wiener kernel, n = 1..256 (relative)", [&](Json&) {
    const OUParams free = OUParams::free_diffusion(ctx.ou.r(), ctx.ou.k_b());
    double worst = 0.0;
    for (int n = 1; n <= 256; n *= 2) {
      const double exact = diffusion_limit_density(free.r(), free.k_b(), 0.3, -0.4, 0.8);
      worst = std::max(worst, std::abs(kernel_by_slicing(free, 0.3, -0.4, 0.8, n) - exact) / exact);
    }
    return worst;
  });

  std::vector<std::pair<int, double>> errors_by_n;
  auto slicing_errors = [&](double gamma_dtau) {
    const OUParams p(1.0, 1.0, 1.0);
    std::vector<double> errs;
    for (int n = 4; n <= 256; n *= 2) {
      const double exact = transition_density(p, 1.0, 0.5, gamma_dtau);
      errs.push_back(std::abs(kernel_by_slicing(p, 1.0, 0.5, gamma_dtau, n) - exact) / exact);
    }
    return errs;
  };
  run("path.slicing_convergence", "relative error of the sliced kernel at n = 256, gamma dtau in {1, 2}",
      [&](Json& details) {
        const auto e1 = slicing_errors(1.0), e2 = slicing_errors(2.0);
        details = {{"gamma_dtau_1", e1}, {"gamma_dtau_2", e2}, {"n_slices", {4, 8, 16, 32, 64, 128, 256}}};
        return std::max(e1.back(), e2.back());
      });
  run("path.slicing_order", "max |err(n)/err(2n) - 4| for n >= 32", [&](Json&) {
    double worst = 0.0;
    for (double g : {1.0, 2.0}) {
      const auto e = slicing_errors(g);
      for (std::size_t k = 3; k + 1 < e.size(); ++k) worst = std::max(worst, std::abs(e[k] / e[k + 1] - 4.0));
    }
    return worst;
  });

  // ---- quantum-kernels ----------------------------------------------------
  const QuantumParams q = map_to_quantum(ctx.ou, ctx.hbar);
  run("qm.group_free", "free propagator composition by rotated-contour quadrature", [&](Json&) {
    const QuantumParams qf = map_to_free_particle(ctx.ou.r(), ctx.ou.k_b(), ctx.hbar);
    return std::max(group_property_residual(qf, 0.3, -0.5, 0.5, 1.0), group_property_residual(qf, -1.0, 1.0, 1.0, 2.0));
  });
  run("qm.group_harmonic", "Mehler kernel composition at omega t = 0.3, 0.4", [&](Json&) {
    return group_property_residual(q, 0.3, -0.5, 0.3 / q.omega(), 0.4 / q.omega());
  });
  run("qm.ground_state_evolution", "int K psi0 = e^{-i omega t/2} psi0, omega t in {0.3, 0.7, 1.2}", [&](Json&) {
    double worst = 0.0;
    for (double wt : kGridOmegaT) worst = std::max(worst, ground_state_evolution_residual(q, wt / q.omega(), kGridX));
    return worst;
  });

  // ---- correspondence -----------------------------------------------------
  run("corr.bijectivity", "map_to_thermo(map_to_quantum(p)) = p (relative)", [&](Json&) {
    double worst = 0.0;
    for (const auto& p : params) {
      const OUParams back = map_to_thermo(map_to_quantum(p, ctx.hbar), p.k_b());
      worst = std::max({worst, std::abs(back.s() - p.s()) / p.s(), std::abs(back.r() - p.r()) / p.r(),
                        std::abs(back.gamma() - p.gamma()) / p.gamma()});
    }
    return worst;
  });

  run("corr.harmonic", "f1(x2, it | x1) = exp(i w t/2 - dV/hbar w) sqrt(2 m w/hbar) K_harmonic (relative)",
      [&](Json& details) {
        double worst = verify_harmonic_grid(ctx.ou, ctx.hbar, kGridX, kGridOmegaT);
        for (const auto& p : params) worst = std::max(worst, verify_harmonic_grid(p, ctx.hbar, kGridX, kGridOmegaT));
        details = {{"x_grid", kGridX}, {"omega_t", kGridOmegaT}, {"normalization", "printed"}};
        return worst;
      });

  run("corr.free", "K_free = c f1(it)|_{gamma->0} with one fitted constant (relative)", [&](Json& details) {
    std::vector<double> xs;
    for (int k = -4; k <= 4; ++k) xs.push_back(0.5 * k);
    const std::vector<double> ts{0.5, 1.0, 2.0};
    const FreeCorrespondence fc = verify_free(ctx.ou.r(), ctx.ou.k_b(), ctx.hbar, xs, ts);
    details = {{"fitted_constant", {fc.fitted_constant.real(), fc.fitted_constant.imag()}}, {"points", fc.points}};
    return fc.max_residual;
  });

  run("corr.born", "log(stationary / |psi0|^2) deviation from constant", [&](Json&) {
    double worst = verify_stationary_born(ctx.ou, ctx.hbar);
    for (const auto& p : params) worst = std::max(worst, verify_stationary_born(p, ctx.hbar));
    return worst;
  });

  std::vector<ActionEntropyReport> bridge;
  const DictionaryMap dictionary(ctx.ou, ctx.hbar);
  for (double wt : kGridOmegaT) {
    for (double x1 : kGridX) {
      for (double x2 : kGridX) bridge.push_back(verify_action_entropy(dictionary, x1, x2, wt / q.omega(), 256));
    }
  }
  run("corr.action_entropy_analytic", "-(1/2k_b) A_OM(it) = i I/hbar and density decomposition", [&](Json&) {
    double worst = 0.0;
    for (const auto& r : bridge) worst = std::max(worst, r.analytic_residual());
    return worst;
  });
  run("corr.action_entropy_discrete", "256-slice stationary discrete action at dtau = it vs closed form", [&](Json&) {
    double worst = 0.0;
    for (const auto& r : bridge) worst = std::max(worst, r.discrete_residual);
    return worst;
  });

  run("corr.wavefunction_modulus", "|psi| from entropy equals sqrt(Boltzmann density)", [&](Json&) {
    const ThermoSystem one(MatrixXd::Constant(1, 1, ctx.ou.s()), MatrixXd::Constant(1, 1, 1.0 / ctx.ou.r()),
                           ctx.ou.k_b(), 0.0);
    const double z = std::sqrt(2.0 * kPi * ctx.ou.k_b() / ctx.ou.s());
    double worst = 0.0;
    for (int k = -20; k <= 20; ++k) {
      VectorXd y(1);
      y[0] = 0.15 * k;
      const Amplitude psi = build_wavefunction(entropy(one, y), 0.37 * k, one.k_b(), ctx.hbar, z);
      worst = std::max(worst, std::abs(std::abs(psi) - std::sqrt(boltzmann_density(one, y))));
    }
    return worst;
  });

  return results;
}

}  // namespace thermoqm::cli
