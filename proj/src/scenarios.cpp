#include "einselect/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

#include "einselect/darwinism.hpp"
#include "einselect/envariance.hpp"
#include "einselect/measurement.hpp"
#include "einselect/qbm.hpp"
#include "einselect/sieve.hpp"
#include "einselect/spinbath.hpp"
#include "einselect/wigner.hpp"

namespace einselect {
namespace scenarios {

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunContext {
  json params;
  uint64_t seed = 0;
  std::filesystem::path out;
  bool emit_plots = false;
  int jobs = 1;
  std::vector<std::filesystem::path> outputs;

  std::filesystem::path file(const std::string& name) {
    auto p = out / name;
    outputs.push_back(p);
    return p;
  }
  double num(const std::string& k) const { return params.at(k).get<double>(); }
  long integer(const std::string& k) const { return params.at(k).get<long>(); }
  bool flag(const std::string& k) const { return params.at(k).get<bool>(); }
  std::string str(const std::string& k) const {
    return params.at(k).get<std::string>();
  }
};

cxd cx_of(const json& pair) {
  if (!pair.is_array() || pair.size() != 2)
    throw ConfigError("complex values are [re, im] pairs");
  return cxd(pair[0].get<double>(), pair[1].get<double>());
}

// ---------------------------------------------------------------------------
// spinbath-decay

void run_spinbath(RunContext& ctx) {
  Rng rng(ctx.seed);
  const int n = static_cast<int>(ctx.integer("n_spins"));
  const cxd a = cx_of(ctx.params.at("a")), b = cx_of(ctx.params.at("b"));
  const auto params =
      spinbath::SpinBathParams::random(n, a, b, ctx.num("g0"), rng);

  const double t_max = ctx.num("t_max");
  const long samples = ctx.integer("n_samples");
  io::CsvWriter csv(ctx.file("spinbath.csv"),
                    {"t", "re_r", "im_r", "abs_r2", "bloch_x", "bloch_y",
                     "bloch_z"});
  std::vector<double> purity_trace, ts;
  for (long i = 0; i <= samples; ++i) {
    const double t = t_max * i / samples;
    const cxd r = spinbath::decoherence_factor(params, t);
    const auto pt = spinbath::bloch_trajectory(params, {t}).front();
    csv.row({t, r.real(), r.imag(), std::norm(r), pt.x, pt.y, pt.z});
    ts.push_back(t);
    purity_trace.push_back(std::norm(r));
  }
  csv.close();

  const auto asym = spinbath::asymptotic_coherence(params);
  json summary{{"n_spins", n},
               {"coherence_bound", asym.bound},
               {"time_averaged_r2", asym.time_avg}};
  io::atomic_write(ctx.file("summary.json"), summary.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// qbm-coefficients

void run_qbm_coefficients(RunContext& ctx) {
  qbm::QbmParams p;
  p.gamma0 = ctx.num("gamma0");
  p.Gamma = ctx.num("Gamma");
  p.T = ctx.num("T");
  p.M = ctx.num("M");
  p.Omega = ctx.num("Omega");
  p.hbar = ctx.num("hbar");
  p.kB = ctx.num("kB");

  const double t_max = ctx.num("t_max");
  const long n_points = ctx.integer("n_points");
  std::vector<double> grid;
  for (long i = 1; i <= n_points; ++i) grid.push_back(t_max * i / n_points);
  const auto trace = qbm::coefficients_perturbative(p, grid);

  io::CsvWriter csv(ctx.file("coefficients.csv"),
                    {"t", "gamma", "D", "f", "Omega_ren_sq"});
  for (size_t i = 0; i < trace.t.size(); ++i)
    csv.row({trace.t[i], trace.gamma[i], trace.D[i], trace.f[i],
             trace.Omega_ren_sq[i]});
  csv.close();

  const double g_inf =
      p.gamma0 * p.Gamma * p.Gamma / (p.Gamma * p.Gamma + p.Omega * p.Omega);
  json summary{{"gamma_final", trace.gamma.back()},
               {"gamma_asymptote", g_inf},
               {"D_final", trace.D.back()},
               {"high_t_flag", p.high_t_flag()}};
  io::atomic_write(ctx.file("summary.json"), summary.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// qbm-cat

void run_qbm_cat(RunContext& ctx) {
  qbm::QbmParams p;
  p.gamma0 = ctx.num("gamma0");
  p.Gamma = ctx.num("Gamma");
  p.T = ctx.num("T");
  p.M = ctx.num("M");
  p.Omega = ctx.num("Omega");
  p.hbar = ctx.num("hbar");
  p.kB = ctx.num("kB");

  const int n = static_cast<int>(ctx.integer("grid_n"));
  const double half = ctx.num("box_half");
  const double x0 = ctx.num("x0"), sigma = ctx.num("sigma_x");
  auto pot = [&p](double x) { return 0.5 * p.M * p.Omega * p.Omega * x * x; };
  auto st = qbm::PositionGridState::cat(x0, sigma, -half, half, n, pot, p.hbar);

  const double dt = ctx.num("dt");
  const long steps = ctx.integer("steps");
  const long every = std::max<long>(1, ctx.integer("trace_every"));

  // coherence: peak |rho(x, x')| over the off-diagonal quadrant
  auto coherence = [&]() {
    double best = 0.0;
    const int q = n / 8;
    for (int i = n / 2 + q; i < n; ++i)
      for (int j = 0; j < n / 2 - q; ++j)
        best = std::max(best, std::abs(st.rho(i, j)));
    return best;
  };

  io::CsvWriter csv(ctx.file("coherence.csv"), {"t", "offdiag_peak", "purity"});
  csv.row({0.0, coherence(), st.purity()});
  for (long s = 0; s < steps; s += every) {
    const long chunk = std::min(every, steps - s);
    qbm::high_t_evolve(st, p, dt, static_cast<int>(chunk));
    csv.row({(s + chunk) * dt, coherence(), st.purity()});
  }
  csv.close();

  json header{{"nx", n}, {"dx", st.dx()}, {"x_min", st.x_min},
              {"time", steps * dt}};
  RVec density = st.position_density();
  io::write_snapshot(ctx.file("density_final.bin"), header, density.data(),
                     static_cast<size_t>(density.size()));
  if (ctx.emit_plots) {
    RMat abs_rho = st.rho.cwiseAbs();
    io::svg_heatmap(ctx.file("rho_abs_final.svg"), abs_rho,
                    "|rho(x,x')| after evolution", st.x_min, st.dx(), st.x_min,
                    st.dx());
  }
}

// ---------------------------------------------------------------------------
// wigner-chaos

wigner::Potential potential_from(const json& p) {
  const std::string kind = p.at("potential").get<std::string>();
  if (kind == "harmonic")
    return wigner::Potential::harmonic(p.at("mass").get<double>(),
                                       p.at("omega").get<double>());
  if (kind == "double_well")
    return wigner::Potential::driven_double_well(
        p.at("A").get<double>(), p.at("B").get<double>(),
        p.at("C").get<double>(), p.at("f").get<double>());
  if (kind == "pendulum")
    return wigner::Potential::driven_pendulum(p.at("kappa").get<double>(),
                                              p.at("l").get<double>(),
                                              p.at("a_quad").get<double>());
  throw ConfigError("unknown potential kind: " + kind);
}

void run_wigner_chaos(RunContext& ctx) {
  const auto pot = potential_from(ctx.params);
  const double hbar = ctx.num("hbar"), mass = ctx.num("mass");
  const int nx = static_cast<int>(ctx.integer("nx"));
  const int np = static_cast<int>(ctx.integer("np"));
  const double x_min = ctx.num("x_min"), x_max = ctx.num("x_max");
  const double st_x = ctx.num("x0"), st_p = ctx.num("p0");
  const double sigma = ctx.num("sigma_x");
  const double D = ctx.num("D");
  const double t_max = ctx.num("t_max");
  double dt = ctx.num("dt");
  const long every = std::max<long>(1, ctx.integer("trace_every"));

  const auto modes = ctx.params.at("modes").get<std::vector<std::string>>();
  for (const auto& mode_name : modes) {
    wigner::EvolveMode mode;
    double mode_D = D;
    std::string tag = mode_name;
    if (mode_name == "moyal")
      mode = wigner::EvolveMode::moyal;
    else if (mode_name == "moyal_unitary") {
      mode = wigner::EvolveMode::moyal;
      mode_D = 0.0;
    } else if (mode_name == "liouville")
      mode = wigner::EvolveMode::liouville;
    else if (mode_name == "liouville_pure") {
      mode = wigner::EvolveMode::liouville;
      mode_D = 0.0;
    } else
      throw ConfigError("unknown mode: " + mode_name);

    wigner::WignerGrid grid =
        wigner::WignerGrid::zeros(nx, np, x_min, x_max, hbar, pot, mass);
    const double xi = sigma * std::sqrt(2.0);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < np; ++j) {
        const double xx = grid.x(i) - st_x, pp = grid.p(j) - st_p;
        grid.w(i, j) =
            std::exp(-xx * xx / (xi * xi) - pp * pp * xi * xi / (hbar * hbar));
      }
    grid.renormalize();

    long steps = std::max<long>(1, std::lround(t_max / dt));
    const double dt_eff = t_max / steps;

    io::CsvWriter csv(ctx.file("trace_" + tag + ".csv"),
                      {"t", "mean_x", "mean_p", "var_x", "var_p", "purity",
                       "min_W", "correction_ratio"});
    auto emit = [&]() {
      const auto pr = wigner::linear_entropy(grid);
      csv.row({grid.time, grid.mean_x(), grid.mean_p(), grid.var_x(),
               grid.var_p(), pr.purity, grid.w.minCoeff(),
               wigner::correction_diagnostic(grid)});
    };
    emit();
    for (long s = 0; s < steps; s += every) {
      const long chunk = std::min(every, steps - s);
      wigner::evolve(grid, mode, mode_D, dt_eff, static_cast<int>(chunk));
      emit();
    }
    csv.close();

    json header{{"nx", nx},       {"np", np},       {"dx", grid.dx},
                {"dp", grid.dp},  {"x_min", x_min}, {"p_min", grid.p_min},
                {"hbar", hbar},   {"t", grid.time}};
    io::write_snapshot(ctx.file("wigner_" + tag + "_final.bin"), header,
                       grid.w.data(), static_cast<size_t>(grid.w.size()));
    if (ctx.emit_plots)
      io::svg_heatmap(ctx.file("wigner_" + tag + "_final.svg"), grid.w,
                      "W(x,p) " + tag + " t=" + std::to_string(grid.time),
                      x_min, grid.dx, grid.p_min, grid.dp);
  }
}

// ---------------------------------------------------------------------------
// sieve-squeeze

void run_sieve_squeeze(RunContext& ctx) {
  qbm::QbmParams p;
  p.gamma0 = ctx.num("gamma_over_omega");
  p.Gamma = 100.0;
  p.T = ctx.num("kT_over_hbar_omega");
  p.M = 1.0;
  p.Omega = 1.0;
  p.hbar = 1.0;
  p.kB = 1.0;

  sieve::QbmDynamics dyn;
  dyn.params = p;
  dyn.grid_n = static_cast<int>(ctx.integer("grid_n"));

  const double lo = ctx.num("s_min_log2"), hi = ctx.num("s_max_log2");
  const long n_pts = ctx.integer("n_points");
  std::vector<sieve::SieveCandidate> candidates;
  double box_half = 0.0;
  for (long i = 0; i < n_pts; ++i) {
    const double l2 = lo + (hi - lo) * i / std::max<long>(1, n_pts - 1);
    const double s = std::exp2(l2);
    sieve::GaussianCandidate g(s, 1.0, 1.0, 1.0);
    box_half = std::max(
        box_half, 8.0 * std::sqrt(std::max(g.var_x(), g.var_p())));
    candidates.push_back({"s=" + std::to_string(s), g});
  }
  dyn.box_half = box_half;

  const double horizon = ctx.num("horizon_cycles") * 2.0 * kPi;
  const auto score = ctx.str("score") == "entropy" ? sieve::SieveScore::entropy
                                                   : sieve::SieveScore::purity;
  const auto results = sieve::run_sieve(candidates, dyn, horizon, score);

  io::CsvWriter csv(ctx.file("sieve.csv"),
                    {"candidate_id", "squeeze_or_label", "score_purity",
                     "score_entropy", "horizon"});
  for (const auto& r : results)
    csv.row_mixed({std::to_string(r.candidate_index), r.label,
                   std::to_string(r.purity_after),
                   std::to_string(r.entropy_gained), std::to_string(horizon)});
  csv.close();

  json summary{{"winner", results.front().label},
               {"winner_purity", results.front().purity_after}};
  io::atomic_write(ctx.file("summary.json"), summary.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// darwinism-cnot

void run_darwinism_cnot(RunContext& ctx) {
  const cxd a = cx_of(ctx.params.at("a")), b = cx_of(ctx.params.at("b"));
  const int n_env = static_cast<int>(ctx.integer("n_env"));
  const auto rows = darwinism::cnot_redundancy_sweep(a, b, n_env);
  io::CsvWriter csv(ctx.file("redundancy.csv"),
                    {"n_cnots", "R_I", "R_J_pointer", "R_J_conjugate"});
  for (const auto& r : rows)
    csv.row({static_cast<double>(r.n_cnots), r.r_i, r.r_j_pointer,
             r.r_j_conjugate});
  csv.close();

  // partial-information curve for the full branch state
  const auto psi =
      darwinism::build_branch_state(darwinism::BranchState::ghz(a, b, n_env));
  json curve = json::array();
  for (int sz = 1; sz <= n_env; ++sz) {
    std::vector<int> frag(sz);
    for (int i = 0; i < sz; ++i) frag[i] = i;
    curve.push_back(
        {{"fragment_size", sz},
         {"mutual_information",
          darwinism::fragment_mutual_info(psi, frag,
                                          darwinism::InfoMode::symmetric)}});
  }
  io::atomic_write(ctx.file("partial_information.json"),
                   json{{"curve", curve}}.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// envariance-born

void run_envariance_born(RunContext& ctx) {
  const auto m = ctx.params.at("m").get<std::vector<long>>();
  const envariance::FineGraining grain(m);
  const auto result =
      envariance::born_from_finegraining(grain, ctx.flag("via_counterweight"));
  if (!result.swap_verified)
    throw std::runtime_error("envariance-born: swap verification failed");

  json probs = json::array();
  for (const auto& q : result.probabilities) {
    std::ostringstream ss;
    ss << q;
    probs.push_back(ss.str());
  }
  json out{{"multiplicities", m},
           {"M", result.fine_grained_terms},
           {"probabilities", probs}};
  io::atomic_write(ctx.file("born.json"), out.dump(2) + "\n");

  const long ensemble = ctx.integer("frequency_ensemble");
  if (ensemble > 0) {
    const auto am = ctx.params.at("frequency_alpha2").get<std::vector<long>>();
    if (am.size() != 2) throw ConfigError("frequency_alpha2 is [num, den]");
    const envariance::BigRat alpha2{envariance::BigInt(am[0]),
                                    envariance::BigInt(am[1])};
    const auto dist = envariance::frequency_distribution(alpha2, ensemble);
    io::CsvWriter csv(ctx.file("frequency.csv"),
                      {"n", "p_exact_num", "p_exact_den", "p_gauss"});
    for (long n = 0; n <= ensemble; ++n) {
      std::ostringstream nu, de;
      nu << boost::multiprecision::numerator(dist.exact[n]);
      de << boost::multiprecision::denominator(dist.exact[n]);
      std::ostringstream pg;
      pg << std::setprecision(17) << dist.gaussian[n];
      csv.row_mixed({std::to_string(n), nu.str(), de.str(), pg.str()});
    }
    csv.close();
  }
}

// ---------------------------------------------------------------------------
// scales-report

void run_scales_report(RunContext& ctx) {
  const double Lambda = ctx.num("Lambda");
  const double hbar = ctx.num("hbar");
  double I_action = ctx.num("I_over_hbar") * hbar;
  double lambda_T = ctx.num("lambda_T");
  const double gamma = ctx.num("gamma");
  const double D = ctx.num("D");
  if (lambda_T <= 0.0 && D > 0.0) lambda_T = hbar * std::sqrt(gamma / D);
  const auto rep = wigner::scale_report(Lambda, ctx.num("Delta_p0"),
                                        ctx.num("chi"), I_action, gamma,
                                        lambda_T, hbar);
  json out{{"t_hbar", rep.t_hbar},
           {"t_r", rep.t_r},
           {"sub_planck_a", rep.sub_planck_a},
           {"ell_c", rep.ell_c},
           {"sigma_c", rep.sigma_c}};
  const std::string unit = ctx.str("time_unit");
  if (unit == "days") {
    out["t_r_years"] = rep.t_r / 365.25;
    out["t_hbar_years"] = rep.t_hbar / 365.25;
  }
  io::atomic_write(ctx.file("scales.json"), out.dump(2) + "\n");
  std::cout << "t_r = " << rep.t_r << " " << unit;
  if (unit == "days") std::cout << " (" << rep.t_r / 365.25 << " years)";
  std::cout << "\n";
}

// ---------------------------------------------------------------------------
// registry

std::vector<ScenarioSpec> build_registry() {
  std::vector<ScenarioSpec> r;
  r.push_back(
      {"spinbath-decay",
       "decoherence factor and Bloch trajectory of a qubit in a random spin bath",
       {{"n_spins", "integer", 10, "bath size"},
        {"g0", "number", 1.0, "coupling scale"},
        {"a", "array", json::array({0.70710678118654752, 0.0}), "system amp a"},
        {"b", "array", json::array({0.70710678118654752, 0.0}), "system amp b"},
        {"t_max", "number", 20.0, "trace end time"},
        {"n_samples", "integer", 400, "trace samples"}},
       {}});
  r.push_back(
      {"qbm-coefficients",
       "perturbative master-equation coefficients for the ohmic bath",
       {{"gamma0", "number", 0.05, "coupling gamma0"},
        {"Gamma", "number", 100.0, "cutoff"},
        {"T", "number", 10.0, "temperature"},
        {"M", "number", 1.0, "mass"},
        {"Omega", "number", 1.0, "oscillator frequency"},
        {"hbar", "number", 1.0, "hbar"},
        {"kB", "number", 1.0, "kB"},
        {"t_max", "number", 0.2, "trace end time"},
        {"n_points", "integer", 400, "trace samples"}},
       {"fig5"}});
  r.push_back(
      {"qbm-cat",
       "position-cat decoherence under the high-temperature master equation",
       {{"grid_n", "integer", 512, "grid points"},
        {"box_half", "number", 12.0, "half box size"},
        {"x0", "number", 2.0, "packet offset"},
        {"sigma_x", "number", 0.5, "packet width"},
        {"gamma0", "number", 0.01, "relaxation"},
        {"Gamma", "number", 100.0, "cutoff (bookkeeping only here)"},
        {"T", "number", 20.0, "temperature"},
        {"M", "number", 1.0, "mass"},
        {"Omega", "number", 1.0, "trap frequency"},
        {"hbar", "number", 1.0, "hbar"},
        {"kB", "number", 1.0, "kB"},
        {"dt", "number", 0.001, "time step"},
        {"steps", "integer", 150, "step count"},
        {"trace_every", "integer", 5, "trace cadence"}},
       {}});
  r.push_back(
      {"wigner-chaos",
       "Moyal/Liouville phase-space evolution with momentum diffusion",
       {{"potential", "string", "double_well", "harmonic|double_well|pendulum"},
        {"A", "number", 0.5, "x^4 coefficient"},
        {"B", "number", 10.0, "x^2 coefficient"},
        {"C", "number", 10.0, "drive amplitude"},
        {"f", "number", 6.07, "drive frequency"},
        {"kappa", "number", 0.36, "pendulum depth"},
        {"l", "number", 3.0, "pendulum drive"},
        {"a_quad", "number", 0.0, "pendulum x^2/2 coefficient"},
        {"omega", "number", 1.0, "harmonic frequency"},
        {"mass", "number", 1.0, "mass"},
        {"hbar", "number", 0.1, "hbar"},
        {"nx", "integer", 512, "x grid"},
        {"np", "integer", 512, "p grid"},
        {"x_min", "number", -7.0, "box left"},
        {"x_max", "number", 7.0, "box right"},
        {"x0", "number", 0.0, "initial center x"},
        {"p0", "number", 0.0, "initial center p"},
        {"sigma_x", "number", 0.2236, "initial width"},
        {"D", "number", 0.025, "momentum diffusion"},
        {"t_max", "number", 8.28, "end time"},
        {"dt", "number", 0.002, "step"},
        {"trace_every", "integer", 50, "trace cadence in steps"},
        {"modes", "array",
         json::array({"moyal", "liouville"}),
         "moyal|moyal_unitary|liouville|liouville_pure"}},
       {"fig1", "fig8"}});
  r.push_back(
      {"sieve-squeeze",
       "predictability sieve over squeezed Gaussians in the damped oscillator",
       {{"s_min_log2", "number", -4.0, "log2 of smallest squeeze"},
        {"s_max_log2", "number", 4.0, "log2 of largest squeeze"},
        {"n_points", "integer", 9, "squeeze grid size"},
        {"gamma_over_omega", "number", 1e-4, "gamma / Omega"},
        {"kT_over_hbar_omega", "number", 10.0, "kB T / hbar Omega"},
        {"grid_n", "integer", 256, "position grid"},
        {"horizon_cycles", "number", 1.0, "horizon in oscillator periods"},
        {"score", "string", "purity", "purity|entropy"}},
       {}});
  r.push_back({"darwinism-cnot",
               "redundancy growth under sequential system-environment c-nots",
               {{"a", "array", json::array({0.70710678118654752, 0.0}),
                 "branch amplitude a"},
                {"b", "array", json::array({0.70710678118654752, 0.0}),
                 "branch amplitude b"},
                {"n_env", "integer", 4, "environment qubits"}},
               {}});
  r.push_back(
      {"envariance-born",
       "Born weights from envariant fine-graining, in exact rationals",
       {{"m", "array", json::array({1, 2}), "multiplicities"},
        {"via_counterweight", "boolean", false, "route through register C"},
        {"frequency_ensemble", "integer", 0, "N for the frequency CSV (0=skip)"},
        {"frequency_alpha2", "array", json::array({1, 3}),
         "[num, den] weight for the frequency CSV"}},
       {}});
  r.push_back(
      {"scales-report",
       "Ehrenfest/correspondence times and decoherence scale estimates",
       {{"Lambda", "number", 0.45, "Lyapunov exponent (1/time unit)"},
        {"Delta_p0", "number", 0.224, "initial momentum spread"},
        {"chi", "number", 1.0, "nonlinearity scale"},
        {"I_over_hbar", "number", 2000.0, "classical action over hbar"},
        {"gamma", "number", 1.0, "relaxation rate"},
        {"lambda_T", "number", 0.0, "thermal wavelength (0: derive from D)"},
        {"D", "number", 0.025, "momentum diffusion"},
        {"hbar", "number", 0.1, "hbar"},
        {"time_unit", "string", "dimensionless", "dimensionless|days"}},
       {"hyperion", "fig8"}});
  return r;
}

json preset_params(const std::string& scenario, const std::string& preset) {
  if (preset.empty()) return json::object();
  if (scenario == "wigner-chaos" && preset == "fig8")
    return json{{"potential", "double_well"}, {"A", 0.5},   {"B", 10.0},
                {"C", 10.0},                  {"f", 6.07},  {"hbar", 0.1},
                {"nx", 512},                  {"np", 512},  {"x_min", -7.0},
                {"x_max", 7.0},               {"D", 0.025}, {"t_max", 8.28},
                {"dt", 0.002},                {"sigma_x", 0.2236}};
  if (scenario == "wigner-chaos" && preset == "fig1")
    return json{{"potential", "pendulum"},
                {"kappa", 0.36},
                {"l", 3.0},
                {"a_quad", 0.0},
                {"hbar", 0.16},
                {"nx", 512},
                {"np", 256},
                {"x_min", -kPi},
                {"x_max", kPi},
                {"x0", 1.0},
                {"p0", 0.0},
                {"sigma_x", 0.283},
                {"D", 0.025},
                {"t_max", 60.0},
                {"dt", 0.012271846644},
                {"trace_every", 100}};
  if (scenario == "qbm-coefficients" && preset == "fig5")
    return json{{"gamma0", 0.05}, {"Gamma", 100.0}, {"T", 10.0},
                {"Omega", 1.0},   {"t_max", 0.2},   {"n_points", 400}};
  if (scenario == "scales-report" && preset == "hyperion")
    return json{{"Lambda", 1.0 / 42.0},  // 1/days
                {"Delta_p0", 1.0},       {"chi", 1.0},
                {"I_over_hbar", 1e77},   {"gamma", 1.0},
                {"lambda_T", 1.0},       {"D", 0.0},
                {"hbar", 1.0},           {"time_unit", "days"}};
  if (scenario == "scales-report" && preset == "fig8")
    return json{{"Lambda", 0.45},     {"Delta_p0", 0.224}, {"chi", 1.0},
                {"I_over_hbar", 2000.0}, {"gamma", 1.0},   {"lambda_T", 0.0},
                {"D", 0.025},         {"hbar", 0.1},
                {"time_unit", "dimensionless"}};
  throw ConfigError("unknown preset '" + preset + "' for scenario " + scenario);
}

void dispatch(const std::string& name, RunContext& ctx) {
  if (name == "spinbath-decay") return run_spinbath(ctx);
  if (name == "qbm-coefficients") return run_qbm_coefficients(ctx);
  if (name == "qbm-cat") return run_qbm_cat(ctx);
  if (name == "wigner-chaos") return run_wigner_chaos(ctx);
  if (name == "sieve-squeeze") return run_sieve_squeeze(ctx);
  if (name == "darwinism-cnot") return run_darwinism_cnot(ctx);
  if (name == "envariance-born") return run_envariance_born(ctx);
  if (name == "scales-report") return run_scales_report(ctx);
  throw ConfigError("unknown scenario: " + name);
}

std::string json_type_name(const json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) return "integer";
  if (v.is_number_float()) return "number";
  if (v.is_boolean()) return "boolean";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  return "object";
}

bool type_matches(const std::string& want, const json& v) {
  const std::string got = json_type_name(v);
  if (want == got) return true;
  if (want == "number" && got == "integer") return true;
  return false;
}

}  // namespace

const std::vector<ScenarioSpec>& registry() {
  static const std::vector<ScenarioSpec> r = build_registry();
  return r;
}

json list_scenarios() {
  json out = json::array();
  for (const auto& s : registry()) {
    json params = json::object();
    for (const auto& p : s.params)
      params[p.name] = {{"type", p.type}, {"default", p.def}, {"doc", p.doc}};
    out.push_back({{"name", s.name},
                   {"description", s.description},
                   {"params", params},
                   {"presets", s.presets}});
  }
  return out;
}

json default_config(const std::string& scenario, const std::string& preset) {
  const ScenarioSpec* spec = nullptr;
  for (const auto& s : registry())
    if (s.name == scenario) spec = &s;
  if (!spec) throw ConfigError("unknown scenario: " + scenario);
  json params = json::object();
  for (const auto& p : spec->params) params[p.name] = p.def;
  const json over = preset_params(scenario, preset);
  for (auto it = over.begin(); it != over.end(); ++it)
    params[it.key()] = it.value();
  return json{{"scenario", scenario}, {"seed", 0}, {"params", params}};
}

namespace {

json validated_params(const ScenarioSpec& spec, const json& user) {
  json params = json::object();
  for (const auto& p : spec.params) params[p.name] = p.def;
  for (auto it = user.begin(); it != user.end(); ++it) {
    const ParamSpec* ps = nullptr;
    for (const auto& p : spec.params)
      if (p.name == it.key()) ps = &p;
    if (!ps)
      throw ConfigError("unknown parameter '" + it.key() + "' for scenario " +
                        spec.name);
    if (!type_matches(ps->type, it.value()))
      throw ConfigError("parameter '" + it.key() + "' expects " + ps->type);
    params[it.key()] = it.value();
  }
  return params;
}

}  // namespace

int run(const RunOptions& options) {
  const auto started = std::chrono::system_clock::now();
  const ScenarioSpec* spec = nullptr;
  for (const auto& s : registry())
    if (s.name == options.scenario) spec = &s;

  RunContext ctx;
  json config;
  try {
    if (!spec) {
      std::cerr << "unknown scenario: " << options.scenario
                << "\navailable scenarios:\n"
                << list_scenarios().dump(2) << "\n";
      return kExitConfig;
    }
    json user = json::object();
    const json preset = preset_params(options.scenario, options.preset);
    for (auto it = preset.begin(); it != preset.end(); ++it)
      user[it.key()] = it.value();
    if (!options.config_path.empty()) {
      std::ifstream in(options.config_path);
      if (!in)
        throw ConfigError("cannot read config " + options.config_path.string());
      json file_cfg = json::parse(in);
      for (auto it = file_cfg.begin(); it != file_cfg.end(); ++it) {
        if (it.key() == "seed") {
          ctx.seed = it.value().get<uint64_t>();
        } else if (it.key() == "scenario") {
          if (it.value().get<std::string>() != options.scenario)
            throw ConfigError("config is for scenario " +
                              it.value().get<std::string>());
        } else if (it.key() == "params") {
          for (auto p = it.value().begin(); p != it.value().end(); ++p)
            user[p.key()] = p.value();
        } else {
          throw ConfigError("unknown config field '" + it.key() + "'");
        }
      }
    }
    ctx.params = validated_params(*spec, user);
    if (options.seed) ctx.seed = *options.seed;
    ctx.out = options.out_dir;
    ctx.emit_plots = options.emit_plots;
    ctx.jobs = options.jobs;
    std::filesystem::create_directories(ctx.out);
    config = json{{"scenario", options.scenario},
                  {"seed", ctx.seed},
                  {"params", ctx.params}};
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    dispatch(options.scenario, ctx);
  } catch (const ConfigError& e) {
    for (const auto& f : ctx.outputs) std::filesystem::remove(f);
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    for (const auto& f : ctx.outputs) std::filesystem::remove(f);
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }

  const auto finished = std::chrono::system_clock::now();
  json files = json::array();
  for (const auto& f : ctx.outputs) {
    if (!std::filesystem::exists(f)) continue;
    files.push_back({{"path", f.filename().string()},
                     {"bytes", std::filesystem::file_size(f)},
                     {"crc32", io::file_crc32(f)}});
  }
  auto iso = [](std::chrono::system_clock::time_point tp) {
    const auto t = std::chrono::system_clock::to_time_t(tp);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return std::string(buf);
  };
  json manifest{{"config_hash", io::fnv1a64(config.dump())},
                {"toolkit_version", "1.0.0"},
                {"started", iso(started)},
                {"finished", iso(finished)},
                {"outputs", files}};
  io::atomic_write(ctx.out / "run_manifest.json", manifest.dump(2) + "\n");
  return kExitOk;
}

}  // namespace scenarios
}  // namespace einselect
