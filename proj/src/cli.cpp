#include "pqlab/cli.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pqlab/hessian.hpp"
#include "pqlab/integrand.hpp"
#include "pqlab/params.hpp"
#include "pqlab/phase.hpp"
#include "pqlab/report.hpp"
#include "pqlab/solver.hpp"
#include "pqlab/verify.hpp"

namespace pqlab {

namespace {

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  nlohmann::json cfg = nlohmann::json::parse(in);
  if (!cfg.is_object()) {
    throw std::invalid_argument("config file must hold a JSON object");
  }
  return cfg;
}

// Flags override the config file: a config key fills a flag's value only
// when that flag was not given on the command line.
template <typename T>
void merge(const CLI::Option* opt, const nlohmann::json& cfg,
           const std::string& key, T& var) {
  if (opt != nullptr && opt->count() > 0) return;
  const auto it = cfg.find(key);
  if (it != cfg.end()) var = it->get<T>();
}

void merge_opt(const CLI::Option* opt, const nlohmann::json& cfg,
               const std::string& key, std::optional<double>& var) {
  if (opt != nullptr && opt->count() > 0) return;
  const auto it = cfg.find(key);
  if (it != cfg.end()) var = it->get<double>();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output path: " + path);
  out << text;
  out.flush();
  if (!out.good()) throw std::runtime_error("failed writing: " + path);
}

struct CliState {
  // shared integrand parameters
  double p = 2.0;
  double q = 6.0;
  std::optional<double> epsilon;
  bool subquadratic = false;
  // sampling
  double t_min = 1e-6;
  double t_max = 1e12;
  int points = 400;
  int boundary_refine = 8;
  std::uint64_t seed = 0;
  int directions = 1;
  // output
  std::string format = "csv";
  std::string out_path;
  std::string config_path;
  // phase
  int cycles = 1;
  // fit
  double mu = 1.0;
  // solver
  int n_cells = 33;
  std::string boundary = "affine";
  double affine_c1 = 1.0;
  double affine_c2 = 0.0;
  std::string integrand = "radial";
  std::optional<double> mu_reg;
  std::optional<double> tol;
  int max_iter = 50000;
  std::string method = "cg";
  bool random_init = false;
};

struct ParamOpts {
  CLI::Option* p = nullptr;
  CLI::Option* q = nullptr;
  CLI::Option* epsilon = nullptr;
  CLI::Option* subquadratic = nullptr;
  CLI::Option* config = nullptr;
};

ParamOpts add_param_flags(CLI::App* cmd, CliState& st) {
  ParamOpts o;
  o.p = cmd->add_option("--p", st.p, "lower growth exponent (> 1)");
  o.q = cmd->add_option("--q", st.q, "upper growth exponent (> p)");
  o.epsilon = cmd->add_option("--epsilon", st.epsilon,
                              "phase amplitude; default 0.9x its upper bound");
  o.subquadratic =
      cmd->add_flag("--subquadratic", st.subquadratic, "require p < q < 2");
  o.config = cmd->add_option("--config", st.config_path,
                             "JSON file with defaults; flags override it");
  return o;
}

void merge_params(const ParamOpts& o, const nlohmann::json& cfg,
                  CliState& st) {
  merge(o.p, cfg, "p", st.p);
  merge(o.q, cfg, "q", st.q);
  merge_opt(o.epsilon, cfg, "epsilon", st.epsilon);
  merge(o.subquadratic, cfg, "subquadratic", st.subquadratic);
}

struct GridOpts {
  CLI::Option* t_min = nullptr;
  CLI::Option* t_max = nullptr;
  CLI::Option* points = nullptr;
  CLI::Option* refine = nullptr;
};

GridOpts add_grid_flags(CLI::App* cmd, CliState& st) {
  GridOpts o;
  o.t_min = cmd->add_option("--t-min", st.t_min, "grid start (0 < t_min < 1)");
  o.t_max = cmd->add_option("--t-max", st.t_max, "grid end (> 1)");
  o.points = cmd->add_option("--points", st.points, "log-uniform point count");
  o.refine = cmd->add_option("--boundary-refine", st.boundary_refine,
                             "extra points at 1 +- 10^-k, k = 1..this");
  return o;
}

void merge_grid(const GridOpts& o, const nlohmann::json& cfg, CliState& st) {
  merge(o.t_min, cfg, "t-min", st.t_min);
  merge(o.t_max, cfg, "t-max", st.t_max);
  merge(o.points, cfg, "points", st.points);
  merge(o.refine, cfg, "boundary-refine", st.boundary_refine);
}

SampleGridSpec grid_spec(const CliState& st) {
  SampleGridSpec spec;
  spec.t_min = st.t_min;
  spec.t_max = st.t_max;
  spec.count_log = st.points;
  spec.boundary_refine = st.boundary_refine;
  spec.seed = st.seed;
  return spec;
}

int do_verify(const CliState& st) {
  const PQParams params =
      make_params(st.p, st.q, st.epsilon, st.subquadratic);
  const std::vector<double> grid = sample_grid(grid_spec(st));
  std::vector<ReportSection> sections;
  sections.push_back(check_lemmas(params, grid));
  sections.push_back(check_theorem_g(params, grid));
  sections.push_back(fd_crosscheck(params, grid, st.seed));
  sections.push_back(
      check_uniform_ellipticity(params, grid, st.directions, st.seed));
  if (params.subquadratic) {
    sections.push_back(check_subquadratic(params, grid));
  }
  if (!st.out_path.empty()) {
    write_report(sections, st.format, st.out_path);
  }
  bool ok = true;
  for (const ReportSection& s : sections) {
    ok = ok && s.all_passed;
    std::cout << "section " << s.name << ": "
              << (s.all_passed ? "pass" : "FAIL") << " ("
              << s.records.size() << " checks, worst margin "
              << format_real(s.worst_margin) << ")\n";
  }
  if (!sections.empty()) {
    std::cout << "note: " << sections.front().note << "\n";
  }
  std::cout << (ok ? "all sections passed" : "some checks failed") << "\n";
  return ok ? 0 : 1;
}

int do_profile(const CliState& st) {
  const PQParams params =
      make_params(st.p, st.q, st.epsilon, st.subquadratic);
  const std::vector<double> grid = sample_grid(grid_spec(st));
  std::ostringstream out;
  out << "t,alpha,g,g_prime,g_double_prime,lambda_radial,lambda_tangent,"
         "ratio\n";
  for (double t : grid) {
    const GEvaluation ge = g_eval(params, t);
    const HessianSpectrum hs = hess_spectrum(params, t);
    out << format_real(t) << ',' << format_real(ge.alpha) << ','
        << format_real(ge.g) << ',' << format_real(ge.g_prime) << ','
        << format_real(ge.g_double_prime.value()) << ','
        << format_real(hs.lambda_radial) << ','
        << format_real(hs.lambda_tangent) << ',' << format_real(hs.ratio)
        << '\n';
  }
  emit(out.str(), st.out_path);
  return 0;
}

int do_phase(const CliState& st) {
  const PQParams params =
      make_params(st.p, st.q, st.epsilon, st.subquadratic);
  const std::vector<PhaseWitness> witnesses =
      oscillation_witnesses(params, st.cycles);
  std::ostringstream out;
  out << "L,alpha,kind,t_description\n";
  for (const PhaseWitness& w : witnesses) {
    const char* kind = w.kind == PhaseKind::LowerExtreme ? "lower_extreme"
                       : w.kind == PhaseKind::UpperExtreme ? "upper_extreme"
                                                           : "generic";
    out << format_real(w.L) << ',' << format_real(w.alpha) << ',' << kind
        << ',' << csv_escape(w.t_description) << '\n';
  }
  emit(out.str(), st.out_path);
  return 0;
}

int do_minimize(const CliState& st) {
  ProblemConfig cfg;
  cfg.n_cells = st.n_cells;
  cfg.boundary =
      st.boundary == "saddle" ? BoundaryKind::Saddle : BoundaryKind::Affine;
  cfg.affine_c1 = st.affine_c1;
  cfg.affine_c2 = st.affine_c2;
  if (st.integrand == "split") {
    cfg.integrand = IntegrandKind::Split;
    cfg.split_p = st.p;
    cfg.split_q = st.q;
  } else {
    cfg.integrand = IntegrandKind::Radial;
    cfg.radial = make_params(st.p, st.q, st.epsilon, st.subquadratic);
  }
  cfg.mu_reg = st.mu_reg;
  const GridProblem problem = build_problem(cfg);

  SolveOptions opts;
  opts.max_iter = st.max_iter;
  opts.tol = st.tol;
  opts.method = st.method == "gd" ? SolveMethod::GradientDescent
                                  : SolveMethod::NonlinearCG;
  opts.random_init = st.random_init;
  opts.seed = st.seed;
  const SolveResult res = minimize(problem, opts);

  std::cout << "n_cells " << problem.n_cells << "\n"
            << "mu_reg " << format_real(problem.mu_reg) << "\n"
            << "energy " << format_real(res.energy) << "\n"
            << "iterations " << res.iterations << "\n"
            << "converged " << (res.converged ? "true" : "false") << "\n"
            << "grad_norm_final " << format_real(res.grad_norm_final) << "\n"
            << "max_cell_gradient " << format_real(res.max_cell_gradient)
            << "\n"
            << "max_cell_hessian_ratio "
            << format_real(res.max_cell_hessian_ratio) << "\n";
  if (!st.out_path.empty()) {
    std::ostringstream csv;
    const int m = problem.n_cells + 1;
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) {
        if (i > 0) csv << ',';
        csv << format_real(res.u[static_cast<std::size_t>(j) * m + i]);
      }
      csv << '\n';
    }
    emit(csv.str(), st.out_path);
  }
  return res.converged ? 0 : 1;
}

int do_fit(const CliState& st) {
  const PQParams params =
      make_params(st.p, st.q, st.epsilon, st.subquadratic);
  const std::vector<double> grid = sample_grid(grid_spec(st));
  const GrowthFit fit = fit_growth_constants(params, st.mu, grid);
  std::string text;
  if (st.format == "json") {
    nlohmann::json js = {
        {"mu", fit.mu},         {"c1", fit.c1},
        {"c2", fit.c2},         {"c3", fit.c3},
        {"c4", fit.c4},         {"c5", fit.c5},
        {"c6", fit.c6},         {"c7", fit.c7},
        {"t_min", fit.t_min},   {"t_max", fit.t_max},
        {"verified", fit.verified}, {"worst_slack", fit.worst_slack}};
    text = js.dump(2) + "\n";
  } else {
    std::ostringstream out;
    out << "key,value\n";
    out << "mu," << format_real(fit.mu) << "\n";
    out << "c1," << format_real(fit.c1) << "\n";
    out << "c2," << format_real(fit.c2) << "\n";
    out << "c3," << format_real(fit.c3) << "\n";
    out << "c4," << format_real(fit.c4) << "\n";
    out << "c5," << format_real(fit.c5) << "\n";
    out << "c6," << format_real(fit.c6) << "\n";
    out << "c7," << format_real(fit.c7) << "\n";
    out << "t_min," << format_real(fit.t_min) << "\n";
    out << "t_max," << format_real(fit.t_max) << "\n";
    out << "verified," << (fit.verified ? "true" : "false") << "\n";
    out << "worst_slack," << format_real(fit.worst_slack) << "\n";
    text = out.str();
  }
  emit(text, st.out_path);
  return fit.verified ? 0 : 1;
}

}  // namespace

int run_command(const std::vector<std::string>& argv) {
  CliState st;
  CLI::App app{"numerical lab for a uniformly elliptic integrand with "
               "p-q growth",
               "pqlab"};
  app.require_subcommand(1);

  CLI::App* verify = app.add_subcommand(
      "verify", "run every inequality check and write a report");
  const ParamOpts verify_params = add_param_flags(verify, st);
  const GridOpts verify_grid = add_grid_flags(verify, st);
  CLI::Option* verify_seed =
      verify->add_option("--seed", st.seed, "seed for random directions");
  CLI::Option* verify_dirs = verify->add_option(
      "--directions", st.directions, "random (z, lambda) pairs per radius");
  CLI::Option* verify_format =
      verify->add_option("--format", st.format, "report format")
          ->check(CLI::IsMember({"csv", "json"}));
  CLI::Option* verify_out =
      verify->add_option("--out", st.out_path, "report path");

  CLI::App* profile = app.add_subcommand(
      "profile", "tabulate g, its derivatives, and the spectrum over a grid");
  const ParamOpts profile_params = add_param_flags(profile, st);
  const GridOpts profile_grid = add_grid_flags(profile, st);
  CLI::Option* profile_format =
      profile->add_option("--format", st.format, "output format")
          ->check(CLI::IsMember({"csv"}));
  CLI::Option* profile_out =
      profile->add_option("--out", st.out_path, "output path");

  CLI::App* phase = app.add_subcommand(
      "phase", "oscillation witnesses for the exponent in phase space");
  const ParamOpts phase_params = add_param_flags(phase, st);
  CLI::Option* phase_cycles =
      phase->add_option("--cycles", st.cycles, "full oscillations to witness");
  CLI::Option* phase_out =
      phase->add_option("--out", st.out_path, "output path");

  CLI::App* minimize_cmd = app.add_subcommand(
      "minimize", "minimize the discrete energy on the unit square");
  const ParamOpts min_params = add_param_flags(minimize_cmd, st);
  CLI::Option* min_cells =
      minimize_cmd->add_option("--n-cells", st.n_cells, "cells per side");
  CLI::Option* min_boundary =
      minimize_cmd->add_option("--boundary", st.boundary, "Dirichlet data")
          ->check(CLI::IsMember({"affine", "saddle"}));
  CLI::Option* min_c1 = minimize_cmd->add_option(
      "--affine-c1", st.affine_c1, "affine boundary x-slope");
  CLI::Option* min_c2 = minimize_cmd->add_option(
      "--affine-c2", st.affine_c2, "affine boundary y-slope");
  CLI::Option* min_integrand =
      minimize_cmd->add_option("--integrand", st.integrand, "energy density")
          ->check(CLI::IsMember({"radial", "split"}));
  CLI::Option* min_mu = minimize_cmd->add_option(
      "--mu-reg", st.mu_reg, "smoothing radius inside the integrand");
  CLI::Option* min_tol = minimize_cmd->add_option(
      "--tol", st.tol, "gradient max-norm target; default 1e-8*max(1, E0)");
  CLI::Option* min_iter =
      minimize_cmd->add_option("--max-iter", st.max_iter, "iteration cap");
  CLI::Option* min_method =
      minimize_cmd->add_option("--method", st.method, "descent method")
          ->check(CLI::IsMember({"cg", "gd"}));
  CLI::Option* min_random = minimize_cmd->add_flag(
      "--random-init", st.random_init, "random interior start");
  CLI::Option* min_seed =
      minimize_cmd->add_option("--seed", st.seed, "seed for --random-init");
  CLI::Option* min_out = minimize_cmd->add_option(
      "--out", st.out_path, "solution CSV path (row-major node values)");

  CLI::App* fit = app.add_subcommand(
      "fit", "fit growth and ellipticity envelope constants over a grid");
  const ParamOpts fit_params = add_param_flags(fit, st);
  const GridOpts fit_grid = add_grid_flags(fit, st);
  CLI::Option* fit_mu =
      fit->add_option("--mu", st.mu, "envelope shift in [0, 1]");
  CLI::Option* fit_format =
      fit->add_option("--format", st.format, "output format")
          ->check(CLI::IsMember({"csv", "json"}));
  CLI::Option* fit_out = fit->add_option("--out", st.out_path, "output path");

  try {
    std::vector<std::string> args(argv.rbegin(), argv.rend());
    app.parse(args);

    const nlohmann::json cfg = load_config(st.config_path);
    if (app.got_subcommand(verify)) {
      merge_params(verify_params, cfg, st);
      merge_grid(verify_grid, cfg, st);
      merge(verify_seed, cfg, "seed", st.seed);
      merge(verify_dirs, cfg, "directions", st.directions);
      merge(verify_format, cfg, "format", st.format);
      merge(verify_out, cfg, "out", st.out_path);
      return do_verify(st);
    }
    if (app.got_subcommand(profile)) {
      merge_params(profile_params, cfg, st);
      merge_grid(profile_grid, cfg, st);
      merge(profile_format, cfg, "format", st.format);
      merge(profile_out, cfg, "out", st.out_path);
      return do_profile(st);
    }
    if (app.got_subcommand(phase)) {
      merge_params(phase_params, cfg, st);
      merge(phase_cycles, cfg, "cycles", st.cycles);
      merge(phase_out, cfg, "out", st.out_path);
      return do_phase(st);
    }
    if (app.got_subcommand(minimize_cmd)) {
      merge_params(min_params, cfg, st);
      merge(min_cells, cfg, "n-cells", st.n_cells);
      merge(min_boundary, cfg, "boundary", st.boundary);
      merge(min_c1, cfg, "affine-c1", st.affine_c1);
      merge(min_c2, cfg, "affine-c2", st.affine_c2);
      merge(min_integrand, cfg, "integrand", st.integrand);
      merge_opt(min_mu, cfg, "mu-reg", st.mu_reg);
      merge_opt(min_tol, cfg, "tol", st.tol);
      merge(min_iter, cfg, "max-iter", st.max_iter);
      merge(min_method, cfg, "method", st.method);
      merge(min_random, cfg, "random-init", st.random_init);
      merge(min_seed, cfg, "seed", st.seed);
      merge(min_out, cfg, "out", st.out_path);
      return do_minimize(st);
    }
    merge_params(fit_params, cfg, st);
    merge_grid(fit_grid, cfg, st);
    merge(fit_mu, cfg, "mu", st.mu);
    merge(fit_format, cfg, "format", st.format);
    merge(fit_out, cfg, "out", st.out_path);
    return do_fit(st);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pqlab
