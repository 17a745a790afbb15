#include "pqlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

#include "pqlab/hessian.hpp"
#include "pqlab/integrand.hpp"

namespace pqlab {

namespace {

struct CellEval {
  double f = 0.0;
  double df_d1 = 0.0;
  double df_d2 = 0.0;
};

// Integrand value and its derivatives in the two forward differences. The
// gradient of |z|^p-type growth vanishes at z = 0 for p > 1 even though the
// weight g'(r)/r may diverge, so the zero cell is returned explicitly.
CellEval eval_cell(const GridProblem& pb, double d1, double d2) {
  CellEval out;
  const double mu2 = pb.mu_reg * pb.mu_reg;
  if (pb.integrand == IntegrandKind::Radial) {
    const double r = std::sqrt(d1 * d1 + d2 * d2 + mu2);
    if (r == 0.0) return out;  // g(0) = 0, gradient 0
    const GEvaluation ge = g_eval(*pb.radial, r);
    const double w = ge.g_prime / r;
    out.f = ge.g;
    out.df_d1 = w * d1;
    out.df_d2 = w * d2;
    return out;
  }
  const double s1 = d1 * d1 + mu2;
  const double s2 = d2 * d2 + mu2;
  out.f = std::pow(s1, pb.split_p / 2.0) + std::pow(s2, pb.split_q / 2.0);
  if (s1 > 0.0) out.df_d1 = pb.split_p * d1 * std::pow(s1, pb.split_p / 2.0 - 1.0);
  if (s2 > 0.0) out.df_d2 = pb.split_q * d2 * std::pow(s2, pb.split_q / 2.0 - 1.0);
  return out;
}

int side(const GridProblem& pb) { return pb.n_cells + 1; }

bool is_border(int i, int j, int n) {
  return i == 0 || j == 0 || i == n || j == n;
}

void require_state(const GridProblem& pb, const std::vector<double>& u) {
  const int m = side(pb);
  if (u.size() != static_cast<std::size_t>(m) * m) {
    throw std::invalid_argument("node array does not match the grid");
  }
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      if (!is_border(i, j, pb.n_cells)) continue;
      if (u[static_cast<std::size_t>(j) * m + i] !=
          pb.boundary_values[static_cast<std::size_t>(j) * m + i]) {
        throw std::invalid_argument("boundary data was modified");
      }
    }
  }
}

double energy_only(const GridProblem& pb, const std::vector<double>& u) {
  const int n = pb.n_cells;
  const int m = n + 1;
  const double h = pb.cell_size;
  const double area = h * h;
  double e = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * m + i;
      const double d1 = (u[k + 1] - u[k]) / h;
      const double d2 = (u[k + m] - u[k]) / h;
      e += eval_cell(pb, d1, d2).f * area;
    }
  }
  return e;
}

std::pair<double, std::vector<double>> energy_gradient_unchecked(
    const GridProblem& pb, const std::vector<double>& u) {
  const int n = pb.n_cells;
  const int m = n + 1;
  const double h = pb.cell_size;
  const double area = h * h;
  double e = 0.0;
  std::vector<double> grad(u.size(), 0.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * m + i;
      const double d1 = (u[k + 1] - u[k]) / h;
      const double d2 = (u[k + m] - u[k]) / h;
      const CellEval ce = eval_cell(pb, d1, d2);
      e += ce.f * area;
      const double gx = ce.df_d1 * h;  // area * d(d1)/d(node) = h^2/h
      const double gy = ce.df_d2 * h;
      grad[k] -= gx + gy;
      grad[k + 1] += gx;
      grad[k + m] += gy;
    }
  }
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      if (is_border(i, j, n)) grad[static_cast<std::size_t>(j) * m + i] = 0.0;
    }
  }
  return {e, std::move(grad)};
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void pin_border(const GridProblem& pb, std::vector<double>& u) {
  const int n = pb.n_cells;
  const int m = n + 1;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      if (is_border(i, j, n)) {
        const std::size_t k = static_cast<std::size_t>(j) * m + i;
        u[k] = pb.boundary_values[k];
      }
    }
  }
}

void instrument(const GridProblem& pb, SolveResult& res) {
  const int n = pb.n_cells;
  const int m = n + 1;
  const double h = pb.cell_size;
  const double mu2 = pb.mu_reg * pb.mu_reg;
  double max_grad = 0.0;
  double max_ratio = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * m + i;
      const double d1 = (res.u[k + 1] - res.u[k]) / h;
      const double d2 = (res.u[k + m] - res.u[k]) / h;
      max_grad = std::max(max_grad, std::hypot(d1, d2));
      if (pb.integrand == IntegrandKind::Radial) {
        const double r = std::sqrt(d1 * d1 + d2 * d2 + mu2);
        if (r > 0.0) {
          max_ratio = std::max(max_ratio, hess_spectrum(*pb.radial, r).ratio);
        }
      } else {
        const double r1 = std::sqrt(d1 * d1 + mu2);
        const double r2 = std::sqrt(d2 * d2 + mu2);
        if (r1 > 0.0 && r2 > 0.0) {
          max_ratio = std::max(
              max_ratio, split_baseline_spectrum(pb.split_p, pb.split_q,
                                                 {r1, r2})
                             .ratio);
        }
      }
    }
  }
  res.max_cell_gradient = max_grad;
  res.max_cell_hessian_ratio = max_ratio;
}

}  // namespace

GridProblem build_problem(const ProblemConfig& config) {
  if (config.n_cells < 4) {
    throw std::invalid_argument("grid needs at least 4 cells per side");
  }
  GridProblem pb;
  pb.n_cells = config.n_cells;
  pb.cell_size = 1.0 / config.n_cells;
  pb.boundary = config.boundary;
  pb.integrand = config.integrand;
  double lowest_power = 0.0;
  if (config.integrand == IntegrandKind::Radial) {
    if (!config.radial.has_value()) {
      throw std::invalid_argument("radial integrand needs parameters");
    }
    pb.radial = config.radial;
    lowest_power = config.radial->p;
  } else {
    if (!(config.split_p > 1.0) || !(config.split_q > 1.0)) {
      throw std::invalid_argument("split exponents must exceed 1");
    }
    pb.split_p = config.split_p;
    pb.split_q = config.split_q;
    lowest_power = std::min(config.split_p, config.split_q);
  }
  pb.mu_reg = config.mu_reg.value_or(lowest_power >= 2.0 ? 0.0 : 1e-6);
  if (!(pb.mu_reg >= 0.0)) {
    throw std::invalid_argument("mu_reg must be >= 0");
  }

  const int m = config.n_cells + 1;
  pb.boundary_values.assign(static_cast<std::size_t>(m) * m, 0.0);
  if (config.boundary == BoundaryKind::Custom) {
    if (config.custom_boundary.size() != pb.boundary_values.size()) {
      throw std::invalid_argument(
          "custom boundary must supply the full node array");
    }
  }
  const double h = pb.cell_size;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      if (!is_border(i, j, config.n_cells)) continue;
      const std::size_t k = static_cast<std::size_t>(j) * m + i;
      const double x = i * h;
      const double y = j * h;
      double v = 0.0;
      switch (config.boundary) {
        case BoundaryKind::Affine:
          v = config.affine_c1 * x + config.affine_c2 * y;
          break;
        case BoundaryKind::Saddle:
          v = x * x - y * y;
          break;
        case BoundaryKind::Custom:
          v = config.custom_boundary[k];
          break;
      }
      if (!std::isfinite(v)) {
        throw std::invalid_argument("boundary values must be finite");
      }
      pb.boundary_values[k] = v;
    }
  }
  return pb;
}

std::pair<double, std::vector<double>> energy_and_gradient(
    const GridProblem& problem, const std::vector<double>& u) {
  require_state(problem, u);
  return energy_gradient_unchecked(problem, u);
}

SolveResult minimize(const GridProblem& problem, const SolveOptions& opts) {
  if (opts.tol.has_value() && !(*opts.tol > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  if (opts.max_iter < 0 || !(opts.backtrack > 0.0) ||
      !(opts.backtrack < 1.0) || !(opts.armijo_c > 0.0)) {
    throw std::invalid_argument("bad solve options");
  }
  const int n = problem.n_cells;
  const int m = n + 1;
  std::vector<double> u = problem.boundary_values;
  if (opts.random_init) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> jitter(-0.5, 0.5);
    for (int j = 1; j < n; ++j) {
      for (int i = 1; i < n; ++i) {
        u[static_cast<std::size_t>(j) * m + i] = jitter(rng);
      }
    }
  }

  auto [energy, grad] = energy_gradient_unchecked(problem, u);
  if (!std::isfinite(energy)) {
    throw std::runtime_error("non-finite energy at the initial state");
  }
  const double tol = opts.tol.value_or(1e-8 * std::max(1.0, energy));

  std::vector<double> dir(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) dir[i] = -grad[i];
  std::vector<double> trial(u.size());
  std::vector<double> prev_grad;
  double step = 1.0;
  double gmax = max_abs(grad);
  int iter = 0;

  while (gmax > tol && iter < opts.max_iter) {
    double slope = dot(grad, dir);
    if (slope >= 0.0) {  // restart: fall back to steepest descent
      for (std::size_t i = 0; i < grad.size(); ++i) dir[i] = -grad[i];
      slope = -dot(grad, grad);
    }

    double alpha = std::min(step * 2.0, 1.0e6);
    double trial_energy = std::numeric_limits<double>::infinity();
    bool accepted = false;
    while (alpha > 1e-18) {
      for (std::size_t i = 0; i < u.size(); ++i) {
        trial[i] = u[i] + alpha * dir[i];
      }
      pin_border(problem, trial);
      trial_energy = energy_only(problem, trial);
      if (std::isfinite(trial_energy) &&
          trial_energy <= energy + opts.armijo_c * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= opts.backtrack;
    }
    if (!accepted) break;  // no representable step decreases the energy

    u.swap(trial);
    energy = trial_energy;
    step = alpha;
    ++iter;

    prev_grad.swap(grad);
    auto eg = energy_gradient_unchecked(problem, u);
    energy = eg.first;
    grad = std::move(eg.second);
    gmax = max_abs(grad);

    double beta = 0.0;
    if (opts.method == SolveMethod::NonlinearCG) {
      const double denom = dot(prev_grad, prev_grad);
      if (denom > 0.0) {
        double num = 0.0;
        for (std::size_t i = 0; i < grad.size(); ++i) {
          num += grad[i] * (grad[i] - prev_grad[i]);
        }
        beta = std::max(0.0, num / denom);
      }
    }
    for (std::size_t i = 0; i < grad.size(); ++i) {
      dir[i] = -grad[i] + beta * dir[i];
    }
  }

  SolveResult res;
  res.u = std::move(u);
  res.energy = energy;
  res.iterations = iter;
  res.grad_norm_final = gmax;
  res.converged = gmax <= tol;
  instrument(problem, res);
  return res;
}

std::vector<RefinementRow> refinement_study(const ProblemConfig& config,
                                            const std::vector<int>& levels,
                                            const SolveOptions& opts) {
  if (levels.empty()) throw std::invalid_argument("no refinement levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 4 || (i > 0 && levels[i] <= levels[i - 1])) {
      throw std::invalid_argument("levels must be ascending and >= 4");
    }
  }
  std::vector<RefinementRow> rows;
  rows.reserve(levels.size());
  double prev_grad = 0.0;
  for (int level : levels) {
    ProblemConfig c = config;
    c.n_cells = level;
    const SolveResult r = minimize(build_problem(c), opts);
    if (!r.converged) {
      throw std::runtime_error("refinement level failed to converge");
    }
    RefinementRow row;
    row.n_cells = level;
    row.max_cell_gradient = r.max_cell_gradient;
    row.energy = r.energy;
    row.growth_factor =
        rows.empty() ? 1.0 : r.max_cell_gradient / prev_grad;
    prev_grad = r.max_cell_gradient;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pqlab
