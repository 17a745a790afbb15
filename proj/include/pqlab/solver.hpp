#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pqlab/params.hpp"

namespace pqlab {

// Minimization of u -> sum_cells f(Du_h) h^2 over the unit square with
// Dirichlet data. Nodes live on an (n_cells+1)^2 lattice, row-major with
// x fastest: node (i,j) -> index j*(n_cells+1)+i, position (i*h, j*h).
// Each cell takes its gradient from the two forward differences at its
// lower-left node.

enum class BoundaryKind { Affine, Saddle, Custom };
enum class IntegrandKind { Radial, Split };

struct ProblemConfig {
  int n_cells = 33;
  BoundaryKind boundary = BoundaryKind::Affine;
  double affine_c1 = 1.0;  // boundary u = c1*x + c2*y for Affine
  double affine_c2 = 0.0;
  // Full (n_cells+1)^2 node array for Custom; only border entries are read.
  std::vector<double> custom_boundary;
  IntegrandKind integrand = IntegrandKind::Radial;
  std::optional<PQParams> radial;  // required for Radial
  double split_p = 2.0;            // f(z) = |z1|^p + |z2|^q for Split
  double split_q = 6.0;
  // Smoothing radius used inside the integrand as sqrt(|Du|^2 + mu_reg^2).
  // Unset -> 0 when min(p,q) >= 2, else 1e-6 (the gradient of the discrete
  // energy is singular at Du = 0 for subquadratic growth).
  std::optional<double> mu_reg;
};

struct GridProblem {
  int n_cells = 0;
  double cell_size = 0.0;
  BoundaryKind boundary = BoundaryKind::Affine;
  IntegrandKind integrand = IntegrandKind::Radial;
  std::optional<PQParams> radial;
  double split_p = 0.0;
  double split_q = 0.0;
  double mu_reg = 0.0;
  // (n_cells+1)^2 node array; border entries are the prescribed data,
  // interior entries are zero.
  std::vector<double> boundary_values;
};

struct SolveResult {
  std::vector<double> u;  // (n_cells+1)^2 node values
  double energy = 0.0;
  int iterations = 0;
  double grad_norm_final = 0.0;    // interior max-norm at exit
  double max_cell_gradient = 0.0;  // max over cells of |Du_h|
  bool converged = false;
  // Largest integrand-Hessian eigenvalue ratio seen at the solution's cell
  // gradients; bounded by ratio_cap for the radial integrand, unbounded for
  // the split one.
  double max_cell_hessian_ratio = 0.0;
};

enum class SolveMethod { GradientDescent, NonlinearCG };

struct SolveOptions {
  int max_iter = 50000;
  // Interior gradient max-norm target; unset -> 1e-8 * max(1, E_initial).
  std::optional<double> tol;
  SolveMethod method = SolveMethod::NonlinearCG;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  bool random_init = false;  // zero-fill interior otherwise
  std::uint64_t seed = 0;    // for random_init
};

struct RefinementRow {
  int n_cells = 0;
  double max_cell_gradient = 0.0;
  double energy = 0.0;
  double growth_factor = 1.0;  // vs previous level's max_cell_gradient
};

// Validates the config and populates the border values. Throws
// std::invalid_argument on n_cells < 4, missing radial params, a Custom
// array of the wrong size, or negative mu_reg.
GridProblem build_problem(const ProblemConfig& config);

// Discrete energy and its exact gradient (zeros at boundary nodes).
// Throws std::invalid_argument on shape mismatch or when u's border does
// not equal the prescribed data bit-for-bit.
std::pair<double, std::vector<double>> energy_and_gradient(
    const GridProblem& problem, const std::vector<double>& u);

// Armijo-backtracked descent (Polak-Ribiere CG with restart on non-descent
// directions by default). Energy iterates are monotone nonincreasing.
// Throws std::runtime_error if a non-finite energy is encountered.
SolveResult minimize(const GridProblem& problem, const SolveOptions& opts = {});

// One converged solve per level with fixed boundary data; reports the
// growth factor of max_cell_gradient between consecutive levels. Throws
// std::invalid_argument unless levels are ascending and each >= 4, and
// std::runtime_error when any level fails to converge.
std::vector<RefinementRow> refinement_study(const ProblemConfig& config,
                                            const std::vector<int>& levels,
                                            const SolveOptions& opts = {});

}  // namespace pqlab
