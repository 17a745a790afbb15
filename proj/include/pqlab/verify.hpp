#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pqlab/params.hpp"

namespace pqlab {

// Sampling plan for inequality sweeps: count_log log-uniform points spanning
// [t_min, t_max] plus extra points clustered at the branch point, 1 +- 10^-k
// for k = 1..boundary_refine.
struct SampleGridSpec {
  double t_min = 1e-6;
  double t_max = 1e12;
  int count_log = 400;
  int boundary_refine = 8;
  std::uint64_t seed = 0;  // for randomized directions in ellipticity checks
};

// One evaluated inequality. margin is the signed slack of the check
// (one-sided: rhs - lhs; band: distance to the nearest bound; equality:
// -|difference|), so margin >= 0 means satisfied in exact arithmetic.
struct CheckRecord {
  std::string check_id;
  std::string location;  // "t=..." or "z=..." or "constant"
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool passed = false;  // margin >= -1e-12 * max(1, |lhs|, |rhs|)
};

struct ReportSection {
  std::string name;
  std::string note;  // sampling caveats; carried in JSON output only
  std::vector<CheckRecord> records;
  double worst_margin = 0.0;  // min over records
  bool all_passed = false;    // conjunction over records
};

// Sorted deduplicated union of the log-uniform points and the boundary
// cluster, restricted to [t_min, t_max]. Throws std::invalid_argument unless
// 0 < t_min < 1 < t_max, count_log >= 2, boundary_refine >= 0.
std::vector<double> sample_grid(const SampleGridSpec& spec);

// Seven pointwise bounds on the phase building blocks, evaluated at every
// grid point > 1:
//   (t-1)^3/(e+(t-1)^4) < 1          (t-1)^3 t/(e+(t-1)^4) < 2
//   (t-1)^2 t^2/(e+(t-1)^4) < 4      ln t / ln(e+(t-1)^4) < 1
//   0 < phi' t ln t <= 8 eps         0 < phi' t <= 8 eps
//   |phi''| t^2 ln t <= 128 eps
ReportSection check_lemmas(const PQParams& params,
                           const std::vector<double>& grid);

// Slope and curvature bounds for g:
//   (a-b-8b eps) g/t <= g' <= (a+b+8b eps) g/t
//   (a-b-8b eps) t^(a-b-1) <= g'
//   (a-1-b-224b eps) g'/t <= g'' <= (a-1+b+224b eps) g'/t
//   t^(a-b) <= g <= t^(a+b) for t >= 1, g = t^(a-b) exactly for t <= 1
//   b eps (64 eps + 152)/(a-b-8b eps) < 216 b eps   (scalar, once)
//   g' strictly increasing across consecutive grid points
//   g/t and g' below 1e-6 at the small-t probe, g/t above 1e6 at the
//   large-t probe (probes scaled by 1/(a-b-1) so the thresholds are
//   meaningful for every exponent range)
ReportSection check_theorem_g(const PQParams& params,
                              const std::vector<double>& grid);

// Subquadratic-only decay checks: g'' - g'/t < 0 pointwise, g'/t strictly
// decreasing across the grid, and the scalar constant 224b eps + a - 2 + b
// reported (must be negative). Throws std::invalid_argument unless
// params.subquadratic.
ReportSection check_subquadratic(const PQParams& params,
                                 const std::vector<double>& grid);

// Central-difference cross-checks of g' (from g values) and g'' (from g'
// values) with relative step 1e-6 t and gate 1e-6 relative, on grid
// points away from the 1e-4 holes at t=0 and t=1; plus, at 20 seeded
// random matrix points, finite-difference gradients of f (gate 1e-6
// relative) and finite-difference Hessians built from grad_f columns
// (step 1e-5 relative, gate 1e-5 absolute).
ReportSection fd_crosscheck(const PQParams& params,
                            const std::vector<double>& grid,
                            std::uint64_t seed = 0);

// At every radius: eigenvalue ratio <= ratio_cap; at seeded random (z,
// lambda) pairs the quadratic form lies inside [min eig, max eig] within
// relative 1e-10. Also records the split-integrand contrast ratios at
// z = (1, 10^k), k = 0..4, which match the closed form and (for q != 2)
// grow without any uniform cap.
ReportSection check_uniform_ellipticity(const PQParams& params,
                                        const std::vector<double>& radii,
                                        int directions_per_radius,
                                        std::uint64_t seed);

}  // namespace pqlab
