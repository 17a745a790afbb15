#pragma once

#include <array>
#include <vector>

#include "pqlab/params.hpp"

namespace pqlab {

// A flattened n x N gradient matrix viewed as a Euclidean vector; only the
// norm and direction enter the radial integrand f(z) = g(|z|).
struct MatrixPoint {
  std::vector<double> z;
  int n = 1;  // domain dimension
  int N = 1;  // target dimension
};

// Exact spectrum of DDf at radius |z|: g''(|z|) along z (multiplicity 1) and
// g'(|z|)/|z| on the orthogonal complement (multiplicity n*N - 1).
struct HessianSpectrum {
  double radius = 0.0;
  double lambda_radial = 0.0;
  double lambda_tangent = 0.0;
  double ratio = 0.0;  // max/min of the two eigenvalues
};

// Two-sided bound m <= g''(t) t / g'(t) <= M and the resulting cap on the
// eigenvalue ratio of DDf, uniform over all z != 0.
struct EllipticityBounds {
  double m = 0.0;          // a - 1 - b - 224 b eps
  double M = 0.0;          // a - 1 + b + 224 b eps
  double ratio_cap = 0.0;  // max{M, 1/m}
};

// Eigenvalues of the split contrast integrand |z1|^p + |z2|^q at a point
// with both components nonzero.
struct SplitSpectrum {
  double eigen_first = 0.0;   // p (p-1) |z1|^(p-2)
  double eigen_second = 0.0;  // q (q-1) |z2|^(q-2)
  double ratio = 0.0;         // max/min
};

// Empirical growth/ellipticity envelope constants fitted over a radius grid:
//   c1 t^p - c2 <= g(t) <= c3 t^q + c4
//   c5 (mu + t)^(p-2) <= min eigenvalue
//   max eigenvalue <= c6 (mu + t)^(q-2)   (spectral-norm convention)
//   ratio <= c7 (mu + t)^(q-p)
struct GrowthFit {
  double mu = 1.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  double c5 = 0.0, c6 = 0.0, c7 = 0.0;
  double t_min = 0.0, t_max = 0.0;
  bool verified = false;       // fitted inequalities re-checked over the grid
  double worst_slack = 0.0;    // most negative re-check slack (>= 0 when clean)
};

// Gradient of f(z) = g(|z|): g'(|z|) z/|z|, and the zero vector at z = 0.
std::vector<double> grad_f(const PQParams& params, const MatrixPoint& point);

// [g''(r) - g'(r)/r] <z/|z|, l/|l|>^2 + g'(r)/r at r = |z|; always positive.
// Throws std::invalid_argument on zero z, zero lambda, or dimension mismatch.
double hess_quadratic_form(const PQParams& params, const MatrixPoint& z,
                           const MatrixPoint& lambda);

// Dense DDf(z) = [g''-g'/r] zhat zhat^T + (g'/r) I, row-major (n*N)^2 entries.
// Throws std::invalid_argument on zero z.
std::vector<double> hess_matrix(const PQParams& params, const MatrixPoint& z);

// Closed-form spectrum at a radius; throws std::invalid_argument on radius <= 0.
HessianSpectrum hess_spectrum(const PQParams& params, double radius);

EllipticityBounds ellipticity_bounds(const PQParams& params);

// Throws std::invalid_argument when a component vanishes (degenerate Hessian)
// or an exponent is <= 1.
SplitSpectrum split_baseline_spectrum(double p, double q,
                                      const std::array<double, 2>& z);

// Fits the envelope constants over the grid (the knot t=1 is added when it
// lies inside the sampled range, where the g-envelopes are attained exactly)
// and re-verifies every fitted inequality. Throws std::invalid_argument on an
// empty grid or mu outside [0, 1].
GrowthFit fit_growth_constants(const PQParams& params, double mu,
                               const std::vector<double>& grid);

// sup over t in grid of the split-baseline eigenvalue ratio at z = (1, t):
// the best uniform ellipticity constant for the split integrand along that
// ray. Grows without bound as the grid ceiling rises (like t^|q-2|),
// in contrast with the radial construction's fixed ratio_cap.
double split_max_ratio(double p, double q, const std::vector<double>& grid);

}  // namespace pqlab
