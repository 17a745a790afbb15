#pragma once

#include <optional>

#include "pqlab/params.hpp"

namespace pqlab {

// phi(t) = 3*pi/2 for t <= 1, and 3*pi/2 + epsilon*ln ln(e + (t-1)^4) above.
// The branches agree in value and in the first two derivatives at t = 1.
struct PhiEvaluation {
  double t = 0.0;
  double phi = 0.0;
  double phi_prime = 0.0;
  double phi_double_prime = 0.0;
};

enum class GBranch { power_law, oscillating };

// g(t) = t^alpha(t) with alpha(t) = a + b*sin(phi(t)). On the power-law
// branch (t <= 1) this is exactly t^(a-b).
struct GEvaluation {
  double t = 0.0;
  double alpha = 0.0;
  double g = 0.0;
  double g_prime = 0.0;
  std::optional<double> g_double_prime;  // absent only at t = 0
  GBranch branch = GBranch::power_law;
};

// Factor products controlled by the phase bounds, defined for t > 1:
//   f1 = phi'(t) * t * ln t   in (0, 8 eps]
//   f2 = phi'(t) * t          in (0, 8 eps]
//   f3 = |phi''(t)| * t^2 * ln t   <= 128 eps
struct PhiFactors {
  double t = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
};

// Coefficients of the second-derivative identity
//   g''(t) * t = g'(t) * phi1(t) + (g(t)/t) * phi2(t),
// with phi1 = b cos(phi) phi' t ln t + a - 1 + b sin(phi) and
// phi2 = -b sin(phi) (phi' t)^2 ln t + b cos(phi) [phi'' t^2 ln t + phi' t (ln t + 2)].
struct BigPhi {
  double t = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
};

// Total on [0, inf); the t <= 1 branch is returned for any t <= 1.
PhiEvaluation phi_eval(const PQParams& params, double t);

// Throws std::domain_error for t < 0. At t = 0 returns g = g' = 0 with the
// second derivative absent (its limit is 0, finite, or +inf depending on
// a - b vs 2).
GEvaluation g_eval(const PQParams& params, double t);

// Throws std::domain_error for t <= 1 (the factors live on (1, inf)).
PhiFactors phi_factors(const PQParams& params, double t);

// Throws std::domain_error for t <= 0. For t <= 1 returns (a-1-b, 0).
BigPhi big_phi(const PQParams& params, double t);

// Scalar accessors. g_second_derivative throws std::domain_error at t <= 0.
double g_value(const PQParams& params, double t);
double g_derivative(const PQParams& params, double t);
double g_second_derivative(const PQParams& params, double t);

// Independent route to g'' for t > 0: the verbatim product-rule expansion of
// the g' formula using raw phi' and phi'' values, kept free of the composed
// factor products so it can cross-check the identity path above.
double g_second_derivative_direct(const PQParams& params, double t);

// Building-block ratios, each finite and accurate for every double t > 1
// (large-t limits are taken analytically where (t-1)^4 would overflow):
double ratio_cubed(double t);       // (t-1)^3 / (e + (t-1)^4)      in (0, 1)
double ratio_cubed_t(double t);     // (t-1)^3 t / (e + (t-1)^4)    in (0, 2)
double ratio_squared_t2(double t);  // (t-1)^2 t^2 / (e + (t-1)^4)  in (0, 4)
double log_ratio(double t);         // ln t / ln(e + (t-1)^4)       in (0, 1)
double outer_log(double t);         // ln(e + (t-1)^4)              >= 1

// phi''(t) * t^2 * ln t with its sign, composed from the safe ratios so it
// stays finite and accurate at extreme t. Requires t > 1.
double phi_curvature_t2_lnt(const PQParams& params, double t);

}  // namespace pqlab
