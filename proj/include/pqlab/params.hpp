#pragma once

#include <optional>

namespace pqlab {

// Parameters of the oscillating-exponent radial integrand. p and q are the
// lower/upper growth exponents; a = (p+q)/2 and b = (q-p)/2 are the midpoint
// and half-width of the exponent band; epsilon is the oscillation rate.
struct PQParams {
  double p = 0.0;
  double q = 0.0;
  double a = 0.0;
  double b = 0.0;
  double epsilon = 0.0;
  bool subquadratic = false;
};

// Supremum of admissible epsilon: min{1, (a-1-b)/(224 b)}, additionally
// capped by (2-a-b)/(224 b) in the subquadratic regime. The admissible
// interval is open at both ends.
double epsilon_upper_bound(double a, double b, bool subquadratic);

// Validates 1 < p < q (and q < 2 when subquadratic), derives a and b, and
// selects epsilon = 0.9 * epsilon_upper_bound when none is supplied.
// Throws std::invalid_argument on any violation.
PQParams make_params(double p, double q,
                     std::optional<double> epsilon = std::nullopt,
                     bool subquadratic = false);

}  // namespace pqlab
