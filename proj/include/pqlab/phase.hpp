#pragma once

#include <string>
#include <vector>

#include "pqlab/params.hpp"

namespace pqlab {

// The exponent alpha(t) = a + b sin(3*pi/2 + eps*L) completes one full
// oscillation only when L = ln ln(e + (t-1)^4) advances by 2*pi/eps, i.e. at
// double-exponentially large t. Everything here therefore works in L-space;
// t is described symbolically and never materialized beyond float range.

enum class PhaseKind { LowerExtreme, UpperExtreme, Generic };

struct PhaseWitness {
  double L = 0.0;      // phase variable, >= 0
  double alpha = 0.0;  // a + b sin(3*pi/2 + eps*L)
  std::string t_description;  // "1 + exp(exp(L)/4)*(1+d) with |d| <= ..."
  PhaseKind kind = PhaseKind::Generic;
};

// L = ln ln(e + (t-1)^4); strictly increasing, L -> 0 as t -> 1+.
// Overflow-safe to t = 1e300. Throws std::invalid_argument for t <= 1.
double phase_of_t(double t);

// alpha = a + b sin(3*pi/2 + eps*L). Throws for L < 0.
double exponent_at_phase(const PQParams& params, double L);

// Smallest L >= 0 with exponent_at_phase(L) = target, in closed form:
// L = (pi/2 + asin((target-a)/b)) / eps (the first branch of sin reaching
// the target at or after the phase origin 3*pi/2). Throws for target
// outside [a-b, a+b].
double phase_for_exponent(const PQParams& params, double target);

// 2*cycles+1 witnesses at L = k*pi/eps, k = 0..2*cycles, alternating
// LowerExtreme (alpha = a-b exactly) and UpperExtreme (alpha = a+b exactly);
// extreme alphas are assigned by closed-form trig at exact multiples of pi.
// Throws for cycles < 1.
std::vector<PhaseWitness> oscillation_witnesses(const PQParams& params,
                                                int cycles);

// The symbolic location solving phase_of_t(t) = L:
//   t = 1 + (exp(exp(L)) - e)^(1/4) = 1 + exp(exp(L)/4)*(1+d),
// with |d| <= e*exp(-exp(L)). The bound is stated, not computed; it is
// below any representable epsilon once L is moderately large.
std::string describe_t_for_phase(double L);

}  // namespace pqlab
