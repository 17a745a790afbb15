#include "pqlab/phase.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "pqlab/integrand.hpp"

namespace pqlab {

namespace {
constexpr double kThreeHalfPi = 1.5 * std::numbers::pi;
}

double phase_of_t(double t) {
  if (!(t > 1.0)) throw std::invalid_argument("phase is defined for t > 1");
  const double d = t - 1.0;
  const double quartic = d * d * d * d;
  if (std::isfinite(quartic)) {
    // ln ln(e + x) = log1p(log1p(x/e)): accurate all the way down to the
    // branch point, where the naive ln(e + x) collapses to 1 and loses the
    // ~x/e tail (L would jump to exactly 0 for t - 1 below ~1e-4).
    return std::log1p(std::log1p(quartic / std::numbers::e));
  }
  // (t-1)^4 overflows: ln(e + x) ~ ln x = 4 ln(t-1).
  return std::log(4.0 * std::log(d));
}

double exponent_at_phase(const PQParams& params, double L) {
  if (!(L >= 0.0)) throw std::invalid_argument("phase variable must be >= 0");
  return params.a + params.b * std::sin(kThreeHalfPi + params.epsilon * L);
}

double phase_for_exponent(const PQParams& params, double target) {
  const double lo = params.a - params.b;
  const double hi = params.a + params.b;
  if (!(target >= lo) || !(target <= hi)) {
    throw std::invalid_argument("target exponent outside [a-b, a+b]");
  }
  const double s = std::clamp((target - params.a) / params.b, -1.0, 1.0);
  // sin(3*pi/2 + x) first reaches s at x = pi/2 + asin(s): the branch
  // rising from the minimum at the phase origin.
  return (std::numbers::pi / 2.0 + std::asin(s)) / params.epsilon;
}

std::string describe_t_for_phase(double L) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "1 + exp(exp(%.6g)/4)*(1+d) with |d| <= e*exp(-exp(%.6g))", L,
                L);
  return std::string(buf);
}

std::vector<PhaseWitness> oscillation_witnesses(const PQParams& params,
                                                int cycles) {
  if (cycles < 1) throw std::invalid_argument("need at least one cycle");
  std::vector<PhaseWitness> out;
  out.reserve(2 * cycles + 1);
  for (int k = 0; k <= 2 * cycles; ++k) {
    PhaseWitness w;
    w.L = static_cast<double>(k) * std::numbers::pi / params.epsilon;
    const bool upper = (k % 2) == 1;
    // sin(3*pi/2 + k*pi) = -(-1)^k exactly; assign the extreme in closed
    // form rather than re-evaluating sin at a huge argument.
    w.alpha = upper ? params.a + params.b : params.a - params.b;
    w.kind = upper ? PhaseKind::UpperExtreme : PhaseKind::LowerExtreme;
    w.t_description = describe_t_for_phase(w.L);
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace pqlab
