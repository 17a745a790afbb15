#include "pqlab/integrand.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pqlab {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kThreeHalfPi = 1.5 * std::numbers::pi;

// (t-1)^4, or +inf when it overflows; callers branch on finiteness.
double quartic(double d) { return (d * d) * (d * d); }

}  // namespace

double outer_log(double t) {
  const double d = t - 1.0;
  const double s = quartic(d);
  if (std::isfinite(s)) {
    return std::log(kE + s);
  }
  // ln(e + d^4) = 4 ln d + ln(1 + e d^-4); the correction is below 1e-300.
  return 4.0 * std::log(d);
}

double ratio_cubed(double t) {
  const double d = t - 1.0;
  const double s = quartic(d);
  if (std::isfinite(s)) {
    return d * d * d / (kE + s);
  }
  return 1.0 / d;  // d^3/(e + d^4) -> 1/d; the e-correction underflows
}

double ratio_cubed_t(double t) {
  const double d = t - 1.0;
  const double s = quartic(d);
  if (std::isfinite(s)) {
    return t * (d * d * d / (kE + s));
  }
  return t / d;
}

double ratio_squared_t2(double t) {
  const double d = t - 1.0;
  const double s = quartic(d);
  if (std::isfinite(s)) {
    return ((d * d / (kE + s)) * t) * t;  // ordered so intermediates stay finite
  }
  return (t / d) * (t / d);
}

double log_ratio(double t) { return std::log(t) / outer_log(t); }

namespace {

// (t-1) t / (e + (t-1)^4): the linear analogue of the ratios above, needed by
// the curvature term. Tends to t/d^3 ~ 1/d^2 for large t.
double ratio_linear_t(double t) {
  const double d = t - 1.0;
  const double s = quartic(d);
  if (std::isfinite(s)) {
    return (d / (kE + s)) * t;
  }
  const double inv = 1.0 / d;
  return (t * inv) * (inv * inv);  // t/d^3, kept in bounded steps
}

// (12 e (t-1)^2 - 4 (t-1)^6) / (e + (t-1)^4)^2, the second factor of phi''.
double curvature_core(double t) {
  const double d = t - 1.0;
  const double s = quartic(d);
  double lin;  // (t-1) / (e + (t-1)^4)
  if (std::isfinite(s)) {
    lin = d / (kE + s);
  } else {
    lin = 0.0;  // true value ~ d^-3, below double range once d^4 overflows
  }
  const double cub = ratio_cubed(t);
  return 12.0 * kE * lin * lin - 4.0 * cub * cub;
}

}  // namespace

double phi_curvature_t2_lnt(const PQParams& params, double t) {
  // phi'' t^2 ln t = eps * [ -(4 rct)^2 lr / lnE + lr * (12 e (dt)^2 - 4 (d^3 t)^2) / (e+d^4)^2 ]
  // with rct = d^3 t/(e+d^4), lr = ln t / lnE; every factor is range-safe.
  const double rct = ratio_cubed_t(t);
  const double lr = log_ratio(t);
  const double ln_outer = outer_log(t);
  const double lin = ratio_linear_t(t);
  const double c2 = 12.0 * kE * lin * lin - 4.0 * rct * rct;
  return params.epsilon * (-16.0 * rct * rct * lr / ln_outer + lr * c2);
}

PhiEvaluation phi_eval(const PQParams& params, double t) {
  if (t <= 1.0) {
    return {t, kThreeHalfPi, 0.0, 0.0};
  }
  const double ln_outer = outer_log(t);
  const double r1 = 4.0 * ratio_cubed(t);
  const double eps = params.epsilon;
  PhiEvaluation out;
  out.t = t;
  out.phi = kThreeHalfPi + eps * std::log(ln_outer);
  out.phi_prime = eps / ln_outer * r1;
  out.phi_double_prime =
      eps * (-(r1 * r1) / (ln_outer * ln_outer) + curvature_core(t) / ln_outer);
  return out;
}

namespace {

GEvaluation power_branch(const PQParams& params, double t) {
  const double c = params.a - params.b;
  GEvaluation out;
  out.t = t;
  out.alpha = c;
  out.branch = GBranch::power_law;
  if (t == 0.0) {
    out.g = 0.0;
    out.g_prime = 0.0;
    return out;  // g'' has no single limiting value policy; flagged absent
  }
  out.g = std::pow(t, c);
  out.g_prime = c * std::pow(t, c - 1.0);
  out.g_double_prime = c * (c - 1.0) * std::pow(t, c - 2.0);
  return out;
}

}  // namespace

GEvaluation g_eval(const PQParams& params, double t) {
  if (t < 0.0) {
    throw std::domain_error("g_eval: t must be nonnegative");
  }
  if (t <= 1.0) {
    return power_branch(params, t);
  }
  const double a = params.a;
  const double b = params.b;
  const PhiEvaluation pe = phi_eval(params, t);
  const double sin_phi = std::sin(pe.phi);
  const double cos_phi = std::cos(pe.phi);
  const double f1 = 4.0 * params.epsilon * ratio_cubed_t(t) * log_ratio(t);
  const double f2 = 4.0 * params.epsilon * ratio_cubed_t(t) / outer_log(t);

  GEvaluation out;
  out.t = t;
  out.branch = GBranch::oscillating;
  out.alpha = a + b * sin_phi;
  out.g = std::exp(out.alpha * std::log(t));
  const double g_over_t = out.g / t;
  out.g_prime = g_over_t * (b * cos_phi * f1 + out.alpha);

  // Identity path: g'' t = g' phi1 + (g/t) phi2.
  const double phi1 = b * cos_phi * f1 + a - 1.0 + b * sin_phi;
  const double phi2 = -b * sin_phi * f1 * f2 +
                      b * cos_phi * (phi_curvature_t2_lnt(params, t) + f1 + 2.0 * f2);
  out.g_double_prime = (out.g_prime * phi1 + g_over_t * phi2) / t;
  return out;
}

PhiFactors phi_factors(const PQParams& params, double t) {
  if (!(t > 1.0)) {
    throw std::domain_error("phi_factors: defined for t > 1 only");
  }
  const double base = 4.0 * params.epsilon * ratio_cubed_t(t);
  PhiFactors out;
  out.t = t;
  out.f1 = base * log_ratio(t);
  out.f2 = base / outer_log(t);
  out.f3 = std::fabs(phi_curvature_t2_lnt(params, t));
  return out;
}

BigPhi big_phi(const PQParams& params, double t) {
  if (!(t > 0.0)) {
    throw std::domain_error("big_phi: defined for t > 0 only");
  }
  if (t <= 1.0) {
    return {t, params.a - 1.0 - params.b, 0.0};
  }
  const double b = params.b;
  const PhiEvaluation pe = phi_eval(params, t);
  const double sin_phi = std::sin(pe.phi);
  const double cos_phi = std::cos(pe.phi);
  const double f1 = 4.0 * params.epsilon * ratio_cubed_t(t) * log_ratio(t);
  const double f2 = 4.0 * params.epsilon * ratio_cubed_t(t) / outer_log(t);
  BigPhi out;
  out.t = t;
  out.phi1 = b * cos_phi * f1 + params.a - 1.0 + b * sin_phi;
  out.phi2 = -b * sin_phi * f1 * f2 +
             b * cos_phi * (phi_curvature_t2_lnt(params, t) + f1 + 2.0 * f2);
  return out;
}

double g_value(const PQParams& params, double t) { return g_eval(params, t).g; }

double g_derivative(const PQParams& params, double t) {
  return g_eval(params, t).g_prime;
}

double g_second_derivative(const PQParams& params, double t) {
  if (!(t > 0.0)) {
    throw std::domain_error("g_second_derivative: defined for t > 0 only");
  }
  return *g_eval(params, t).g_double_prime;
}

double g_second_derivative_direct(const PQParams& params, double t) {
  if (!(t > 0.0)) {
    throw std::domain_error("g_second_derivative_direct: defined for t > 0 only");
  }
  if (t <= 1.0) {
    const double c = params.a - params.b;
    return c * (c - 1.0) * std::pow(t, c - 2.0);
  }
  // g' = (g/t) h with h = b cos(phi) phi' t ln t + alpha, so
  // g'' = (g' t - g)/t^2 * h + (g/t) h', expanded with raw phi derivatives.
  const double a = params.a;
  const double b = params.b;
  const PhiEvaluation pe = phi_eval(params, t);
  const double sin_phi = std::sin(pe.phi);
  const double cos_phi = std::cos(pe.phi);
  const double ln_t = std::log(t);
  const double alpha = a + b * sin_phi;
  const double g = std::exp(alpha * ln_t);
  const double h = b * cos_phi * pe.phi_prime * t * ln_t + alpha;
  const double g_prime = g / t * h;
  const double h_prime =
      -b * sin_phi * pe.phi_prime * pe.phi_prime * t * ln_t +
      b * cos_phi * (pe.phi_double_prime * t * ln_t + pe.phi_prime * (ln_t + 1.0)) +
      b * cos_phi * pe.phi_prime;
  return (g_prime * t - g) / (t * t) * h + g / t * h_prime;
}

}  // namespace pqlab
