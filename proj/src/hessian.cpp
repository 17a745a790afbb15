#include "pqlab/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "pqlab/integrand.hpp"

namespace pqlab {

namespace {

double norm_of(const std::vector<double>& z) {
  double s = 0.0;
  for (double v : z) s += v * v;
  return std::sqrt(s);
}

void require_dims(const MatrixPoint& point) {
  if (point.n < 1 || point.N < 1 ||
      point.z.size() !=
          static_cast<std::size_t>(point.n) * static_cast<std::size_t>(point.N)) {
    throw std::invalid_argument("matrix point payload does not match n*N");
  }
}

}  // namespace

std::vector<double> grad_f(const PQParams& params, const MatrixPoint& point) {
  require_dims(point);
  const double r = norm_of(point.z);
  std::vector<double> out(point.z.size(), 0.0);
  if (r == 0.0) return out;  // g'(0) = 0
  const double scale = g_derivative(params, r) / r;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * point.z[i];
  return out;
}

double hess_quadratic_form(const PQParams& params, const MatrixPoint& z,
                           const MatrixPoint& lambda) {
  require_dims(z);
  require_dims(lambda);
  if (z.z.size() != lambda.z.size()) {
    throw std::invalid_argument("z and lambda live in different spaces");
  }
  const double r = norm_of(z.z);
  const double l = norm_of(lambda.z);
  if (r == 0.0 || l == 0.0) {
    throw std::invalid_argument("quadratic form needs z != 0 and lambda != 0");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < z.z.size(); ++i) dot += z.z[i] * lambda.z[i];
  const double cosine = dot / (r * l);
  const double tangent = g_derivative(params, r) / r;
  const double radial = g_second_derivative(params, r);
  return (radial - tangent) * cosine * cosine + tangent;
}

std::vector<double> hess_matrix(const PQParams& params, const MatrixPoint& z) {
  require_dims(z);
  const double r = norm_of(z.z);
  if (r == 0.0) throw std::invalid_argument("Hessian is undefined at z = 0");
  const std::size_t d = z.z.size();
  const double tangent = g_derivative(params, r) / r;
  const double gap = g_second_derivative(params, r) - tangent;
  std::vector<double> h(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    const double zi = z.z[i] / r;
    for (std::size_t j = 0; j < d; ++j) {
      h[i * d + j] = gap * zi * (z.z[j] / r);
    }
    h[i * d + i] += tangent;
  }
  return h;
}

HessianSpectrum hess_spectrum(const PQParams& params, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("spectrum requires a positive finite radius");
  }
  HessianSpectrum s;
  s.radius = radius;
  s.lambda_radial = g_second_derivative(params, radius);
  s.lambda_tangent = g_derivative(params, radius) / radius;
  const double lo = std::min(s.lambda_radial, s.lambda_tangent);
  const double hi = std::max(s.lambda_radial, s.lambda_tangent);
  s.ratio = hi / lo;
  return s;
}

EllipticityBounds ellipticity_bounds(const PQParams& params) {
  EllipticityBounds b;
  b.m = params.a - 1.0 - params.b - 224.0 * params.b * params.epsilon;
  b.M = params.a - 1.0 + params.b + 224.0 * params.b * params.epsilon;
  b.ratio_cap = std::max(b.M, 1.0 / b.m);
  return b;
}

SplitSpectrum split_baseline_spectrum(double p, double q,
                                      const std::array<double, 2>& z) {
  if (!(p > 1.0) || !(q > 1.0)) {
    throw std::invalid_argument("split exponents must exceed 1");
  }
  if (z[0] == 0.0 || z[1] == 0.0) {
    throw std::invalid_argument("split Hessian degenerates on the axes");
  }
  SplitSpectrum s;
  s.eigen_first = p * (p - 1.0) * std::pow(std::abs(z[0]), p - 2.0);
  s.eigen_second = q * (q - 1.0) * std::pow(std::abs(z[1]), q - 2.0);
  s.ratio = std::max(s.eigen_first, s.eigen_second) /
            std::min(s.eigen_first, s.eigen_second);
  return s;
}

GrowthFit fit_growth_constants(const PQParams& params, double mu,
                               const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("growth fit needs samples");
  if (!(mu >= 0.0) || !(mu <= 1.0)) {
    throw std::invalid_argument("mu must lie in [0, 1]");
  }
  std::vector<double> ts(grid);
  for (double t : ts) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("growth-fit samples must be positive");
    }
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  // The g-envelopes are attained exactly at t = 1; pin the knot whenever the
  // sampled range straddles it so the fitted constants are sharp.
  if (ts.front() < 1.0 && ts.back() > 1.0 &&
      !std::binary_search(ts.begin(), ts.end(), 1.0)) {
    ts.insert(std::lower_bound(ts.begin(), ts.end(), 1.0), 1.0);
  }

  const double p = params.p;
  const double q = params.q;
  GrowthFit fit;
  fit.mu = mu;
  fit.t_min = ts.front();
  fit.t_max = ts.back();

  double inf_lower = std::numeric_limits<double>::infinity();
  double sup_upper_tail = 0.0;  // g / t^q over t >= 1
  double sup_head = 0.0;        // g over t <= 1
  double inf_eig = std::numeric_limits<double>::infinity();
  double sup_eig = 0.0;
  double sup_ratio = 0.0;
  for (double t : ts) {
    const double g = g_value(params, t);
    inf_lower = std::min(inf_lower, g / std::pow(t, p));
    if (t >= 1.0) sup_upper_tail = std::max(sup_upper_tail, g / std::pow(t, q));
    if (t <= 1.0) sup_head = std::max(sup_head, g);
    const HessianSpectrum s = hess_spectrum(params, t);
    const double lo = std::min(s.lambda_radial, s.lambda_tangent);
    const double hi = std::max(s.lambda_radial, s.lambda_tangent);
    inf_eig = std::min(inf_eig, lo / std::pow(mu + t, p - 2.0));
    sup_eig = std::max(sup_eig, hi / std::pow(mu + t, q - 2.0));
    sup_ratio = std::max(sup_ratio, s.ratio / std::pow(mu + t, q - p));
  }
  fit.c1 = inf_lower;
  fit.c2 = 0.0;  // inf_lower > 0 since g(t)/t^p >= min(1, t^(q-p)) > 0
  fit.c3 = sup_upper_tail > 0.0 ? sup_upper_tail : sup_head;
  fit.c4 = sup_head;
  fit.c5 = inf_eig;
  fit.c6 = sup_eig;
  fit.c7 = sup_ratio;

  double worst = std::numeric_limits<double>::infinity();
  auto track = [&worst](double lhs, double rhs) {
    // Signed slack of lhs <= rhs, normalized so one tolerance fits all scales.
    worst = std::min(worst, (rhs - lhs) / std::max({1.0, std::abs(lhs),
                                                    std::abs(rhs)}));
  };
  for (double t : ts) {
    const double g = g_value(params, t);
    track(fit.c1 * std::pow(t, p) - fit.c2, g);
    track(g, fit.c3 * std::pow(t, q) + fit.c4);
    const HessianSpectrum s = hess_spectrum(params, t);
    const double lo = std::min(s.lambda_radial, s.lambda_tangent);
    const double hi = std::max(s.lambda_radial, s.lambda_tangent);
    track(fit.c5 * std::pow(mu + t, p - 2.0), lo);
    track(hi, fit.c6 * std::pow(mu + t, q - 2.0));
    track(s.ratio, fit.c7 * std::pow(mu + t, q - p));
  }
  fit.worst_slack = worst;
  fit.verified = worst >= -1e-12;
  return fit;
}

double split_max_ratio(double p, double q, const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("split sweep needs samples");
  double sup = 0.0;
  for (double t : grid) {
    sup = std::max(sup, split_baseline_spectrum(p, q, {1.0, t}).ratio);
  }
  return sup;
}

}  // namespace pqlab
