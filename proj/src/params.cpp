#include "pqlab/params.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pqlab {

double epsilon_upper_bound(double a, double b, bool subquadratic) {
  double bound = std::min(1.0, (a - 1.0 - b) / (224.0 * b));
  if (subquadratic) {
    bound = std::min(bound, (2.0 - a - b) / (224.0 * b));
  }
  return bound;
}

PQParams make_params(double p, double q, std::optional<double> epsilon,
                     bool subquadratic) {
  if (!(p > 1.0)) {
    throw std::invalid_argument("make_params: require p > 1");
  }
  if (!(q > p)) {
    throw std::invalid_argument("make_params: require q > p");
  }
  if (subquadratic && !(q < 2.0)) {
    throw std::invalid_argument("make_params: subquadratic regime requires q < 2");
  }

  PQParams params;
  params.p = p;
  params.q = q;
  params.a = 0.5 * (p + q);
  params.b = 0.5 * (q - p);
  params.subquadratic = subquadratic;

  const double bound = epsilon_upper_bound(params.a, params.b, subquadratic);
  if (epsilon.has_value()) {
    if (!(*epsilon > 0.0) || !(*epsilon < bound)) {
      std::ostringstream msg;
      msg << "make_params: epsilon " << *epsilon
          << " outside the open interval (0, " << bound << ")";
      throw std::invalid_argument(msg.str());
    }
    params.epsilon = *epsilon;
  } else {
    params.epsilon = 0.9 * bound;
  }
  return params;
}

}  // namespace pqlab
