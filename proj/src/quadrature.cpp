#include "pdpml/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <stdexcept>

namespace pdpml {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("quadrature order must be positive");
  // legendre_p_zeros returns the nonnegative zeros in ascending order
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x, w;
  x.reserve(n);
  w.reserve(n);
  auto add = [&](double xi) {
    const double dp = boost::math::legendre_p_prime<double>(n, xi);
    x.push_back(xi);
    w.push_back(2.0 / ((1.0 - xi * xi) * dp * dp));
  };
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it)
    if (*it != 0.0) add(-*it);
  for (double z : zeros) add(z);

  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  QuadratureRule r;
  r.nodes.resize(x.size());
  r.weights.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.nodes[i] = mid + half * x[i];
    r.weights[i] = half * w[i];
  }
  return r;
}

}  // namespace pdpml
