#pragma once
// Chebyshev series on an interval [a, b]: interpolation through
// Chebyshev-Lobatto nodes, Clenshaw evaluation, exact termwise
// antiderivatives, and coefficient-tail bounds used as error certificates.

#include <functional>
#include <vector>

namespace spl::cheb {

struct Series {
  double a = -1.0;
  double b = 1.0;
  std::vector<double> coef;  // f(x) = sum_j coef[j] * T_j(xi(x)), xi affine [a,b] -> [-1,1]

  double eval(double x) const;
  Series antiderivative() const;  // F with F' = f and F(a) = 0
  double integrate(double x0, double x1) const;
  double tail_bound(std::size_t terms = 3) const;  // sum |coef| over trailing terms
};

// Degree-n interpolant of f through the n+1 Lobatto nodes of [a, b]; n >= 1.
Series fit(double a, double b, int degree, const std::function<double(double)>& f);

}  // namespace spl::cheb
