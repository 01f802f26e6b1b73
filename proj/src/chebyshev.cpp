#include "spl/chebyshev.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace spl::cheb {

double Series::eval(double x) const {
  if (coef.empty()) return 0.0;
  const double xi = (2.0 * x - a - b) / (b - a);
  // Clenshaw recurrence.
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t j = coef.size(); j-- > 1;) {
    const double t = 2.0 * xi * b1 - b2 + coef[j];
    b2 = b1;
    b1 = t;
  }
  return xi * b1 - b2 + coef[0];
}

Series Series::antiderivative() const {
  // Termwise: int T_j dxi = T_{j+1}/(2(j+1)) - T_{j-1}/(2(j-1)) for j >= 2,
  // int T_1 dxi = T_2/4 (+const), int T_0 dxi = T_1. Scaled by dx/dxi.
  const double h = 0.5 * (b - a);
  const int n = static_cast<int>(coef.size()) - 1;
  Series F;
  F.a = a;
  F.b = b;
  F.coef.assign(static_cast<std::size_t>(n) + 2, 0.0);
  auto c = [&](int j) -> double {
    return (j >= 0 && j <= n) ? coef[static_cast<std::size_t>(j)] : 0.0;
  };
  F.coef[1] = h * (c(0) - 0.5 * c(2));
  for (int j = 2; j <= n + 1; ++j)
    F.coef[static_cast<std::size_t>(j)] = h * (c(j - 1) - c(j + 1)) / (2.0 * j);
  // Pin F(a) = 0 using T_j(-1) = (-1)^j.
  double at_a = 0.0;
  for (int j = 1; j <= n + 1; ++j)
    at_a += (j % 2 ? -1.0 : 1.0) * F.coef[static_cast<std::size_t>(j)];
  F.coef[0] = -at_a;
  return F;
}

double Series::integrate(double x0, double x1) const {
  const Series F = antiderivative();
  return F.eval(x1) - F.eval(x0);
}

double Series::tail_bound(std::size_t terms) const {
  double s = 0.0;
  const std::size_t n = coef.size();
  for (std::size_t i = n > terms ? n - terms : 0; i < n; ++i) s += std::fabs(coef[i]);
  return s;
}

Series fit(double a, double b, int degree, const std::function<double(double)>& f) {
  if (degree < 1) throw std::invalid_argument("cheb::fit: degree must be >= 1");
  if (!(a < b)) throw std::invalid_argument("cheb::fit: need a < b");
  const int n = degree;
  std::vector<double> fx(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double xi = std::cos(M_PI * i / n);
    const double x = 0.5 * (a + b) + 0.5 * (b - a) * xi;
    fx[static_cast<std::size_t>(i)] = f(x);
  }
  Series s;
  s.a = a;
  s.b = b;
  s.coef.assign(static_cast<std::size_t>(n) + 1, 0.0);
  // Discrete cosine transform over the Lobatto grid; endpoints carry weight 1/2.
  for (int j = 0; j <= n; ++j) {
    double acc = 0.5 * (fx[0] + (j % 2 == 0 ? fx[static_cast<std::size_t>(n)]
                                            : -fx[static_cast<std::size_t>(n)]));
    for (int i = 1; i < n; ++i)
      acc += fx[static_cast<std::size_t>(i)] * std::cos(M_PI * j * i / n);
    double cj = 2.0 * acc / n;
    if (j == 0 || j == n) cj *= 0.5;
    s.coef[static_cast<std::size_t>(j)] = cj;
  }
  return s;
}

}  // namespace spl::cheb
