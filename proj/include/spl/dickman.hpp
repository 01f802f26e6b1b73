#pragma once
// Dickman's rho: piecewise-Chebyshev table built by iterating the integrated
// delay equation rho(u) = rho(k) - int_k^u rho(t-1)/t dt one unit interval at
// a time, with a certified absolute error bound propagated through the
// iteration. On top of the table: int rho, int rho(t)/t, and bracketed root
// solves for the two threshold constants
//     theta1:  theta = 4 * int_{1/theta - 1}^{1/theta} rho(t)/t dt
//     theta2:  theta = 4 * rho(1/theta).

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "spl/chebyshev.hpp"

namespace spl {

inline constexpr std::uint32_t kDickmanMagic = 0x52484F31;  // "RHO1" when read LE

class DickmanTable {
 public:
  double u_max() const { return static_cast<double>(pieces_.size()); }
  int degree() const { return degree_; }
  double tol() const { return tol_; }  // certified absolute error bound

  double rho(double u) const;                            // 0 <= u <= u_max
  double rho_integral(double a, double b) const;         // int_a^b rho, 0 <= a <= b
  double rho_over_t_integral(double a, double b) const;  // int_a^b rho(t)/t, 0 < a <= b

  void save(std::ostream& os) const;
  static DickmanTable load(std::istream& is);

 private:
  friend DickmanTable build_rho_table(double, double, int);

  void finalize(double tol_request);  // builds caches + certificate; throws precision_error

  std::vector<cheb::Series> pieces_;  // piece k covers [k, k+1]; piece 0 is exactly {1}
  std::vector<cheb::Series> anti_;    // antiderivative of each piece
  std::vector<cheb::Series> anti_over_t_;  // antiderivative of rho(t)/t per piece, k >= 1
  int degree_ = 0;
  double tol_ = 0.0;
};

// Table covering [0, ceil(u_max)]. u_max >= 2, 1e-15 <= tol <= 1e-6,
// 8 <= degree <= 200. Throws precision_error if the certificate misses tol.
DickmanTable build_rho_table(double u_max, double tol = 1e-12, int degree = 30);

struct ThresholdSolution {
  double theta = 0.0;
  double residual = 0.0;  // value of the defining equation's mismatch at theta
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int evaluations = 0;
};

// Both roots are located inside [0.2, 0.5] and refined to bracket width 1e-10.
// The table must cover u_max >= 5 so 1/theta stays inside the domain.
ThresholdSolution solve_theta1(const DickmanTable& table);
ThresholdSolution solve_theta2(const DickmanTable& table);

}  // namespace spl
