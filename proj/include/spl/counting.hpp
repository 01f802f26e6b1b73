#pragma once
// Counting layer over the factor sieve.
//
// For a cutoff exponent 0 < c < 1 and P+(n) the largest prime factor of n
// (with P+(1) = 1):
//   count_T(x, c)        = #{ p <= x : P+(p-1) >= p^c }
//   count_T_prime(x, c)  = #{ p <= x : P+(p-1) >= x^c }
// Both thresholds are decided exactly (no floating-point power comparisons).
//
// weighted_sum_L(x, u, v) = sum over primes p <= x of sum of ln q over the
// prime powers q^e with u < q^e <= v and q^e | p - 1; equivalently
// sum_{u < m <= v} Lambda(m) pi(x; m, 1).

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "spl/arith.hpp"
#include "spl/sieve.hpp"

namespace spl {

std::uint64_t count_T(std::uint64_t x, const Rational& c, const SieveConfig& cfg = {});
std::uint64_t count_T_prime(std::uint64_t x, const Rational& c, const SieveConfig& cfg = {});

// count_T - count_T_prime for the same x and c, from one sieve pass.
// Nonnegative: p <= x makes the p^c threshold the weaker one.
std::uint64_t lemma3_gap(std::uint64_t x, const Rational& c, const SieveConfig& cfg = {});

// T / T' / pi counters over a grid of checkpoints and cutoffs, all collected
// in a single ascending sieve pass.
struct CountReport {
  std::vector<std::uint64_t> x_checkpoints;        // ascending
  std::vector<Rational> c_values;
  std::vector<std::uint64_t> pi_counts;            // [xi]
  std::vector<std::vector<std::uint64_t>> t_counts;        // [ci][xi]
  std::vector<std::vector<std::uint64_t>> t_prime_counts;  // [ci][xi]
};

CountReport build_count_report(const std::vector<std::uint64_t>& xs,
                               const std::vector<Rational>& cs,
                               const SieveConfig& cfg = {});

// Header: x,c_num,c_den,pi_x,T,T_prime,gap
void write_count_csv(std::ostream& os, const CountReport& report);

struct LSumReport {
  std::uint64_t x = 0;
  double u = 0.0;
  double v = 0.0;
  double value = 0.0;  // Kahan-compensated, accumulated in ascending p
};

LSumReport weighted_sum_L(std::uint64_t x, double u, double v, const SieveConfig& cfg = {});

// L(x; 1, x) / x and L(x; 1, sqrt(x)) / (x/2); both drift toward 1 from
// below as x grows.
double lemma1_ratio(std::uint64_t x, const SieveConfig& cfg = {});
double lemma2_ratio(std::uint64_t x, const SieveConfig& cfg = {});

// Everything the trend diagnostics need from one sieve pass at a fixed x.
struct LemmaReport {
  std::uint64_t x = 0;
  double lemma1_ratio = 0.0;
  double lemma2_ratio = 0.0;
  std::vector<Rational> c_values;
  std::vector<std::uint64_t> t_counts;        // [ci], at x
  std::vector<std::uint64_t> t_prime_counts;  // [ci], at x
};

LemmaReport build_lemma_report(std::uint64_t x, const std::vector<Rational>& cs,
                               const SieveConfig& cfg = {});

// sum of ln q / phi(q^e) over prime powers q^e in (Q, 2Q]. Q >= 16.
double dyadic_mangoldt_phi_sum(std::uint64_t Q, const SieveConfig& cfg = {});

// sum of ln q over proper prime powers q^e (e >= 2) with q^e | p - 1 for
// some prime p <= x and q^e >= x^c. The companion estimate this is compared
// against is only meaningful for 3/4 < c < 1; see prime_power_tail_in_range.
double prime_power_tail(std::uint64_t x, const Rational& c, const SieveConfig& cfg = {});
bool prime_power_tail_in_range(const Rational& c);

// Distribution of r(m) = pi(x; m, 1) * phi(m) / pi(x) over the window
// floor(Q) < m <= floor(2Q) with Q = x^theta, 0 < theta < 17/32. Counts how
// many m fall below k1 or above k2, plus a histogram of r in 0.05-wide bins
// (the last bin absorbs overflow).
struct EquidistScan {
  std::uint64_t x = 0;
  double theta = 0.0;
  double q_lo = 0.0;  // Q = x^theta
  std::uint64_t m_lo = 0, m_hi = 0;  // inclusive window bounds
  std::uint64_t pi_x = 0;
  double k1 = 0.0, k2 = 0.0;
  double bin_width = 0.05;
  std::vector<std::uint64_t> bins;
  std::uint64_t exceptions_below = 0;
  std::uint64_t exceptions_above = 0;

  std::uint64_t mass() const;  // total over bins == m_hi - m_lo + 1
};

EquidistScan equidistribution_scan(std::uint64_t x, double theta, double k1, double k2,
                                   const SieveConfig& cfg = {});

}  // namespace spl
