#pragma once
// Exact scalar arithmetic shared by the sieve and the counting layer:
// von Mangoldt / Euler phi / largest prime factor by trial division, and
// exact decisions of "q >= p^(a/b)" so cutoff tests never depend on
// floating-point rounding.

#include <cstdint>
#include <string>
#include <vector>

namespace spl {

// One prime power q^k in a factorization.
struct PrimePower {
  std::uint64_t q = 0;
  std::uint32_t k = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// A cutoff exponent c = num/den kept as an exact reduced fraction.
// Invariant: den >= 1, gcd(num, den) == 1, and num <= den (c <= 1).
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  Rational() = default;
  Rational(std::uint64_t n, std::uint64_t d);  // reduces; throws if d == 0 or n > d

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;  // "num/den"

  // Accepts "a/b" or a decimal literal such as "0.35" (-> 7/20).
  static Rational parse(const std::string& text);

  friend bool operator==(const Rational&, const Rational&) = default;
};

// Trial-division factorization in ascending q; n == 1 gives {}.
// Meant for small n (tests, scan windows), not for bulk work.
std::vector<PrimePower> trial_factorization(std::uint64_t n);

struct VonMangoldt {
  bool is_prime_power = false;
  std::uint64_t base_q = 0;   // valid iff is_prime_power
  std::uint32_t exponent = 0; // valid iff is_prime_power
  double value = 0.0;         // ln(base_q) if m is a prime power, else 0
};

VonMangoldt von_mangoldt(std::uint64_t m);    // m >= 1
std::uint64_t euler_phi(std::uint64_t m);     // m >= 1
std::uint64_t largest_prime_factor(std::uint64_t n);  // n >= 1; P+(1) == 1

// Whether q >= p^(c.num/c.den), decided exactly as q^den >= p^num.
// A long-double log comparison handles the easy cases; anything inside the
// guard band falls back to exact big-integer powers. q >= 1, p >= 2.
bool geq_fractional_power(std::uint64_t q, std::uint64_t p, const Rational& c);

// Hot-loop variant with both logs already computed by the caller.
bool geq_fractional_power_logs(std::uint64_t q, long double log_q,
                               std::uint64_t p, long double log_p,
                               const Rational& c);

// Smallest integer L with L^den >= x^num, i.e. the exact integer threshold
// for tests of the form "value >= x^c". x >= 2.
std::uint64_t pow_ceil_threshold(std::uint64_t x, const Rational& c);

}  // namespace spl
