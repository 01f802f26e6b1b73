#include "spl/arith.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spl {

using boost::multiprecision::cpp_int;

Rational::Rational(std::uint64_t n, std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  const std::uint64_t g = std::gcd(n, d);
  num = n / g;
  den = d / g;
  if (num > den) throw std::invalid_argument("Rational: cutoff exponents must satisfy c <= 1");
}

std::string Rational::str() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

std::uint64_t parse_u64(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("Rational: expected digits, got '" + s + "'");
  if (s.size() > 19) throw std::invalid_argument("Rational: value out of range '" + s + "'");
  std::uint64_t v = 0;
  for (char ch : s) v = v * 10 + static_cast<std::uint64_t>(ch - '0');
  return v;
}

}  // namespace

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::uint64_t n = parse_u64(text.substr(0, slash));
    const std::uint64_t d = parse_u64(text.substr(slash + 1));
    if (n == 0) throw std::invalid_argument("Rational: cutoff must be positive");
    return Rational(n, d);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    const std::uint64_t n = parse_u64(text);
    if (n == 0) throw std::invalid_argument("Rational: cutoff must be positive");
    return Rational(n, 1);
  }
  const std::string ip = text.substr(0, dot);
  const std::string fp = text.substr(dot + 1);
  if (fp.empty() || fp.size() > 18)
    throw std::invalid_argument("Rational: unsupported decimal '" + text + "'");
  const std::uint64_t whole = ip.empty() ? 0 : parse_u64(ip);
  const std::uint64_t frac = parse_u64(fp);
  std::uint64_t scale = 1;
  for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
  const std::uint64_t n = whole * scale + frac;
  if (n == 0) throw std::invalid_argument("Rational: cutoff must be positive");
  return Rational(n, scale);
}

std::vector<PrimePower> trial_factorization(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("trial_factorization: n must be >= 1");
  std::vector<PrimePower> fs;
  for (std::uint64_t q = 2; q <= n / q; q += (q == 2 ? 1 : 2)) {
    if (n % q != 0) continue;
    std::uint32_t k = 0;
    while (n % q == 0) {
      n /= q;
      ++k;
    }
    fs.push_back({q, k});
  }
  if (n > 1) fs.push_back({n, 1});
  return fs;
}

VonMangoldt von_mangoldt(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("von_mangoldt: m must be >= 1");
  VonMangoldt out;
  if (m == 1) return out;
  const auto fs = trial_factorization(m);
  if (fs.size() == 1) {
    out.is_prime_power = true;
    out.base_q = fs[0].q;
    out.exponent = fs[0].k;
    out.value = std::log(static_cast<double>(fs[0].q));
  }
  return out;
}

std::uint64_t euler_phi(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("euler_phi: m must be >= 1");
  std::uint64_t phi = 1;
  for (const auto& [q, k] : trial_factorization(m)) {
    std::uint64_t qk1 = 1;
    for (std::uint32_t i = 1; i < k; ++i) qk1 *= q;
    phi *= qk1 * (q - 1);
  }
  return phi;
}

std::uint64_t largest_prime_factor(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("largest_prime_factor: n must be >= 1");
  const auto fs = trial_factorization(n);
  return fs.empty() ? 1 : fs.back().q;
}

namespace {

bool geq_exact(std::uint64_t q, std::uint64_t p, const Rational& c) {
  cpp_int lhs = pow(cpp_int(q), static_cast<unsigned>(c.den));
  cpp_int rhs = pow(cpp_int(p), static_cast<unsigned>(c.num));
  return lhs >= rhs;
}

}  // namespace

bool geq_fractional_power_logs(std::uint64_t q, long double log_q,
                               std::uint64_t p, long double log_p,
                               const Rational& c) {
  const long double lhs = static_cast<long double>(c.den) * log_q;
  const long double rhs = static_cast<long double>(c.num) * log_p;
  const long double band = 1e-9L * (lhs + rhs + 1.0L);
  if (lhs > rhs + band) return true;
  if (lhs < rhs - band) return false;
  return geq_exact(q, p, c);
}

bool geq_fractional_power(std::uint64_t q, std::uint64_t p, const Rational& c) {
  if (q == 0) throw std::invalid_argument("geq_fractional_power: q must be >= 1");
  if (p < 2) throw std::invalid_argument("geq_fractional_power: p must be >= 2");
  if (c.num == 0) throw std::invalid_argument("geq_fractional_power: c must be positive");
  return geq_fractional_power_logs(q, std::log(static_cast<long double>(q)),
                                   p, std::log(static_cast<long double>(p)), c);
}

std::uint64_t pow_ceil_threshold(std::uint64_t x, const Rational& c) {
  if (x < 2) throw std::invalid_argument("pow_ceil_threshold: x must be >= 2");
  if (c.num == 0) throw std::invalid_argument("pow_ceil_threshold: c must be positive");
  const long double est = std::pow(static_cast<long double>(x),
                                   static_cast<long double>(c.num) / static_cast<long double>(c.den));
  auto L = static_cast<std::uint64_t>(est);
  if (L < 1) L = 1;
  // est is within a few ulps, so each loop runs at most a step or two.
  while (L > 1 && geq_fractional_power(L - 1, x, c)) --L;
  while (!geq_fractional_power(L, x, c)) ++L;
  return L;
}

}  // namespace spl
