#include "spl/counting.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "spl/errors.hpp"

namespace spl {

namespace {

// Compensated accumulation; results must not depend on thread count, so all
// sums are folded in ascending-p order on the consumer side of the sieve.
struct Kahan {
  double s = 0.0, c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

void validate_cutoff(const Rational& c) {
  if (c.num == 0) throw std::invalid_argument("cutoff c must be positive");
  if (c.num >= c.den) throw std::invalid_argument("cutoff c must satisfy 0 < c < 1");
}

std::uint64_t isqrt_u64(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::uint64_t count_T(std::uint64_t x, const Rational& c, const SieveConfig& cfg) {
  validate_cutoff(c);
  std::uint64_t n = 0;
  FactoredPrimeStream st(x, cfg);
  FactoredShiftedPrime rec;
  while (st.next(rec)) {
    const auto lq = std::log(static_cast<long double>(rec.lpf));
    const auto lp = std::log(static_cast<long double>(rec.p));
    if (geq_fractional_power_logs(rec.lpf, lq, rec.p, lp, c)) ++n;
  }
  return n;
}

std::uint64_t count_T_prime(std::uint64_t x, const Rational& c, const SieveConfig& cfg) {
  validate_cutoff(c);
  if (x < 2) return 0;
  const std::uint64_t t = pow_ceil_threshold(x, c);
  std::uint64_t n = 0;
  FactoredPrimeStream st(x, cfg);
  FactoredShiftedPrime rec;
  while (st.next(rec))
    if (rec.lpf >= t) ++n;
  return n;
}

std::uint64_t lemma3_gap(std::uint64_t x, const Rational& c, const SieveConfig& cfg) {
  validate_cutoff(c);
  if (x < 2) return 0;
  const std::uint64_t t = pow_ceil_threshold(x, c);
  std::uint64_t n_t = 0, n_tp = 0;
  FactoredPrimeStream st(x, cfg);
  FactoredShiftedPrime rec;
  while (st.next(rec)) {
    const auto lq = std::log(static_cast<long double>(rec.lpf));
    const auto lp = std::log(static_cast<long double>(rec.p));
    if (geq_fractional_power_logs(rec.lpf, lq, rec.p, lp, c)) ++n_t;
    if (rec.lpf >= t) ++n_tp;
  }
  return n_t - n_tp;
}

CountReport build_count_report(const std::vector<std::uint64_t>& xs,
                               const std::vector<Rational>& cs,
                               const SieveConfig& cfg) {
  if (xs.empty() || cs.empty())
    throw std::invalid_argument("build_count_report: need at least one checkpoint and cutoff");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] <= xs[i - 1])
      throw std::invalid_argument("build_count_report: checkpoints must be strictly ascending");
  for (const auto& c : cs) validate_cutoff(c);
  if (xs.front() < 2)
    throw std::invalid_argument("build_count_report: checkpoints must be >= 2");

  CountReport rep;
  rep.x_checkpoints = xs;
  rep.c_values = cs;
  const std::size_t nx = xs.size();
  const std::size_t nc = cs.size();
  rep.pi_counts.assign(nx, 0);
  rep.t_counts.assign(nc, std::vector<std::uint64_t>(nx, 0));
  rep.t_prime_counts.assign(nc, std::vector<std::uint64_t>(nx, 0));

  // Fixed thresholds x^c as exact integer ceilings, one per (c, x) pair;
  // they grow with x, which lets the inner scan stop at the first miss.
  std::vector<std::vector<std::uint64_t>> thr(nc, std::vector<std::uint64_t>(nx));
  for (std::size_t ci = 0; ci < nc; ++ci)
    for (std::size_t xi = 0; xi < nx; ++xi) thr[ci][xi] = pow_ceil_threshold(xs[xi], cs[ci]);

  std::vector<std::uint64_t> running_t(nc, 0);
  std::uint64_t pi = 0;
  std::size_t cursor = 0;  // first checkpoint not yet passed

  const auto snapshot = [&](std::size_t j) {
    rep.pi_counts[j] = pi;
    for (std::size_t ci = 0; ci < nc; ++ci) rep.t_counts[ci][j] = running_t[ci];
  };

  FactoredPrimeStream st(xs.back(), cfg);
  FactoredShiftedPrime rec;
  while (st.next(rec)) {
    while (cursor < nx && rec.p > xs[cursor]) snapshot(cursor++);
    ++pi;
    const auto lq = std::log(static_cast<long double>(rec.lpf));
    const auto lp = std::log(static_cast<long double>(rec.p));
    for (std::size_t ci = 0; ci < nc; ++ci) {
      if (geq_fractional_power_logs(rec.lpf, lq, rec.p, lp, cs[ci])) ++running_t[ci];
      for (std::size_t xi = cursor; xi < nx; ++xi) {
        if (rec.lpf < thr[ci][xi]) break;
        ++rep.t_prime_counts[ci][xi];
      }
    }
  }
  while (cursor < nx) snapshot(cursor++);
  return rep;
}

void write_count_csv(std::ostream& os, const CountReport& report) {
  os << "x,c_num,c_den,pi_x,T,T_prime,gap\n";
  for (std::size_t xi = 0; xi < report.x_checkpoints.size(); ++xi) {
    for (std::size_t ci = 0; ci < report.c_values.size(); ++ci) {
      const std::uint64_t t = report.t_counts[ci][xi];
      const std::uint64_t tp = report.t_prime_counts[ci][xi];
      os << report.x_checkpoints[xi] << ',' << report.c_values[ci].num << ','
         << report.c_values[ci].den << ',' << report.pi_counts[xi] << ',' << t << ',' << tp
         << ',' << (t - tp) << '\n';
    }
  }
}

LSumReport weighted_sum_L(std::uint64_t x, double u, double v, const SieveConfig& cfg) {
  if (x < 2) throw std::invalid_argument("weighted_sum_L: x must be >= 2");
  if (!(u >= 0.0) || !(u < v) || v > static_cast<double>(x))
    throw std::invalid_argument("weighted_sum_L: need 0 <= u < v <= x");
  Kahan acc;
  FactoredPrimeStream st(x, cfg);
  FactoredShiftedPrime rec;
  while (st.next(rec)) {
    for (const auto& [q, k] : rec.factors) {
      if (static_cast<double>(q) > v) break;  // factors ascend, later q only larger
      const double lg = std::log(static_cast<double>(q));
      std::uint64_t pw = q;
      for (std::uint32_t e = 1; e <= k; ++e) {
        const auto pwd = static_cast<double>(pw);
        if (pwd > v) break;
        if (pwd > u) acc.add(lg);
        if (e < k) pw *= q;
      }
    }
  }
  LSumReport out;
  out.x = x;
  out.u = u;
  out.v = v;
  out.value = acc.s;
  return out;
}

double lemma1_ratio(std::uint64_t x, const SieveConfig& cfg) {
  return weighted_sum_L(x, 1.0, static_cast<double>(x), cfg).value / static_cast<double>(x);
}

double lemma2_ratio(std::uint64_t x, const SieveConfig& cfg) {
  const double v = std::sqrt(static_cast<double>(x));
  return weighted_sum_L(x, 1.0, v, cfg).value / (0.5 * static_cast<double>(x));
}

LemmaReport build_lemma_report(std::uint64_t x, const std::vector<Rational>& cs,
                               const SieveConfig& cfg) {
  if (x < 4) throw std::invalid_argument("build_lemma_report: x must be >= 4");
  for (const auto& c : cs) validate_cutoff(c);

  LemmaReport rep;
  rep.x = x;
  rep.c_values = cs;
  rep.t_counts.assign(cs.size(), 0);
  rep.t_prime_counts.assign(cs.size(), 0);
  std::vector<std::uint64_t> thr(cs.size());
  for (std::size_t ci = 0; ci < cs.size(); ++ci) thr[ci] = pow_ceil_threshold(x, cs[ci]);

  const double sq = std::sqrt(static_cast<double>(x));
  Kahan full, half;
  FactoredPrimeStream st(x, cfg);
  FactoredShiftedPrime rec;
  while (st.next(rec)) {
    for (const auto& [q, k] : rec.factors) {
      const double lg = std::log(static_cast<double>(q));
      std::uint64_t pw = q;
      for (std::uint32_t e = 1; e <= k; ++e) {
        full.add(lg);
        if (static_cast<double>(pw) <= sq) half.add(lg);
        if (e < k) pw *= q;
      }
    }
    const auto lq = std::log(static_cast<long double>(rec.lpf));
    const auto lp = std::log(static_cast<long double>(rec.p));
    for (std::size_t ci = 0; ci < cs.size(); ++ci) {
      if (geq_fractional_power_logs(rec.lpf, lq, rec.p, lp, cs[ci])) ++rep.t_counts[ci];
      if (rec.lpf >= thr[ci]) ++rep.t_prime_counts[ci];
    }
  }
  rep.lemma1_ratio = full.s / static_cast<double>(x);
  rep.lemma2_ratio = half.s / (0.5 * static_cast<double>(x));
  return rep;
}

double dyadic_mangoldt_phi_sum(std::uint64_t Q, const SieveConfig& cfg) {
  if (Q < 16) throw std::invalid_argument("dyadic_mangoldt_phi_sum: Q must be >= 16");
  if (Q > cfg.max_limit / 2)
    throw capacity_error("dyadic_mangoldt_phi_sum: 2Q exceeds configured max_limit");
  Kahan acc;
  {
    PrimeStream st(2 * Q, cfg);
    std::uint64_t p;
    while (st.next(p))
      if (p > Q) acc.add(std::log(static_cast<double>(p)) / static_cast<double>(p - 1));
  }
  // Proper prime powers q^e in (Q, 2Q], e >= 2: phi(q^e) = q^e - q^(e-1).
  for (std::uint64_t q : enumerate_primes(isqrt_u64(2 * Q), cfg)) {
    unsigned __int128 pw = static_cast<unsigned __int128>(q) * q;
    while (pw <= 2 * Q) {
      if (pw > Q) {
        const auto val = static_cast<std::uint64_t>(pw);
        acc.add(std::log(static_cast<double>(q)) / static_cast<double>(val - val / q));
      }
      pw *= q;
    }
  }
  return acc.s;
}

double prime_power_tail(std::uint64_t x, const Rational& c, const SieveConfig& cfg) {
  validate_cutoff(c);
  if (x < 2) throw std::invalid_argument("prime_power_tail: x must be >= 2");
  const std::uint64_t t = pow_ceil_threshold(x, c);
  Kahan acc;
  FactoredPrimeStream st(x, cfg);
  FactoredShiftedPrime rec;
  while (st.next(rec)) {
    for (const auto& [q, k] : rec.factors) {
      if (k < 2) continue;
      const double lg = std::log(static_cast<double>(q));
      std::uint64_t pw = q * q;
      for (std::uint32_t e = 2; e <= k; ++e) {
        if (pw >= t) acc.add(lg);
        if (e < k) pw *= q;
      }
    }
  }
  return acc.s;
}

bool prime_power_tail_in_range(const Rational& c) {
  return 4 * c.num > 3 * c.den && c.num < c.den;
}

std::uint64_t EquidistScan::mass() const {
  return std::accumulate(bins.begin(), bins.end(), std::uint64_t{0});
}

namespace {

void divisors_in_window(const std::vector<PrimePower>& fs, std::size_t i, std::uint64_t d,
                        std::uint64_t m_lo, std::uint64_t m_hi,
                        std::vector<std::uint64_t>& counts) {
  if (i == fs.size()) {
    if (d >= m_lo) ++counts[d - m_lo];
    return;
  }
  const auto [q, k] = fs[i];
  std::uint64_t cur = d;
  for (std::uint32_t e = 0;; ++e) {
    divisors_in_window(fs, i + 1, cur, m_lo, m_hi, counts);
    if (e == k || cur > m_hi / q) break;  // any deeper product would leave the window
    cur *= q;
  }
}

}  // namespace

EquidistScan equidistribution_scan(std::uint64_t x, double theta, double k1, double k2,
                                   const SieveConfig& cfg) {
  if (!(theta > 0.0) || !(theta < 17.0 / 32.0))
    throw std::domain_error("equidistribution_scan: theta must lie in (0, 17/32)");
  if (!(k1 > 0.0) || !(k1 < k2))
    throw std::invalid_argument("equidistribution_scan: need 0 < k1 < k2");
  if (x < 2) throw std::invalid_argument("equidistribution_scan: x must be >= 2");
  const long double q_lo =
      std::pow(static_cast<long double>(x), static_cast<long double>(theta));
  if (q_lo < 10.0L)
    throw std::domain_error("equidistribution_scan: window too small, x^theta must be >= 10");

  EquidistScan scan;
  scan.x = x;
  scan.theta = theta;
  scan.q_lo = static_cast<double>(q_lo);
  scan.m_lo = static_cast<std::uint64_t>(q_lo) + 1;
  scan.m_hi = static_cast<std::uint64_t>(2.0L * q_lo);
  scan.k1 = k1;
  scan.k2 = k2;
  scan.bins.assign(61, 0);  // [0, 3) in 0.05 steps; the last bin absorbs r >= 3

  std::vector<std::uint64_t> counts(scan.m_hi - scan.m_lo + 1, 0);
  FactoredPrimeStream st(x, cfg);
  FactoredShiftedPrime rec;
  while (st.next(rec)) {
    ++scan.pi_x;
    divisors_in_window(rec.factors, 0, 1, scan.m_lo, scan.m_hi, counts);
  }

  for (std::uint64_t m = scan.m_lo; m <= scan.m_hi; ++m) {
    const double r = static_cast<double>(counts[m - scan.m_lo]) *
                     static_cast<double>(euler_phi(m)) / static_cast<double>(scan.pi_x);
    auto bin = static_cast<std::size_t>(r / scan.bin_width);
    if (bin >= scan.bins.size()) bin = scan.bins.size() - 1;
    ++scan.bins[bin];
    if (r < k1) ++scan.exceptions_below;
    if (r > k2) ++scan.exceptions_above;
  }
  return scan;
}

}  // namespace spl
