#include "spl/dickman.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "spl/errors.hpp"

namespace spl {

namespace {

// Domain checks tolerate rounding-level overshoot (e.g. 1/theta landing an
// ulp past u_max) by clamping; anything larger is a genuine domain error.
constexpr double kDomainSlack = 1e-9;

void put_u32(std::ostream& os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 4);
}

void put_f64(std::ostream& os, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  os.write(b, 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw std::runtime_error("rho table: truncated stream");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw std::runtime_error("rho table: truncated stream");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

double DickmanTable::rho(double u) const {
  const double um = u_max();
  if (!(u >= 0.0) || u > um + kDomainSlack)
    throw std::domain_error("rho: u outside [0, u_max]");
  if (u > um) u = um;
  if (u <= 1.0) return 1.0;
  auto k = static_cast<std::size_t>(u);
  if (k >= pieces_.size()) k = pieces_.size() - 1;
  return pieces_[k].eval(u);
}

double DickmanTable::rho_integral(double a, double b) const {
  const double um = u_max();
  if (!(a >= 0.0) || !(b >= a) || b > um + kDomainSlack)
    throw std::domain_error("rho_integral: need 0 <= a <= b <= u_max");
  if (b > um) b = um;
  double total = 0.0;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const double lo = std::max(a, static_cast<double>(k));
    const double hi = std::min(b, static_cast<double>(k + 1));
    if (lo < hi) total += anti_[k].eval(hi) - anti_[k].eval(lo);
  }
  return total;
}

double DickmanTable::rho_over_t_integral(double a, double b) const {
  const double um = u_max();
  if (!(a > 0.0) || !(b >= a) || b > um + kDomainSlack)
    throw std::domain_error("rho_over_t_integral: need 0 < a <= b <= u_max");
  if (b > um) b = um;
  double total = 0.0;
  // rho == 1 on (0, 1], so that stretch integrates to a logarithm exactly.
  const double hi0 = std::min(b, 1.0);
  if (a < hi0) total += std::log(hi0 / a);
  for (std::size_t k = 1; k < pieces_.size(); ++k) {
    const double lo = std::max(a, static_cast<double>(k));
    const double hi = std::min(b, static_cast<double>(k + 1));
    if (lo < hi) total += anti_over_t_[k - 1].eval(hi) - anti_over_t_[k - 1].eval(lo);
  }
  return total;
}

void DickmanTable::finalize(double tol_request) {
  anti_.clear();
  anti_over_t_.clear();
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    anti_.push_back(pieces_[k].antiderivative());
    if (k >= 1) {
      const auto& piece = pieces_[k];
      anti_over_t_.push_back(
          cheb::fit(static_cast<double>(k), static_cast<double>(k + 1), degree_,
                    [&piece](double t) { return piece.eval(t) / t; })
              .antiderivative());
    }
  }
  // Error certificate. Writing err_k for the bound on piece k:
  //   err_k = err_{k-1} * (1 + ln(1 + 1/k)) + tau_k
  // (the value rho(k) and the integrand rho(t-1)/t both inherit err_{k-1},
  // and int_k^{k+1} dt/t = ln(1 + 1/k)), where tau_k covers the Chebyshev
  // truncation of piece k (10x its coefficient tail) plus a rounding floor.
  double err = 0.0;
  for (std::size_t k = 1; k < pieces_.size(); ++k) {
    const double tau = 10.0 * pieces_[k].tail_bound(3) + 1e-16;
    err = err * (1.0 + std::log1p(1.0 / static_cast<double>(k))) + tau;
  }
  tol_ = err;
  if (tol_ > tol_request)
    throw precision_error("rho table: requested tolerance not certified", tol_);
}

DickmanTable build_rho_table(double u_max, double tol, int degree) {
  if (!(u_max >= 2.0)) throw std::invalid_argument("build_rho_table: u_max must be >= 2");
  if (u_max > 10000.0) throw std::invalid_argument("build_rho_table: u_max too large");
  if (!(tol >= 1e-15 && tol <= 1e-6))
    throw std::invalid_argument("build_rho_table: tol must lie in [1e-15, 1e-6]");
  if (degree < 8 || degree > 200)
    throw std::invalid_argument("build_rho_table: degree must lie in [8, 200]");

  const auto count = static_cast<std::size_t>(std::ceil(u_max));
  DickmanTable table;
  table.degree_ = degree;

  cheb::Series first;  // rho == 1 on [0, 1]
  first.a = 0.0;
  first.b = 1.0;
  first.coef = {1.0};
  table.pieces_.push_back(first);

  for (std::size_t k = 1; k < count; ++k) {
    const auto& prev = table.pieces_.back();
    const double rho_k = k == 1 ? 1.0 : prev.eval(static_cast<double>(k));
    // rho(u) = rho(k) - int_k^u rho(t-1)/t dt on [k, k+1].
    const auto integrand = [&prev](double t) { return prev.eval(t - 1.0) / t; };
    cheb::Series G = cheb::fit(static_cast<double>(k), static_cast<double>(k + 1),
                               degree, integrand)
                         .antiderivative();
    cheb::Series piece;
    piece.a = G.a;
    piece.b = G.b;
    piece.coef.resize(G.coef.size());
    for (std::size_t j = 0; j < G.coef.size(); ++j) piece.coef[j] = -G.coef[j];
    piece.coef[0] += rho_k;
    table.pieces_.push_back(std::move(piece));
  }
  table.finalize(tol);
  return table;
}

void DickmanTable::save(std::ostream& os) const {
  const std::size_t width = static_cast<std::size_t>(degree_) + 2;
  put_u32(os, kDickmanMagic);
  put_u32(os, static_cast<std::uint32_t>(degree_));
  put_u32(os, static_cast<std::uint32_t>(pieces_.size()));
  for (const auto& piece : pieces_) {
    for (std::size_t j = 0; j < width; ++j)
      put_f64(os, j < piece.coef.size() ? piece.coef[j] : 0.0);
  }
  if (!os) throw std::runtime_error("rho table: write failed");
}

DickmanTable DickmanTable::load(std::istream& is) {
  if (get_u32(is) != kDickmanMagic)
    throw std::runtime_error("rho table: bad magic");
  const std::uint32_t degree = get_u32(is);
  const std::uint32_t count = get_u32(is);
  if (degree < 1 || degree > 1000 || count < 2 || count > 100000)
    throw std::runtime_error("rho table: implausible header");
  const std::size_t width = static_cast<std::size_t>(degree) + 2;
  DickmanTable table;
  table.degree_ = static_cast<int>(degree);
  for (std::uint32_t k = 0; k < count; ++k) {
    cheb::Series piece;
    piece.a = static_cast<double>(k);
    piece.b = static_cast<double>(k + 1);
    piece.coef.resize(width);
    for (std::size_t j = 0; j < width; ++j) {
      const double c = get_f64(is);
      if (!std::isfinite(c)) throw std::runtime_error("rho table: corrupt coefficient");
      piece.coef[j] = c;
    }
    table.pieces_.push_back(std::move(piece));
  }
  // Certificate is recomputed from the stored coefficients, never trusted.
  table.finalize(std::numeric_limits<double>::infinity());
  return table;
}

namespace {

template <class F>
ThresholdSolution solve_bracketed(const F& f, double lo, double hi, double width_tol) {
  double flo = f(lo);
  double fhi = f(hi);
  int evals = 2;
  if (flo != 0.0 && fhi != 0.0 && (flo > 0.0) == (fhi > 0.0))
    throw std::runtime_error("threshold solve: no sign change over the bracket");
  int same_side = 0;   // consecutive updates that moved the same endpoint
  int last_side = -1;  // 0 = lo moved, 1 = hi moved
  while (hi - lo > width_tol) {
    double prop = 0.5 * (lo + hi);
    if (same_side < 2) {
      const double denom = fhi - flo;
      if (denom != 0.0) {
        const double sec = lo - flo * (hi - lo) / denom;
        const double margin = 0.01 * (hi - lo);
        if (sec > lo + margin && sec < hi - margin) prop = sec;
      }
    }
    const double fp = f(prop);
    ++evals;
    if (fp == 0.0) {
      lo = hi = prop;
      break;
    }
    const int side = ((fp > 0.0) == (flo > 0.0)) ? 0 : 1;
    if (side == 0) {
      lo = prop;
      flo = fp;
    } else {
      hi = prop;
      fhi = fp;
    }
    same_side = (side == last_side) ? same_side + 1 : 0;
    last_side = side;
  }
  ThresholdSolution s;
  s.bracket_lo = lo;
  s.bracket_hi = hi;
  s.theta = 0.5 * (lo + hi);
  s.residual = f(s.theta);
  s.evaluations = evals + 1;
  return s;
}

void require_coverage(const DickmanTable& table) {
  if (table.u_max() < 5.0)
    throw std::domain_error("threshold solve: table must cover u_max >= 5");
}

}  // namespace

ThresholdSolution solve_theta1(const DickmanTable& table) {
  require_coverage(table);
  const auto f = [&table](double th) {
    const double inv = 1.0 / th;
    return th - 4.0 * table.rho_over_t_integral(inv - 1.0, inv);
  };
  return solve_bracketed(f, 0.2, 0.5, 1e-10);
}

ThresholdSolution solve_theta2(const DickmanTable& table) {
  require_coverage(table);
  const auto f = [&table](double th) { return th - 4.0 * table.rho(1.0 / th); };
  return solve_bracketed(f, 0.2, 0.5, 1e-10);
}

}  // namespace spl
