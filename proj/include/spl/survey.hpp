#pragma once
// Density survey: empirical T / T' densities over an (x, c) grid next to the
// named reference curves they are usually compared against. Curves that do
// not apply at a cutoff (or that the rho table cannot cover) are absent.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spl/arith.hpp"
#include "spl/counting.hpp"
#include "spl/dickman.hpp"

namespace spl {

inline constexpr const char* kSplVersion = "0.1.0";

enum class RefCurve {
  goldfeld_half,  // 1/2,                            c <= 1/2
  luca_lower,     // 1 - c,                          c <= 1/2
  feng_wu,        // 1 - 4*int_{1/c-1}^{1/c} rho(t)/t dt,  c < theta1
  liu_wu_xi,      // 1 - 4*rho(1/c),                 c < theta2
  conjecture1,    // 1 - 1/(k+1),  k with c in [1/(k+1), 1/k)
  pomerance,      // 1 - rho(1/c)
};

inline constexpr std::size_t kRefCurveCount = 6;

const char* ref_curve_name(RefCurve curve);

// The k with 1/(k+1) <= c < 1/k, i.e. floor((den-1)/num) for c = num/den < 1.
std::uint64_t conjecture_step_index(const Rational& c);

struct SurveyThresholds {
  double theta1 = 0.0;
  double theta2 = 0.0;
};

// Value of a curve at cutoff c, or nullopt where the curve does not apply
// (outside its validity range, or 1/c beyond the table's coverage).
std::optional<double> reference_value(RefCurve curve, const Rational& c,
                                      const DickmanTable& table,
                                      const SurveyThresholds& th);

struct SurveyParams {
  std::vector<std::uint64_t> xs;  // strictly ascending checkpoints
  std::vector<Rational> cs;       // cutoffs, each 0 < c < 1
  SieveConfig sieve;
};

struct SurveyReport {
  CountReport grid;
  SurveyThresholds thresholds;
  std::array<std::vector<std::optional<double>>, kRefCurveCount> references;  // [curve][ci]
  double duration_seconds = 0.0;
  unsigned threads = 1;
  std::size_t segment_bytes = 0;
  std::string version = kSplVersion;

  double density_T(std::size_t ci, std::size_t xi) const;
  double density_T_prime(std::size_t ci, std::size_t xi) const;
  std::optional<double> reference(RefCurve curve, std::size_t ci) const;
};

// Requires table coverage u_max >= max(5, 1/min c). Throws std::domain_error
// naming the offending cutoff otherwise.
SurveyReport run_survey(const SurveyParams& params, const DickmanTable& table);

// Header: x,c_num,c_den,pi,T,Tp,dens_T,dens_Tp,ref_luca,ref_fengwu,ref_lwx,
// ref_conj1,ref_pomerance. Missing references render as NA. Byte-identical
// for identical grids regardless of sieve thread count.
void write_survey_csv(std::ostream& os, const SurveyReport& report);

// Same numbers plus run metadata and per-cell deltas against each curve.
void write_survey_json(std::ostream& os, const SurveyReport& report);

// Gnuplot-style table at the largest checkpoint:
// "c empirical_T empirical_Tprime pomerance conjecture1".
void write_density_plot(std::ostream& os, const SurveyReport& report);

// Writes the main table to `path` (format "csv" or "json") and the plot data
// to density_vs_c.dat in the same directory.
void emit_survey(const SurveyReport& report, const std::string& path,
                 const std::string& format);

}  // namespace spl
