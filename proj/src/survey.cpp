#include "spl/survey.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "spl/format.hpp"

namespace spl {

const char* ref_curve_name(RefCurve curve) {
  switch (curve) {
    case RefCurve::goldfeld_half: return "goldfeld_half";
    case RefCurve::luca_lower: return "luca_lower";
    case RefCurve::feng_wu: return "feng_wu";
    case RefCurve::liu_wu_xi: return "liu_wu_xi";
    case RefCurve::conjecture1: return "conjecture1";
    case RefCurve::pomerance: return "pomerance";
  }
  return "?";
}

std::uint64_t conjecture_step_index(const Rational& c) {
  if (c.num == 0 || c.num >= c.den)
    throw std::invalid_argument("conjecture_step_index: need 0 < c < 1");
  // k <= (den-1)/num < k+1  iff  1/(k+1) <= num/den < 1/k.
  return (c.den - 1) / c.num;
}

std::optional<double> reference_value(RefCurve curve, const Rational& c,
                                      const DickmanTable& table,
                                      const SurveyThresholds& th) {
  if (c.num == 0 || c.num >= c.den)
    throw std::invalid_argument("reference_value: need 0 < c < 1");
  const double inv = static_cast<double>(c.den) / static_cast<double>(c.num);
  const bool covered = inv <= table.u_max() + 1e-9;
  switch (curve) {
    case RefCurve::goldfeld_half:
      if (2 * c.num > c.den) return std::nullopt;
      return 0.5;
    case RefCurve::luca_lower:
      if (2 * c.num > c.den) return std::nullopt;
      return 1.0 - c.value();
    case RefCurve::feng_wu:
      if (!(c.value() < th.theta1) || !covered) return std::nullopt;
      return 1.0 - 4.0 * table.rho_over_t_integral(inv - 1.0, inv);
    case RefCurve::liu_wu_xi:
      if (!(c.value() < th.theta2) || !covered) return std::nullopt;
      return 1.0 - 4.0 * table.rho(inv);
    case RefCurve::conjecture1:
      return 1.0 - 1.0 / static_cast<double>(conjecture_step_index(c) + 1);
    case RefCurve::pomerance:
      if (!covered) return std::nullopt;
      return 1.0 - table.rho(inv);
  }
  return std::nullopt;
}

double SurveyReport::density_T(std::size_t ci, std::size_t xi) const {
  return static_cast<double>(grid.t_counts[ci][xi]) /
         static_cast<double>(grid.pi_counts[xi]);
}

double SurveyReport::density_T_prime(std::size_t ci, std::size_t xi) const {
  return static_cast<double>(grid.t_prime_counts[ci][xi]) /
         static_cast<double>(grid.pi_counts[xi]);
}

std::optional<double> SurveyReport::reference(RefCurve curve, std::size_t ci) const {
  return references[static_cast<std::size_t>(curve)][ci];
}

SurveyReport run_survey(const SurveyParams& params, const DickmanTable& table) {
  const auto t0 = std::chrono::steady_clock::now();
  if (table.u_max() < 5.0)
    throw std::domain_error("run_survey: rho table must cover u_max >= 5");
  for (const auto& c : params.cs) {
    if (c.num == 0 || c.num >= c.den)
      throw std::invalid_argument("run_survey: cutoffs must satisfy 0 < c < 1");
    const double inv = static_cast<double>(c.den) / static_cast<double>(c.num);
    if (inv > table.u_max() + 1e-9)
      throw std::domain_error("run_survey: cutoff " + c.str() +
                              " needs rho table coverage u_max >= " + format_double(inv));
  }

  SurveyReport rep;
  rep.thresholds.theta1 = solve_theta1(table).theta;
  rep.thresholds.theta2 = solve_theta2(table).theta;
  rep.grid = build_count_report(params.xs, params.cs, params.sieve);
  for (std::size_t curve = 0; curve < kRefCurveCount; ++curve) {
    rep.references[curve].reserve(params.cs.size());
    for (const auto& c : params.cs)
      rep.references[curve].push_back(
          reference_value(static_cast<RefCurve>(curve), c, table, rep.thresholds));
  }
  rep.threads = params.sieve.threads;
  rep.segment_bytes = params.sieve.segment_bytes;
  rep.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace {

std::string opt_str(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("NA");
}

}  // namespace

void write_survey_csv(std::ostream& os, const SurveyReport& report) {
  os << "x,c_num,c_den,pi,T,Tp,dens_T,dens_Tp,ref_luca,ref_fengwu,ref_lwx,"
        "ref_conj1,ref_pomerance\n";
  const auto& grid = report.grid;
  for (std::size_t xi = 0; xi < grid.x_checkpoints.size(); ++xi) {
    for (std::size_t ci = 0; ci < grid.c_values.size(); ++ci) {
      os << grid.x_checkpoints[xi] << ',' << grid.c_values[ci].num << ','
         << grid.c_values[ci].den << ',' << grid.pi_counts[xi] << ','
         << grid.t_counts[ci][xi] << ',' << grid.t_prime_counts[ci][xi] << ','
         << format_double(report.density_T(ci, xi)) << ','
         << format_double(report.density_T_prime(ci, xi)) << ','
         << opt_str(report.reference(RefCurve::luca_lower, ci)) << ','
         << opt_str(report.reference(RefCurve::feng_wu, ci)) << ','
         << opt_str(report.reference(RefCurve::liu_wu_xi, ci)) << ','
         << opt_str(report.reference(RefCurve::conjecture1, ci)) << ','
         << opt_str(report.reference(RefCurve::pomerance, ci)) << '\n';
    }
  }
}

void write_survey_json(std::ostream& os, const SurveyReport& report) {
  using nlohmann::json;
  const auto& grid = report.grid;

  json j;
  j["version"] = report.version;
  j["thresholds"] = {{"theta1", report.thresholds.theta1},
                     {"theta2", report.thresholds.theta2}};
  j["run"] = {{"threads", report.threads},
              {"segment_bytes", report.segment_bytes},
              {"duration_seconds", report.duration_seconds}};
  j["checkpoints"] = grid.x_checkpoints;
  j["curve_note"] = "asymptotic reference, not finite-x bound";

  // Nested by cutoff, then by checkpoint.
  json cutoffs = json::array();
  for (std::size_t ci = 0; ci < grid.c_values.size(); ++ci) {
    const auto& c = grid.c_values[ci];
    json block;
    block["c_num"] = c.num;
    block["c_den"] = c.den;
    block["value"] = c.value();
    json refs = json::object();
    for (std::size_t curve = 0; curve < kRefCurveCount; ++curve) {
      const auto& v = report.references[curve][ci];
      refs[ref_curve_name(static_cast<RefCurve>(curve))] = v ? json(*v) : json(nullptr);
    }
    block["references"] = refs;
    json by_x = json::array();
    for (std::size_t xi = 0; xi < grid.x_checkpoints.size(); ++xi) {
      json cell;
      cell["x"] = grid.x_checkpoints[xi];
      cell["pi"] = grid.pi_counts[xi];
      cell["T"] = grid.t_counts[ci][xi];
      cell["Tp"] = grid.t_prime_counts[ci][xi];
      const double dt = report.density_T(ci, xi);
      const double dtp = report.density_T_prime(ci, xi);
      cell["dens_T"] = dt;
      cell["dens_Tp"] = dtp;
      json delta_t = json::object(), delta_tp = json::object();
      for (std::size_t curve = 0; curve < kRefCurveCount; ++curve) {
        const auto& ref = report.references[curve][ci];
        const char* name = ref_curve_name(static_cast<RefCurve>(curve));
        delta_t[name] = ref ? json(dt - *ref) : json(nullptr);
        delta_tp[name] = ref ? json(dtp - *ref) : json(nullptr);
      }
      cell["delta_T"] = delta_t;
      cell["delta_Tp"] = delta_tp;
      by_x.push_back(cell);
    }
    block["by_x"] = by_x;
    cutoffs.push_back(block);
  }
  j["cutoffs"] = cutoffs;

  os << j.dump(2) << '\n';
}

void write_density_plot(std::ostream& os, const SurveyReport& report) {
  os << "# c empirical_T empirical_Tprime pomerance conjecture1\n";
  const auto& grid = report.grid;
  if (grid.x_checkpoints.empty()) return;
  const std::size_t xi = grid.x_checkpoints.size() - 1;
  for (std::size_t ci = 0; ci < grid.c_values.size(); ++ci) {
    os << format_double(grid.c_values[ci].value()) << ' '
       << format_double(report.density_T(ci, xi)) << ' '
       << format_double(report.density_T_prime(ci, xi)) << ' '
       << opt_str(report.reference(RefCurve::pomerance, ci)) << ' '
       << opt_str(report.reference(RefCurve::conjecture1, ci)) << '\n';
  }
}

void emit_survey(const SurveyReport& report, const std::string& path,
                 const std::string& format) {
  if (format != "csv" && format != "json")
    throw std::invalid_argument("emit_survey: format must be csv or json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_survey: cannot open " + path);
  if (format == "csv")
    write_survey_csv(out, report);
  else
    write_survey_json(out, report);
  out.flush();
  if (!out) throw std::runtime_error("emit_survey: write failed for " + path);

  const std::filesystem::path main_path(path);
  const std::filesystem::path dat_path = main_path.parent_path() / "density_vs_c.dat";
  std::ofstream dat(dat_path, std::ios::binary);
  if (!dat) throw std::runtime_error("emit_survey: cannot open " + dat_path.string());
  write_density_plot(dat, report);
  dat.flush();
  if (!dat) throw std::runtime_error("emit_survey: write failed for " + dat_path.string());
}

}  // namespace spl
