#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "spl/format.hpp"
#include "spl/survey.hpp"

using spl::Rational;
using spl::RefCurve;

namespace {
const spl::DickmanTable& table() {
  static const spl::DickmanTable t = spl::build_rho_table(10.0, 1e-12, 30);
  return t;
}

spl::SurveyThresholds thresholds() {
  static const spl::SurveyThresholds th{spl::solve_theta1(table()).theta,
                                        spl::solve_theta2(table()).theta};
  return th;
}
}  // namespace

TEST_CASE("conjecture step index") {
  CHECK(spl::conjecture_step_index(Rational(1, 2)) == 1);
  CHECK(spl::conjecture_step_index(Rational(1, 3)) == 2);
  CHECK(spl::conjecture_step_index(Rational(2, 5)) == 2);   // 1/3 <= 2/5 < 1/2
  CHECK(spl::conjecture_step_index(Rational(9, 10)) == 1);  // 1/2 <= 9/10 < 1
  CHECK(spl::conjecture_step_index(Rational(1, 10)) == 9);
  CHECK(spl::conjecture_step_index(Rational(3, 20)) == 6);  // 1/7 <= 3/20 < 1/6
}

TEST_CASE("reference curves apply exactly on their validity ranges") {
  const auto& t = table();
  const auto th = thresholds();

  const Rational half(1, 2);
  CHECK(spl::reference_value(RefCurve::goldfeld_half, half, t, th) == 0.5);
  CHECK(spl::reference_value(RefCurve::luca_lower, half, t, th) == 0.5);
  CHECK(*spl::reference_value(RefCurve::pomerance, half, t, th) ==
        doctest::Approx(1.0 - (1.0 - std::log(2.0))).epsilon(1e-12));
  CHECK(*spl::reference_value(RefCurve::conjecture1, half, t, th) == doctest::Approx(0.5));

  // Above 1/2 the two unconditional lower-bound curves drop out.
  const Rational c35(3, 5);
  CHECK_FALSE(spl::reference_value(RefCurve::goldfeld_half, c35, t, th).has_value());
  CHECK_FALSE(spl::reference_value(RefCurve::luca_lower, c35, t, th).has_value());
  CHECK(spl::reference_value(RefCurve::pomerance, c35, t, th).has_value());

  // Threshold-gated curves stop exactly at their thresholds.
  const Rational c_mid(7, 20);  // 0.35 < theta1
  CHECK(spl::reference_value(RefCurve::feng_wu, c_mid, t, th).has_value());
  CHECK(spl::reference_value(RefCurve::liu_wu_xi, c_mid, t, th).has_value());
  const Rational c_between(9, 25);  // theta1 < 0.36 < theta2
  CHECK_FALSE(spl::reference_value(RefCurve::feng_wu, c_between, t, th).has_value());
  CHECK(spl::reference_value(RefCurve::liu_wu_xi, c_between, t, th).has_value());
  const Rational c_above(2, 5);  // 0.4 > theta2
  CHECK_FALSE(spl::reference_value(RefCurve::liu_wu_xi, c_above, t, th).has_value());

  // Formulas at c = 1/4.
  const Rational q(1, 4);
  CHECK(*spl::reference_value(RefCurve::luca_lower, q, t, th) == doctest::Approx(0.75));
  CHECK(*spl::reference_value(RefCurve::conjecture1, q, t, th) == doctest::Approx(0.75));
  CHECK(*spl::reference_value(RefCurve::feng_wu, q, t, th) ==
        doctest::Approx(1.0 - 4.0 * t.rho_over_t_integral(3.0, 4.0)).epsilon(1e-12));
  CHECK(*spl::reference_value(RefCurve::liu_wu_xi, q, t, th) ==
        doctest::Approx(1.0 - 4.0 * t.rho(4.0)).epsilon(1e-12));
  CHECK(*spl::reference_value(RefCurve::pomerance, q, t, th) ==
        doctest::Approx(1.0 - t.rho(4.0)).epsilon(1e-12));

  // 1/c outside the table's domain suppresses rho-based curves.
  const Rational tiny(1, 12);
  CHECK_FALSE(spl::reference_value(RefCurve::pomerance, tiny, t, th).has_value());
  CHECK(spl::reference_value(RefCurve::luca_lower, tiny, t, th).has_value());
}

TEST_CASE("ref curve names") {
  CHECK(std::string(spl::ref_curve_name(RefCurve::goldfeld_half)) == "goldfeld_half");
  CHECK(std::string(spl::ref_curve_name(RefCurve::pomerance)) == "pomerance");
}

TEST_CASE("run_survey composes the count grid with references") {
  spl::SurveyParams params;
  params.xs = {1000, 10000};
  params.cs = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  const auto rep = spl::run_survey(params, table());

  CHECK(rep.version == std::string(spl::kSplVersion));
  CHECK(rep.thresholds.theta1 == doctest::Approx(thresholds().theta1).epsilon(1e-12));
  CHECK(rep.grid.x_checkpoints == params.xs);
  REQUIRE(rep.grid.c_values.size() == 3);

  const auto direct = spl::build_count_report(params.xs, params.cs);
  CHECK(rep.grid.pi_counts == direct.pi_counts);
  CHECK(rep.grid.t_counts == direct.t_counts);
  CHECK(rep.grid.t_prime_counts == direct.t_prime_counts);

  for (std::size_t ci = 0; ci < 3; ++ci) {
    for (std::size_t xi = 0; xi < 2; ++xi) {
      const double dt = rep.density_T(ci, xi);
      const double dtp = rep.density_T_prime(ci, xi);
      CHECK(dt >= 0.0);
      CHECK(dt <= 1.0);
      CHECK(dtp >= 0.0);
      CHECK(dtp <= dt);
      CHECK(dt == doctest::Approx(double(direct.t_counts[ci][xi]) / double(direct.pi_counts[xi])));
    }
    for (std::size_t curve = 0; curve < spl::kRefCurveCount; ++curve) {
      const auto want = spl::reference_value(RefCurve(curve), params.cs[ci], table(), rep.thresholds);
      const auto got = rep.reference(RefCurve(curve), ci);
      CHECK(got.has_value() == want.has_value());
      if (got && want) CHECK(*got == doctest::Approx(*want).epsilon(1e-12));
    }
  }
  CHECK(rep.duration_seconds >= 0.0);
}

TEST_CASE("run_survey rejects cutoffs the table cannot cover") {
  spl::SurveyParams params;
  params.xs = {1000};
  params.cs = {Rational(1, 20)};  // needs rho up to 20 > u_max of 10
  try {
    spl::run_survey(params, table());
    FAIL("expected domain_error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("1/20") != std::string::npos);
  }
}

TEST_CASE("survey CSV is byte-identical across sieve thread counts") {
  spl::SurveyParams params;
  params.xs = {1000, 10000, 100000};
  params.cs = {Rational(1, 4), Rational(1, 2), Rational(13, 20)};

  std::string first;
  for (unsigned threads : {1u, 2u, 8u}) {
    params.sieve.threads = threads;
    const auto rep = spl::run_survey(params, table());
    std::ostringstream os;
    spl::write_survey_csv(os, rep);
    if (threads == 1u) {
      first = os.str();
    } else {
      CHECK(os.str() == first);
    }
  }
  REQUIRE(!first.empty());
  CHECK(first.rfind("x,c_num,c_den,pi,T,Tp,dens_T,dens_Tp,ref_luca,ref_fengwu,ref_lwx,"
                    "ref_conj1,ref_pomerance\n",
                    0) == 0);
}

TEST_CASE("survey CSV golden row") {
  spl::SurveyParams params;
  params.xs = {30};
  params.cs = {Rational(1, 2)};
  const auto rep = spl::run_survey(params, table());

  // Stitch the expected row with the same float renderer the writer uses.
  std::string row = "30,1,2,10,5,2,";
  row += spl::format_double(0.5);
  row += ',';
  row += spl::format_double(0.2);
  row += ',';
  row += spl::format_double(0.5);  // luca: 1 - c
  row += ",NA,NA,";                // feng_wu, liu_wu_xi gated out at c = 1/2
  row += spl::format_double(*rep.reference(RefCurve::conjecture1, 0));
  row += ',';
  row += spl::format_double(*rep.reference(RefCurve::pomerance, 0));
  row += '\n';

  std::ostringstream os;
  spl::write_survey_csv(os, rep);
  const std::string got = os.str();
  const auto nl = got.find('\n');
  REQUIRE(nl != std::string::npos);
  CHECK(got.substr(nl + 1) == row);

  // One data row per (c, x) cell.
  spl::SurveyParams grid;
  grid.xs = {100, 1000, 10000, 100000};
  grid.cs = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  const auto rep2 = spl::run_survey(grid, table());
  std::ostringstream os2;
  spl::write_survey_csv(os2, rep2);
  std::istringstream lines(os2.str());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(lines, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 1 + 12);
}

TEST_CASE("survey JSON parses back bit-exact") {
  spl::SurveyParams params;
  params.xs = {1000, 10000};
  params.cs = {Rational(1, 4), Rational(1, 2)};
  const auto rep = spl::run_survey(params, table());

  std::ostringstream os;
  spl::write_survey_json(os, rep);
  const auto doc = nlohmann::json::parse(os.str());

  CHECK(doc.at("version") == std::string(spl::kSplVersion));
  CHECK(doc.at("thresholds").at("theta1").get<double>() == rep.thresholds.theta1);
  CHECK(doc.at("thresholds").at("theta2").get<double>() == rep.thresholds.theta2);
  CHECK(doc.at("run").at("threads").get<unsigned>() == rep.threads);
  CHECK(doc.at("curve_note") == "asymptotic reference, not finite-x bound");
  REQUIRE(doc.at("checkpoints").size() == 2);
  CHECK(doc.at("checkpoints")[0].get<std::uint64_t>() == 1000);

  // Nested by cutoff, then by checkpoint.
  const auto& cutoffs = doc.at("cutoffs");
  REQUIRE(cutoffs.size() == 2);
  CHECK(cutoffs[0].at("c_num").get<std::uint64_t>() == 1);
  CHECK(cutoffs[0].at("c_den").get<std::uint64_t>() == 4);
  CHECK(cutoffs[1].at("c_den").get<std::uint64_t>() == 2);
  for (std::size_t ci = 0; ci < 2; ++ci) {
    const auto& by_x = cutoffs[ci].at("by_x");
    REQUIRE(by_x.size() == 2);
    for (std::size_t xi = 0; xi < 2; ++xi) {
      const auto& cell = by_x[xi];
      CHECK(cell.at("x").get<std::uint64_t>() == params.xs[xi]);
      CHECK(cell.at("pi").get<std::uint64_t>() == rep.grid.pi_counts[xi]);
      CHECK(cell.at("T").get<std::uint64_t>() == rep.grid.t_counts[ci][xi]);
      CHECK(cell.at("Tp").get<std::uint64_t>() == rep.grid.t_prime_counts[ci][xi]);
      CHECK(cell.at("dens_T").get<double>() == rep.density_T(ci, xi));
      CHECK(cell.at("dens_Tp").get<double>() == rep.density_T_prime(ci, xi));
    }
    // Every curve key is present; inapplicable ones are null.
    const auto& refs = cutoffs[ci].at("references");
    for (std::size_t curve = 0; curve < spl::kRefCurveCount; ++curve) {
      const char* name = spl::ref_curve_name(RefCurve(curve));
      REQUIRE(refs.contains(name));
      const auto want = rep.reference(RefCurve(curve), ci);
      if (want) {
        CHECK(refs.at(name).get<double>() == *want);
      } else {
        CHECK(refs.at(name).is_null());
      }
    }
  }
}

TEST_CASE("density plot uses the largest checkpoint") {
  spl::SurveyParams params;
  params.xs = {100, 10000};
  params.cs = {Rational(1, 4), Rational(1, 2)};
  const auto rep = spl::run_survey(params, table());

  std::ostringstream os;
  spl::write_density_plot(os, rep);
  std::istringstream lines(os.str());
  std::string header;
  REQUIRE(std::getline(lines, header));
  CHECK(header == "# c empirical_T empirical_Tprime pomerance conjecture1");

  std::string line;
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    ++rows;
    std::istringstream fields(line);
    double c, dt, dtp;
    REQUIRE((fields >> c >> dt >> dtp));
    const std::size_t ci = rows - 1;
    CHECK(dt == doctest::Approx(rep.density_T(ci, 1)).epsilon(1e-12));
    CHECK(dtp == doctest::Approx(rep.density_T_prime(ci, 1)).epsilon(1e-12));
  }
  CHECK(rows == 2);
}

TEST_CASE("emit_survey writes the table and the plot sidecar") {
  spl::SurveyParams params;
  params.xs = {1000};
  params.cs = {Rational(1, 2)};
  const auto rep = spl::run_survey(params, table());

  const auto dir = std::filesystem::temp_directory_path() / "spl_survey_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  const auto csv_path = dir / "out.csv";
  spl::emit_survey(rep, csv_path.string(), "csv");
  CHECK(std::filesystem::exists(csv_path));
  CHECK(std::filesystem::exists(dir / "density_vs_c.dat"));
  std::ifstream in(csv_path);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header.rfind("x,c_num,c_den,", 0) == 0);

  const auto json_path = dir / "out.json";
  spl::emit_survey(rep, json_path.string(), "json");
  std::ifstream jin(json_path);
  std::stringstream jbuf;
  jbuf << jin.rdbuf();
  CHECK(nlohmann::json::parse(jbuf.str()).contains("cutoffs"));

  CHECK_THROWS_AS(spl::emit_survey(rep, (dir / "x.xml").string(), "xml"), std::invalid_argument);
  CHECK_THROWS_AS(spl::emit_survey(rep, (dir / "missing" / "out.csv").string(), "csv"),
                  std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("T-prime density is antitone in c at a fixed checkpoint") {
  spl::SurveyParams params;
  params.xs = {100000};
  for (int k = 2; k <= 19; ++k) params.cs.push_back(Rational(k, 20));
  const auto rep = spl::run_survey(params, table());
  for (std::size_t ci = 1; ci < params.cs.size(); ++ci) {
    CHECK(rep.density_T_prime(ci, 0) <= rep.density_T_prime(ci - 1, 0));
  }
}
