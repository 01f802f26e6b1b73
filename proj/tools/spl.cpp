// Command-line front end. Subcommands: primes, count, lsum, lemmas, scan,
// dickman (eval/dump/theta1/theta2/save), survey. Exit codes: 0 success,
// 2 usage problems, 1 runtime failures (I/O, capacity, precision).

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "spl/counting.hpp"
#include "spl/dickman.hpp"
#include "spl/errors.hpp"
#include "spl/format.hpp"
#include "spl/sieve.hpp"
#include "spl/survey.hpp"

namespace {

std::uint64_t parse_count_arg(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (...) {
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  if (pos != s.size() || !(v >= 0.0) || v > 9e15 || v != std::floor(v))
    throw std::invalid_argument("expected a nonnegative integer (scientific form ok), got '" + s + "'");
  return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    if (comma == std::string::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
  return parts;
}

std::vector<std::uint64_t> parse_x_list(const std::string& s) {
  std::vector<std::uint64_t> xs;
  for (const auto& tok : split_commas(s)) xs.push_back(parse_count_arg(tok));
  return xs;
}

std::vector<spl::Rational> parse_c_list(const std::string& s) {
  std::vector<spl::Rational> cs;
  for (const auto& tok : split_commas(s)) cs.push_back(spl::Rational::parse(tok));
  return cs;
}

std::vector<spl::Rational> default_c_grid() {
  std::vector<spl::Rational> cs;
  for (std::uint64_t k = 2; k <= 19; ++k) cs.emplace_back(k, 20);
  return cs;
}

struct GlobalOpts {
  unsigned threads = 1;
  std::uint64_t segment_bytes = spl::SieveConfig{}.segment_bytes;

  spl::SieveConfig sieve() const {
    spl::SieveConfig cfg;
    cfg.threads = threads;
    cfg.segment_bytes = static_cast<std::size_t>(segment_bytes);
    return cfg;
  }
};

struct TableOpts {
  double u_max = 10.0;
  double tol = 1e-12;
  int degree = 30;
  std::string path;  // load instead of build when nonempty

  spl::DickmanTable acquire() const {
    if (!path.empty()) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open rho table " + path);
      return spl::DickmanTable::load(in);
    }
    return spl::build_rho_table(u_max, tol, degree);
  }
};

void add_table_options(CLI::App* cmd, TableOpts& opts) {
  cmd->add_option("--u-max", opts.u_max, "rho table coverage")->capture_default_str();
  cmd->add_option("--tol", opts.tol, "certified tolerance")->capture_default_str();
  cmd->add_option("--degree", opts.degree, "Chebyshev degree per piece")->capture_default_str();
  cmd->add_option("--table", opts.path, "load a saved rho table instead of building");
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);

  // CLI11 silently drops malformed environment values; make them loud.
  if (const char* env = std::getenv("SPL_MEMORY_BUDGET")) {
    const std::string s(env);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s == "0" ||
        s.size() > 19) {
      std::cerr << "error: SPL_MEMORY_BUDGET must be a positive byte count, got '" << s
                << "'\nrun with --help for usage\n";
      return 2;
    }
  }

  CLI::App app{"largest prime factor of p-1: counts, weighted sums, rho numerics, surveys"};
  app.require_subcommand(1);

  GlobalOpts global;
  app.add_option("--threads", global.threads, "sieve worker threads")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  app.add_option("--segment-mem", global.segment_bytes,
                 "per-segment memory budget in bytes")
      ->envname("SPL_MEMORY_BUDGET")
      ->check(CLI::PositiveNumber);

  // primes
  auto* cmd_primes = app.add_subcommand("primes", "print primes up to a limit");
  std::string primes_limit;
  cmd_primes->add_option("--limit", primes_limit, "upper bound (inclusive)")->required();

  // count
  auto* cmd_count = app.add_subcommand("count", "count primes whose p-1 has a large prime factor");
  std::string count_x, count_c = "1/2", count_xlist, count_clist, count_out;
  bool count_fixed = false;
  cmd_count->add_option("--x", count_x, "upper bound");
  cmd_count->add_option("--c", count_c, "cutoff exponent, a/b or decimal")->capture_default_str();
  cmd_count->add_flag("--fixed-threshold", count_fixed,
                      "compare against x^c instead of p^c");
  cmd_count->add_option("--x-list", count_xlist, "comma-separated checkpoints (grid mode)");
  cmd_count->add_option("--c-list", count_clist, "comma-separated cutoffs (grid mode)");
  cmd_count->add_option("--out", count_out, "write the grid as CSV to this path");

  // lsum
  auto* cmd_lsum = app.add_subcommand("lsum", "weighted divisor sum L(x; u, v)");
  std::string lsum_x;
  double lsum_u = 1.0, lsum_v = -1.0;
  cmd_lsum->add_option("--x", lsum_x, "upper bound")->required();
  cmd_lsum->add_option("--u", lsum_u, "window lower bound (exclusive)")->capture_default_str();
  cmd_lsum->add_option("--v", lsum_v, "window upper bound (inclusive), default x");

  // lemmas
  auto* cmd_lemmas = app.add_subcommand("lemmas", "trend diagnostics at one x");
  std::string lemmas_x, lemmas_clist = "1/2";
  cmd_lemmas->add_option("--x", lemmas_x, "upper bound")->required();
  cmd_lemmas->add_option("--c-list", lemmas_clist, "cutoffs for the T/T' split")
      ->capture_default_str();

  // scan
  auto* cmd_scan = app.add_subcommand("scan", "equidistribution ratio scan over moduli");
  std::string scan_x;
  double scan_theta = 0.0, scan_k1 = 0.0, scan_k2 = 0.0;
  cmd_scan->add_option("--x", scan_x, "upper bound")->required();
  cmd_scan
      ->add_option("--theta", scan_theta, "window exponent, moduli in (x^theta, 2x^theta]")
      ->required()
      ->check(CLI::Validator(
          [](std::string& s) {
            try {
              const double v = std::stod(s);
              if (v > 0.0 && v < 17.0 / 32.0) return std::string();
            } catch (...) {
            }
            return std::string("theta must lie in (0, 17/32)");
          },
          "THETA"));
  cmd_scan->add_option("--k1", scan_k1, "lower ratio threshold")->required();
  cmd_scan->add_option("--k2", scan_k2, "upper ratio threshold")->required();

  // dickman
  auto* cmd_dk = app.add_subcommand("dickman", "rho table numerics");
  cmd_dk->require_subcommand(1);
  TableOpts table_opts;
  add_table_options(cmd_dk, table_opts);
  auto* dk_eval = cmd_dk->add_subcommand("eval", "evaluate rho(u)");
  double dk_u = 0.0;
  dk_eval->add_option("--u", dk_u, "argument")->required();
  auto* dk_dump = cmd_dk->add_subcommand("dump", "CSV of rho over its domain");
  double dk_step = 0.1;
  dk_dump->add_option("--step", dk_step, "grid step")->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* dk_t1 = cmd_dk->add_subcommand("theta1", "threshold from the integral equation");
  auto* dk_t2 = cmd_dk->add_subcommand("theta2", "threshold from the pointwise equation");
  auto* dk_save = cmd_dk->add_subcommand("save", "write the table in binary form");
  std::string dk_out;
  dk_save->add_option("--out", dk_out, "output path")->required();

  // survey
  auto* cmd_survey = app.add_subcommand("survey", "density grid vs reference curves");
  std::string sv_xlist = "1e5,1e6,1e7,1e8", sv_clist, sv_out, sv_format = "csv";
  TableOpts sv_table;
  cmd_survey->add_option("--x-list", sv_xlist, "comma-separated checkpoints")
      ->capture_default_str();
  cmd_survey->add_option("--c-list", sv_clist, "comma-separated cutoffs (default k/20)");
  cmd_survey->add_option("--out", sv_out, "output path")->required();
  cmd_survey->add_option("--format", sv_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  add_table_options(cmd_survey, sv_table);

  // Accept global (and dickman table) flags after the subcommand name too.
  for (CLI::App* sub : {cmd_primes, cmd_count, cmd_lsum, cmd_lemmas, cmd_scan, cmd_dk,
                        cmd_survey, dk_eval, dk_dump, dk_t1, dk_t2, dk_save})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(cmd_primes)) {
      spl::PrimeStream st(parse_count_arg(primes_limit), global.sieve());
      std::uint64_t p;
      while (st.next(p)) std::cout << p << '\n';
    } else if (app.got_subcommand(cmd_count)) {
      const bool grid_mode = !count_out.empty();
      if (grid_mode) {
        std::vector<std::uint64_t> xs;
        if (!count_xlist.empty())
          xs = parse_x_list(count_xlist);
        else if (!count_x.empty())
          xs = {parse_count_arg(count_x)};
        else
          throw std::invalid_argument("count: need --x or --x-list");
        std::vector<spl::Rational> cs = !count_clist.empty()
                                            ? parse_c_list(count_clist)
                                            : std::vector<spl::Rational>{spl::Rational::parse(count_c)};
        const auto report = spl::build_count_report(xs, cs, global.sieve());
        std::ofstream out(count_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + count_out);
        spl::write_count_csv(out, report);
        if (!out.flush()) throw std::runtime_error("write failed for " + count_out);
        std::cout << "wrote " << count_out << '\n';
      } else {
        if (count_x.empty()) throw std::invalid_argument("count: need --x");
        const std::uint64_t x = parse_count_arg(count_x);
        const auto c = spl::Rational::parse(count_c);
        if (count_fixed) {
          const auto n = spl::count_T_prime(x, c, global.sieve());
          std::cout << "T'_{" << c.str() << "}(" << x << ") = " << n << '\n';
        } else {
          const auto n = spl::count_T(x, c, global.sieve());
          std::cout << "T_{" << c.str() << "}(" << x << ") = " << n << '\n';
        }
      }
    } else if (app.got_subcommand(cmd_lsum)) {
      const std::uint64_t x = parse_count_arg(lsum_x);
      const double v = lsum_v < 0.0 ? static_cast<double>(x) : lsum_v;
      const auto rep = spl::weighted_sum_L(x, lsum_u, v, global.sieve());
      std::cout << "L(" << x << "; " << spl::format_double(rep.u) << ", "
                << spl::format_double(rep.v) << ") = " << spl::format_double(rep.value)
                << '\n';
    } else if (app.got_subcommand(cmd_lemmas)) {
      const std::uint64_t x = parse_count_arg(lemmas_x);
      const auto cs = parse_c_list(lemmas_clist);
      const auto rep = spl::build_lemma_report(x, cs, global.sieve());
      std::cout << "x = " << x << '\n';
      std::cout << "L(x; 1, x) / x = " << spl::format_double(rep.lemma1_ratio) << '\n';
      std::cout << "L(x; 1, sqrt(x)) / (x/2) = " << spl::format_double(rep.lemma2_ratio)
                << '\n';
      for (std::size_t ci = 0; ci < cs.size(); ++ci) {
        const auto t = rep.t_counts[ci];
        const auto tp = rep.t_prime_counts[ci];
        std::cout << "c = " << cs[ci].str() << ": T = " << t << ", T' = " << tp
                  << ", gap = " << (t - tp) << '\n';
      }
    } else if (app.got_subcommand(cmd_scan)) {
      const std::uint64_t x = parse_count_arg(scan_x);
      const auto scan = spl::equidistribution_scan(x, scan_theta, scan_k1, scan_k2,
                                                   global.sieve());
      std::cout << "x = " << x << "  theta = " << spl::format_double(scan.theta)
                << "  Q = " << spl::format_double(scan.q_lo) << '\n';
      std::cout << "window: " << scan.m_lo << " <= m <= " << scan.m_hi
                << "  pi(x) = " << scan.pi_x << '\n';
      std::cout << "r(m) = pi(x; m, 1) * phi(m) / pi(x)\n";
      std::cout << "exceptions: r < " << spl::format_double(scan.k1) << " at "
                << scan.exceptions_below << " moduli, r > " << spl::format_double(scan.k2)
                << " at " << scan.exceptions_above << " moduli\n";
      std::cout << "histogram (bin width " << spl::format_double(scan.bin_width) << "):\n";
      char edge[64];
      for (std::size_t b = 0; b < scan.bins.size(); ++b) {
        if (scan.bins[b] == 0) continue;
        const double lo = scan.bin_width * static_cast<double>(b);
        if (b + 1 == scan.bins.size())
          std::snprintf(edge, sizeof edge, "[%.2f, inf)", lo);
        else
          std::snprintf(edge, sizeof edge, "[%.2f, %.2f)", lo, lo + scan.bin_width);
        std::cout << edge << "  " << scan.bins[b] << '\n';
      }
    } else if (app.got_subcommand(cmd_dk)) {
      const auto table = table_opts.acquire();
      if (cmd_dk->got_subcommand(dk_eval)) {
        std::cout << spl::format_double(table.rho(dk_u)) << '\n';
      } else if (cmd_dk->got_subcommand(dk_dump)) {
        std::cout << "u,rho\n";
        for (double u = 0.0; u <= table.u_max() + 1e-12; u += dk_step)
          std::cout << spl::format_double(u) << ',' << spl::format_double(table.rho(u))
                    << '\n';
      } else if (cmd_dk->got_subcommand(dk_t1)) {
        const auto sol = spl::solve_theta1(table);
        std::cout << spl::format_double(sol.theta) << '\n';
        std::cerr << "residual " << spl::format_double(sol.residual) << ", bracket width "
                  << spl::format_double(sol.bracket_hi - sol.bracket_lo) << '\n';
      } else if (cmd_dk->got_subcommand(dk_t2)) {
        const auto sol = spl::solve_theta2(table);
        std::cout << spl::format_double(sol.theta) << '\n';
        std::cerr << "residual " << spl::format_double(sol.residual) << ", bracket width "
                  << spl::format_double(sol.bracket_hi - sol.bracket_lo) << '\n';
      } else if (cmd_dk->got_subcommand(dk_save)) {
        std::ofstream out(dk_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + dk_out);
        table.save(out);
        if (!out.flush()) throw std::runtime_error("write failed for " + dk_out);
        std::cout << "wrote " << dk_out << '\n';
      }
    } else if (app.got_subcommand(cmd_survey)) {
      spl::SurveyParams params;
      params.xs = parse_x_list(sv_xlist);
      params.cs = sv_clist.empty() ? default_c_grid() : parse_c_list(sv_clist);
      params.sieve = global.sieve();
      const auto table = sv_table.acquire();
      const auto report = spl::run_survey(params, table);
      spl::emit_survey(report, sv_out, sv_format);
      std::cout << "wrote " << sv_out << " (+ density_vs_c.dat)\n";
      std::cout << "theta1 = " << spl::format_double(report.thresholds.theta1)
                << "  theta2 = " << spl::format_double(report.thresholds.theta2) << '\n';
      if (!report.grid.x_checkpoints.empty()) {
        const std::size_t xi = report.grid.x_checkpoints.size() - 1;
        std::cout << "densities at x = " << report.grid.x_checkpoints[xi] << ":\n";
        for (std::size_t ci = 0; ci < report.grid.c_values.size(); ++ci)
          std::cout << "  c = " << report.grid.c_values[ci].str()
                    << "  T/pi = " << spl::format_double(report.density_T(ci, xi))
                    << "  T'/pi = " << spl::format_double(report.density_T_prime(ci, xi))
                    << '\n';
      }
      std::cerr << "survey took " << spl::format_double(report.duration_seconds) << " s\n";
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\nrun with --help for usage\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\nrun with --help for usage\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
