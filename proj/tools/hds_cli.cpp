#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hds/bounds.hpp"
#include "hds/continuous.hpp"
#include "hds/core_solver.hpp"
#include "hds/verify.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace hds;

int log_level() {
  const char* v = std::getenv("HDS_LOG");
  if (!v) return 0;
  std::string s(v);
  if (s == "trace") return 2;
  if (s == "info") return 1;
  return 0;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[hds] " << msg << "\n";
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write output file: " + path);
  out << text << "\n";
}

Rational default_delta(const std::string& function_type, const Revealed& rev) {
  if (function_type == "sharp_quadratic")
    return delta_sharp(int(rev.m_bar), rev.delta_inf, Rational(rev.lipschitz_L),
                       {sqrt_rational_upper(rev.m_bar), Rational(1, 2)});
  return delta_separable(int(rev.m_bar), rev.delta_inf);
}

json report_for(const SolveReport& rep, const FractionalMinimum& fm,
                const Revealed& rev, const std::string& delta_source) {
  const double lf = induced_lipschitz(rev);
  json r;
  r["mode"] = rep.mode;
  r["delta_used"] = rep.delta_used;
  r["delta_source"] = delta_source;
  r["result"] = {{"f_opt", rep.f_opt},
                 {"z_opt", rep.z_opt},
                 {"ip_solves", rep.ip_solves},
                 {"outer_rounds", rep.outer_rounds},
                 {"gamma_history", rep.gamma_history},
                 {"fixed_zero", rep.fixed_vars.forced_zero},
                 {"fixed_one", rep.fixed_vars.forced_one},
                 {"budget_exhausted", rep.budget_exhausted}};
  r["continuous"] = {{"x_star", fm.x_star},
                     {"f_min", fm.f_min},
                     {"phi", fm.fractional_indices.size()},
                     {"subroutine_calls", fm.subroutine_calls}};
  BigInt cap = ip_count_cap(int(rev.m_bar), Rational(rep.delta_used), Rational(lf));
  r["compliance"] = {
      {"h_norm_ok", rep.h_norm_ok},
      {"ip_count_ok", rep.budget_exhausted || BigInt(rep.ip_solves) <= cap},
      {"frac_calls_ok", fm.subroutine_calls <= 2 * int(fm.x_star.size()) + 1},
      {"phi_ok", (long long)fm.fractional_indices.size() <= rev.m_bar}};
  return r;
}

int cmd_solve(const std::string& instance_path, const std::string& mode,
              double delta_override, long long budget, double tol, int workers,
              const std::string& output) {
  const bool hidden = mode != "known";
  LoadedInstance loaded = load_instance_file(instance_path, hidden);
  info("loaded " + instance_path + " (" + loaded.function_type + ")");

  FractionalMinimum fm =
      hidden ? reduce_to_few_fractionals(loaded.oracle, tol)
             : reduce_known_w(*loaded.instance, loaded.oracle, tol);

  SolveOptions opts;
  std::string delta_source = "bounds";
  if (delta_override >= 0) {
    opts.delta = delta_override;
    delta_source = "override";
  } else {
    opts.delta = to_double(default_delta(loaded.function_type, loaded.oracle.revealed));
  }
  if (budget >= 0) opts.budget = budget;
  opts.workers = workers;
  info("delta = " + std::to_string(opts.delta) + " (" + delta_source + ")");

  SolveReport rep = hidden
                        ? solve_hidden(loaded.oracle, fm, opts)
                        : solve_known_w(*loaded.instance, loaded.oracle, fm, opts);

  json doc;
  doc["config"] = {{"command", "solve"},       {"instance", instance_path},
                   {"mode", rep.mode},         {"delta_override", delta_override},
                   {"budget", budget},         {"continuous_tol", tol},
                   {"workers", workers}};
  doc["report"] = report_for(rep, fm, loaded.oracle.revealed, delta_source);
  write_output(output, doc.dump(2));
  return rep.budget_exhausted ? 2 : 0;
}

int cmd_bounds(int m, long long delta_inf, double L, const std::string& cls,
               double mu, double theta, const std::string& output) {
  Rational lr(L);
  Rational delta = cls == "sharp"
                       ? delta_sharp(m, delta_inf, lr,
                                     {mu > 0 ? Rational(mu) : sqrt_rational_upper(m),
                                      Rational(theta)})
                       : delta_separable(m, delta_inf);
  Revealed rev{m, delta_inf, L};
  Rational lf(induced_lipschitz(rev));
  json doc;
  doc["config"] = {{"command", "bounds"}, {"m", m},        {"delta_inf", delta_inf},
                   {"L", L},              {"class", cls}};
  doc["table"] = {{"delta", to_double(delta)},
                  {"lipschitz_f", to_double(lf)},
                  {"h_inf_cap", to_double(h_inf_cap(delta, lf))},
                  {"ip_count_cap", ip_count_cap(m, delta, lf).str()},
                  {"hs_comparison", hs_comparison_bound(m, delta_inf).str()}};
  write_output(output, doc.dump(2));
  return 0;
}

int cmd_brute(const std::string& instance_path, const std::string& output) {
  LoadedInstance loaded = load_instance_file(instance_path, false);
  BruteForceResult res = brute_force_min(*loaded.instance);
  json doc;
  doc["config"] = {{"command", "brute"}, {"instance", instance_path}};
  doc["f_min"] = res.f_min;
  doc["minimizer_count"] = res.minimizers.size();
  doc["first_minimizer"] = res.minimizers.front();
  write_output(output, doc.dump(2));
  return 0;
}

int cmd_knapsack(const std::string& weights_csv, long long target,
                 const std::string& output) {
  IntVec w;
  std::stringstream ss(weights_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) w.push_back(std::stoll(tok));
  if (w.empty()) throw ParseError("no weights given");

  HiddenInstance inst;
  inst.n = int(w.size());
  inst.m = 1;
  inst.w = {w};
  inst.spec = {FunctionKind::Knapsack, {target}, {1}};
  OracleHandle oracle = make_oracle(inst);

  FractionalMinimum fm = reduce_to_few_fractionals(oracle);
  SolveOptions opts;
  opts.delta = to_double(delta_separable(1, oracle.revealed.delta_inf));
  SolveReport rep = solve_hidden(oracle, fm, opts);

  json doc;
  doc["config"] = {{"command", "knapsack"}, {"weights", w}, {"target", target}};
  doc["feasible"] = rep.f_opt == 0;
  doc["f_opt"] = rep.f_opt;
  doc["z_opt"] = rep.z_opt;
  doc["ip_solves"] = rep.ip_solves;
  write_output(output, doc.dump(2));
  return 0;
}

int cmd_bench(const std::string& family, int m, int n, long long delta_inf, int trials,
              std::uint64_t seed, int bench_n, const std::string& output) {
  using clock = std::chrono::steady_clock;
  auto rows = measure_proximity(family, m, n, delta_inf, trials, seed);
  std::ostringstream csv;
  write_proximity_csv(csv, rows);

  // Serial vs OpenMP enumeration timing on one larger instance.
  HiddenInstance big = make_random_instance(family, m, bench_n, delta_inf, seed);
  auto t0 = clock::now();
  auto serial = brute_force_min_serial(big);
  auto t1 = clock::now();
  auto parallel = brute_force_min_parallel(big);
  auto t2 = clock::now();
  if (serial.f_min != parallel.f_min)
    throw ContractError("serial and parallel enumeration disagree");

  double s_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  double p_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  std::cerr << "enumeration n=" << bench_n << ": serial " << s_ms << " ms, openmp "
            << p_ms << " ms\n";
  write_output(output, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oracle-based convex minimization over the binary hypercube"};
  app.require_subcommand(1);

  std::string instance_path, output, mode = "hidden", cls = "separable";
  std::string weights_csv, family = "separable";
  double delta_override = -1, tol = 0, L = 2, mu = -1, theta = 0.5;
  long long budget = -1, target = 0, delta_inf = 1;
  int workers = 0, m = 1, n = 10, trials = 20, bench_n = 20;
  std::uint64_t seed = 1;

  auto* solve = app.add_subcommand("solve", "run the solver on an instance file");
  solve->add_option("--instance", instance_path)->required();
  solve->add_option("--mode", mode)->check(CLI::IsMember({"hidden", "known"}));
  solve->add_option("--delta", delta_override, "proximity override");
  solve->add_option("--budget", budget, "IP-solve budget");
  solve->add_option("--tol", tol, "continuous tolerance");
  solve->add_option("--workers", workers);
  solve->add_option("--output,-o", output);

  auto* bounds = app.add_subcommand("bounds", "print the bound table");
  bounds->add_option("--m", m)->required();
  bounds->add_option("--delta-inf", delta_inf)->required();
  bounds->add_option("--L", L);
  bounds->add_option("--class", cls)->check(CLI::IsMember({"separable", "sharp"}));
  bounds->add_option("--mu", mu);
  bounds->add_option("--theta", theta);
  bounds->add_option("--output,-o", output);

  auto* brute = app.add_subcommand("brute", "exhaustive ground truth");
  brute->add_option("--instance", instance_path)->required();
  brute->add_option("--output,-o", output);

  auto* knap = app.add_subcommand("knapsack", "knapsack feasibility demo");
  knap->add_option("--weights", weights_csv)->required();
  knap->add_option("--target", target)->required();
  knap->add_option("--output,-o", output);

  auto* bench = app.add_subcommand("bench", "proximity measurements and timing");
  bench->add_option("--family", family)
      ->check(CLI::IsMember({"knapsack", "separable", "sharp"}));
  bench->add_option("--m", m);
  bench->add_option("--n", n);
  bench->add_option("--delta-inf", delta_inf);
  bench->add_option("--trials", trials);
  bench->add_option("--seed", seed);
  bench->add_option("--bench-n", bench_n);
  bench->add_option("--output,-o", output);

  try {
    app.parse(argc, argv);
    if (solve->parsed())
      return cmd_solve(instance_path, mode, delta_override, budget, tol, workers, output);
    if (bounds->parsed()) return cmd_bounds(m, delta_inf, L, cls, mu, theta, output);
    if (brute->parsed()) return cmd_brute(instance_path, output);
    if (knap->parsed()) return cmd_knapsack(weights_csv, target, output);
    if (bench->parsed())
      return cmd_bench(family, m, n, delta_inf, trials, seed, bench_n, output);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 4;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 3;
}
