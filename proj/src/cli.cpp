#include "fwipm/cli.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <tuple>

#include <CLI11.hpp>

#include "fwipm/error.h"
#include "fwipm/ipm.h"
#include "fwipm/oracle.h"
#include "fwipm/problem.h"

namespace fwipm {

namespace {

// Thrown for input errors that map to exit code 1.
struct InputError {
  std::string message;
};

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buffer;
  if (path == "-") {
    buffer << in.rdbuf();
    return buffer.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InputError{"cannot open input file '" + path + "'"};
  buffer << file.rdbuf();
  return buffer.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError{"cannot open output file '" + path + "'"};
  file << text;
  if (!file) throw InputError{"failed writing '" + path + "'"};
}

int default_threads() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

struct SolveArgs {
  std::string input;
  std::string output = "-";
  std::string trace;
  std::string newton = "qr";
  bool nondeterministic = false;
  std::uint64_t seed = 0;
  SolveConfig config;
};

struct GenerateArgs {
  int n = 0;
  int m = 0;
  double eta0 = 1.0;
  std::uint64_t seed = 0;
  std::string output = "-";
};

struct VerifyArgs {
  std::string suite = "all";
  int trials = 500;
  std::uint64_t seed = 1;
  std::optional<int> n;
  std::optional<int> k;
  std::optional<int> m;
};

int exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return 0;
    case SolveStatus::kMaxIterations: return 2;
    case SolveStatus::kDegenerate:
    case SolveStatus::kUnbounded: return 3;
  }
  return 1;
}

int run_solve(SolveArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  a.config.deterministic = !a.nondeterministic;
  a.config.newton_solve = a.newton == "normal" ? NewtonSolve::kNormalEquations
                                               : NewtonSolve::kQr;
  a.config.validate();
  const SdpProblem problem = parse_problem(read_input(a.input, in));
  if (a.config.k > problem.n || problem.n % a.config.k != 0) {
    throw InputError{"--k " + std::to_string(a.config.k) + " must divide n=" +
                     std::to_string(problem.n)};
  }
  const SolveResult result = solve(problem, a.config);
  for (const std::string& w : result.warnings) err << "warning: " << w << '\n';
  if (!a.trace.empty()) {
    std::string text;
    for (const IterationRecord& r : result.trace) text += write_trace_record(r) + '\n';
    write_output(a.trace, text, out);
  }
  write_output(a.output, write_report(make_report(result)), out);
  if (result.status != SolveStatus::kOptimal) {
    err << "status: " << to_string(result.status) << '\n';
  }
  return exit_code(result.status);
}

int run_generate(const GenerateArgs& a, std::ostream& out) {
  if (a.n < 2) throw InputError{"--n must be >= 2"};
  if (a.m < 1) throw InputError{"--m must be >= 1"};
  if (!(a.eta0 > 0.0)) throw InputError{"--eta0 must be > 0"};
  write_output(a.output, write_problem(generate_instance(a.n, a.m, a.eta0, a.seed)), out);
  return 0;
}

int run_verify(const VerifyArgs& a, std::ostream& out) {
  const bool barrier = a.suite == "barrier" || a.suite == "all";
  const bool gradient = a.suite == "gradient" || a.suite == "all";
  const bool decrement = a.suite == "decrement" || a.suite == "all";
  if (!barrier && !gradient && !decrement) {
    throw InputError{"unknown suite '" + a.suite +
                     "' (expected barrier, gradient, decrement or all)"};
  }
  if (a.trials < 1) throw InputError{"--trials must be >= 1"};

  std::vector<std::pair<int, int>> cone_dims = {{4, 2}, {6, 2}, {6, 3}};
  std::vector<std::tuple<int, int, int>> row_dims = {{4, 2, 2}, {6, 3, 3}};
  if (a.n || a.k || a.m) {
    const int n = a.n.value_or(4);
    const int k = a.k.value_or(2);
    const int m = a.m.value_or(2);
    if (k < 2 || k > n || n % k != 0) {
      throw InputError{"need 2 <= k <= n and k | n"};
    }
    if (m < 1) throw InputError{"--m must be >= 1"};
    cone_dims = {{n, k}};
    row_dims = {{n, k, m}};
  }

  std::vector<CheckReport> reports;
  if (barrier) {
    for (const auto& [n, k] : cone_dims) {
      reports.push_back(check_barrier_inequality(n, k, a.trials, a.seed));
      reports.push_back(check_barrier_equality_at_y0(n, k));
    }
  }
  if (gradient) {
    for (const auto& [n, k] : cone_dims) {
      reports.push_back(finite_difference_suite(n, k, a.trials, a.seed));
    }
  }
  if (decrement) {
    for (const auto& [n, k, m] : row_dims) {
      reports.push_back(check_norm_bound(n, k, a.trials, a.seed));
      reports.push_back(check_decrement_relation(n, k, m, a.trials, a.seed));
      reports.push_back(check_decrement_bracket(n, k, m, a.trials, a.seed));
    }
  }
  bool ok = true;
  for (const CheckReport& r : reports) {
    out << write_check_report(r) << '\n';
    ok = ok && r.failures == 0;
  }
  out.flush();
  return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Factor-width interior point solver for semidefinite programs", "fwipm"};
  app.require_subcommand(1);

  SolveArgs sa;
  sa.config.threads = default_threads();
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve a problem file");
  solve_cmd->add_option("input", sa.input, "Problem file ('-' for stdin)")->required();
  solve_cmd->add_option("--k", sa.config.k, "Block size (must divide n)")
      ->check(CLI::Range(2, 1 << 20));
  solve_cmd->add_option("--epsilon", sa.config.epsilon, "Duality gap target");
  solve_cmd->add_option("--sigma", sa.config.sigma, "Predictor fraction in (0,1)");
  solve_cmd->add_option("--max-iters", sa.config.max_outer, "Outer iteration cap")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--threads", sa.config.threads, "Worker threads")
      ->check(CLI::Range(1, 4096));
  solve_cmd->add_option("--decrement-threshold", sa.config.decrement_threshold,
                        "Predictor/corrector switch");
  solve_cmd->add_option("--linesearch-tol", sa.config.linesearch_tol,
                        "Line-search slope tolerance");
  solve_cmd->add_option("--gap-check-tol", sa.config.gap_check_tol,
                        "Dual-slack eigenvalue tolerance");
  solve_cmd->add_option("--newton", sa.newton, "Newton solve route")
      ->check(CLI::IsMember({"qr", "normal"}));
  solve_cmd->add_flag("--nondeterministic", sa.nondeterministic,
                      "Allow unordered block reductions");
  solve_cmd->add_option("--seed", sa.seed, "Accepted for uniformity; solve is deterministic");
  solve_cmd->add_option("--trace", sa.trace, "Trace output path ('-' for stdout)");
  solve_cmd->add_option("--output", sa.output, "Report output path ('-' for stdout)");

  GenerateArgs ga;
  CLI::App* gen_cmd = app.add_subcommand("generate", "Write a random central-path instance");
  gen_cmd->add_option("--n", ga.n, "Matrix dimension")->required();
  gen_cmd->add_option("--m", ga.m, "Number of constraints")->required();
  gen_cmd->add_option("--eta0", ga.eta0, "Path parameter at X0 = I");
  gen_cmd->add_option("--seed", ga.seed, "Generator seed");
  gen_cmd->add_option("--output", ga.output, "Output path ('-' for stdout)");

  VerifyArgs va;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the oracle check suites");
  verify_cmd->add_option("--suite", va.suite, "barrier, gradient, decrement or all");
  verify_cmd->add_option("--trials", va.trials, "Trials per check");
  verify_cmd->add_option("--seed", va.seed, "Sampling seed");
  verify_cmd->add_option("--n", va.n, "Matrix dimension");
  verify_cmd->add_option("--k", va.k, "Block size");
  verify_cmd->add_option("--m", va.m, "Constraint count (decrement suite)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*solve_cmd) return run_solve(sa, in, out, err);
    if (*gen_cmd) return run_generate(ga, out);
    return run_verify(va, out);
  } catch (const InputError& e) {
    err << "error: " << e.message << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace fwipm
