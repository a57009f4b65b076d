#include "fwipm/problem.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <utility>

#include <json.hpp>

#include "fwipm/error.h"
#include "fwipm/random.h"

namespace fwipm {

using nlohmann::json;

std::string format_double(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  std::string out(buf);
  if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
  return out;
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kMaxIterations: return "MaxIterations";
    case SolveStatus::kDegenerate: return "Degenerate";
    case SolveStatus::kUnbounded: return "Unbounded";
  }
  return "Unknown";
}

namespace {

[[noreturn]] void parse_fail(const std::string& locus, const std::string& what) {
  throw Error(ErrorCode::kParseError, locus + ": " + what);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Convert the byte offset into a line number for the diagnostic.
    const std::size_t limit = std::min<std::size_t>(e.byte, text.size());
    int line = 1;
    for (std::size_t i = 0; i < limit; ++i) line += text[i] == '\n';
    parse_fail("line " + std::to_string(line), "malformed document");
  }
}

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) parse_fail(key, "missing field");
  return *it;
}

int read_int(const json& v, const std::string& locus) {
  if (!v.is_number_integer()) parse_fail(locus, "expected an integer");
  const auto value = v.get<long long>();
  if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
    parse_fail(locus, "integer out of range");
  }
  return static_cast<int>(value);
}

double read_double(const json& v, const std::string& locus) {
  if (!v.is_number()) parse_fail(locus, "expected a number");
  return v.get<double>();
}

SymMat read_matrix(const json& v, int n, const std::string& locus) {
  if (!v.is_array()) parse_fail(locus, "expected an array of [i, j, value] entries");
  SymMat out(n);
  std::set<std::pair<int, int>> seen;
  for (std::size_t e = 0; e < v.size(); ++e) {
    const std::string where = locus + "[" + std::to_string(e) + "]";
    const json& entry = v[e];
    if (!entry.is_array() || entry.size() != 3) {
      parse_fail(where, "expected [i, j, value]");
    }
    const int i = read_int(entry[0], where + "[0]");
    const int j = read_int(entry[1], where + "[1]");
    const double value = read_double(entry[2], where + "[2]");
    if (i < 0 || j < 0 || i >= n || j >= n) {
      parse_fail(where, "index out of range for n=" + std::to_string(n));
    }
    if (i > j) {
      throw Error(ErrorCode::kAsymmetricEntry,
                  where + ": entry (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") is below the diagonal");
    }
    if (!seen.emplace(i, j).second) {
      parse_fail(where, "duplicate entry (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
    }
    out.set(i, j, value);
  }
  return out;
}

void write_matrix(std::string& out, const SymMat& x) {
  out += '[';
  bool first = true;
  for (int i = 0; i < x.dim(); ++i) {
    for (int j = i; j < x.dim(); ++j) {
      const double v = x(i, j);
      if (v == 0.0 && !std::signbit(v)) continue;
      if (!first) out += ", ";
      first = false;
      out += '[' + std::to_string(i) + ", " + std::to_string(j) + ", " +
             format_double(v) + ']';
    }
  }
  out += ']';
}

std::string format_nullable(const std::optional<double>& value) {
  return value ? format_double(*value) : "null";
}

}  // namespace

SdpProblem parse_problem(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) parse_fail("line 1", "expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "n" && key != "m" && key != "b" && key != "A0" && key != "A" &&
        key != "X0" && key != "eta0") {
      parse_fail(key, "unknown field");
    }
  }
  SdpProblem p;
  p.n = read_int(require(doc, "n"), "n");
  p.m = read_int(require(doc, "m"), "m");
  if (p.n < 1) parse_fail("n", "must be >= 1");
  if (p.m < 1) parse_fail("m", "must be >= 1");

  const json& b = require(doc, "b");
  if (!b.is_array()) parse_fail("b", "expected an array");
  if (static_cast<int>(b.size()) != p.m) {
    throw Error(ErrorCode::kDimMismatch, "b has " + std::to_string(b.size()) +
                                             " entries, m=" + std::to_string(p.m));
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    p.b.push_back(read_double(b[i], "b[" + std::to_string(i) + "]"));
  }

  p.a0 = read_matrix(require(doc, "A0"), p.n, "A0");
  const json& a = require(doc, "A");
  if (!a.is_array()) parse_fail("A", "expected an array of matrices");
  if (static_cast<int>(a.size()) != p.m) {
    throw Error(ErrorCode::kDimMismatch, "A has " + std::to_string(a.size()) +
                                             " matrices, m=" + std::to_string(p.m));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    p.a.push_back(read_matrix(a[i], p.n, "A[" + std::to_string(i) + "]"));
  }
  if (auto it = doc.find("X0"); it != doc.end() && !it->is_null()) {
    p.x0 = read_matrix(*it, p.n, "X0");
  }
  if (auto it = doc.find("eta0"); it != doc.end() && !it->is_null()) {
    p.eta0 = read_double(*it, "eta0");
    if (!(*p.eta0 > 0.0)) parse_fail("eta0", "must be positive");
  }
  return p;
}

std::string write_problem(const SdpProblem& p) {
  std::string out = "{\n";
  out += "  \"n\": " + std::to_string(p.n) + ",\n";
  out += "  \"m\": " + std::to_string(p.m) + ",\n";
  out += "  \"b\": [";
  for (std::size_t i = 0; i < p.b.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(p.b[i]);
  }
  out += "],\n  \"A0\": ";
  write_matrix(out, p.a0);
  out += ",\n  \"A\": [";
  for (std::size_t i = 0; i < p.a.size(); ++i) {
    out += i > 0 ? ",\n    " : "\n    ";
    write_matrix(out, p.a[i]);
  }
  out += "\n  ]";
  if (p.x0) {
    out += ",\n  \"X0\": ";
    write_matrix(out, *p.x0);
  }
  if (p.eta0) out += ",\n  \"eta0\": " + format_double(*p.eta0);
  out += "\n}\n";
  return out;
}

SdpProblem generate_instance(int n, int m, double eta0, std::uint64_t seed) {
  if (n < 2 || m < 1 || !(eta0 > 0.0)) {
    throw Error(ErrorCode::kBadDims, "generate_instance needs n >= 2, m >= 1, eta0 > 0");
  }
  Rng rng(seed);
  SdpProblem p;
  p.n = n;
  p.m = m;
  for (int i = 0; i < m; ++i) {
    SymMat a(n);
    for (int r = 0; r < n; ++r) {
      for (int c = r; c < n; ++c) a.set(r, c, rng.uniform(-1.0, 1.0));
    }
    p.b.push_back(a.trace());
    p.a.push_back(std::move(a));
  }
  std::vector<double> y(m);
  for (double& yi : y) yi = rng.uniform(-1.0, 1.0);
  SymMat a0 = SymMat::identity(n);
  for (int i = 0; i < m; ++i) a0 += y[i] * p.a[i];
  for (double& v : a0.packed()) v /= eta0;
  p.a0 = std::move(a0);
  p.x0 = SymMat::identity(n);
  p.eta0 = eta0;
  return p;
}

ValidationResult validate_problem(const SdpProblem& p) {
  ValidationResult result;
  auto& findings = result.findings;
  if (static_cast<int>(p.a.size()) != p.m || static_cast<int>(p.b.size()) != p.m) {
    findings.push_back("dimension: A/b sizes do not match m=" + std::to_string(p.m));
  }
  auto check_matrix = [&](const SymMat& x, const std::string& name) {
    if (x.dim() != p.n) {
      findings.push_back("dimension: " + name + " is " + std::to_string(x.dim()) +
                         "x" + std::to_string(x.dim()) + ", n=" + std::to_string(p.n));
    }
    for (double v : x.packed()) {
      if (!std::isfinite(v)) {
        findings.push_back("non-finite: " + name + " has a non-finite entry");
        break;
      }
    }
  };
  check_matrix(p.a0, "A0");
  for (std::size_t i = 0; i < p.a.size(); ++i) {
    check_matrix(p.a[i], "A[" + std::to_string(i) + "]");
  }
  for (std::size_t i = 0; i < p.b.size(); ++i) {
    if (!std::isfinite(p.b[i])) {
      findings.push_back("non-finite: b[" + std::to_string(i) + "]");
    }
  }
  if (p.eta0 && !(*p.eta0 > 0.0 && std::isfinite(*p.eta0))) {
    findings.push_back("eta0: must be positive and finite");
  }
  if (!findings.empty()) return result;

  const std::size_t m = p.a.size();
  result.identity_feasible = true;
  for (std::size_t i = 0; i < m; ++i) {
    if (!within_feasibility(p.a[i].trace(), p.b[i])) result.identity_feasible = false;
  }
  if (p.x0) {
    check_matrix(*p.x0, "X0");
    if (!findings.empty()) return result;
    if (!try_cholesky(p.x0->dense())) {
      findings.push_back("X0-infeasible: X0 is not positive definite");
    }
    for (std::size_t i = 0; i < m; ++i) {
      const double lhs = frob_inner(p.a[i], *p.x0);
      if (!within_feasibility(lhs, p.b[i])) {
        findings.push_back("X0-infeasible: <A[" + std::to_string(i) + "], X0> = " +
                           format_double(lhs) + ", b = " + format_double(p.b[i]));
      }
    }
  }
  return result;
}

std::string write_report(const SolutionReport& r) {
  std::string out = "{\n  \"X_final\": ";
  write_matrix(out, r.x_final);
  out += ",\n  \"n\": " + std::to_string(r.x_final.dim());
  out += ",\n  \"objective\": " + format_double(r.objective);
  out += ",\n  \"gap\": " + format_nullable(r.gap);
  out += ",\n  \"gap_valid\": " + std::string(r.gap_valid ? "true" : "false");
  out += ",\n  \"outer_iters\": " + std::to_string(r.outer_iters);
  out += ",\n  \"predictor_count\": " + std::to_string(r.predictor_count);
  out += ",\n  \"corrector_count\": " + std::to_string(r.corrector_count);
  out += ",\n  \"status\": \"" + std::string(to_string(r.status)) + "\"\n}\n";
  return out;
}

SolutionReport parse_report(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) parse_fail("line 1", "expected a JSON object");
  SolutionReport r;
  const int n = read_int(require(doc, "n"), "n");
  if (n < 1) parse_fail("n", "must be >= 1");
  r.x_final = read_matrix(require(doc, "X_final"), n, "X_final");
  r.objective = read_double(require(doc, "objective"), "objective");
  const json& gap = require(doc, "gap");
  if (!gap.is_null()) r.gap = read_double(gap, "gap");
  const json& valid = require(doc, "gap_valid");
  if (!valid.is_boolean()) parse_fail("gap_valid", "expected a boolean");
  r.gap_valid = valid.get<bool>();
  r.outer_iters = read_int(require(doc, "outer_iters"), "outer_iters");
  r.predictor_count = read_int(require(doc, "predictor_count"), "predictor_count");
  r.corrector_count = read_int(require(doc, "corrector_count"), "corrector_count");
  const json& status = require(doc, "status");
  if (!status.is_string()) parse_fail("status", "expected a string");
  const std::string s = status.get<std::string>();
  if (s == "Optimal") {
    r.status = SolveStatus::kOptimal;
  } else if (s == "MaxIterations") {
    r.status = SolveStatus::kMaxIterations;
  } else if (s == "Degenerate") {
    r.status = SolveStatus::kDegenerate;
  } else if (s == "Unbounded") {
    r.status = SolveStatus::kUnbounded;
  } else {
    parse_fail("status", "unknown status '" + s + "'");
  }
  return r;
}

}  // namespace fwipm
