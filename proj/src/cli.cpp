// Copyright 2026 The etrs Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "etrs/cli.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "etrs/certify.hpp"
#include "etrs/error.hpp"
#include "etrs/fixtures.hpp"
#include "etrs/io.hpp"
#include "etrs/oracle.hpp"
#include "etrs/solve.hpp"

namespace etrs::cli {

namespace {

using io::Json;

int ExitFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoConvergence:
    case ErrorCode::kNumericalBreakdown:
    case ErrorCode::kNotOptimal:
    case ErrorCode::kAlphaDrift:
    case ErrorCode::kRecoveryFailed:
    case ErrorCode::kBothPathsFailed:
      return kExitNoConvergence;
    default:
      return kExitInvalidInput;
  }
}

EtrsProblem LoadProblem(const RunConfig& c) {
  if (!c.example.empty()) return FixtureByName(c.example).problem;
  return io::ProblemFromJson(io::ReadJsonFile(c.input));
}

std::string Vec(const VectorXd& v) {
  std::ostringstream s;
  s << std::setprecision(6) << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v(i);
  s << ")";
  return s.str();
}

std::string Opt(const std::optional<double>& v) {
  if (!v) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << *v;
  return s.str();
}

void Emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

bool Internal(const SolveReport& r) {
  for (const auto& d : r.discrepancies) {
    if (d.kind != "reference") return true;
  }
  return false;
}

void PrintCertificate(std::ostream& out, const Certificate& c) {
  const auto& r = c.residuals;
  out << "certificate: " << (c.verdict.Pass() ? "pass" : "FAIL")
      << "  lambda0 " << c.lambda0 << "  u0 " << c.u0 << "  u " << Vec(c.u) << "\n"
      << "  stationarity " << r.stationarity << "  comp_ball " << r.comp_ball
      << "  comp_linear " << r.comp_linear << "  psd_min_eig " << r.psd_min_eig
      << "  soc_margin " << r.soc_margin << "\n";
}

int RunSolve(const RunConfig& c, std::ostream& out) {
  SolveOptions opt;
  if (c.tol_feas) opt.tol_feas = *c.tol_feas;
  if (c.tol_opt) opt.tol_opt = *c.tol_opt;
  const SolveReport r = SolveFull(LoadProblem(c), opt);
  if (c.format == Format::kJson) {
    Emit(out, io::ReportToJson(r));
  } else {
    out << std::setprecision(10);
    if (r.reduces_to_trs) out << "reduces to TRS (b = 0)\n";
    out << "value " << r.optimal_value << "\n"
        << "x " << Vec(r.optimal_x) << "\n"
        << "path " << SolvePathName(r.path) << "\n"
        << "relaxations: sdp " << Opt(r.relaxations.sdp) << "  lmi "
        << Opt(r.relaxations.lmi) << "  socpsdp " << Opt(r.relaxations.socpsdp)
        << "\n";
    if (r.recovery_case) {
      out << "recovery " << RecoveryCaseName(*r.recovery_case)
          << (r.recovery_ambiguous ? " (ambiguous dispatch)" : "") << "\n";
    }
    if (r.certificate) PrintCertificate(out, *r.certificate);
    if (r.duality) {
      out << "duality: classical gap " << r.duality->classical_gap
          << "  socpsdp gap " << r.duality->socpsdp_gap << "  soc_dual_vanishes "
          << (r.duality->soc_dual_vanishes ? "yes" : "no") << "\n";
    }
    for (const auto& e : r.path_errors) out << "path error: " << e << "\n";
    for (const auto& d : r.discrepancies) {
      out << "DISCREPANCY " << d.kind << ": expected " << d.expected
          << " computed " << d.computed << " (" << d.message << ")\n";
    }
  }
  return Internal(r) ? kExitDiscrepancy : kExitOk;
}

int RunRelax(const RunConfig& c, std::ostream& out) {
  const auto [problem, scale] = Normalize(LoadProblem(c));
  const LiftedSolution s = SolveRelaxation(c.kind, problem);
  const VectorXd x = scale.ToOriginal(s.x());
  if (c.format == Format::kJson) {
    Json y = Json::array();
    for (Eigen::Index i = 0; i < s.Y.rows(); ++i) {
      std::vector<double> row(s.Y.cols());
      for (Eigen::Index k = 0; k < s.Y.cols(); ++k) row[k] = s.Y(i, k);
      y.push_back(row);
    }
    Emit(out, Json{{"kind", std::string(RelaxationName(c.kind))},
                   {"value", scale.Value(s.value)},
                   {"x", std::vector<double>(x.data(), x.data() + x.size())},
                   {"Y", y},
                   {"rank", NumericalRank(s.Y)}});
  } else {
    out << std::setprecision(10) << RelaxationName(c.kind) << " value "
        << scale.Value(s.value) << "\n"
        << "x " << Vec(x) << "\n"
        << "rank(Y) " << NumericalRank(s.Y) << "\n"
        << "Y (unit radius)\n"
        << s.Y << "\n";
  }
  return kExitOk;
}

int RunCertify(const RunConfig& c, std::ostream& out) {
  const EtrsProblem original = LoadProblem(c);
  const auto [problem, scale] = Normalize(original);
  const Json pj = io::ReadJsonFile(c.point);
  if (!pj.is_object() || !pj.contains("x")) {
    throw Error(ErrorCode::kInvalidInput, "point file needs an 'x' array");
  }
  const VectorXd x_in = io::VectorFromJson(pj["x"], "x");
  if (x_in.size() != problem.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "point has the wrong dimension");
  }
  const VectorXd x = scale.ToNormalized(x_in);
  Certificate cert;
  if (pj.contains("lambda0")) {
    cert = io::CertificateFromJson(pj);
  } else {
    // No multipliers given: take them from the dual LMI and polish at x.
    const LiftedSolution lmi = SolveRelaxation(RelaxationKind::kDualLmi, problem);
    cert = PolishMultipliers(problem, x, Certificate::FromDuals(lmi.duals));
  }
  cert = CheckCertificate(problem, x, cert, c.tol_feas.value_or(-1.0));
  if (c.format == Format::kJson) {
    Json j = io::CertificateToJson(cert);
    j["x"] = pj["x"];
    j["value"] = original.Objective(x_in);
    Emit(out, j);
  } else {
    out << std::setprecision(10) << "x " << Vec(x_in) << "  value "
        << original.Objective(x_in) << "\n";
    PrintCertificate(out, cert);
  }
  return cert.verdict.Pass() ? kExitOk : kExitRejected;
}

int RunOracle(const RunConfig& c, std::ostream& out) {
  const OracleResult r = SampleMinimize(LoadProblem(c), c.budget, c.seed);
  if (c.format == Format::kJson) {
    Emit(out, Json{{"best_value", r.best_value},
                   {"best_x", std::vector<double>(r.best_x.data(),
                                                  r.best_x.data() + r.best_x.size())},
                   {"samples_used", r.samples_used},
                   {"polish_iterations", r.polish_iterations},
                   {"seed", c.seed},
                   {"budget", c.budget}});
  } else {
    out << std::setprecision(10) << "best value " << r.best_value << "\n"
        << "best x " << Vec(r.best_x) << "\n"
        << "samples " << r.samples_used << "  polish steps "
        << r.polish_iterations << "\n";
  }
  return kExitOk;
}

// Published value against computed; marks mismatches beyond 1e-3.
std::string Compare(const std::optional<double>& published, double computed) {
  if (!published) return "";
  return std::abs(*published - computed) <= 1e-3 ? "ok" : "differs";
}

int RunExamples(const RunConfig& c, std::ostream& out) {
  Json rows = Json::array();
  bool internal = false;
  if (c.format == Format::kHuman) {
    out << std::left << std::setw(10) << "example" << std::setw(10) << "kind"
        << std::setw(11) << "published" << std::setw(11) << "computed"
        << std::setw(11) << "oracle" << "status\n";
  }
  for (const auto& f : BuiltinFixtures()) {
    SolveOptions opt;
    if (c.tol_feas) opt.tol_feas = *c.tol_feas;
    if (c.tol_opt) opt.tol_opt = *c.tol_opt;
    opt.reference_value = f.published_exact;
    const SolveReport r = SolveFull(f.problem, opt);
    const OracleResult o = SampleMinimize(f.problem, c.budget, c.seed);
    internal = internal || Internal(r);
    const double sdp = r.relaxations.sdp.value_or(NAN);
    const double socp = r.relaxations.socpsdp.value_or(NAN);
    if (c.format == Format::kJson) {
      rows.push_back({{"name", f.name},
                      {"published", {{"sdp", f.published_sdp ? Json(*f.published_sdp) : Json()},
                                     {"socpsdp", f.published_socpsdp ? Json(*f.published_socpsdp) : Json()},
                                     {"exact", f.published_exact ? Json(*f.published_exact) : Json()}}},
                      {"report", io::ReportToJson(r)},
                      {"oracle", o.best_value},
                      {"annotation", f.annotation}});
      continue;
    }
    auto row = [&](const char* kind, const std::optional<double>& pub, double comp,
                   const std::string& orc) {
      out << std::left << std::setw(10) << f.name << std::setw(10) << kind
          << std::setw(11) << Opt(pub) << std::setw(11) << Opt(comp)
          << std::setw(11) << orc << Compare(pub, comp) << "\n";
    };
    row("sdp", f.published_sdp, sdp, "");
    row("socpsdp", f.published_socpsdp, socp, "");
    row("exact", f.published_exact, r.optimal_value, Opt(o.best_value));
    if (!f.annotation.empty()) out << "  note: " << f.annotation << "\n";
  }
  if (c.format == Format::kJson) Emit(out, rows);
  return internal ? kExitDiscrepancy : kExitOk;
}

void EmitError(const RunConfig& c, std::ostream& out, std::ostream& err,
               const std::string& code, const std::string& message) {
  if (c.format == Format::kJson) {
    Emit(out, Json{{"error", {{"code", code}, {"message", message}}}});
  } else {
    err << "error: " << message << "\n";
  }
}

}  // namespace

void CheckConfig(const RunConfig& c) {
  const bool has_input = !c.input.empty() || !c.example.empty();
  if (c.command != Command::kExamples && !has_input) {
    throw Error(ErrorCode::kInvalidInput, "an input problem is required");
  }
  if (!c.input.empty() && !c.example.empty()) {
    throw Error(ErrorCode::kInvalidInput, "give either an input file or --example");
  }
  if (c.command == Command::kCertify && c.point.empty()) {
    throw Error(ErrorCode::kInvalidInput, "certify needs --point");
  }
  if (c.budget < 0) throw Error(ErrorCode::kInvalidInput, "--budget must be >= 0");
  if (c.tol_opt && *c.tol_opt <= 0.0) {
    throw Error(ErrorCode::kInvalidInput, "--tol-opt must be positive");
  }
}

int Run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    CheckConfig(config);
    switch (config.command) {
      case Command::kSolve: return RunSolve(config, out);
      case Command::kRelax: return RunRelax(config, out);
      case Command::kCertify: return RunCertify(config, out);
      case Command::kExamples: return RunExamples(config, out);
      case Command::kOracle: return RunOracle(config, out);
    }
  } catch (const Error& e) {
    EmitError(config, out, err, std::string(ErrorCodeName(e.code())), e.what());
    return ExitFor(e.code());
  } catch (const std::exception& e) {
    EmitError(config, out, err, "InvalidInput", e.what());
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}

}  // namespace etrs::cli
