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

#include "etrs/io.hpp"

#include <fstream>
#include <vector>

#include "etrs/error.hpp"

namespace etrs::io {

namespace {

Json Vec(const VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

VectorXd ToVec(const Json& j, const char* what) {
  if (!j.is_array()) {
    throw Error(ErrorCode::kInvalidInput, std::string(what) + " must be an array");
  }
  VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw Error(ErrorCode::kInvalidInput, std::string(what) + " entries must be numbers");
    }
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

const Json& Field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::kInvalidInput, std::string("missing field '") + key + "'");
  }
  return *it;
}

double Num(const Json& j, const char* key) {
  const Json& f = Field(j, key);
  if (!f.is_number()) {
    throw Error(ErrorCode::kInvalidInput, std::string("'") + key + "' must be a number");
  }
  return f.get<double>();
}

Json Opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> ToOpt(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

template <typename E, typename F>
E FromName(const std::string& name, int count, F name_of) {
  for (int i = 0; i < count; ++i) {
    if (name_of(static_cast<E>(i)) == name) return static_cast<E>(i);
  }
  throw Error(ErrorCode::kInvalidInput, "unknown enumerator '" + name + "'");
}

}  // namespace

VectorXd VectorFromJson(const Json& j, const char* what) { return ToVec(j, what); }

EtrsProblem ProblemFromJson(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidInput, "problem must be an object");
  const Json& rows = Field(j, "A");
  if (!rows.is_array()) throw Error(ErrorCode::kInvalidInput, "'A' must be an array of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (j.contains("n")) {
    const Json& jn = j["n"];
    if (!jn.is_number_integer() || jn.get<long>() != static_cast<long>(n)) {
      throw Error(ErrorCode::kInvalidInput, "'n' does not match the rows of 'A'");
    }
  }
  MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const VectorXd row = ToVec(rows[i], "A row");
    if (row.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch, "'A' must be square");
    }
    A.row(i) = row.transpose();
  }
  const double delta = j.contains("delta") ? Num(j, "delta") : 1.0;
  return EtrsProblem::Ingest(std::move(A), ToVec(Field(j, "a"), "a"),
                             ToVec(Field(j, "b"), "b"), Num(j, "beta"), delta);
}

Json ProblemToJson(const EtrsProblem& p) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < p.A.rows(); ++i) rows.push_back(Vec(p.A.row(i).transpose()));
  return Json{{"n", p.n()}, {"A", rows}, {"a", Vec(p.a)}, {"b", Vec(p.b)},
              {"beta", p.beta}, {"delta", p.delta}};
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidInput, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, "'" + path + "': " + e.what());
  }
}

Json CertificateToJson(const Certificate& c) {
  const auto& r = c.residuals;
  const auto& v = c.verdict;
  return Json{
      {"lambda0", c.lambda0},
      {"u0", c.u0},
      {"u", Vec(c.u)},
      {"residuals",
       {{"stationarity", r.stationarity},
        {"comp_ball", r.comp_ball},
        {"comp_linear", r.comp_linear},
        {"psd_min_eig", r.psd_min_eig},
        {"soc_margin", r.soc_margin}}},
      {"verdict",
       {{"feasible", v.feasible},
        {"stationarity", v.stationarity},
        {"complementarity", v.complementarity},
        {"psd", v.psd},
        {"cone", v.cone},
        {"sign", v.sign},
        {"pass", v.Pass()}}}};
}

Certificate CertificateFromJson(const Json& j) {
  Certificate c;
  c.lambda0 = Num(j, "lambda0");
  c.u0 = Num(j, "u0");
  c.u = ToVec(Field(j, "u"), "u");
  if (auto it = j.find("residuals"); it != j.end()) {
    c.residuals.stationarity = Num(*it, "stationarity");
    c.residuals.comp_ball = Num(*it, "comp_ball");
    c.residuals.comp_linear = Num(*it, "comp_linear");
    c.residuals.psd_min_eig = Num(*it, "psd_min_eig");
    c.residuals.soc_margin = Num(*it, "soc_margin");
  }
  if (auto it = j.find("verdict"); it != j.end()) {
    c.verdict.feasible = it->value("feasible", false);
    c.verdict.stationarity = it->value("stationarity", false);
    c.verdict.complementarity = it->value("complementarity", false);
    c.verdict.psd = it->value("psd", false);
    c.verdict.cone = it->value("cone", false);
    c.verdict.sign = it->value("sign", false);
  }
  return c;
}

Json ReportToJson(const SolveReport& r) {
  Json cands = Json::array();
  for (const auto& c : r.candidates) {
    cands.push_back({{"x", Vec(c.point.x)},
                     {"objective", c.point.objective},
                     {"lambda", c.point.lambda},
                     {"kind", std::string(trs::KktKindName(c.point.kind))},
                     {"activity", std::string(ActivityName(c.activity))},
                     {"source", c.source},
                     {"feasible", c.feasible}});
  }
  Json discs = Json::array();
  for (const auto& d : r.discrepancies) {
    discs.push_back({{"kind", d.kind},
                     {"expected", d.expected},
                     {"computed", d.computed},
                     {"message", d.message}});
  }
  Json j{
      {"value", r.optimal_value},
      {"x", Vec(r.optimal_x)},
      {"path", std::string(SolvePathName(r.path))},
      {"reduces_to_trs", r.reduces_to_trs},
      {"relaxations",
       {{"sdp", Opt(r.relaxations.sdp)},
        {"lmi", Opt(r.relaxations.lmi)},
        {"socpsdp", Opt(r.relaxations.socpsdp)}}},
      {"enumeration_value", Opt(r.enumeration_value)},
      {"conic_value", Opt(r.conic_value)},
      {"recovery_case", r.recovery_case
                            ? Json(std::string(RecoveryCaseName(*r.recovery_case)))
                            : Json(nullptr)},
      {"recovery_ambiguous", r.recovery_ambiguous},
      {"certificate", r.certificate ? CertificateToJson(*r.certificate) : Json(nullptr)},
      {"duality", nullptr},
      {"candidates", cands},
      {"discrepancies", discs},
      {"path_errors", r.path_errors}};
  if (r.duality) {
    j["duality"] = {{"gaps",
                     {{"classical", r.duality->classical_gap},
                      {"socpsdp", r.duality->socpsdp_gap}}},
                    {"classical_exact", r.duality->classical_exact},
                    {"soc_dual_vanishes", r.duality->soc_dual_vanishes}};
  }
  return j;
}

SolveReport ReportFromJson(const Json& j) {
  SolveReport r;
  r.optimal_value = Num(j, "value");
  r.optimal_x = ToVec(Field(j, "x"), "x");
  r.path = FromName<SolvePath>(Field(j, "path").get<std::string>(), 3, SolvePathName);
  r.reduces_to_trs = j.value("reduces_to_trs", false);
  if (auto it = j.find("relaxations"); it != j.end()) {
    r.relaxations.sdp = ToOpt(*it, "sdp");
    r.relaxations.lmi = ToOpt(*it, "lmi");
    r.relaxations.socpsdp = ToOpt(*it, "socpsdp");
  }
  r.enumeration_value = ToOpt(j, "enumeration_value");
  r.conic_value = ToOpt(j, "conic_value");
  if (auto it = j.find("recovery_case"); it != j.end() && !it->is_null()) {
    r.recovery_case = FromName<RecoveryCase>(it->get<std::string>(), 5, RecoveryCaseName);
  }
  r.recovery_ambiguous = j.value("recovery_ambiguous", false);
  if (auto it = j.find("certificate"); it != j.end() && !it->is_null()) {
    r.certificate = CertificateFromJson(*it);
  }
  if (auto it = j.find("duality"); it != j.end() && !it->is_null()) {
    DualityReport d;
    d.classical_gap = Num(Field(*it, "gaps"), "classical");
    d.socpsdp_gap = Num(Field(*it, "gaps"), "socpsdp");
    d.classical_exact = it->value("classical_exact", false);
    d.soc_dual_vanishes = it->value("soc_dual_vanishes", false);
    r.duality = d;
  }
  for (const auto& c : j.value("candidates", Json::array())) {
    Candidate cand;
    cand.point.x = ToVec(Field(c, "x"), "candidate x");
    cand.point.objective = Num(c, "objective");
    cand.point.lambda = Num(c, "lambda");
    cand.point.kind = FromName<trs::KktKind>(Field(c, "kind").get<std::string>(), 4,
                                             trs::KktKindName);
    cand.activity = FromName<Activity>(Field(c, "activity").get<std::string>(), 4,
                                       ActivityName);
    cand.source = c.value("source", "");
    cand.feasible = c.value("feasible", false);
    r.candidates.push_back(std::move(cand));
  }
  for (const auto& d : j.value("discrepancies", Json::array())) {
    r.discrepancies.push_back({Field(d, "kind").get<std::string>(), Num(d, "expected"),
                               Num(d, "computed"), d.value("message", "")});
  }
  r.path_errors = j.value("path_errors", std::vector<std::string>{});
  return r;
}

}  // namespace etrs::io
