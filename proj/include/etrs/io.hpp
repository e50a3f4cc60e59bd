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

#ifndef ETRS_IO_HPP_
#define ETRS_IO_HPP_

#include <string>

#include <json.hpp>

#include "etrs/certify.hpp"
#include "etrs/model.hpp"
#include "etrs/solve.hpp"

namespace etrs::io {

using Json = nlohmann::json;

// {"n", "A" (row-major rows), "a", "b", "beta", "delta" (default 1)}.
// Throws Error{kInvalidInput} on schema errors; Ingest errors propagate.
EtrsProblem ProblemFromJson(const Json& j);
Json ProblemToJson(const EtrsProblem& problem);

// Throws Error{kInvalidInput} unless j is an array of numbers.
VectorXd VectorFromJson(const Json& j, const char* what);

// Reads a file and parses it as JSON. Throws Error{kInvalidInput}.
Json ReadJsonFile(const std::string& path);

Json CertificateToJson(const Certificate& cert);
Certificate CertificateFromJson(const Json& j);

Json ReportToJson(const SolveReport& report);
// Inverse of ReportToJson on the fields it emits.
SolveReport ReportFromJson(const Json& j);

}  // namespace etrs::io

#endif  // ETRS_IO_HPP_
