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

#ifndef ETRS_CLI_HPP_
#define ETRS_CLI_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "etrs/formulate.hpp"

namespace etrs::cli {

enum class Command { kSolve, kRelax, kCertify, kExamples, kOracle };
enum class Format { kHuman, kJson };

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;  // certify: verdict fails
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitInvalidInput = 3;
inline constexpr int kExitDiscrepancy = 4;

struct RunConfig {
  Command command = Command::kSolve;
  std::string input;    // problem JSON path
  std::string example;  // built-in fixture name, alternative to input
  RelaxationKind kind = RelaxationKind::kPrimalSocpSdp;
  std::string point;    // certify: JSON with "x" and optional multipliers
  std::optional<double> tol_feas;
  std::optional<double> tol_opt;
  std::uint64_t seed = 42;
  long budget = 200000;
  Format format = Format::kHuman;
};

// Throws Error{kInvalidInput} when the config is inconsistent.
void CheckConfig(const RunConfig& config);

int Run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace etrs::cli

#endif  // ETRS_CLI_HPP_
