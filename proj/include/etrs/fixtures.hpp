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

#ifndef ETRS_FIXTURES_HPP_
#define ETRS_FIXTURES_HPP_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "etrs/model.hpp"

namespace etrs {

// Built-in three-dimensional test problems with published reference values.
struct Fixture {
  std::string name;
  EtrsProblem problem;
  std::optional<double> published_socpsdp;
  std::optional<double> published_sdp;
  std::optional<double> published_exact;
  std::optional<VectorXd> published_x;
  std::optional<double> published_lngm;
  std::string annotation;
};

std::vector<Fixture> BuiltinFixtures();

// Throws Error{kInvalidInput} for an unknown name.
Fixture FixtureByName(const std::string& name);

}  // namespace etrs

#endif  // ETRS_FIXTURES_HPP_
