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

#include "etrs/fixtures.hpp"

#include "etrs/error.hpp"

namespace etrs {

namespace {

EtrsProblem Diagonal(double d1, double d2, double d3, const Eigen::Vector3d& a,
                     const Eigen::Vector3d& b, double beta) {
  return EtrsProblem::Ingest(Eigen::Vector3d(d1, d2, d3).asDiagonal().toDenseMatrix(),
                             a, b, beta, 1.0);
}

}  // namespace

std::vector<Fixture> BuiltinFixtures() {
  std::vector<Fixture> out;

  Fixture e1;
  e1.name = "example1";
  e1.problem = Diagonal(-4, 12, 11, {-4, 0, 0}, {20, 8, -14}, 5);
  e1.published_socpsdp = -4.1329;
  e1.published_sdp = -7.6827;
  e1.published_exact = -4.1329;
  e1.published_x = Eigen::Vector3d(0.6266, -0.2169, 0.4140);
  e1.published_lngm = 4.0;
  out.push_back(std::move(e1));

  Fixture e2;
  e2.name = "example2";
  e2.problem = Diagonal(-4, 5, 3, {0.5714, 0, 0}, {-17, 14, -2}, 4.4);
  e2.published_sdp = -5.4326;
  e2.published_exact = -2.4972;
  e2.published_x = Eigen::Vector3d(1, 0, 0);
  e2.annotation =
      "published optimum -2.4972 contradicts f(1,0,0) = -2.8572 at the "
      "published optimal point";
  out.push_back(std::move(e2));

  Fixture e3;
  e3.name = "example3";
  e3.problem = Diagonal(-4, -8, 2, {0, 2.2857, 0}, {4, -15, 18}, 4);
  e3.published_socpsdp = -9.7551;
  e3.published_sdp = -11.0642;
  e3.published_exact = -9.7551;
  e3.published_x = Eigen::Vector3d(-0.2885, -0.8567, -0.4276);
  e3.published_lngm = -3.4286;
  out.push_back(std::move(e3));

  Fixture e4;
  e4.name = "example4";
  e4.problem = Diagonal(-4, 1, -3, {0.5714, 0, 0}, {-6, -3, 0}, 2.2);
  e4.published_socpsdp = -3.6121;
  e4.published_sdp = -5.4354;
  e4.published_exact = -3.6121;
  e4.published_x = Eigen::Vector3d(-0.4292, 0.1251, -0.8945);
  out.push_back(std::move(e4));

  return out;
}

Fixture FixtureByName(const std::string& name) {
  for (auto& f : BuiltinFixtures()) {
    if (f.name == name) return f;
  }
  throw Error(ErrorCode::kInvalidInput, "unknown fixture '" + name + "'");
}

}  // namespace etrs
