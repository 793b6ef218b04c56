// Copyright 2026 The Framescale Authors.
//
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

// The framescale command line:
//
//   framescale generate  --d D --n N [--eps E] --seed S [--output F] [--format F]
//   framescale analyze   --input F
//   framescale repair    --input F [--delta X] --seed S [--frame-output F]
//   framescale polytope  --input F [--coeffs F] [--alpha A]
//   framescale solve-rip --input F [--coeffs F] [--delta X] [--max-iter K]
//   framescale audit     --input REPORT
//   framescale bench     [--d 2,4] [--n 2d+1,3d] [--eps 1e-2,1e-3] [--delta 1e-9]
//
// Results go to --output or stdout; failures print one JSON object to
// stderr. Exit status: 0 ok, 1 certification failure, 2 bad input or
// configuration, 3 solver non-convergence.

#ifndef FRAMESCALE_CLI_HPP_
#define FRAMESCALE_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "framescale/io.hpp"

namespace framescale::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUncertified = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNonConvergence = 3;

enum class Command { kGenerate, kAnalyze, kRepair, kPolytope, kSolveRip, kAudit, kBench };

struct BenchGrid {
  std::vector<int> d{2, 4};
  // Absolute counts ("9") or expressions in d ("2d+1", "3d", "d-1").
  std::vector<std::string> n{"2d+1", "3d"};
  std::vector<double> eps{1e-2, 1e-3};
  std::vector<double> delta{1e-9};
};

struct RunConfig {
  Command command = Command::kAnalyze;
  std::optional<std::filesystem::path> input;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> frame_output;
  std::optional<std::filesystem::path> coeffs;
  std::optional<int> d;
  std::optional<int> n;
  std::optional<double> eps;  // generate: distance from ENPF; absent means exact
  double delta = 1e-9;
  std::optional<double> alpha;
  std::uint64_t seed = 0;
  int max_iter = 200;
  std::optional<io::Format> format;
  BenchGrid grid;
};

// --help or --version; carries the text to print.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments without the program name. Throws ParseError or HelpRequested.
RunConfig parse_args(const std::vector<std::string>& args);

/// Throws ParseError when required inputs are missing or out of range.
void validate(const RunConfig& config);

/// Evaluates "2d+1"-style tokens. Throws ParseError.
int resolve_count(const std::string& token, int d);

/// Runs a validated config; library errors propagate.
int run(const RunConfig& config, std::ostream& out);

/// parse_args + validate + run with errors mapped to exit codes.
int main_entry(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err);

}  // namespace framescale::cli

#endif  // FRAMESCALE_CLI_HPP_
