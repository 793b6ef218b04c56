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

// Serialization. Frames are stored as
//
//   {"d": 2, "n": 3, "vectors": [[...], [...], [...]]}
//
// or as CSV with a "# frame d=<d> n=<n>" header followed by one vector per
// line. Doubles are written in shortest round-trip form (JSON) or with 17
// significant digits (CSV), so reading back is bit-exact.

#ifndef FRAMESCALE_IO_HPP_
#define FRAMESCALE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "framescale/barthe_solver.hpp"
#include "framescale/basis_polytope.hpp"
#include "framescale/frames.hpp"
#include "framescale/paulsen.hpp"

namespace framescale::io {

using Json = nlohmann::json;

inline constexpr std::string_view kReportSchema = "framescale/1";

enum class Format { kJson, kCsv };

/// "json" or "csv"; throws ParseError otherwise.
Format parse_format(std::string_view name);
/// Explicit choice wins, then a ".csv" extension, then JSON.
Format resolve_format(const std::filesystem::path& path,
                      std::optional<Format> requested);

Json frame_to_json(const Frame& frame);
Frame frame_from_json(const Json& j);
std::string frame_to_csv(const Frame& frame);
Frame frame_from_csv(std::string_view text);

/// Format detection on read: a leading '#' means CSV.
Frame parse_frame(std::string_view text);
std::string format_frame(const Frame& frame, Format format);

Frame read_frame(const std::filesystem::path& path);
void write_frame(const std::filesystem::path& path, const Frame& frame,
                 Format format);

/// Bare array, or an object with a "c" array.
CoefficientVector coefficients_from_json(const Json& j, int dim);

Json metrics_to_json(const FrameMetrics& metrics);
Json scaling_to_json(const ScalingSolution& scaling);
Json membership_to_json(const PolytopeMembership& membership);
Json budget_to_json(const PerturbationBudget& budget);
Json audit_to_json(const AuditRecord& audit);
Json report_to_json(const RepairReport& report, const AuditRecord& audit);

struct StoredReport {
  Frame input;
  Frame perturbed;
  Frame output;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::optional<bool> certified;  // the verdict recorded at repair time
};

/// Only the frames, delta and seed are read; everything else is recomputed
/// by whoever consumes the result. Throws ParseError.
StoredReport report_from_json(const Json& j);

/// Throws ParseError on malformed JSON.
Json parse_json(std::string_view text);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace framescale::io

#endif  // FRAMESCALE_IO_HPP_
