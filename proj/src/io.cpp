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

#include "framescale/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "framescale/error.hpp"

namespace framescale::io {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, int line) {
  token = trim(token);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("csv line " + std::to_string(line) + ": '" +
                     std::string(token) + "' is not a number");
  }
  return value;
}

int header_field(std::string_view header, std::string_view key) {
  const std::string needle = std::string(key) + "=";
  const auto pos = header.find(needle);
  if (pos == std::string_view::npos) {
    throw ParseError("csv header lacks " + needle);
  }
  const char* begin = header.data() + pos + needle.size();
  int value = 0;
  const auto [ptr, ec] = std::from_chars(begin, header.data() + header.size(), value);
  if (ec != std::errc() || ptr == begin) {
    throw ParseError("csv header has a malformed " + needle + " field");
  }
  return value;
}

void append_double(std::string& out, double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                       std::chars_format::general, 17);
  out.append(buffer, ptr);
}

Json matrix_rows(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "json") return Format::kJson;
  if (name == "csv") return Format::kCsv;
  throw ParseError("unknown format '" + std::string(name) + "' (json or csv)");
}

Format resolve_format(const std::filesystem::path& path,
                      std::optional<Format> requested) {
  if (requested) return *requested;
  return path.extension() == ".csv" ? Format::kCsv : Format::kJson;
}

Json frame_to_json(const Frame& frame) {
  Json vectors = Json::array();
  for (Index i = 0; i < frame.count(); ++i) {
    Json v = Json::array();
    for (Index k = 0; k < frame.dim(); ++k) v.push_back(frame.matrix()(k, i));
    vectors.push_back(std::move(v));
  }
  return Json{{"d", frame.dim()}, {"n", frame.count()}, {"vectors", std::move(vectors)}};
}

Frame frame_from_json(const Json& j) {
  const Json& jd = member(j, "d");
  const Json& jn = member(j, "n");
  const Json& vectors = member(j, "vectors");
  if (!jd.is_number_integer() || !jn.is_number_integer()) {
    throw ParseError("frame d and n must be integers");
  }
  const int d = jd.get<int>();
  const int n = jn.get<int>();
  if (d < 1 || n < 1) throw ParseError("frame needs d >= 1 and n >= 1");
  if (!vectors.is_array() || static_cast<int>(vectors.size()) != n) {
    throw ParseError("frame declares n = " + std::to_string(n) +
                     " but lists a different number of vectors");
  }
  Matrix m(d, n);
  for (int i = 0; i < n; ++i) {
    const Json& v = vectors[static_cast<std::size_t>(i)];
    if (!v.is_array() || static_cast<int>(v.size()) != d) {
      throw ParseError("vector " + std::to_string(i) + " does not have d = " +
                       std::to_string(d) + " entries");
    }
    for (int k = 0; k < d; ++k) {
      const Json& x = v[static_cast<std::size_t>(k)];
      if (!x.is_number()) {
        throw ParseError("vector " + std::to_string(i) + " has a non-numeric entry");
      }
      m(k, i) = x.get<double>();
    }
  }
  try {
    return Frame(std::move(m));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

std::string frame_to_csv(const Frame& frame) {
  std::string out = "# frame d=" + std::to_string(frame.dim()) +
                    " n=" + std::to_string(frame.count()) + "\n";
  for (Index i = 0; i < frame.count(); ++i) {
    for (Index k = 0; k < frame.dim(); ++k) {
      if (k > 0) out += ',';
      append_double(out, frame.matrix()(k, i));
    }
    out += '\n';
  }
  return out;
}

Frame frame_from_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto end = text.find('\n');
    lines.push_back(text.substr(0, end));
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first == lines.size() || !trim(lines[first]).starts_with("# frame")) {
    throw ParseError("csv frame must start with '# frame d=<d> n=<n>'");
  }
  const std::string_view header = trim(lines[first]);
  const int d = header_field(header, "d");
  const int n = header_field(header, "n");
  if (d < 1 || n < 1) throw ParseError("frame needs d >= 1 and n >= 1");
  Matrix m(d, n);
  int row = 0;
  for (std::size_t li = first + 1; li < lines.size(); ++li) {
    std::string_view line = trim(lines[li]);
    if (line.empty()) continue;
    const int line_no = static_cast<int>(li) + 1;
    if (row == n) throw ParseError("csv frame has more than n = " + std::to_string(n) + " rows");
    int k = 0;
    while (true) {
      const auto comma = line.find(',');
      if (k == d) throw ParseError("csv line " + std::to_string(line_no) + " has more than d entries");
      m(k++, row) = parse_double(line.substr(0, comma), line_no);
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (k != d) {
      throw ParseError("csv line " + std::to_string(line_no) + " has " +
                       std::to_string(k) + " entries, expected " + std::to_string(d));
    }
    ++row;
  }
  if (row != n) {
    throw ParseError("csv frame declares n = " + std::to_string(n) + " but has " +
                     std::to_string(row) + " rows");
  }
  try {
    return Frame(std::move(m));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

Frame parse_frame(std::string_view text) {
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '#') return frame_from_csv(text);
  return frame_from_json(parse_json(text));
}

std::string format_frame(const Frame& frame, Format format) {
  if (format == Format::kCsv) return frame_to_csv(frame);
  return frame_to_json(frame).dump() + "\n";
}

Frame read_frame(const std::filesystem::path& path) {
  return parse_frame(read_text(path));
}

void write_frame(const std::filesystem::path& path, const Frame& frame,
                 Format format) {
  write_text(path, format_frame(frame, format));
}

CoefficientVector coefficients_from_json(const Json& j, int dim) {
  const Json& values = j.is_object() ? member(j, "c") : j;
  if (!values.is_array() || values.empty()) {
    throw ParseError("coefficients must be a nonempty array");
  }
  Vector c(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i].is_number()) throw ParseError("coefficient entries must be numbers");
    c(static_cast<Index>(i)) = values[i].get<double>();
  }
  try {
    return CoefficientVector(std::move(c), dim);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

Json metrics_to_json(const FrameMetrics& metrics) {
  return Json{{"eps_op", metrics.eps_op},
              {"eps_norm", metrics.eps_norm},
              {"eps", metrics.eps}};
}

Json scaling_to_json(const ScalingSolution& scaling) {
  return Json{{"t", vector_json(scaling.t)},
              {"A", matrix_rows(scaling.transform)},
              {"residual_inf", scaling.residual_inf},
              {"stationarity_inf", scaling.stationarity_inf},
              {"iterations", scaling.iterations},
              {"converged", scaling.converged}};
}

Json membership_to_json(const PolytopeMembership& membership) {
  Json j{{"in_polytope", membership.in_polytope}, {"violating_subset", nullptr}};
  if (membership.violating_subset) j["violating_subset"] = *membership.violating_subset;
  return j;
}

Json budget_to_json(const PerturbationBudget& budget) {
  return Json{{"eta_max", budget.eta_max},
              {"gamma", budget.gamma},
              {"gamma_prime", budget.gamma_prime}};
}

Json audit_to_json(const AuditRecord& audit) {
  Json checks = Json::array();
  for (const InequalityCheck& c : audit.checks) {
    checks.push_back(Json{{"id", c.id},
                          {"statement", c.statement},
                          {"lhs", c.lhs},
                          {"rhs", c.rhs},
                          {"slack", c.slack},
                          {"tolerance", c.tolerance},
                          {"holds", c.holds}});
  }
  return Json{{"all_hold", audit.all_hold},
              {"corrected_holds", audit.corrected_holds},
              {"majorization_failures", audit.majorization_failures},
              {"checks", std::move(checks)}};
}

Json report_to_json(const RepairReport& report, const AuditRecord& audit) {
  return Json{
      {"schema", kReportSchema},
      {"d", report.input.dim()},
      {"n", report.input.count()},
      {"eps", report.eps},
      {"delta", report.delta},
      {"solver_delta", report.solver_delta},
      {"seed", report.seed},
      {"certified", report.certified},
      {"frames",
       {{"input", frame_to_json(report.input)},
        {"perturbed", frame_to_json(report.perturbed)},
        {"output", frame_to_json(report.output)}}},
      {"distances",
       {{"dist_sq_vw", report.dist_sq_vw},
        {"dist_sq_vu", report.dist_sq_vu},
        {"dist_sq_uw", report.dist_sq_uw},
        {"bound", report.bound}}},
      {"budget", budget_to_json(report.budget)},
      {"perturbation",
       {{"attempts", report.perturbation_attempts},
        {"general_position_exhaustive", report.general_position_exhaustive}}},
      {"scaling", scaling_to_json(report.scaling)},
      {"metrics",
       {{"perturbed", metrics_to_json(report.perturbed_metrics)},
        {"output", metrics_to_json(report.output_metrics)}}},
      {"audit", audit_to_json(audit)}};
}

StoredReport report_from_json(const Json& j) {
  const Json& schema = member(j, "schema");
  if (!schema.is_string() || schema.get<std::string>() != kReportSchema) {
    throw ParseError("unsupported report schema (expected framescale/1)");
  }
  const Json& frames = member(j, "frames");
  const Json& delta = member(j, "delta");
  const Json& seed = member(j, "seed");
  if (!delta.is_number() || !seed.is_number_unsigned()) {
    throw ParseError("report delta must be a number and seed an unsigned integer");
  }
  StoredReport stored{frame_from_json(member(frames, "input")),
                      frame_from_json(member(frames, "perturbed")),
                      frame_from_json(member(frames, "output")),
                      delta.get<double>(), seed.get<std::uint64_t>(),
                      std::nullopt};
  if (j.contains("certified") && j["certified"].is_boolean()) {
    stored.certified = j["certified"].get<bool>();
  }
  return stored;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw ParseError("failed writing '" + path.string() + "'");
}

}  // namespace framescale::io
