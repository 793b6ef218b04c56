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

#include "framescale/cli.hpp"

#include <charconv>
#include <cmath>
#include <exception>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "framescale/error.hpp"
#include "framescale/log.hpp"
#include "framescale/rng.hpp"

namespace framescale::cli {
namespace {

enum Flag : unsigned {
  kInput = 1u << 0,
  kOutput = 1u << 1,
  kDim = 1u << 2,
  kCount = 1u << 3,
  kEps = 1u << 4,
  kDelta = 1u << 5,
  kAlpha = 1u << 6,
  kSeed = 1u << 7,
  kMaxIter = 1u << 8,
  kFormat = 1u << 9,
  kFrameOutput = 1u << 10,
  kCoeffs = 1u << 11,
};

// Flag values as typed; bench takes comma lists, the rest single values.
struct RawArgs {
  std::string input, output, frame_output, coeffs;
  std::string d, n, eps, delta, alpha, seed, max_iter, format;
};

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names{
      {"generate", Command::kGenerate}, {"analyze", Command::kAnalyze},
      {"repair", Command::kRepair},     {"polytope", Command::kPolytope},
      {"solve-rip", Command::kSolveRip}, {"audit", Command::kAudit},
      {"bench", Command::kBench}};
  return names;
}

void add_flags(CLI::App* app, RawArgs& raw, unsigned flags) {
  if (flags & kInput) app->add_option("--input", raw.input, "input file");
  if (flags & kOutput) app->add_option("--output", raw.output, "output file (default stdout)");
  if (flags & kDim) app->add_option("--d", raw.d, "dimension");
  if (flags & kCount) app->add_option("--n", raw.n, "number of vectors");
  if (flags & kEps) app->add_option("--eps", raw.eps, "target distance from an ENPF");
  if (flags & kDelta) app->add_option("--delta", raw.delta, "output tolerance");
  if (flags & kAlpha) app->add_option("--alpha", raw.alpha, "shrink factor in [0, 1)");
  if (flags & kSeed) app->add_option("--seed", raw.seed, "random seed");
  if (flags & kMaxIter) app->add_option("--max-iter", raw.max_iter, "solver iteration cap");
  if (flags & kFormat) app->add_option("--format", raw.format, "json or csv");
  if (flags & kFrameOutput) {
    app->add_option("--frame-output", raw.frame_output, "also write the output frame here");
  }
  if (flags & kCoeffs) app->add_option("--coeffs", raw.coeffs, "coefficient JSON (default d/n)");
}

template <typename T>
T parse_number(const std::string& text, const char* flag) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(std::string(flag) + ": '" + text + "' is not a valid number");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) throw ParseError("empty entry in list '" + text + "'");
    items.push_back(item);
  }
  return items;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> values;
  for (const std::string& item : split_list(text)) values.push_back(parse_number<T>(item, flag));
  return values;
}

void emit(const RunConfig& config, std::ostream& out, const std::string& text) {
  if (config.output) {
    io::write_text(*config.output, text);
  } else {
    out << text;
  }
}

std::string pretty(const io::Json& j) { return j.dump(2) + "\n"; }

CoefficientVector coefficients_for(const RunConfig& config, const Frame& u) {
  if (!config.coeffs) return CoefficientVector::uniform(u.count(), u.dim());
  return io::coefficients_from_json(io::parse_json(io::read_text(*config.coeffs)),
                                    u.dim());
}

RepairOptions repair_options(const RunConfig& config) {
  RepairOptions options;
  options.max_iter = config.max_iter;
  return options;
}

int run_generate(const RunConfig& config, std::ostream& out) {
  Frame frame = generate_enpf(*config.d, *config.n, config.seed);
  if (config.eps) frame = perturb_frame(frame, *config.eps, config.seed);
  const io::Format format =
      config.output ? io::resolve_format(*config.output, config.format)
                    : config.format.value_or(io::Format::kJson);
  emit(config, out, io::format_frame(frame, format));
  return kExitOk;
}

int run_analyze(const RunConfig& config, std::ostream& out) {
  const Frame frame = io::read_frame(*config.input);
  const FrameMetrics metrics = frame_metrics(frame);
  io::Json j = io::metrics_to_json(metrics);
  j["d"] = frame.dim();
  j["n"] = frame.count();
  j["enpf"] = metrics.eps <= kEnpfTolerance;
  emit(config, out, pretty(j));
  return kExitOk;
}

int run_repair(const RunConfig& config, std::ostream& out) {
  const Frame v = io::read_frame(*config.input);
  const RepairReport report = repair(v, config.delta, config.seed, repair_options(config));
  const AuditRecord audit = audit_lemma_chain(report);
  if (config.frame_output) {
    io::write_frame(*config.frame_output, report.output,
                    io::resolve_format(*config.frame_output, config.format));
  }
  emit(config, out, pretty(io::report_to_json(report, audit)));
  if (!report.certified) {
    log::warn("repair: output not certified (dist^2 = ", report.dist_sq_vw,
              ", bound = ", report.bound, ", eps(W) = ", report.output_metrics.eps, ")");
  }
  return report.certified ? kExitOk : kExitUncertified;
}

int run_polytope(const RunConfig& config, std::ostream& out) {
  const Frame frame = io::read_frame(*config.input);
  const CoefficientVector c = coefficients_for(config, frame);
  const PolytopeMembership membership =
      config.alpha ? in_shrunk_polytope(frame, c, *config.alpha)
                   : in_basis_polytope(frame, c);
  emit(config, out, pretty(io::membership_to_json(membership)));
  return kExitOk;
}

int run_solve_rip(const RunConfig& config, std::ostream& out) {
  const Frame frame = io::read_frame(*config.input);
  const CoefficientVector c = coefficients_for(config, frame);
  const ScalingSolution scaling =
      solve_radial_isotropic(frame, c, config.delta, config.max_iter);
  emit(config, out, pretty(io::scaling_to_json(scaling)));
  return scaling.converged ? kExitOk : kExitNonConvergence;
}

int run_audit(const RunConfig& config, std::ostream& out) {
  const io::StoredReport stored =
      io::report_from_json(io::parse_json(io::read_text(*config.input)));
  const RepairReport report =
      recertify(stored.input, stored.perturbed, stored.output, stored.delta,
                stored.seed, repair_options(config));
  const AuditRecord audit = audit_lemma_chain(report);
  io::Json j{{"schema", io::kReportSchema},
             {"certified", report.certified},
             {"recorded_certified", nullptr},
             {"verdict_matches", nullptr},
             {"eps", report.eps},
             {"dist_sq_vw", report.dist_sq_vw},
             {"bound", report.bound},
             {"output_metrics", io::metrics_to_json(report.output_metrics)},
             {"scaling", io::scaling_to_json(report.scaling)},
             {"audit", io::audit_to_json(audit)}};
  if (stored.certified) {
    j["recorded_certified"] = *stored.certified;
    j["verdict_matches"] = *stored.certified == report.certified;
  }
  emit(config, out, pretty(j));
  return report.certified ? kExitOk : kExitUncertified;
}

struct BenchCell {
  int d = 0;
  int n = 0;
  double eps_target = 0.0;
  double delta = 0.0;
};

struct BenchRow {
  double eps = 0.0;
  double dist_sq_vw = 0.0;
  double bound = 0.0;
  double output_eps = 0.0;
  int iterations = 0;
  bool certified = false;
  std::string error;
};

BenchRow bench_cell(const BenchCell& cell, std::uint64_t seed, int max_iter) {
  BenchRow row;
  try {
    const Frame v = perturb_frame(generate_enpf(cell.d, cell.n, seed), cell.eps_target, seed);
    RepairOptions options;
    options.max_iter = max_iter;
    const RepairReport r = repair(v, cell.delta, seed, options);
    row.eps = r.eps;
    row.dist_sq_vw = r.dist_sq_vw;
    row.bound = r.bound;
    row.output_eps = r.output_metrics.eps;
    row.iterations = r.scaling.iterations;
    row.certified = r.certified;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

int run_bench(const RunConfig& config, std::ostream& out) {
  std::vector<BenchCell> cells;
  for (const int d : config.grid.d) {
    for (const std::string& token : config.grid.n) {
      const int n = resolve_count(token, d);
      for (const double eps : config.grid.eps) {
        for (const double delta : config.grid.delta) cells.push_back({d, n, eps, delta});
      }
    }
  }
  std::vector<BenchRow> rows(cells.size());
  const int count = static_cast<int>(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed =
        derive_seed(config.seed, "bench", static_cast<std::uint64_t>(i));
    rows[static_cast<std::size_t>(i)] =
        bench_cell(cells[static_cast<std::size_t>(i)], seed, config.max_iter);
  }

  bool all_certified = true;
  for (const BenchRow& row : rows) all_certified = all_certified && row.certified;
  const io::Format format =
      config.output ? io::resolve_format(*config.output, config.format)
                    : config.format.value_or(io::Format::kJson);
  if (format == io::Format::kCsv) {
    std::ostringstream table;
    table.precision(17);
    table << "d,n,eps_target,delta,eps,dist_sq_vw,bound,ratio,output_eps,iterations,certified\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const BenchCell& c = cells[i];
      const BenchRow& r = rows[i];
      table << c.d << ',' << c.n << ',' << c.eps_target << ',' << c.delta << ','
            << r.eps << ',' << r.dist_sq_vw << ',' << r.bound << ','
            << (r.bound > 0.0 ? r.dist_sq_vw / r.bound : 0.0) << ',' << r.output_eps
            << ',' << r.iterations << ',' << (r.certified ? "true" : "false") << '\n';
    }
    emit(config, out, table.str());
  } else {
    io::Json table = io::Json::array();
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const BenchCell& c = cells[i];
      const BenchRow& r = rows[i];
      io::Json j{{"d", c.d},
                 {"n", c.n},
                 {"eps_target", c.eps_target},
                 {"delta", c.delta},
                 {"eps", r.eps},
                 {"dist_sq_vw", r.dist_sq_vw},
                 {"bound", r.bound},
                 {"ratio", r.bound > 0.0 ? r.dist_sq_vw / r.bound : 0.0},
                 {"output_eps", r.output_eps},
                 {"iterations", r.iterations},
                 {"certified", r.certified}};
      if (!r.error.empty()) j["error"] = r.error;
      table.push_back(std::move(j));
    }
    emit(config, out,
         pretty(io::Json{{"schema", io::kReportSchema},
                         {"seed", config.seed},
                         {"all_certified", all_certified},
                         {"cells", std::move(table)}}));
  }
  return all_certified ? kExitOk : kExitUncertified;
}

io::Json error_json(const char* kind, const std::string& message, int code) {
  return io::Json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
}

int report_error(std::ostream& err, const io::Json& j) {
  err << j.dump() << '\n';
  return j["error"]["exit_code"].get<int>();
}

}  // namespace

int resolve_count(const std::string& token, int d) {
  const std::string t = token;
  const auto pos = t.find('d');
  if (pos == std::string::npos) return parse_number<int>(t, "--n");
  const int factor = pos == 0 ? 1 : parse_number<int>(t.substr(0, pos), "--n");
  int offset = 0;
  const std::string rest = t.substr(pos + 1);
  if (!rest.empty()) {
    if (rest[0] != '+' && rest[0] != '-') {
      throw ParseError("--n: cannot read '" + token + "' (expected e.g. 2d+1)");
    }
    offset = parse_number<int>(rest.substr(1), "--n");
    if (rest[0] == '-') offset = -offset;
  }
  return factor * d + offset;
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Repair nearly equal norm Parseval frames with certified bounds",
               "framescale"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "framescale 1.0.0");
  RawArgs raw;
  struct Subcommand {
    const char* name;
    const char* help;
    unsigned flags;
  };
  const Subcommand subcommands[] = {
      {"generate", "write an equal norm Parseval frame, optionally eps-perturbed",
       kOutput | kDim | kCount | kEps | kSeed | kFormat},
      {"analyze", "report frame metrics", kInput | kOutput},
      {"repair", "repair a frame and write the certified report",
       kInput | kOutput | kDelta | kSeed | kMaxIter | kFormat | kFrameOutput},
      {"polytope", "basis polytope membership", kInput | kOutput | kAlpha | kCoeffs},
      {"solve-rip", "compute radial isotropic position",
       kInput | kOutput | kDelta | kMaxIter | kCoeffs},
      {"audit", "re-verify a stored report from its frames", kInput | kOutput | kMaxIter},
      {"bench", "sweep a (d, n, eps, delta) grid",
       kOutput | kDim | kCount | kEps | kDelta | kSeed | kMaxIter | kFormat},
  };
  for (const Subcommand& s : subcommands) add_flags(app.add_subcommand(s.name, s.help), raw, s.flags);

  std::vector<const char*> argv{"framescale"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested(app.version() + "\n");
  } catch (const CLI::ParseError& e) {
    throw ParseError(e.what());
  }

  RunConfig config;
  const CLI::App* chosen = app.get_subcommands().front();
  config.command = command_names().at(chosen->get_name());
  if (!raw.input.empty()) config.input = raw.input;
  if (!raw.output.empty()) config.output = raw.output;
  if (!raw.frame_output.empty()) config.frame_output = raw.frame_output;
  if (!raw.coeffs.empty()) config.coeffs = raw.coeffs;
  if (!raw.seed.empty()) config.seed = parse_number<std::uint64_t>(raw.seed, "--seed");
  if (!raw.max_iter.empty()) config.max_iter = parse_number<int>(raw.max_iter, "--max-iter");
  if (!raw.alpha.empty()) config.alpha = parse_number<double>(raw.alpha, "--alpha");
  if (!raw.format.empty()) config.format = io::parse_format(raw.format);

  if (config.command == Command::kBench) {
    if (!raw.d.empty()) config.grid.d = parse_list<int>(raw.d, "--d");
    if (!raw.n.empty()) config.grid.n = split_list(raw.n);
    if (!raw.eps.empty()) config.grid.eps = parse_list<double>(raw.eps, "--eps");
    if (!raw.delta.empty()) config.grid.delta = parse_list<double>(raw.delta, "--delta");
  } else {
    if (!raw.d.empty()) config.d = parse_number<int>(raw.d, "--d");
    if (!raw.n.empty()) config.n = parse_number<int>(raw.n, "--n");
    if (!raw.eps.empty()) config.eps = parse_number<double>(raw.eps, "--eps");
    if (!raw.delta.empty()) config.delta = parse_number<double>(raw.delta, "--delta");
  }
  return config;
}

void validate(const RunConfig& config) {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!positive(config.delta)) throw ParseError("--delta must be positive");
  if (config.max_iter < 1) throw ParseError("--max-iter must be at least 1");
  if (config.alpha && !(*config.alpha >= 0.0 && *config.alpha < 1.0)) {
    throw ParseError("--alpha must lie in [0, 1)");
  }
  const bool needs_input = config.command != Command::kGenerate &&
                           config.command != Command::kBench;
  if (needs_input) {
    if (!config.input) throw ParseError("--input is required");
    if (!std::filesystem::is_regular_file(*config.input)) {
      throw ParseError("input '" + config.input->string() + "' does not exist");
    }
  }
  if (config.coeffs && !std::filesystem::is_regular_file(*config.coeffs)) {
    throw ParseError("coefficient file '" + config.coeffs->string() + "' does not exist");
  }
  for (const auto& path : {config.output, config.frame_output}) {
    if (!path) continue;
    const auto parent = path->parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
      throw ParseError("output directory '" + parent.string() + "' does not exist");
    }
  }
  if (config.command == Command::kGenerate) {
    if (!config.d || !config.n) throw ParseError("generate needs --d and --n");
    if (*config.d < 1 || *config.n < *config.d) {
      throw ParseError("generate needs 1 <= d <= n");
    }
    if (config.eps && !(*config.eps > 0.0 && *config.eps < 1.0)) {
      throw ParseError("--eps must lie in (0, 1)");
    }
  }
  if ((config.format == io::Format::kCsv) && config.command != Command::kGenerate &&
      config.command != Command::kBench && !config.frame_output) {
    throw ParseError("csv output exists only for frames and bench tables");
  }
  if (config.command == Command::kBench) {
    const BenchGrid& g = config.grid;
    if (g.d.empty() || g.n.empty() || g.eps.empty() || g.delta.empty()) {
      throw ParseError("bench grid axes must be nonempty");
    }
    for (const int d : g.d) {
      if (d < 1) throw ParseError("bench: d must be positive");
      for (const std::string& token : g.n) {
        if (resolve_count(token, d) <= d) {
          throw ParseError("bench: n = " + token + " gives n <= d at d = " +
                           std::to_string(d));
        }
      }
    }
    for (const double eps : g.eps) {
      if (!(eps > 0.0 && eps < 0.5)) throw ParseError("bench: eps must lie in (0, 1/2)");
    }
    for (const double delta : g.delta) {
      if (!positive(delta)) throw ParseError("bench: delta must be positive");
    }
  }
}

int run(const RunConfig& config, std::ostream& out) {
  switch (config.command) {
    case Command::kGenerate: return run_generate(config, out);
    case Command::kAnalyze: return run_analyze(config, out);
    case Command::kRepair: return run_repair(config, out);
    case Command::kPolytope: return run_polytope(config, out);
    case Command::kSolveRip: return run_solve_rip(config, out);
    case Command::kAudit: return run_audit(config, out);
    case Command::kBench: return run_bench(config, out);
  }
  return kExitConfig;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  try {
    const RunConfig config = parse_args(args);
    validate(config);
    return run(config, out);
  } catch (const HelpRequested& help) {
    out << help.what();
    return kExitOk;
  } catch (const NonConvergenceError& e) {
    io::Json j = error_json("non_convergence", e.what(), kExitNonConvergence);
    j["error"]["iterations"] = e.iterations();
    j["error"]["blocking_subset"] = e.blocking_subset();
    j["error"]["divergence_direction"] = e.divergence_direction();
    return report_error(err, j);
  } catch (const SingularMatrixError& e) {
    return report_error(err, error_json("singular_matrix", e.what(), kExitNonConvergence));
  } catch (const ParseError& e) {
    return report_error(err, error_json("parse", e.what(), kExitConfig));
  } catch (const InvalidArgument& e) {
    return report_error(err, error_json("invalid_argument", e.what(), kExitConfig));
  } catch (const SizeLimitExceeded& e) {
    return report_error(err, error_json("size_limit", e.what(), kExitConfig));
  } catch (const Error& e) {
    return report_error(err, error_json("failure", e.what(), kExitUncertified));
  } catch (const std::exception& e) {
    return report_error(err, error_json("internal", e.what(), kExitUncertified));
  }
}

}  // namespace framescale::cli
