// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpaudit/cli.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "dpaudit/errors.h"
#include "dpaudit/runner.h"

namespace dpaudit {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// FNV-1a over the canonical JSON text; stable across platforms.
std::string InputDigest(const Value& v) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : v.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t ResolveSeed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') {
    throw UsageError("a seed is required: pass --seed or set " + std::string(kSeedEnvVar));
  }
  try {
    std::size_t used = 0;
    const unsigned long long s = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return s;
  } catch (const std::exception&) {
    throw UsageError(std::string(kSeedEnvVar) + " is not an unsigned integer");
  }
}

std::set<ViolationKind> DisabledChecks(const std::vector<std::string>& names) {
  std::set<ViolationKind> out;
  for (const std::string& n : names) out.insert(ParseViolationKind(n));
  return out;
}

void Emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

std::string ReadFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string TraceText(const Trace& t) { return t.Serialize(2) + "\n"; }

std::string DumpTable(const Trace& t) {
  std::ostringstream out;
  out << "pipeline " << t.pipeline << ", mode " << ModeName(t.mode) << ", seed " << t.seed
      << ", " << t.entries.size() << " calls\n";
  char line[512];
  std::snprintf(line, sizeof(line), "%-6s %-16s %-40s %-17s %-17s\n", "index", "kind", "params",
                "input_digest", "rng_digest");
  out << line;
  for (const TraceEntry& e : t.entries) {
    const std::string params = e.params ? e.params->ToJson().dump() : "-";
    std::snprintf(line, sizeof(line), "%-6lld %-16s %-40s %-17s %-17s\n",
                  static_cast<long long>(e.index), e.kind.c_str(), params.c_str(),
                  InputDigest(e.input).c_str(), e.rng_digest.c_str());
    out << line;
  }
  if (t.stop_reason) {
    out << "stopped: " << StopKindName(t.stop_reason->kind) << " at call "
        << t.stop_reason->call_index << ": " << t.stop_reason->message << "\n";
  }
  if (t.rejection) out << "rejected: " << *t.rejection << "\n";
  if (t.declared_budget) {
    out << "declared budget: epsilon " << FormatReal(t.declared_budget->epsilon) << ", delta "
        << FormatReal(t.declared_budget->delta) << "\n";
  }
  return out.str();
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dpaudit: record/replay and distributional audits of DP pipelines"};
  app.require_subcommand(1);

  // audit
  auto* audit = app.add_subcommand("audit", "Audit one corpus pipeline on a neighbor pair");
  std::string pipeline, variant = "buggy", adjacency, strategy, mode = "full", format = "json";
  std::string out_path, record_out, replay_out;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon, delta;
  std::size_t samples = kDefaultAuditSamples;
  std::size_t runs = 1000;
  std::vector<std::string> disabled;
  audit->add_option("--pipeline", pipeline, "Registered pipeline name")->required();
  audit->add_option("--variant", variant, "buggy or fixed")
      ->check(CLI::IsMember({"buggy", "fixed"}));
  audit->add_option("--adjacency", adjacency, "add-remove or replace-one")
      ->check(CLI::IsMember({"add-remove", "replace-one"}));
  audit->add_option("--strategy", strategy, "Neighbor strategy (default: the case's own)");
  audit->add_option("--seed", seed, "Master seed (default: $" + std::string(kSeedEnvVar) + ")");
  audit->add_option("--epsilon", epsilon, "Claimed epsilon");
  audit->add_option("--delta", delta, "Claimed delta, also the audit delta");
  audit->add_option("--samples", samples, "Samples per side for empirical PLDs")
      ->check(CLI::PositiveNumber);
  audit->add_option("--runs", runs, "Black-box game runs")->check(CLI::Range(100, 100000000));
  audit->add_option("--mode", mode, "record-replay, distributional, blackbox or full")
      ->check(CLI::IsMember({"record-replay", "distributional", "blackbox", "full"}));
  audit->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  audit->add_option("--out", out_path, "Report path (default: stdout)");
  audit->add_option("--record-out", record_out, "Write the RECORD trace here");
  audit->add_option("--replay-out", replay_out, "Write the REPLAY trace here");
  audit->add_option("--disable-check", disabled, "Skip a validator check (self-test)")
      ->group("");

  // matrix
  auto* matrix = app.add_subcommand("matrix", "Run every corpus case and print the matrix");
  std::string matrix_format = "text", group = kDefaultGroup, matrix_out;
  std::optional<std::uint64_t> matrix_seed;
  std::size_t matrix_samples = kDefaultAuditSamples;
  bool rr_only = false;
  std::vector<std::string> matrix_disabled;
  matrix->add_option("--format", matrix_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  matrix->add_option("--seed", matrix_seed, "Master seed (default: $DPAUDIT_SEED, else 0)");
  matrix->add_option("--samples", matrix_samples, "Samples per side")->check(CLI::PositiveNumber);
  matrix->add_option("--group", group, "Case group")
      ->check(CLI::IsMember({kDefaultGroup, kPathologicalGroup}));
  matrix->add_flag("--record-replay-only", rr_only, "Skip the distributional audit");
  matrix->add_option("--out", matrix_out, "Report path (default: stdout)");
  matrix->add_option("--disable-check", matrix_disabled, "Skip a validator check (self-test)");

  // trace-dump
  auto* dump = app.add_subcommand("trace-dump", "Print the calls of a trace file");
  std::string trace_path, dump_format = "text";
  dump->add_option("path", trace_path, "Trace JSON file")->required();
  dump->add_option("--format", dump_format, "text or json (canonical trace bytes)")
      ->check(CLI::IsMember({"json", "text"}));

  // list
  auto* list = app.add_subcommand("list", "Print the case manifest");
  std::string list_format = "text";
  list->add_option("--format", list_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (app.get_subcommands().size() == 1) {
      err << app.get_subcommands().front()->help();
    }
    return kExitError;
  }

  try {
    if (audit->parsed()) {
      const PipelineCase c = MakeCase(pipeline, ParseVariant(variant));
      CaseRunOptions run;
      run.seed = ResolveSeed(seed);
      run.strategy = strategy;
      run.epsilon = epsilon;
      run.delta = delta;
      if (!adjacency.empty()) run.adjacency = ParseAdjacency(adjacency);
      run.samples = samples;
      run.blackbox_runs = runs;
      run.mode = ParseAuditMode(mode);
      run.validator.disabled = DisabledChecks(disabled);
      const CaseOutcome o = RunCase(c, run);
      if (!record_out.empty()) Emit(TraceText(o.traces.record), record_out, out);
      if (!replay_out.empty()) Emit(TraceText(o.traces.replay), replay_out, out);
      Emit(format == "json" ? o.ToJson().dump(2) + "\n" : o.ToText(), out_path, out);
      return o.flagged() ? kExitViolation : kExitPass;
    }
    if (matrix->parsed()) {
      MatrixOptions m;
      if (matrix_seed) {
        m.seed = *matrix_seed;
      } else if (const char* env = std::getenv(kSeedEnvVar); env && *env) {
        m.seed = ResolveSeed(std::nullopt);
      }
      m.samples = matrix_samples;
      m.record_replay_only = rr_only;
      m.group = group;
      m.validator.disabled = DisabledChecks(matrix_disabled);
      const DetectionMatrix result = RunMatrix(m);
      Emit(matrix_format == "json" ? result.ToJson().dump(2) + "\n" : result.ToText(),
           matrix_out, out);
      return result.ok() ? kExitPass : kExitViolation;
    }
    if (dump->parsed()) {
      const Trace t = Trace::Parse(ReadFile(trace_path));
      out << (dump_format == "json" ? TraceText(t) : DumpTable(t));
      return kExitPass;
    }
    if (list->parsed()) {
      Value cases = Value::array();
      for (const PipelineCase& c : AllCases()) cases.push_back(c.Manifest());
      if (list_format == "json") {
        out << Value{{"schema_version", kReportSchemaVersion}, {"cases", cases}}.dump(2) << "\n";
      } else {
        for (const Value& c : cases) {
          out << c.at("name").get<std::string>() << "\t" << c.at("variant").get<std::string>()
              << "\t" << c.at("adjacency").get<std::string>() << "\t"
              << c.at("strategy").get<std::string>() << "\t"
              << (c.at("expected_violation").is_null()
                      ? std::string("-")
                      : c.at("expected_violation").get<std::string>())
              << "\n";
        }
      }
      return kExitPass;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace dpaudit
