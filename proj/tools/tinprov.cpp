// Command-line front end: replay a CSV interaction stream under a chosen
// provenance policy, generate synthetic streams, and time policies.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tinprov/engine.hpp"
#include "tinprov/report.hpp"
#include "tinprov/scope.hpp"
#include "tinprov/stream.hpp"
#include "tinprov/synth.hpp"

namespace {

using namespace tinprov;

constexpr int kUsageError = 2;

struct RunArgs {
  std::string input;
  std::string policy = "noprov";
  bool paths = false;
  bool coalesce = false;
  std::string selective;
  std::string groups;
  std::uint64_t window = 0;
  std::string budget;
  std::string budget_priority;
  double epsilon = kDefaultEpsilon;
  std::string snapshot_at = "end";
  std::optional<double> alert_threshold;
  std::string format = "csv";
  bool strict = false;
  std::size_t top = 0;
  std::string out = "-";
  std::string report;
};

struct SynthArgs {
  std::size_t vertices = 100;
  std::size_t interactions = 1000;
  std::uint64_t seed = 1;
  std::string shape = "uniform";
  std::string out = "-";
};

struct BenchArgs {
  std::size_t vertices = 10000;
  std::size_t interactions = 1000000;
  std::uint64_t seed = 1;
  std::string shape = "uniform";
  std::vector<std::string> policies{"noprov", "fifo", "lifo", "lrb", "mrb"};
  std::string budget;
  std::uint64_t window = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return in;
}

// "C=10,f=0.7" (f optional, default 0.7).
BudgetConfig parse_budget(const std::string& spec) {
  BudgetConfig budget;
  std::stringstream ss(spec);
  std::string item;
  bool have_c = false;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("bad --budget item '" + item + "'");
    auto key = item.substr(0, eq);
    auto value = item.substr(eq + 1);
    try {
      if (key == "C") {
        budget.capacity = std::stoul(value);
        have_c = true;
      } else if (key == "f") {
        budget.keep_fraction = std::stod(value);
      } else {
        throw UsageError("unknown --budget key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw UsageError("bad --budget value '" + value + "'");
    }
  }
  if (!have_c) throw UsageError("--budget needs C=<int>");
  return budget;
}

std::size_t parse_every(const std::string& spec) {
  if (spec == "end") return 0;
  const std::string prefix = "every-k=";
  if (spec.rfind(prefix, 0) == 0) {
    try {
      auto n = std::stoul(spec.substr(prefix.size()));
      if (n > 0) return n;
    } catch (const std::logic_error&) {
    }
  }
  throw UsageError("--snapshot-at must be 'end' or 'every-k=N' with N > 0");
}

// Translates flags into an engine configuration. Needs the ingested stream
// for top-k selection and label lookup.
EngineConfig build_config(const RunArgs& args, const VertexTable& table,
                          std::span<const Interaction> stream,
                          std::vector<std::string>& group_labels) {
  EngineConfig config;
  auto policy = parse_policy(args.policy);
  if (!policy) throw UsageError("unknown policy '" + args.policy + "'");
  config.policy = *policy;
  config.track_paths = args.paths;
  config.coalesce = args.coalesce;
  config.epsilon = args.epsilon;

  if (!args.selective.empty()) {
    const std::string prefix = "topk=";
    SelectiveScope sel;
    if (args.selective.rfind(prefix, 0) == 0) {
      std::size_t k = 0;
      try {
        k = std::stoul(args.selective.substr(prefix.size()));
      } catch (const std::logic_error&) {
        throw UsageError("bad --selective " + args.selective);
      }
      if (k == 0) throw UsageError("--selective topk=K needs K > 0");
      sel.tracked = top_k_generators(generated_totals(stream, table.size()), k);
    } else {
      auto in = open_input(args.selective);
      std::vector<std::string> missing;
      sel.tracked = read_vertex_set(in, table, &missing);
      for (const auto& label : missing) {
        std::cerr << "warning: selective vertex '" << label << "' not in stream\n";
      }
    }
    config.scope = std::move(sel);
  } else if (!args.groups.empty()) {
    auto in = open_input(args.groups);
    GroupMap map = read_group_map(in, table);
    group_labels = map.group_labels;
    config.scope = GroupedScope{std::move(map.group_of), group_labels.size()};
  } else if (args.window > 0) {
    config.scope = WindowScope{args.window};
  } else if (!args.budget.empty()) {
    BudgetScope b{parse_budget(args.budget)};
    if (!args.budget_priority.empty()) {
      auto in = open_input(args.budget_priority);
      auto order = read_vertex_set(in, table);
      b.budget.criterion = KeepCriterion::priority_list;
      b.budget.priority_rank.assign(table.size(), order.size());
      for (std::size_t i = 0; i < order.size(); ++i) b.budget.priority_rank[order[i].index] = i;
    }
    config.scope = std::move(b);
  }
  config.validate();
  return config;
}

// Rejects bad flag combinations before the input is read.
void precheck(const RunArgs& args) {
  if (args.format != "csv" && args.format != "json") throw UsageError("--format must be csv or json");
  auto policy = parse_policy(args.policy);
  if (!policy) throw UsageError("unknown policy '" + args.policy + "'");
  int scopes = !args.selective.empty() + !args.groups.empty() + (args.window > 0) +
               !args.budget.empty();
  if (scopes > 1) throw UsageError("--selective, --groups, --window and --budget are exclusive");
  if (!args.budget_priority.empty() && args.budget.empty()) {
    throw UsageError("--budget-priority needs --budget");
  }
  EngineConfig config;
  config.policy = *policy;
  config.track_paths = args.paths;
  config.coalesce = args.coalesce;
  config.epsilon = args.epsilon;
  if (!args.selective.empty()) config.scope = SelectiveScope{};
  if (!args.groups.empty()) config.scope = GroupedScope{};
  if (args.window > 0) config.scope = WindowScope{args.window};
  if (!args.budget.empty()) config.scope = BudgetScope{parse_budget(args.budget)};
  config.validate();
  if (args.alert_threshold && !is_proportional_policy(config.policy)) {
    throw UsageError("--alert-threshold needs a proportional policy");
  }
  if (args.alert_threshold && !(*args.alert_threshold > 0)) {
    throw UsageError("--alert-threshold must be positive");
  }
}

int run_command(const RunArgs& args) {
  precheck(args);
  const std::size_t every = parse_every(args.snapshot_at);

  VertexTable table;
  IngestResult ingest;
  if (args.input == "-") {
    ingest = read_interactions(std::cin, table);
  } else {
    auto in = open_input(args.input);
    ingest = read_interactions(in, table);
  }
  for (const auto& d : ingest.rejected) {
    std::cerr << args.input << ":" << d.line << ": rejected: " << d.message << '\n';
  }
  if (args.strict && !ingest.rejected.empty()) {
    std::cerr << ingest.rejected.size() << " record(s) rejected; aborting (--strict)\n";
    return 1;
  }
  const bool reordered = ensure_time_order(ingest.interactions);
  if (reordered) std::cerr << "warning: input not in time order; stable-sorted by time\n";

  std::vector<std::string> group_labels;
  RunOptions options;
  options.config = build_config(args, table, ingest.interactions, group_labels);
  options.snapshot_every = every;
  options.alert_threshold = args.alert_threshold;
  options.top_n = args.top;

  std::ofstream out_file;
  if (args.out != "-") {
    out_file.open(args.out);
    if (!out_file) throw UsageError("cannot write '" + args.out + "'");
  }
  std::ostream& out = args.out == "-" ? std::cout : out_file;
  const Labeler labels(&table, &group_labels);
  const auto columns = CsvColumns::for_config(options.config);
  const bool json = args.format == "json";

  nlohmann::json frames = nlohmann::json::array();
  if (!json) write_csv_header(out, columns);
  auto sink = [&](const SnapshotFrame& frame) {
    if (json) {
      frames.push_back(frame_to_json(frame, labels));
    } else {
      if (every > 0) out << "# step=" << frame.step << '\n';
      write_csv_frame(out, frame, labels, columns);
    }
  };

  RunReport report = run_replay(ingest.interactions, table.size(), options, sink);
  report.rejected = ingest.rejected.size();
  report.reordered = reordered;

  if (json) out << nlohmann::json{{"snapshots", std::move(frames)}}.dump(2) << '\n';

  std::ofstream report_file;
  if (!args.report.empty()) {
    report_file.open(args.report);
    if (!report_file) throw UsageError("cannot write '" + args.report + "'");
  }
  std::ostream& rep = args.report.empty() ? std::cerr : report_file;
  if (json) {
    rep << report_to_json(report, labels).dump(2) << '\n';
  } else {
    write_report_text(rep, report, labels);
  }
  return 0;
}

int synth_command(const SynthArgs& args) {
  auto shape = parse_shape(args.shape);
  if (!shape) throw UsageError("unknown shape '" + args.shape + "'");
  if (args.vertices == 0 || args.interactions == 0) throw UsageError("sizes must be positive");
  SynthParams params;
  params.num_vertices = args.vertices;
  params.num_interactions = args.interactions;
  params.seed = args.seed;
  params.shape = *shape;
  auto stream = synthesize(params);
  if (args.out == "-") {
    write_interactions(std::cout, stream);
  } else {
    std::ofstream out(args.out);
    if (!out) throw UsageError("cannot write '" + args.out + "'");
    write_interactions(out, stream);
  }
  return 0;
}

int bench_command(const BenchArgs& args) {
  auto shape = parse_shape(args.shape);
  if (!shape) throw UsageError("unknown shape '" + args.shape + "'");
  SynthParams params;
  params.num_vertices = args.vertices;
  params.num_interactions = args.interactions;
  params.seed = args.seed;
  params.shape = *shape;
  const auto stream = synthesize(params);

  std::cout << "policy,interactions,vertices,seconds,peak_entries,avg_shrinks,pct_shrunk\n";
  for (const auto& name : args.policies) {
    RunOptions options;
    auto policy = parse_policy(name);
    if (!policy) throw UsageError("unknown policy '" + name + "'");
    options.config.policy = *policy;
    if (*policy == Policy::proportional_sparse) {
      if (!args.budget.empty()) options.config.scope = BudgetScope{parse_budget(args.budget)};
      if (args.window > 0) options.config.scope = WindowScope{args.window};
    }
    RunReport r = run_replay(stream, args.vertices, options, nullptr);
    std::cout << name << ',' << r.interactions << ',' << args.vertices << ','
              << format_real(r.wall_seconds) << ',' << r.peak_entries << ','
              << format_real(r.shrink.avg_shrinks) << ',' << format_real(r.shrink.pct_shrunk)
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Provenance tracking over temporal interaction networks"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Replay an interaction stream and report provenance");
  run_cmd->add_option("input", run.input, "CSV/TSV file (source,dest,time,quantity) or '-'")
      ->required();
  run_cmd->add_option("--policy", run.policy, "noprov|lrb|mrb|fifo|lifo|prop-dense|prop-sparse");
  run_cmd->add_flag("--paths", run.paths, "Track parcel routes (element policies)");
  run_cmd->add_flag("--coalesce", run.coalesce, "Merge parcels with equal origin and birth (lrb/mrb)");
  run_cmd->add_option("--selective", run.selective, "Vertex list FILE or topk=K");
  run_cmd->add_option("--groups", run.groups, "Group map FILE (vertex,group)");
  run_cmd->add_option("--window", run.window, "Window W in interactions (prop-sparse)");
  run_cmd->add_option("--budget", run.budget, "C=<int>,f=<real> (prop-sparse)");
  run_cmd->add_option("--budget-priority", run.budget_priority,
                      "Keep entries by this vertex order instead of by amount");
  run_cmd->add_option("--epsilon", run.epsilon, "Numeric tolerance");
  run_cmd->add_option("--snapshot-at", run.snapshot_at, "end | every-k=N");
  run_cmd->add_option("--alert-threshold", run.alert_threshold,
                      "Alert when a receiver holds more than T with no in-neighbor provenance");
  run_cmd->add_option("--format", run.format, "csv | json");
  run_cmd->add_flag("--strict", run.strict, "Fail if any input record is rejected");
  run_cmd->add_option("--top", run.top, "Only snapshot the N largest buffers");
  run_cmd->add_option("--out", run.out, "Snapshot output file (default stdout)");
  run_cmd->add_option("--report", run.report, "Report output file (default stderr)");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic interaction stream");
  synth_cmd->add_option("--vertices", synth.vertices);
  synth_cmd->add_option("--interactions", synth.interactions);
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--shape", synth.shape, "uniform | hub | chain");
  synth_cmd->add_option("--out", synth.out);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time policies on a synthetic stream");
  bench_cmd->add_option("--vertices", bench.vertices);
  bench_cmd->add_option("--interactions", bench.interactions);
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--shape", bench.shape, "uniform | hub | chain");
  bench_cmd->add_option("--policies", bench.policies)->delimiter(',');
  bench_cmd->add_option("--budget", bench.budget, "Budget for prop-sparse runs");
  bench_cmd->add_option("--window", bench.window, "Window for prop-sparse runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run_command(run);
    if (*synth_cmd) return synth_command(synth);
    if (*bench_cmd) return bench_command(bench);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kUsageError;
  }
  return 0;
}
