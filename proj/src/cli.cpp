#include "mscd/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "mscd/benchgen.hpp"
#include "mscd/community_io.hpp"
#include "mscd/criterion.hpp"
#include "mscd/detect_global.hpp"
#include "mscd/detect_local.hpp"
#include "mscd/errors.hpp"
#include "mscd/metrics.hpp"
#include "mscd/scale_engine.hpp"
#include "mscd/stability_walk.hpp"

namespace mscd::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

const std::vector<std::string> kCriteria{"rb", "afg", "rn", "so", "lfk", "hlslw"};

struct GenerateArgs {
  BenchSpec spec;
  std::string output;
};

struct DetectArgs {
  std::string input;
  std::string criterion;
  double param = 1.0;
  double tau = kDefaultWalkThreshold;
  double eta = 0.5;
  std::uint64_t seed = 1;
  bool weighted_merge = false;
  bool closed = false;
  bool no_overlap = false;
  std::string output;
};

struct SweepArgs {
  std::string input;
  std::string criterion;
  double A = 1.0;
  std::size_t X = 10;
  std::optional<double> min_value;
  double tau = kDefaultWalkThreshold;
  double eta = 0.5;
  std::uint64_t seed = 1;
  bool weighted_merge = false;
  bool closed = false;
  bool no_overlap = false;
  std::vector<std::string> truths;
  std::string output_dir;
};

struct NmiArgs {
  std::string first;
  std::string second;
};

struct SampleArgs {
  double A = 1.0;
  std::size_t X = 10;
  double min_value = 0.0;
};

struct WalkArgs {
  std::string input;
  double t = 1.0;
  double tau = kDefaultWalkThreshold;
  std::string output;
};

void add_local_flags(CLI::App* cmd, double& eta, bool& weighted, bool& closed, bool& no_overlap) {
  cmd->add_option("--eta", eta, "Overlap ratio above which communities merge (local criteria)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_flag("--weighted-merge", weighted, "Measure overlap by internal edge weight instead of node count");
  cmd->add_flag("--closed", closed, "Closed neighbourhoods in the structural similarity (hlslw)");
  cmd->add_flag("--no-overlap", no_overlap, "Forbid a node from joining a second community (local criteria)");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

int do_generate(const GenerateArgs& a, std::ostream& out) {
  const Benchmark bench = generate_two_level(a.spec);
  {
    auto f = open_output(a.output + ".edges");
    write_edge_list(bench.graph, f);
  }
  write_communities_file(bench.graph, bench.micro.communities(), a.output + ".micro");
  write_communities_file(bench.graph, bench.macro.communities(), a.output + ".macro");
  out << "nodes\t" << bench.graph.node_count() << "\nedges\t" << bench.graph.edge_count() << "\nmicro\t"
      << bench.micro.community_count() << "\nmacro\t" << bench.macro.community_count() << '\n';
  return kSuccess;
}

int do_detect(const DetectArgs& a, std::ostream& out) {
  const Criterion kind = parse_criterion(a.criterion);
  const Graph g = load_edge_list_file(a.input);
  const double params[] = {a.param};
  std::vector<std::vector<NodeId>> communities;
  double quality = 0.0;
  if (is_global(kind)) {
    auto results = detect_global(g, kind, params, a.tau, a.seed);
    communities = results.front().partition.communities();
    quality = results.front().quality;
  } else {
    LocalDetectOptions opts;
    opts.eta = a.eta;
    opts.weighted_merge = a.weighted_merge;
    opts.neighbourhood = a.closed ? Neighbourhood::Closed : Neighbourhood::Open;
    opts.allow_overlap = !a.no_overlap;
    auto results = detect_local(g, kind, params, opts);
    communities = results.front().cover.communities();
    quality = results.front().quality;
  }
  write_communities_file(g, communities, a.output);
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << quality << '\n';
  return kSuccess;
}

std::string community_file_name(std::size_t index) {
  std::ostringstream name;
  name << "scale_" << std::setw(3) << std::setfill('0') << index << ".com";
  return name.str();
}

void write_report_tsv(const SweepReport& report, std::ostream& out) {
  out << "scale\tnum_communities\tQ\tnmi_prev\tnmi_w3\tnmi_w5";
  for (std::size_t k = 0; k < report.nmi_vs_truth.size(); ++k) out << "\tnmi_truth_" << k + 1;
  out << '\n';
  const auto precision = out.precision(6);
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    out << r.param << '\t' << r.community_count << '\t' << r.quality << '\t' << report.nmi_consecutive[i] << '\t'
        << report.nmi_window_3[i] << '\t' << report.nmi_window_5[i];
    for (const auto& series : report.nmi_vs_truth) out << '\t' << series[i];
    out << '\n';
  }
  out.precision(precision);
}

json report_json(const SweepReport& report, const SweepArgs& a, const ScalePlan& plan, bool with_files) {
  json j;
  j["criterion"] = std::string(to_string(report.kind));
  j["A"] = plan.A;
  j["X"] = plan.X;
  j["min_value"] = plan.lower();
  j["tau"] = a.tau;
  j["eta"] = a.eta;
  j["seed"] = a.seed;
  j["ground_truths"] = a.truths;
  json records = json::array();
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    json row;
    row["scale"] = r.param;
    row["num_communities"] = r.community_count;
    row["Q"] = r.quality;
    row["nmi_prev"] = report.nmi_consecutive[i];
    row["nmi_w3"] = report.nmi_window_3[i];
    row["nmi_w5"] = report.nmi_window_5[i];
    json truth = json::array();
    for (const auto& series : report.nmi_vs_truth) truth.push_back(series[i]);
    row["nmi_truth"] = truth;
    if (with_files) row["communities_file"] = community_file_name(i);
    records.push_back(row);
  }
  j["records"] = records;
  return j;
}

int do_sweep(const SweepArgs& a, std::ostream& out) {
  ScalePlan plan;
  plan.kind = parse_criterion(a.criterion);
  plan.A = a.A;
  plan.X = a.X;
  plan.min_value = a.min_value;
  plan.samples();  // validates A, X and min_value before any file is read

  const Graph g = load_edge_list_file(a.input);
  SweepOptions opts;
  opts.tau = a.tau;
  opts.eta = a.eta;
  opts.seed = a.seed;
  opts.weighted_merge = a.weighted_merge;
  opts.neighbourhood = a.closed ? Neighbourhood::Closed : Neighbourhood::Open;
  opts.allow_overlap = !a.no_overlap;
  for (const auto& path : a.truths) opts.ground_truths.push_back(to_cover(g, read_communities_file(path)));

  const SweepReport report = sweep(g, plan, opts);
  write_report_tsv(report, out);

  if (!a.output_dir.empty()) {
    fs::create_directories(a.output_dir);
    const fs::path dir(a.output_dir);
    for (std::size_t i = 0; i < report.records.size(); ++i) {
      write_communities_file(g, report.records[i].communities.communities(), (dir / community_file_name(i)).string());
    }
    {
      auto f = open_output((dir / "report.tsv").string());
      write_report_tsv(report, f);
    }
    auto f = open_output((dir / "report.json").string());
    f << report_json(report, a, plan, true).dump(2) << '\n';
  }
  return kSuccess;
}

int do_nmi(const NmiArgs& a, std::ostream& out) {
  const auto first = read_communities_file(a.first);
  const auto second = read_communities_file(a.second);
  if (first.empty() || second.empty()) throw DomainError("community files must hold at least one community");
  const auto [ca, cb] = align(first, second);
  const double value = same_partitioned_tokens(first, second)
                           ? nmi_crisp(Partition::from_communities(ca.node_count(), ca.communities()),
                                       Partition::from_communities(cb.node_count(), cb.communities()))
                           : nmi_overlapping(ca, cb);
  out << std::fixed << std::setprecision(6) << value << '\n';
  return kSuccess;
}

int do_sample(const SampleArgs& a, std::ostream& out) {
  const auto values = sample_scales(a.A, a.X, a.min_value);
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (double v : values) out << v << '\n';
  return kSuccess;
}

int do_walk(const WalkArgs& a, std::ostream& out) {
  if (!(a.t >= 0.0) || !std::isfinite(a.t)) throw ArgumentError("--t must be a finite value >= 0");
  if (!(a.tau >= 0.0)) throw ArgumentError("--tau must be >= 0");
  const Graph g = load_edge_list_file(a.input);
  WalkCache cache(g, a.tau);
  const WalkNetwork walk = walk_for_time(a.t, cache);
  if (a.output.empty()) {
    write_edge_list(*walk, out);
  } else {
    auto f = open_output(a.output);
    write_edge_list(*walk, f);
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-scale community detection"};
  app.name("mscd");
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Planted two-level benchmark graph with ground truth");
  generate->add_option("--output", gen.output, "Output prefix; writes PREFIX.edges, PREFIX.micro, PREFIX.macro")
      ->required();
  generate->add_option("--n", gen.spec.n, "Node count")->check(CLI::PositiveNumber);
  generate->add_option("--micro-min", gen.spec.micro_min, "Smallest micro community");
  generate->add_option("--micro-max", gen.spec.micro_max, "Largest micro community");
  generate->add_option("--macro-min", gen.spec.macro_min, "Smallest macro community");
  generate->add_option("--macro-max", gen.spec.macro_max, "Largest macro community");
  generate->add_option("--mean-degree", gen.spec.mean_degree, "Mean degree")->check(CLI::Range(1.0, 1e9));
  generate->add_option("--max-degree", gen.spec.max_degree, "Degree cap")->check(CLI::PositiveNumber);
  generate->add_option("--mu1", gen.spec.mu1, "Fraction of edges leaving the macro community")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--mu2", gen.spec.mu2, "Fraction of edges leaving the micro community")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--seed", gen.spec.seed, "Random seed");

  DetectArgs det;
  auto* detect = app.add_subcommand("detect", "Communities at a single scale");
  detect->add_option("input,--input", det.input, "Edge list")->required();
  detect->add_option("--criterion", det.criterion, "rb, afg, rn, so, lfk or hlslw")
      ->required()
      ->check(CLI::IsMember(kCriteria));
  detect->add_option("--param,--gamma,--r,--t,--alpha", det.param, "Scale parameter of the criterion")->required();
  detect->add_option("--tau", det.tau, "Walk edge threshold (so)")->check(CLI::Range(0.0, 1e300));
  detect->add_option("--seed", det.seed, "Random seed");
  detect->add_option("--output", det.output, "Community file to write")->required();
  add_local_flags(detect, det.eta, det.weighted_merge, det.closed, det.no_overlap);

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Detection over a logarithmic range of scales");
  sweep_cmd->add_option("input,--input", sw.input, "Edge list")->required();
  sweep_cmd->add_option("--criterion", sw.criterion, "rb, afg, rn, so, lfk or hlslw")
      ->required()
      ->check(CLI::IsMember(kCriteria));
  sweep_cmd->add_option("--A", sw.A, "Largest sampled parameter")->required();
  sweep_cmd->add_option("--X", sw.X, "Number of scales")->required();
  sweep_cmd->add_option("--min-value", sw.min_value, "Smallest sampled parameter");
  sweep_cmd->add_option("--tau", sw.tau, "Walk edge threshold (so)")->check(CLI::Range(0.0, 1e300));
  sweep_cmd->add_option("--seed", sw.seed, "Random seed");
  sweep_cmd->add_option("--truth", sw.truths, "Ground-truth community file (repeatable)");
  sweep_cmd->add_option("--output-dir", sw.output_dir, "Directory for community files and the report");
  add_local_flags(sweep_cmd, sw.eta, sw.weighted_merge, sw.closed, sw.no_overlap);

  NmiArgs nm;
  auto* nmi_cmd = app.add_subcommand("nmi", "Normalised mutual information of two community files");
  nmi_cmd->add_option("first", nm.first, "Community file")->required();
  nmi_cmd->add_option("second", nm.second, "Community file")->required();

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample-scales", "Print the sampled scale values");
  sample->add_option("--A", sa.A, "Largest value")->required();
  sample->add_option("--X", sa.X, "Number of values")->required();
  sample->add_option("--min-value", sa.min_value, "Smallest value");

  WalkArgs wk;
  auto* walk = app.add_subcommand("walk", "Export the walk network A_t as an edge list");
  walk->add_option("input,--input", wk.input, "Edge list")->required();
  walk->add_option("--t", wk.t, "Markov time")->required();
  walk->add_option("--tau", wk.tau, "Edge threshold");
  walk->add_option("--output", wk.output, "Edge list to write (default standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (generate->parsed()) return do_generate(gen, out);
    if (detect->parsed()) return do_detect(det, out);
    if (sweep_cmd->parsed()) return do_sweep(sw, out);
    if (nmi_cmd->parsed()) return do_nmi(nm, out);
    if (sample->parsed()) return do_sample(sa, out);
    if (walk->parsed()) return do_walk(wk, out);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace mscd::cli
