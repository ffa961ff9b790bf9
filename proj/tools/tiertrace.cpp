// tiertrace: block-trace analysis and hybrid-tiering simulation CLI.
// Subcommands mirror the library pipeline: stats, temporal, cachesim,
// concentration, tiersim, synth. All outputs are plot-ready CSV/JSON plus a
// manifest.json that reproduces the run.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tiertrace/cache.hpp"
#include "tiertrace/concentration.hpp"
#include "tiertrace/stats.hpp"
#include "tiertrace/synth.hpp"
#include "tiertrace/temporal.hpp"
#include "tiertrace/tiering.hpp"
#include "tiertrace/trace.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace tiertrace;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitCapacity = 4;

struct CommonOpts {
  std::vector<std::string> inputs;
  std::string schema_file;
  std::string out_dir;
  bool strict = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("inputs", opts.inputs, "trace files (optionally .gz)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--schema", opts.schema_file, "schema file for non-default column layouts")
      ->check(CLI::ExistingFile);
  const char* env_out = std::getenv("TIERTRACE_OUT");
  opts.out_dir = env_out != nullptr ? env_out : "out";
  cmd->add_option("-o,--out", opts.out_dir, "output directory")->capture_default_str();
  cmd->add_flag("--strict", opts.strict, "abort on the first malformed line");
}

TraceSchema load_schema(const CommonOpts& opts) {
  return opts.schema_file.empty() ? TraceSchema{} : TraceSchema::from_file(opts.schema_file);
}

std::map<std::string, Workload> load_workloads(const CommonOpts& opts) {
  TraceSchema schema = load_schema(opts);
  std::vector<TraceRecord> records;
  for (const auto& path : opts.inputs) {
    auto in = open_trace_file(path);
    std::vector<std::pair<uint64_t, std::string>> errors;
    auto stats = parse_trace(
        *in, schema, [&](const TraceRecord& r) { records.push_back(r); }, opts.strict, &errors);
    for (const auto& [line, why] : errors)
      std::cerr << path << ":" << line << ": skipped: " << why << "\n";
    if (stats.parsed == 0 && stats.lines > 0)
      std::cerr << path << ": no records parsed (" << stats.malformed << " malformed lines)\n";
  }
  return split_by_volume(std::move(records));
}

// Output files are written to a temp name and renamed into place.
void write_file(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::string sanitize(const std::string& id) {
  std::string out;
  for (char c : id) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

void write_manifest(const CommonOpts& opts, const std::string& command, const json& params) {
  json manifest;
  manifest["tool"] = "tiertrace";
  manifest["version"] = kVersion;
  manifest["command"] = command;
  manifest["inputs"] = opts.inputs;
  manifest["schema_file"] = opts.schema_file;
  manifest["strict"] = opts.strict;
  manifest["output_dir"] = opts.out_dir;
  manifest["parameters"] = params;
  write_file(fs::path(opts.out_dir) / "manifest.json", manifest.dump(2) + "\n");
}

CountMetric parse_metric(const std::string& name) {
  if (name == "read") return CountMetric::Read;
  if (name == "write") return CountMetric::Write;
  return CountMetric::ReadWrite;
}

int run_stats(const CommonOpts& opts, double fraction, const std::string& metric, bool union_mode) {
  auto workloads = load_workloads(opts);
  fs::create_directories(opts.out_dir);

  std::vector<WorkloadSummary> summaries;
  std::ostringstream csv;
  std::ostringstream hist_csv;
  write_summary_csv_header(csv);
  hist_csv << "volume_id";
  auto bounds = default_histogram_bounds();
  for (auto b : bounds) hist_csv << ",le_" << b;
  hist_csv << ",over\n";
  for (const auto& [id, wl] : workloads) {
    auto s = summarize(wl);
    write_summary_csv_row(csv, s);
    summaries.push_back(s);
    auto h = io_size_histogram(wl, bounds);
    hist_csv << id;
    for (auto c : h.counts) hist_csv << ',' << c;
    hist_csv << '\n';
  }

  std::ostringstream sel;
  if (union_mode) {
    std::set<std::string> u;
    for (auto m : {CountMetric::Read, CountMetric::Write, CountMetric::ReadWrite}) {
      for (const auto& id : select_top_workloads(summaries, fraction, m)) u.insert(id);
    }
    for (const auto& id : u) sel << id << '\n';
  } else {
    for (const auto& id : select_top_workloads(summaries, fraction, parse_metric(metric)))
      sel << id << '\n';
  }

  write_file(fs::path(opts.out_dir) / "summaries.csv", csv.str());
  write_file(fs::path(opts.out_dir) / "size_histograms.csv", hist_csv.str());
  write_file(fs::path(opts.out_dir) / "selected_workloads.txt", sel.str());
  write_manifest(opts, "stats",
                 {{"fraction", fraction}, {"metric", metric}, {"union", union_mode}});
  std::cout << workloads.size() << " workloads summarized\n";
  return 0;
}

int run_temporal(const CommonOpts& opts, uint32_t interval_s) {
  auto workloads = load_workloads(opts);
  fs::create_directories(opts.out_dir);
  json box = json::array();
  for (const auto& [id, wl] : workloads) {
    auto series = interval_counts(wl, interval_s);
    std::ostringstream csv;
    csv << "bucket_index,count\n";
    for (size_t i = 0; i < series.counts.size(); ++i) csv << i << ',' << series.counts[i] << '\n';
    write_file(fs::path(opts.out_dir) / ("intervals_" + sanitize(id) + ".csv"), csv.str());
    auto b = box_stats(std::span<const uint64_t>(series.counts));
    box.push_back({{"volume_id", id},
                   {"min", b.min},
                   {"lower_quartile", b.lower_quartile},
                   {"median", b.median},
                   {"upper_quartile", b.upper_quartile},
                   {"max", b.max}});
  }
  write_file(fs::path(opts.out_dir) / "box_stats.json", box.dump(2) + "\n");
  write_manifest(opts, "temporal", {{"interval_s", interval_s}});
  return 0;
}

int run_cachesim(const CommonOpts& opts, const std::string& algo, std::vector<double> fractions,
                 uint64_t page_size, double epsilon_pp) {
  auto workloads = load_workloads(opts);
  fs::create_directories(opts.out_dir);
  std::ostringstream csv;
  csv << "volume_id,algorithm,size_fraction,accesses,hits,hit_ratio\n";
  std::ostringstream conv;
  conv << "volume_id,algorithm,convergence_fraction,preferred_algorithm\n";
  bool both = algo == "both";
  for (const auto& [id, wl] : workloads) {
    std::vector<std::pair<std::string, HitRatioCurve>> curves;
    if (both || algo == "lru")
      curves.emplace_back("lru", hit_ratio_curve(wl, CacheAlgorithm::LRU, fractions, page_size));
    if (both || algo == "arc")
      curves.emplace_back("arc", hit_ratio_curve(wl, CacheAlgorithm::ARC, fractions, page_size));
    std::string preferred = "-";
    if (both) {
      auto cmp = compare_algorithms(wl, fractions, page_size);
      size_t arc_wins = 0;
      for (const auto& c : cmp) arc_wins += c.preferred == CacheAlgorithm::ARC ? 1 : 0;
      preferred = arc_wins * 2 > cmp.size() ? "arc" : "lru";
    }
    for (const auto& [name, curve] : curves) {
      for (const auto& [f, res] : curve.points) {
        csv << id << ',' << name << ',' << f << ',' << res.accesses << ',' << res.hits << ','
            << res.hit_ratio() << '\n';
      }
      auto cp = curve.points.size() >= 2 ? convergence_point(curve, epsilon_pp) : std::nullopt;
      conv << id << ',' << name << ',' << (cp ? std::to_string(*cp) : "none") << ',' << preferred
           << '\n';
    }
  }
  write_file(fs::path(opts.out_dir) / "hit_ratios.csv", csv.str());
  write_file(fs::path(opts.out_dir) / "convergence.csv", conv.str());
  write_manifest(opts, "cachesim",
                 {{"algo", algo},
                  {"fractions", fractions},
                  {"page_size", page_size},
                  {"epsilon_pp", epsilon_pp}});
  return 0;
}

int run_concentration(const CommonOpts& opts, uint64_t macro_page, uint32_t interval_s,
                      double threshold, size_t rank_depth, bool exclude_empty) {
  auto workloads = load_workloads(opts);
  fs::create_directories(opts.out_dir);
  for (const auto& [id, wl] : workloads) {
    auto slices = slice_page_counts(wl, macro_page, interval_s);
    std::string tag = sanitize(id);

    std::ostringstream slice_csv;
    slice_csv << "slice,page,count\n";
    for (const auto& s : slices) {
      for (const auto& [page, count] : s.counts)
        slice_csv << s.slice_index << ',' << page << ',' << count << '\n';
    }
    write_file(fs::path(opts.out_dir) / ("slices_" + tag + ".csv"), slice_csv.str());

    std::ostringstream share_csv;
    share_csv << "rank,avg_share\n";
    auto profile = top_page_share_profile(slices, rank_depth);
    for (size_t r = 0; r < profile.size(); ++r) share_csv << r + 1 << ',' << profile[r] << '\n';
    write_file(fs::path(opts.out_dir) / ("shares_" + tag + ".csv"), share_csv.str());

    std::ostringstream run_csv;
    run_csv << "page,run_length\n";
    for (const auto& [page, runs] : concentration_run_lengths(slices)) {
      for (auto len : runs) run_csv << page << ',' << len << '\n';
    }
    write_file(fs::path(opts.out_dir) / ("runs_" + tag + ".csv"), run_csv.str());

    std::ostringstream pred_csv;
    pred_csv << "page,judgments,ratio,unpredictable\n";
    for (const auto& p : classify_predictability(slices, threshold, !exclude_empty)) {
      pred_csv << p.macro_page_id << ',' << p.concentration_judgments << ',' << p.judgment_ratio
               << ',' << (p.unpredictable ? 1 : 0) << '\n';
    }
    write_file(fs::path(opts.out_dir) / ("predictability_" + tag + ".csv"), pred_csv.str());
  }
  write_manifest(opts, "concentration",
                 {{"macro_page_bytes", macro_page},
                  {"interval_s", interval_s},
                  {"threshold", threshold},
                  {"rank_depth", rank_depth},
                  {"exclude_empty_slices", exclude_empty}});
  return 0;
}

int run_tiersim(const CommonOpts& opts, const std::string& policy, TierConfig cfg,
                bool best_effort, double admission_fraction,
                const std::vector<std::string>& critical) {
  auto by_volume = load_workloads(opts);
  std::vector<Workload> workloads;
  for (auto& [id, wl] : by_volume) workloads.push_back(std::move(wl));

  TieringOptions topts;
  if (policy == "allfirst") topts.policy = PlacementPolicy::AllFirst;
  else if (policy == "allsecond") topts.policy = PlacementPolicy::AllSecond;
  else if (policy == "dynamic") topts.policy = PlacementPolicy::DynamicPromotion;
  else topts.policy = PlacementPolicy::MonitoredCache;
  topts.best_effort = best_effort;
  topts.performance_critical = {critical.begin(), critical.end()};
  if (admission_fraction < 1.0) {
    std::vector<WorkloadSummary> summaries;
    for (const auto& wl : workloads) summaries.push_back(summarize(wl));
    topts.tier1_eligible = admission_filter(summaries, admission_fraction);
  }

  auto out = simulate_tiering(workloads, cfg, topts);
  fs::create_directories(opts.out_dir);

  auto result_json = [](const TierSimResult& r) {
    return json{{"requests_served", r.requests_served},
                {"tier1_requests", r.tier1_requests},
                {"tier1_served_fraction", r.tier1_served_fraction},
                {"mean_latency_us", r.mean_latency_us},
                {"promotions", r.promotions},
                {"demotions", r.demotions},
                {"bytes_migrated", r.bytes_migrated}};
  };
  json doc;
  doc["config"] = {{"tier1_capacity_bytes", cfg.tier1_capacity_bytes},
                   {"tier1_read_latency_us", cfg.tier1_read_latency_us},
                   {"tier1_write_latency_us", cfg.tier1_write_latency_us},
                   {"tier2_read_latency_us", cfg.tier2_read_latency_us},
                   {"tier2_write_latency_us", cfg.tier2_write_latency_us},
                   {"migration_bandwidth_bytes_per_s", cfg.migration_bandwidth_bytes_per_s},
                   {"decision_interval_s", cfg.decision_interval_s},
                   {"promotion_unit_bytes", cfg.promotion_unit_bytes},
                   {"policy", policy},
                   {"best_effort", best_effort},
                   {"admission_fraction", admission_fraction}};
  doc["aggregate"] = result_json(out.aggregate);
  doc["per_workload"] = json::object();
  for (const auto& [id, r] : out.per_workload) doc["per_workload"][id] = result_json(r);
  write_file(fs::path(opts.out_dir) / "tiersim.json", doc.dump(2) + "\n");

  std::ostringstream csv;
  csv << "interval,requests,tier1_requests,mean_latency_us,promotions,demotions\n";
  for (const auto& iv : out.aggregate.intervals) {
    csv << iv.interval_index << ',' << iv.requests << ',' << iv.tier1_requests << ','
        << iv.mean_latency_us << ',' << iv.promotions << ',' << iv.demotions << '\n';
  }
  write_file(fs::path(opts.out_dir) / "intervals.csv", csv.str());
  write_manifest(opts, "tiersim", doc["config"]);
  std::cout << "mean latency " << out.aggregate.mean_latency_us << " us, tier1 fraction "
            << out.aggregate.tier1_served_fraction << "\n";
  return 0;
}

SynthSpec load_synth_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file " + path);
  SynthSpec spec;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string key;
    if (!std::getline(ls, key, '=')) continue;
    key.erase(remove_if(key.begin(), key.end(), ::isspace), key.end());
    if (key.empty()) continue;
    std::string val;
    std::getline(ls, val);
    val.erase(remove_if(val.begin(), val.end(), ::isspace), val.end());
    if (key == "seed") spec.seed = std::stoull(val);
    else if (key == "duration_s") spec.duration_s = std::stoul(val);
    else if (key == "request_rate") spec.request_rate = std::stoul(val);
    else if (key == "footprint_bytes") spec.footprint_bytes = std::stoull(val);
    else if (key == "hot_page") spec.hot_page = std::stoull(val);
    else if (key == "hot_share") spec.hot_share = std::stod(val);
    else if (key == "dwell_slices") spec.dwell_slices = std::stoul(val);
    else if (key == "movement") {
      if (val == "fixed") spec.movement = HotRegionMovement::Fixed;
      else if (val == "step") spec.movement = HotRegionMovement::Step;
      else if (val == "random") spec.movement = HotRegionMovement::RandomJump;
      else throw std::runtime_error("spec: movement must be fixed/step/random");
    } else if (key == "io_size_bytes") spec.io_size_bytes = std::stoull(val);
    else if (key == "io_size2_prob") spec.io_size2_prob = std::stod(val);
    else if (key == "io_size2_bytes") spec.io_size2_bytes = std::stoull(val);
    else if (key == "write_fraction") spec.write_fraction = std::stod(val);
    else if (key == "volume_id") spec.volume_id = val;
    else throw std::runtime_error("spec: unknown key '" + key + "'");
  }
  return spec;
}

int run_synth(const std::string& spec_file, const std::string& out_file) {
  auto wl = generate(load_synth_spec(spec_file));
  std::ostringstream buf;
  write_trace(buf, wl.records, TraceSchema{});
  write_file(out_file, buf.str());
  std::cout << wl.records.size() << " records written to " << out_file << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"block-trace analysis and hybrid-tiering simulation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOpts common;
  double fraction = 0.5;
  std::string metric = "rw";
  bool union_mode = false;
  uint32_t interval_s = 15;
  std::string algo = "both";
  std::vector<double> fractions = default_size_fractions();
  uint64_t page_size = 4096;
  double epsilon_pp = 2.0;
  uint64_t macro_page = kMacroPageBytes;
  double threshold = 0.05;
  size_t rank_depth = 10;
  bool exclude_empty = false;
  std::string policy = "dynamic";
  TierConfig cfg;
  bool best_effort = false;
  double admission_fraction = 1.0;
  std::vector<std::string> critical;
  std::string synth_spec_file;
  std::string synth_out = "synthetic.csv";

  auto* stats = app.add_subcommand("stats", "per-workload summaries and top-workload selection");
  add_common(stats, common);
  stats->add_option("--fraction", fraction, "cumulative IO-count fraction for selection")
      ->capture_default_str();
  stats->add_option("--metric", metric, "selection metric")
      ->check(CLI::IsMember({"read", "write", "rw"}))
      ->capture_default_str();
  stats->add_flag("--union", union_mode, "union of read, write, and rw selections");

  auto* temporal = app.add_subcommand("temporal", "interval counts and box-plot stats");
  add_common(temporal, common);
  temporal->add_option("--interval", interval_s, "interval seconds")->capture_default_str();

  auto* cachesim = app.add_subcommand("cachesim", "page-cache hit-ratio curves");
  add_common(cachesim, common);
  cachesim->add_option("--algo", algo, "replacement algorithm")
      ->check(CLI::IsMember({"lru", "arc", "both"}))
      ->capture_default_str();
  cachesim->add_option("--fractions", fractions, "cache sizes as fractions of footprint")
      ->delimiter(',');
  cachesim->add_option("--page-size", page_size, "cache page bytes")->capture_default_str();
  cachesim->add_option("--epsilon", epsilon_pp, "convergence tolerance, percentage points")
      ->capture_default_str();

  auto* conc = app.add_subcommand("concentration", "macro-page concentration profiling");
  add_common(conc, common);
  conc->add_option("--macro-page", macro_page, "macro page bytes")->capture_default_str();
  conc->add_option("--interval", interval_s, "slice seconds")->capture_default_str();
  conc->add_option("--threshold", threshold, "unpredictability threshold")->capture_default_str();
  conc->add_option("-k,--rank-depth", rank_depth, "ranks in the share profile")
      ->capture_default_str();
  conc->add_flag("--exclude-empty", exclude_empty,
                 "exclude empty slices from the judgment-ratio denominator");

  auto* tiersim = app.add_subcommand("tiersim", "two-tier placement-policy simulation");
  add_common(tiersim, common);
  tiersim->add_option("--policy", policy, "placement policy")
      ->check(CLI::IsMember({"allfirst", "allsecond", "dynamic", "monitored"}))
      ->capture_default_str();
  tiersim->add_option("--tier1-capacity", cfg.tier1_capacity_bytes, "tier1 bytes")
      ->capture_default_str();
  tiersim->add_option("--tier1-read-lat", cfg.tier1_read_latency_us, "us")->capture_default_str();
  tiersim->add_option("--tier1-write-lat", cfg.tier1_write_latency_us, "us")
      ->capture_default_str();
  tiersim->add_option("--tier2-read-lat", cfg.tier2_read_latency_us, "us")->capture_default_str();
  tiersim->add_option("--tier2-write-lat", cfg.tier2_write_latency_us, "us")
      ->capture_default_str();
  tiersim->add_option("--bandwidth", cfg.migration_bandwidth_bytes_per_s, "migration bytes/s")
      ->capture_default_str();
  tiersim->add_option("--interval", cfg.decision_interval_s, "decision interval seconds")
      ->capture_default_str();
  tiersim->add_option("--promotion-unit", cfg.promotion_unit_bytes, "promotion unit bytes")
      ->capture_default_str();
  tiersim->add_flag("--best-effort", best_effort, "pin hottest regions instead of failing");
  tiersim->add_option("--admission-fraction", admission_fraction,
                      "whole-day admission filter fraction (1.0 = everyone eligible)")
      ->capture_default_str();
  tiersim->add_option("--critical", critical, "performance-critical volume ids");

  auto* synth = app.add_subcommand("synth", "generate a synthetic trace");
  synth->add_option("--spec", synth_spec_file, "key=value spec file")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("-o,--out", synth_out, "output trace file")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (stats->parsed()) return run_stats(common, fraction, metric, union_mode);
    if (temporal->parsed()) return run_temporal(common, interval_s);
    if (cachesim->parsed()) return run_cachesim(common, algo, fractions, page_size, epsilon_pp);
    if (conc->parsed())
      return run_concentration(common, macro_page, interval_s, threshold, rank_depth,
                               exclude_empty);
    if (tiersim->parsed())
      return run_tiersim(common, policy, cfg, best_effort, admission_fraction, critical);
    if (synth->parsed()) return run_synth(synth_spec_file, synth_out);
  } catch (const CapacityInfeasible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
