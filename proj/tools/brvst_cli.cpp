#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "brvst/brvst.hpp"

namespace fs = std::filesystem;
using namespace brvst;

namespace {

enum Exit { kOk = 0, kFailed = 1, kBadInput = 2, kInvariant = 3 };

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  bool trace = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "override the configured seed");
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_flag("--trace", c.trace, "also write the event trace");
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw ConfigError("cannot write '" + p.string() + "'");
  return f;
}

int cmd_run(const std::string& config_path, const std::string& scenario_path, const Common& c) {
  try {
    std::optional<Simulator> sim;
    if (!scenario_path.empty()) {
      auto sc = load_scenario(scenario_path);
      if (c.seed) sc.cfg.seed = *c.seed;
      sim.emplace(make_simulator(sc));
    } else {
      SimConfig cfg = config_path.empty() ? SimConfig{} : load_config(config_path);
      if (c.seed) cfg.seed = *c.seed;
      validate(cfg);
      sim.emplace(cfg);
      sim->schedule_workload();
    }
    const auto& ledger = sim->run();
    fs::create_directories(c.out);
    {
      auto f = open_out(fs::path(c.out) / "ledger.csv");
      write_ledger_csv(f, ledger);
    }
    {
      auto f = open_out(fs::path(c.out) / "summary.json");
      f << summary_json(ledger).dump(2) << '\n';
    }
    if (c.trace) {
      auto f = open_out(fs::path(c.out) / "trace.txt");
      write_trace(f, sim->trace());
    }
    std::cout << "deliveries=" << ledger.unique_deliveries << " fp=" << ledger.oracle.false_positives
              << " fn=" << ledger.oracle.false_negatives << " pub_latency=" << ledger.mean_pub_latency()
              << " sub_latency=" << ledger.mean_sub_latency() << " traffic=" << ledger.total_traffic << '\n';
    return kOk;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
}

int cmd_sweep(const std::string& spec_path, const Common& c, bool out_given) {
  SweepSpec spec;
  SimConfig base;
  try {
    spec = load_sweep(spec_path);
    if (out_given) spec.out = c.out;
    if (!spec.base.empty()) {
      fs::path bp(spec.base);
      if (bp.is_relative()) bp = fs::path(spec_path).parent_path() / bp;
      base = load_config(bp.string());
    }
    if (c.seed) base.seed = *c.seed;
    for (const auto& v : spec.values) {
      for (int r = 0; r < spec.reps; ++r) sweep_point_config(spec, base, v, r);
    }
    fs::create_directories(spec.out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }

  std::vector<SweepRow> rows;
  int status = kOk;
  const auto rows_path = fs::path(spec.out) / "sweep_rows.csv";
  for (const auto& v : spec.values) {
    for (int r = 0; r < spec.reps; ++r) {
      const auto cfg = sweep_point_config(spec, base, v, r);
      try {
        rows.push_back({v, r, cfg.seed, PointMetrics::from(run(cfg))});
      } catch (const Error& e) {
        std::cerr << "point " << spec.param << "=" << v << " rep " << r << " failed: " << e.what() << '\n';
        status = kFailed;
      }
      auto f = open_out(rows_path);
      write_sweep_rows(f, spec, rows);
    }
  }
  const auto sums = summarize(rows, spec.values);
  {
    auto f = open_out(fs::path(spec.out) / "sweep_summary.csv");
    write_sweep_summary(f, spec, sums);
  }
  {
    auto f = open_out(fs::path(spec.out) / "trends.txt");
    write_trend_report(f, sums);
  }
  write_sweep_summary(std::cout, spec, sums);
  write_trend_report(std::cout, sums);
  return status;
}

int cmd_audit(const std::string& trace_path, const Common& c, bool out_given) {
  Trace t;
  try {
    std::ifstream in(trace_path);
    if (!in) throw ConfigError("cannot open trace '" + trace_path + "'");
    t = read_trace(in);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  const auto counts = classify(t);
  const auto report = oracle_json(counts);
  std::cout << report.dump(2) << '\n';
  if (out_given) {
    fs::create_directories(c.out);
    auto f = open_out(fs::path(c.out) / "audit.json");
    f << report.dump(2) << '\n';
  }
  return kOk;
}

int cmd_fixtures(const std::string& config_path, int count, const Common& c, bool out_given) {
  try {
    SimConfig cfg = config_path.empty() ? SimConfig{} : load_config(config_path);
    if (c.seed) cfg.seed = *c.seed;
    validate(cfg);
    const auto schema = SchemaRegistry::with_default_attributes(static_cast<std::size_t>(cfg.schema_size));
    WorkloadGenerator gen(cfg, schema, cfg.seed);
    std::ostringstream text;
    text << "# brvst fixtures seed=" << cfg.seed << " config_hash=" << hex64(config_hash(cfg)) << '\n';
    for (int i = 0; i < count; ++i) {
      auto ev = gen.next(kForever);
      if (!ev) break;
      if (const auto* s = std::get_if<TimedSubscription>(&*ev)) {
        text << format_fixture_line(s->sub) << '\n';
      } else {
        text << format_fixture_line(std::get<TimedPublication>(*ev).pub) << '\n';
      }
    }
    if (out_given) {
      fs::create_directories(c.out);
      auto f = open_out(fs::path(c.out) / "fixtures.txt");
      f << text.str();
    } else {
      std::cout << text.str();
    }
    return kOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BRVST publish/subscribe simulator"};
  app.require_subcommand(1);

  Common common;
  std::string config_path, scenario_path, sweep_path, trace_path;
  int fixture_count = 100;

  auto* run_cmd = app.add_subcommand("run", "run one scenario");
  run_cmd->add_option("config", config_path, "key=value config file (defaults when omitted)");
  run_cmd->add_option("--scenario", scenario_path, "scripted scenario file");
  add_common(run_cmd, common);

  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  sweep_cmd->add_option("spec", sweep_path, "sweep spec file")->required();
  add_common(sweep_cmd, common);

  auto* audit_cmd = app.add_subcommand("audit", "recompute FP/FN from a trace");
  audit_cmd->add_option("trace_file", trace_path, "trace written by run --trace")->required();
  add_common(audit_cmd, common);

  auto* fix_cmd = app.add_subcommand("fixtures", "emit workload events as fixture lines");
  fix_cmd->add_option("config", config_path, "config file");
  fix_cmd->add_option("-n,--count", fixture_count, "number of events")->capture_default_str();
  add_common(fix_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kBadInput;
  }

  auto out_given = [](CLI::App* cmd) { return cmd->count("--out") > 0; };
  if (*run_cmd) return cmd_run(config_path, scenario_path, common);
  if (*sweep_cmd) return cmd_sweep(sweep_path, common, out_given(sweep_cmd));
  if (*audit_cmd) return cmd_audit(trace_path, common, out_given(audit_cmd));
  if (*fix_cmd) return cmd_fixtures(config_path, fixture_count, common, out_given(fix_cmd));
  return kFailed;
}
